"""
Two independent routes to Ext over the Steenrod algebra
=======================================================

Route one: a minimal free resolution, where generator counts at (s, t)
are the Ext dimensions.  Route two: an admissible-monomial cochain
complex whose cohomology computes the same groups from a completely
different data structure (no resolutions, no module theory — just a
differential on words and F2 ranks).  They must agree bit for bit.
"""

from mahowald import LambdaComplex, minimal_resolution, sphere_module

S_MAX, T_MAX = 7, 18

res = minimal_resolution(sphere_module(0), S_MAX, T_MAX)
lam = LambdaComplex(S_MAX, T_MAX)

print("dim Ext^{s,t}(F2, F2), resolution vs cochain complex")
print()
header = "s\\stem " + "".join(f"{n:3}" for n in range(T_MAX - S_MAX + 1))
print(header)
agree = True
for s in range(S_MAX + 1):
    row = []
    for stem in range(T_MAX - S_MAX + 1):
        a = res.ext_dim(s, stem + s)
        b = lam.ext_dim(s, stem + s)
        if a != b:
            agree = False
        row.append(f"{a:3}" if a else "  .")
    print(f"{s:5}  " + "".join(row))
print()
print("bit-exact agreement:", agree)

# the differential of the cochain complex, on a couple of small words
from mahowald.lambda_complex import d_word

for word in [(2,), (5,), (3, 1)]:
    print(f"d{word} =", sorted(d_word(word)) or 0)
