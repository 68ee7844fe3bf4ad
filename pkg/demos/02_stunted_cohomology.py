"""
Cohomology of stunted projective spectra
========================================

The cohomology of KP^top_bot has one cell u^k per bot <= k <= top, in
degree d*k (d = 1, 2, 4 for K = R, C, H), with Steenrod action

    Sq^{d*j} u^k = C(k, j) u^{k+j}   (mod 2),

extended to negative k by the 2-adic rule.  Because the binomials only
depend on k modulo a power of 2, stunted modules repeat: that is James
periodicity, and it is what makes towers of negative-cell spectra
computable from finite data.
"""

from mahowald import Field, is_shift_isomorphic, stunted_module
from mahowald.gradedmod import binom_mod2

m = stunted_module(Field.H, -4, -1)
print("cells of the height-four quaternionic piece:", m.degrees)

# the action table, cell by cell (basis entries are (label, degree) pairs)
labels = [lab for lab, _ in m.basis]
for (op, i), mask in sorted(m.action.items()):
    targets = [labels[k] for k in range(len(labels)) if (mask >> k) & 1]
    print(f"  Sq^{op} {labels[i]} = {' + '.join(targets)}")

# negative binomials: C(-1, j) = 1 for every j, so the bottom cell of
# KP^infinity_{-1} supports every operation
print()
print("C(-1, j) for j = 0..7:", [binom_mod2(-1, j) for j in range(8)])
print("C(-2, j) for j = 0..7:", [binom_mod2(-2, j) for j in range(8)])

# periodicity: shifting the index range by 2^L > p preserves the action
a, p, L = -6, 5, 3
m1 = stunted_module(Field.C, a, a + p)
m2 = stunted_module(Field.C, a + (1 << L), a + (1 << L) + p)
print()
print(f"stunted(C, {a}, {a+p}) ~ stunted(C, {a+(1<<L)}, {a+(1<<L)+p}) "
      f"shifted by {Field.C.d * (1 << L)}:",
      is_shift_isomorphic(m1, m2, Field.C.d * (1 << L)))
