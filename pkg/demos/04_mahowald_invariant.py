"""
A Mahowald invariant computed stage by stage
============================================

The invariant of a sphere class alpha is computed over the tower of
stunted spectra X_N (cells -N and up).  Walk the machinery by hand for
alpha = h1 over the complex tower, then run the whole detection table.

Stage picture for h1 (detecting eta):
  * place h1 on the bottom cell of the cut X_1 — the target bidegree
    (1, 0) is EMPTY there, so every completion at the top stage works;
  * push completions down the tower: stage 1 is zero, stage 2 is not;
  * at the minimal stage, solve back through the bottom-cell map j:
    the unique solution is h2.  So M_C(h1) = {h2} at N = 2.
"""

from mahowald import (
    Field,
    MahowaldQuery,
    TowerWindow,
    algebraic_mahowald,
    build_tower,
    pr_classes,
    verify_table,
)

tower = build_tower(Field.C, N_max=4, window=TowerWindow(3, 1), threads=2)
print("tower stages:", sorted(tower.res), " cells of X_2:",
      tower.modules[2].degrees[:4], "...")

fam = pr_classes(tower, "h1")
print()
print("query bidegree on the tower:", fam.bidegree)
print("cut chart dimension there:", tower.res[1].ext_dim(*fam.bidegree))
print("completions form an affine space of dimension", len(fam.kernel))
for n in sorted(fam.stages):
    push = fam.stages[n]
    print(f"  stage {n}: push-forward {'zero' if push.is_zero() else 'NONZERO'}")

result = algebraic_mahowald(MahowaldQuery(Field.C, "h1"), tower=tower)
print()
print(f"status={result.status}  N={result.N}  "
      f"stem={result.stem}  filtration={result.filtration}")
print("coset:", [c.coords.to_string() for c in result.coset_reps],
      " indeterminacy dim:", result.indeterminacy_dim)
print("contains h2:", result.contains("h2"))
print("interference report:", result.interference)

# now the full tables, exactly as `mahowald selftest` runs them
for K in (Field.C, Field.H):
    rep = verify_table(K, threads=4)
    print()
    print(f"{K.name} detection table:")
    for row in rep["rows"]:
        print(f"  M({row['alpha']}) contains {row['expected']} at "
              f"N={row['N']}  [{'ok' if row['pass'] else 'FAIL'}]")
