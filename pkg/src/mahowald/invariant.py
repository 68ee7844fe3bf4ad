"""Chart-level Mahowald invariants over towers of stunted projective spectra.

For a field K in {R, C, H} with cell spacing d, stage N of the tower is the
truncated model X_N of KP^infinity_{-N}: cells -N..top with top chosen so
that the missing cells cannot influence the inspected window.  Restriction
maps r_N: Ext(X_{N+1}) -> Ext(X_N) collapse the bottom cell, q_N pushes all
the way to the cut X_1, and j_N feeds the bottom cell's sphere chart in.

A query class alpha at (s, t) on the sphere is placed on the -1 cell of the
cut: j'(alpha) = j_1(suspended alpha).  The completions

    P = { xi in Ext^{s, t-d}(X_Nmax) : q(xi) = j'(alpha) }

form an affine space; the invariant lives at the minimal stage N where the
push-forward of P contains a nonzero class, and its coset collects every
gamma on the bottom-cell sphere chart with j_N(gamma) equal to a nonzero
pushed value.  Indeterminacy is ker(j_N) in that bidegree.

Detection is strictly at the E2 page and in constant filtration: a family
whose topological shadow jumps filtration is reported as having no E2
completion rather than guessed at.  Conclusions are certified against page
turning by the interference report, which scans every chart position a
longer differential could land on: sources (s-r, t-r+1) for 2 <= r <=
s_max against each nonzero class the computation consulted.  An empty
report means no consulted class can be a boundary, so the E2 readings are
stable.
"""

from __future__ import annotations

import math
import os
import re
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .f2linalg import BitVector, EchelonSpan
from .gradedmod import Field, GradedModule, ModuleMap, skeletal_maps, sphere_module, stunted_module
from .resolution import (
    CacheError,
    ExtClass,
    ExtMap,
    FreeResolution,
    identity_ext_map,
    induced_ext_map,
    load_resolution,
    minimal_resolution,
    save_resolution,
    shifted_resolution,
    yoneda_product,
)

STATUS_OK = "ok"
STATUS_DEGENERATE = "degenerate_unit"
STATUS_EXCEEDS = "exceeds_nmax"
STATUS_NO_COMPLETION = "no_e2_completion"

N_MAX_DEFAULT = {Field.R: 16, Field.C: 10, Field.H: 6}
COSET_CAP = 1 << 16
ENUM_CAP_DIM = 12
BIDEGREE_BUDGET = 500_000


class ResourceLimitError(RuntimeError):
    def __init__(self, bidegrees: int):
        super().__init__(
            f"window requests {bidegrees} bidegrees, over the "
            f"{BIDEGREE_BUDGET} budget"
        )
        self.bidegrees = bidegrees


# ----------------------------------------------------------------- registry


@dataclass(frozen=True)
class Recipe:
    """A named sphere class as a product of the Hopf classes h0..h3."""

    name: str
    factors: tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.factors)

    @property
    def t(self) -> int:
        return sum(1 << i for i in self.factors)

    @property
    def stem(self) -> int:
        return self.t - self.s

    def is_unit(self) -> bool:
        return not self.factors


_FACTOR_RE = re.compile(r"^h([0-3])(?:\^(\d+))?$")

REGISTRY_SYNTAX = "h0..h3 with optional ^power, joined by '*' (e.g. h2^3, h0*h2)"


def parse_class_name(name: str) -> Recipe:
    factors: list[int] = []
    for part in name.split("*"):
        m = _FACTOR_RE.match(part.strip())
        if not m:
            raise ValueError(f"unknown class {name!r}; registry accepts {REGISTRY_SYNTAX}")
        i = int(m.group(1))
        power = int(m.group(2)) if m.group(2) is not None else 1
        factors.extend([i] * power)
    return Recipe(name, tuple(sorted(factors)))


def evaluate_recipe(
    recipe: Recipe, r: FreeResolution, sphere0: FreeResolution
) -> ExtClass:
    """Yoneda product of the recipe's Hopf factors acting on the unit of r.

    r resolves a one-cell module (a shifted sphere); sphere0 resolves the
    degree-0 sphere and supplies the left factors.  Products are recomputed
    on every call -- class coordinates are never hard-coded.
    """
    if len(r.module.basis) != 1:
        raise ValueError("recipes evaluate on one-cell modules")
    bottom = r.module.degrees[0]
    if r.ext_dim(0, bottom) != 1:
        raise ValueError("resolution lacks its unit class")
    x = r.ext_class(0, bottom, 1, name="1")
    for i in recipe.factors:
        if sphere0.ext_dim(1, 1 << i) != 1:
            raise ValueError(f"h{i} is not 1-dimensional in the window")
        hi = sphere0.ext_class(1, 1 << i, 1, name=f"h{i}")
        x = yoneda_product(r, hi, x)
    x.name = recipe.name
    return x


# -------------------------------------------------------------------- tower


@dataclass(frozen=True)
class TowerWindow:
    s_max: int
    stem_max: int


class Tower:
    """Stages 1..N_max of the stunted tower with all connecting Ext maps."""

    def __init__(self, K: Field, N_max: int, window: TowerWindow,
                 top: int, t_max: int):
        self.K = K
        self.d = K.d
        self.N_max = N_max
        self.window = window
        self.top = top
        self.t_max = t_max
        self.modules: dict[int, GradedModule] = {}
        self.res: dict[int, FreeResolution] = {}
        self.sres: dict[int, FreeResolution] = {}
        self.base0: Optional[FreeResolution] = None
        self.r_maps: dict[int, ExtMap] = {}
        self.q_maps: dict[int, ExtMap] = {}
        self.j_maps: dict[int, ExtMap] = {}
        self.push_maps: dict[int, ExtMap] = {}
        # (description, module map, rs, rt, ext map) for every lifted map
        self.map_specs: list[tuple[str, ModuleMap, FreeResolution,
                                   FreeResolution, ExtMap]] = []

    def bidegree_in_window(self, s: int, t: int) -> bool:
        return 0 <= s <= self.window.s_max and t - s <= self.window.stem_max


def _cache_path(cache_dir, module: GradedModule, s_max: int, t_max: int):
    return os.path.join(
        cache_dir, f"res_{module.module_hash()}_s{s_max}_t{t_max}.json"
    )


def resolve_cached(
    module: GradedModule, s_max: int, t_max: int, cache_dir=None
) -> FreeResolution:
    """minimal_resolution with an advisory on-disk cache.

    Unreadable or mismatched cache entries are ignored with a warning and
    recomputed; the cache never changes results.
    """
    if cache_dir is None:
        return minimal_resolution(module, s_max, t_max)
    os.makedirs(cache_dir, exist_ok=True)
    path = _cache_path(cache_dir, module, s_max, t_max)
    if os.path.exists(path):
        try:
            return load_resolution(path, module, s_max, t_max)
        except CacheError as e:
            warnings.warn(f"ignoring cache file {path}: {e}")
    r = minimal_resolution(module, s_max, t_max)
    tmp = f"{path}.tmp.{os.getpid()}"
    save_resolution(r, tmp)
    os.replace(tmp, path)
    return r


def build_tower(
    K: Field,
    N_max: int,
    window: TowerWindow,
    threads: int = 1,
    cache_dir=None,
    top: Optional[int] = None,
) -> Tower:
    """Build all stages and connecting maps; stages resolve in parallel.

    top defaults to ceil((stem_max + s_max)/d): cells above it sit in
    internal degrees beyond every inspected t, so the truncation is
    invisible in the window.
    """
    if N_max < 1:
        raise ValueError("N_max must be >= 1")
    d = K.d
    s_max, stem_max = window.s_max, window.stem_max
    if top is None:
        top = math.ceil((stem_max + s_max) / d)
    t_max = s_max + stem_max
    if t_max > d * top:
        raise ValueError(f"top={top} truncates below the window (t_max={t_max})")

    budget = sum((s_max + 1) * (t_max + d * n + 1) for n in range(1, N_max + 1))
    budget += (s_max + 1) * (t_max + d * N_max + 1)
    if budget > BIDEGREE_BUDGET:
        raise ResourceLimitError(budget)

    tower = Tower(K, N_max, window, top, t_max)
    for n in range(1, N_max + 1):
        tower.modules[n] = stunted_module(K, -n, top, hi_degree=d * top)

    sphere0 = sphere_module(0)
    jobs = {n: (tower.modules[n], s_max, t_max) for n in range(1, N_max + 1)}
    jobs[0] = (sphere0, s_max, t_max + d * N_max)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futs = {
            n: pool.submit(resolve_cached, m, sm, tm, cache_dir)
            for n, (m, sm, tm) in jobs.items()
        }
        done = {n: f.result() for n, f in futs.items()}
    tower.base0 = done[0]
    for n in range(1, N_max + 1):
        tower.res[n] = done[n]
        tower.sres[n] = shifted_resolution(
            tower.base0, sphere_module(-d * n), -d * n
        )

    for n in range(1, N_max):
        f = skeletal_maps(tower.modules[n + 1], -n).incl
        m = induced_ext_map(f, tower.res[n + 1], tower.res[n])
        tower.r_maps[n] = m
        tower.map_specs.append(
            (f"r_{n}", f, tower.res[n + 1], tower.res[n], m)
        )
    tower.q_maps[1] = identity_ext_map(tower.res[1])
    for n in range(2, N_max + 1):
        f = skeletal_maps(tower.modules[n], -1).incl
        m = induced_ext_map(f, tower.res[n], tower.res[1])
        tower.q_maps[n] = m
        tower.map_specs.append((f"q_{n}", f, tower.res[n], tower.res[1], m))
    for n in range(1, N_max + 1):
        f = skeletal_maps(tower.modules[n], -n + 1).quot
        m = induced_ext_map(f, tower.sres[n], tower.res[n])
        tower.j_maps[n] = m
        tower.map_specs.append((f"j_{n}", f, tower.sres[n], tower.res[n], m))

    tower.push_maps[N_max] = identity_ext_map(tower.res[N_max])
    for n in range(N_max - 1, 0, -1):
        tower.push_maps[n] = tower.r_maps[n].compose(tower.push_maps[n + 1])

    _check_ladder(tower)
    return tower


def _check_ladder(tower: Tower) -> None:
    """q_N must factor as q_{N-1} after one restriction, on every bidegree."""
    for n in range(2, tower.N_max + 1):
        via = tower.q_maps[n - 1].compose(tower.r_maps[n - 1])
        direct = tower.q_maps[n]
        for s in range(tower.window.s_max + 1):
            ts = {g.t for g in tower.res[n].gens[s]}
            for t in sorted(ts):
                if via.matrix(s, t) != direct.matrix(s, t):
                    raise AssertionError(
                        f"tower ladder broken at stage {n}, bidegree ({s},{t})"
                    )


# ------------------------------------------------------------- pr families


@dataclass
class StagePush:
    N: int
    particular: BitVector
    kernel_pushes: list[BitVector]

    def is_zero(self) -> bool:
        return self.particular.is_zero() and all(
            v.is_zero() for v in self.kernel_pushes
        )

    def nonzero_values(self) -> Optional[list[BitVector]]:
        """All nonzero classes in the pushed affine set, or None over cap."""
        span = EchelonSpan(self.particular.n)
        basis = []
        for v in self.kernel_pushes:
            if span.add(v.bits):
                basis.append(v)
        if len(basis) > ENUM_CAP_DIM:
            return None
        vals = {}
        for mask in range(1 << len(basis)):
            acc = self.particular
            for i, v in enumerate(basis):
                if (mask >> i) & 1:
                    acc = acc ^ v
            if not acc.is_zero():
                vals[acc.bits] = acc
        return [vals[k] for k in sorted(vals)]


@dataclass
class PrFamily:
    """Completions of alpha at the top stage and their push-forwards."""

    recipe: Recipe
    bidegree: tuple[int, int]
    jprime: ExtClass
    empty: bool
    particular: Optional[BitVector]
    kernel: list[BitVector]
    stages: dict[int, StagePush] = field(default_factory=dict)

    def minimal_nonzero_stage(self) -> Optional[int]:
        for n in sorted(self.stages):
            if not self.stages[n].is_zero():
                return n
        return None

    def stage_classes(self, tower: Tower, n: int) -> list[ExtClass]:
        """Pushed classes at stage n (the zero class alone means the whole
        family collapses there); [] when no completion exists at all."""
        if self.empty:
            return []
        s, t = self.bidegree
        vals = self.stages[n].nonzero_values()
        res = tower.res[n]
        if vals is None:
            reps = [self.stages[n].particular] + self.stages[n].kernel_pushes
            return [ExtClass(res, s, t, v) for v in reps]
        if not vals:
            return [res.zero_class(s, t)]
        return [ExtClass(res, s, t, v) for v in vals]


def pr_classes(tower: Tower, alpha: Union[str, Recipe]) -> PrFamily:
    """Solve the cell-placement condition at the top stage, then push down."""
    recipe = parse_class_name(alpha) if isinstance(alpha, str) else alpha
    d, nmax = tower.d, tower.N_max
    s, t = recipe.s, recipe.t - d
    if not tower.bidegree_in_window(s, t):
        raise ValueError(
            f"alpha={recipe.name} needs bidegree ({s},{t}), outside the tower "
            f"window (s_max={tower.window.s_max}, stem_max={tower.window.stem_max})"
        )
    alpha_shifted = evaluate_recipe(recipe, tower.sres[1], tower.base0)
    if alpha_shifted.is_zero() and not recipe.is_unit():
        raise ValueError(f"alpha={recipe.name} is zero in sphere Ext")
    jprime = tower.j_maps[1].apply(alpha_shifted)

    Q = tower.q_maps[nmax].matrix(s, t)
    particular = Q.solve(jprime.coords)
    if particular is None:
        return PrFamily(recipe, (s, t), jprime, True, None, [])
    kernel = Q.kernel_basis()
    fam = PrFamily(recipe, (s, t), jprime, False, particular, kernel)
    for n in range(1, nmax + 1):
        M = tower.push_maps[n].matrix(s, t)
        fam.stages[n] = StagePush(
            n, M.mul_vec(particular), [M.mul_vec(k) for k in kernel]
        )
    return fam


# ------------------------------------------------------------------ results


@dataclass
class MahowaldResult:
    K: Field
    alpha: Recipe
    status: str
    N: Optional[int]
    tower: Tower
    bidegree: tuple[int, int]
    pushed_values: list[BitVector]
    coset_reps: list[ExtClass]
    coset_truncated: bool
    indeterminacy: list[BitVector]
    interference: list[dict]

    @property
    def indeterminacy_dim(self) -> int:
        return len(self.indeterminacy)

    @property
    def filtration(self) -> Optional[int]:
        return self.tower.d * self.N if self.N is not None else None

    @property
    def stem(self) -> Optional[int]:
        if self.N is None:
            return None
        return self.alpha.stem + self.tower.d * (self.N - 1)

    def contains(self, gamma: Union[str, Recipe, ExtClass]) -> bool:
        """Is gamma (a bottom-cell sphere class at stage N) in the coset?"""
        if self.N is None:
            return False
        if not isinstance(gamma, ExtClass):
            recipe = parse_class_name(gamma) if isinstance(gamma, str) else gamma
            gamma = evaluate_recipe(
                recipe, self.tower.sres[self.N], self.tower.base0
            )
        if gamma.is_zero() or (gamma.s, gamma.t) != self.bidegree:
            return False
        img = self.tower.j_maps[self.N].apply(gamma)
        return any(img.coords == v for v in self.pushed_values)

    def to_json_dict(self) -> dict:
        s, t = self.bidegree
        w = self.tower
        return {
            "K": self.K.name,
            "alpha": self.alpha.name,
            "N": self.N,
            "coset": [
                {
                    "s": c.s,
                    "t": c.t,
                    "coords": c.coords.to_string(),
                    "stem": c.stem + w.d * self.N if self.N is not None else None,
                }
                for c in self.coset_reps
            ],
            "indeterminacy_dim": self.indeterminacy_dim,
            "interference": self.interference,
            "window": {
                "s_max": w.window.s_max,
                "stem_max": w.window.stem_max,
                "top": w.top,
                "t_max": w.t_max,
                "N_max": w.N_max,
                "bidegree": [s, t],
            },
            "status": self.status,
            "filtration": self.filtration,
            "stem": self.stem,
            "coset_truncated": self.coset_truncated,
        }


@dataclass(frozen=True)
class MahowaldQuery:
    K: Field
    alpha: str
    s_max: Optional[int] = None
    stem_max: Optional[int] = None
    N_max: Optional[int] = None


def _interference_scan(
    charts: list[tuple[str, FreeResolution, int, int]], s_max: int
) -> list[dict]:
    """Chart positions a d_r (r >= 2) could hit a consulted class from."""
    out = []
    for label, res, s, t in charts:
        for r in range(2, s_max + 1):
            s2, t2 = s - r, t - r + 1
            if s2 < 0 or s2 > res.s_max or t2 > res.t_max:
                continue
            dim = res.ext_dim(s2, t2)
            if dim:
                out.append(
                    {
                        "chart": label,
                        "class": [s, t],
                        "r": r,
                        "source": [s2, t2],
                        "dim": dim,
                    }
                )
    return out


def algebraic_mahowald(
    query: MahowaldQuery,
    tower: Optional[Tower] = None,
    threads: int = 1,
    cache_dir=None,
) -> MahowaldResult:
    K = query.K
    d = K.d
    recipe = parse_class_name(query.alpha)
    if recipe.is_unit():
        t0 = tower or build_tower(K, 1, TowerWindow(2, 1), threads, cache_dir)
        return MahowaldResult(
            K, recipe, STATUS_DEGENERATE, None, t0, (0, -d), [], [], False, [], []
        )

    if tower is None:
        s_max = query.s_max if query.s_max is not None else recipe.s + 2
        stem_max = (
            query.stem_max
            if query.stem_max is not None
            else max(recipe.stem - d + 2, 1)
        )
        n_max = query.N_max if query.N_max is not None else N_MAX_DEFAULT[K]
        tower = build_tower(K, n_max, TowerWindow(s_max, stem_max),
                            threads=threads, cache_dir=cache_dir)

    fam = pr_classes(tower, recipe)
    s, t = fam.bidegree
    if fam.empty:
        return MahowaldResult(
            K, recipe, STATUS_NO_COMPLETION, None, tower, (s, t),
            [], [], False, [], []
        )
    nstar = fam.minimal_nonzero_stage()
    if nstar is None:
        return MahowaldResult(
            K, recipe, STATUS_EXCEEDS, None, tower, (s, t), [], [], False, [], []
        )

    values = fam.stages[nstar].nonzero_values()
    truncated = values is None
    if truncated:
        push = fam.stages[nstar]
        values = [v for v in [push.particular] + push.kernel_pushes
                  if not v.is_zero()]

    J = tower.j_maps[nstar].matrix(s, t)
    solutions = [(z, J.solve(z)) for z in values]
    solved = [(z, g) for z, g in solutions if g is not None]
    ker = J.kernel_basis()
    sres = tower.sres[nstar]

    if not solved:
        status = STATUS_NO_COMPLETION
        reps: list[ExtClass] = []
        used_values: list[BitVector] = []
    else:
        status = STATUS_OK
        used_values = [z for z, _ in solved]
        total = len(solved) << len(ker)
        reps = []
        if total > COSET_CAP or len(ker) > ENUM_CAP_DIM:
            truncated = True
            reps = [ExtClass(sres, s, t, g) for _, g in solved]
        else:
            seen = {}
            for _, g in solved:
                for mask in range(1 << len(ker)):
                    acc = g
                    for i, k in enumerate(ker):
                        if (mask >> i) & 1:
                            acc = acc ^ k
                    seen[acc.bits] = acc
            reps = [ExtClass(sres, s, t, seen[b]) for b in sorted(seen)]

    charts: list[tuple[str, FreeResolution, int, int]] = [
        ("sphere", tower.base0, recipe.s, recipe.t)
    ]
    if not fam.jprime.is_zero():
        charts.append(("X_1", tower.res[1], s, t))
    charts.append((f"X_{nstar}", tower.res[nstar], s, t))
    if reps:
        charts.append((f"S[{-d * nstar}]", sres, s, t))
    interference = _interference_scan(charts, tower.window.s_max)

    return MahowaldResult(
        K, recipe, status, nstar, tower, (s, t),
        used_values, reps, truncated, ker, interference,
    )


# ------------------------------------------------------------ verify tables

# alpha, expected bottom-cell class, expected minimal stage
DETECTION_TABLE = {
    Field.C: [
        ("h1", "h2", 2),
        ("h1^2", "h2^2", 3),
        ("h2", "h3", 3),
        ("h1^3", "h2^3", 4),
        ("h2^2", "h3^2", 5),
        ("h2^3", "h3^3", 7),
    ],
    Field.H: [
        ("h2", "h3", 2),
        ("h0*h2", "h0*h3", 2),
        ("h0^2*h2", "h0^2*h3", 2),
        ("h2^2", "h3^2", 3),
        ("h2^3", "h3^3", 4),
    ],
    Field.R: [
        ("h0", "h1", 2),
    ],
}


def table_window(K: Field, rows=None) -> TowerWindow:
    rows = DETECTION_TABLE[K] if rows is None else rows
    recips = [parse_class_name(a) for a, _, _ in rows]
    s_max = max(r.s for r in recips) + 2
    stem_max = max(max(r.stem for r in recips) - K.d + 2, 1)
    return TowerWindow(s_max, stem_max)


def verify_table(
    K: Field,
    threads: int = 1,
    cache_dir=None,
    rows: Optional[Sequence] = None,
    tower: Optional[Tower] = None,
) -> dict:
    """Run the driver over the detection table for K; report per line."""
    rows = list(DETECTION_TABLE[K]) if rows is None else list(rows)
    if not rows:
        return {"K": K.name, "rows": [], "all_pass": True}
    if tower is None:
        n_max = N_MAX_DEFAULT[K]
        tower = build_tower(K, n_max, table_window(K, rows),
                            threads=threads, cache_dir=cache_dir)
    report_rows = []
    for alpha, expected, expected_n in rows:
        res = algebraic_mahowald(MahowaldQuery(K, alpha), tower=tower)
        member = res.contains(expected)
        ok = (
            res.status == STATUS_OK
            and res.N == expected_n
            and member
            and not res.interference
        )
        report_rows.append(
            {
                "alpha": alpha,
                "expected": expected,
                "expected_N": expected_n,
                "N": res.N,
                "status": res.status,
                "member": member,
                "indeterminacy_dim": res.indeterminacy_dim,
                "interference": len(res.interference),
                "pass": ok,
                "result": res,
            }
        )
    return {
        "K": K.name,
        "rows": report_rows,
        "all_pass": all(r["pass"] for r in report_rows),
    }
