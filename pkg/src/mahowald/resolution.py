"""Minimal free resolutions over the Steenrod algebra in a bidegree window.

The sweep runs internal degree t outward, homological level s inward.  At
each (s, t) the differential restricted to the span of previously created
generators ("old part") is assembled as a bit matrix over the monomial
basis; new generators are exactly a complement of its column space inside
the kernel computed one level below, and their differentials are those
kernel vectors verbatim.  Because kernel vectors live over the old-part
basis (every monomial coefficient has positive degree), the resolution is
minimal by construction, and generator counts are Ext dimensions.

Induced maps on Ext come from chain-map lifts computed by batched
back-substitution with every free choice zeroed; Yoneda products lift a
cocycle to a chain self-map against the sphere resolution.  Minimality
makes the extracted matrices independent of the lift, which the test suite
checks by recomputing lifts with perturbed particular solutions.

Internal degrees are trusted only up to the module's recorded truncation
degree: beyond it a finite model no longer agrees with the spectrum it
stands in for, and the constructor refuses the window.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Union

from .f2linalg import BitMatrix, BitVector, EchelonSpan
from .gradedmod import GradedModule, ModuleMap
from .steenrod import Monomial, SteenrodElement, basis as adm_basis, mono_product

RES_FORMAT_VERSION = 1

# a generator's differential: level 0 stores a module bitmask, levels >= 1
# store pairs (generator index one level down, admissible monomial)
DiffPairs = frozenset


@dataclass(frozen=True)
class Gen:
    s: int
    t: int
    idx: int  # position within its level
    label: str
    diff: Union[int, DiffPairs]


@dataclass
class ExtClass:
    """Element of Ext^{s,t} presented in the generator basis of `res`."""

    res: "FreeResolution"
    s: int
    t: int
    coords: BitVector
    name: Optional[str] = None

    def __post_init__(self):
        if self.coords.n != self.res.ext_dim(self.s, self.t):
            raise ValueError("coordinate length != generator count")

    @property
    def stem(self) -> int:
        return self.t - self.s

    def is_zero(self) -> bool:
        return self.coords.is_zero()

    def __xor__(self, other: "ExtClass") -> "ExtClass":
        if (other.res is not self.res) or (self.s, self.t) != (other.s, other.t):
            raise ValueError("cannot add classes from different bidegrees")
        return ExtClass(self.res, self.s, self.t, self.coords ^ other.coords)

    def key(self) -> tuple:
        return (self.s, self.t, self.coords.bits)

    def __repr__(self) -> str:
        nm = f" {self.name}" if self.name else ""
        return f"<Ext({self.s},{self.t}){nm} {self.coords.to_string()}>"


class FreeResolution:
    def __init__(
        self,
        module: GradedModule,
        s_max: int,
        t_max: int,
        _gens: Optional[list[list[Gen]]] = None,
    ):
        if s_max < 0:
            raise ValueError("s_max must be >= 0")
        if module.truncation_degree is not None and t_max > module.truncation_degree:
            raise ValueError(
                f"t_max={t_max} exceeds the module's safe window "
                f"(truncation_degree={module.truncation_degree})"
            )
        self.module = module
        self.s_max = s_max
        self.t_max = t_max
        self.t_min = module.window[0]
        self.gens: list[list[Gen]] = [[] for _ in range(s_max + 1)]
        self._at: dict[tuple[int, int], list[int]] = {}
        self._old_basis: dict[tuple[int, int], list] = {}
        self._full_basis: dict[tuple[int, int], list] = {}
        self._dmat: dict[tuple[int, int], BitMatrix] = {}
        if _gens is None:
            self._build()
        else:
            self.gens = _gens
            for s, lvl in enumerate(self.gens):
                for g in lvl:
                    self._at.setdefault((s, g.t), []).append(g.idx)

    # ------------------------------------------------------------ build

    def _add_gen(self, s: int, t: int, diff) -> Gen:
        idx = len(self.gens[s])
        n_at = len(self._at.get((s, t), ()))
        g = Gen(s, t, idx, f"g{s}_{t}_{n_at}", diff)
        self.gens[s].append(g)
        self._at.setdefault((s, t), []).append(idx)
        return g

    def _collect_old_pairs(self, s: int, t: int) -> list[tuple[int, Monomial]]:
        out = []
        for gi, g in enumerate(self.gens[s]):
            if g.t < t:
                out.extend((gi, mono) for mono in adm_basis(t - g.t))
        return out

    def _local_module_mask(self, t: int, global_mask: int) -> int:
        local = 0
        for p, gi in enumerate(self.module.indices_in_degree(t)):
            if (global_mask >> gi) & 1:
                local |= 1 << p
        return local

    def _build(self) -> None:
        m = self.module
        kernels: dict[tuple[int, int], list[int]] = {}
        for t in range(self.t_min, self.t_max + 1):
            # level 0: cover M(t) by unit cells not already in the image
            old0 = self._collect_old_pairs(0, t)
            mod_idx = m.indices_in_degree(t)
            cols0 = []
            for gi, a in old0:
                g = self.gens[0][gi]
                cols0.append(
                    self._local_module_mask(t, m.act_word(a, g.diff))
                )
            span = EchelonSpan(len(mod_idx))
            for c in cols0:
                span.add(c)
            for p, gi in enumerate(mod_idx):
                if span.add(1 << p):
                    self._add_gen(0, t, 1 << gi)
            E = BitMatrix.from_cols(cols0, len(mod_idx))
            kernels[(0, t)] = [v.bits for v in E.kernel_basis()]
            # levels >= 1: new generators kill the kernel one level down
            for s in range(1, self.s_max + 1):
                rows = self._collect_old_pairs(s - 1, t)
                row_pos = {pair: i for i, pair in enumerate(rows)}
                oldp = self._collect_old_pairs(s, t)
                cols = []
                for gi, a in oldp:
                    g = self.gens[s][gi]
                    cmask = 0
                    for h_idx, b in g.diff:
                        for c in mono_product(a, b):
                            cmask ^= 1 << row_pos[(h_idx, c)]
                    cols.append(cmask)
                span = EchelonSpan(len(rows))
                for c in cols:
                    span.add(c)
                for kv in kernels.get((s - 1, t), ()):
                    if span.add(kv):
                        pairs = []
                        mrem = kv
                        while mrem:
                            low = mrem & -mrem
                            pairs.append(rows[low.bit_length() - 1])
                            mrem ^= low
                        self._add_gen(s, t, DiffPairs(pairs))
                if s < self.s_max:
                    D = BitMatrix.from_cols(cols, len(rows))
                    kernels[(s, t)] = [v.bits for v in D.kernel_basis()]

    # ------------------------------------------------------------ queries

    def in_window(self, s: int, t: int) -> bool:
        return 0 <= s <= self.s_max and t <= self.t_max

    def gens_at(self, s: int, t: int) -> list[Gen]:
        return [self.gens[s][i] for i in self._at.get((s, t), ())]

    def ext_dim(self, s: int, t: int) -> int:
        if not self.in_window(s, t):
            raise ValueError(
                f"bidegree ({s},{t}) outside computed window "
                f"(s_max={self.s_max}, t_max={self.t_max})"
            )
        return len(self._at.get((s, t), ()))

    def ext_class(
        self, s: int, t: int, coords, name: Optional[str] = None
    ) -> ExtClass:
        n = self.ext_dim(s, t)
        if isinstance(coords, BitVector):
            v = coords
        elif isinstance(coords, int):
            v = BitVector(n, coords)
        else:
            v = BitVector.from_support(n, coords)
        return ExtClass(self, s, t, v, name)

    def zero_class(self, s: int, t: int) -> ExtClass:
        return self.ext_class(s, t, 0)

    def gen_diff_elements(self, g: Gen) -> dict[int, SteenrodElement]:
        """Differential of a level>=1 generator grouped as Steenrod elements
        keyed by the target generator index."""
        if g.s == 0:
            raise ValueError("level-0 generators map into the module")
        grouped: dict[int, set] = {}
        for h_idx, mono in g.diff:
            grouped.setdefault(h_idx, set()).add(mono)
        return {
            h: SteenrodElement(g.t - self.gens[g.s - 1][h].t, monos)
            for h, monos in grouped.items()
        }

    def old_basis(self, s: int, t: int) -> list[tuple[int, Monomial]]:
        key = (s, t)
        got = self._old_basis.get(key)
        if got is None:
            got = self._collect_old_pairs(s, t)
            self._old_basis[key] = got
        return got

    def full_basis(self, s: int, t: int) -> list[tuple[int, Monomial]]:
        key = (s, t)
        got = self._full_basis.get(key)
        if got is None:
            got = self.old_basis(s, t) + [
                (gi, ()) for gi in self._at.get((s, t), ())
            ]
            self._full_basis[key] = got
        return got

    def differential_matrix(self, s: int, t: int) -> BitMatrix:
        """Full d_s at degree t: columns over full_basis(s,t).  For s >= 1
        rows run over old_basis(s-1,t); for s == 0 rows run over the
        module's degree-t basis (the augmentation)."""
        key = (s, t)
        got = self._dmat.get(key)
        if got is not None:
            return got
        cols = []
        if s == 0:
            for gi, a in self.full_basis(0, t):
                g = self.gens[0][gi]
                cols.append(
                    self._local_module_mask(t, self.module.act_word(a, g.diff))
                )
            mat = BitMatrix.from_cols(cols, self.module.dim(t))
        else:
            rows = self.old_basis(s - 1, t)
            row_pos = {pair: i for i, pair in enumerate(rows)}
            for gi, a in self.full_basis(s, t):
                g = self.gens[s][gi]
                cmask = 0
                if a == ():
                    for h_idx, b in g.diff:
                        cmask ^= 1 << row_pos[(h_idx, b)]
                else:
                    for h_idx, b in g.diff:
                        for c in mono_product(a, b):
                            cmask ^= 1 << row_pos[(h_idx, c)]
                cols.append(cmask)
            mat = BitMatrix.from_cols(cols, len(rows))
        self._dmat[key] = mat
        return mat

    # ------------------------------------------------------- validations

    def check_minimality(self) -> None:
        for s in range(1, self.s_max + 1):
            for g in self.gens[s]:
                for _, mono in g.diff:
                    assert mono != (), f"unit entry in differential of {g.label}"

    def check_dd_zero(self) -> None:
        for s in range(1, self.s_max + 1):
            for g in self.gens[s]:
                if s == 1:
                    acc = 0
                    for h_idx, b in g.diff:
                        acc ^= self.module.act_word(
                            b, self.gens[0][h_idx].diff
                        )
                    assert acc == 0, f"eps(d {g.label}) != 0"
                else:
                    acc: set = set()
                    for h_idx, b in g.diff:
                        for k_idx, c in self.gens[s - 1][h_idx].diff:
                            for e in mono_product(b, c):
                                acc ^= {(k_idx, e)}
                    assert not acc, f"d(d {g.label}) != 0"

    def check_exactness(self) -> None:
        # image of d_{s+1} must equal the kernel of d_s at every computed
        # bidegree, and the augmentation must cover the module
        for t in range(self.t_min, self.t_max + 1):
            E = self.differential_matrix(0, t)
            assert E.rank() == self.module.dim(t), f"not surjective at t={t}"
            for s in range(self.s_max):
                D_here = self.differential_matrix(s, t)
                D_up = self.differential_matrix(s + 1, t)
                ker_dim = D_here.ncols - D_here.rank()
                assert D_up.rank() == ker_dim, (
                    f"homology at (s={s}, t={t}): im={D_up.rank()}, "
                    f"ker={ker_dim}"
                )

    # ------------------------------------------------------ serialization

    def to_json_dict(self) -> dict:
        levels = []
        for s, lvl in enumerate(self.gens):
            out = []
            for g in lvl:
                if s == 0:
                    mask, cells = g.diff, []
                    while mask:
                        low = mask & -mask
                        cells.append(low.bit_length() - 1)
                        mask ^= low
                    out.append({"t": g.t, "label": g.label, "cells": cells})
                else:
                    pairs = sorted(
                        [h, list(mono)] for h, mono in g.diff
                    )
                    out.append({"t": g.t, "label": g.label, "pairs": pairs})
            levels.append(out)
        return {
            "format_version": RES_FORMAT_VERSION,
            "module_hash": self.module.module_hash(),
            "s_max": self.s_max,
            "t_max": self.t_max,
            "gens": levels,
        }

    @classmethod
    def from_json_dict(cls, d: dict, module: GradedModule) -> "FreeResolution":
        if d.get("format_version") != RES_FORMAT_VERSION:
            raise CacheError("format version mismatch")
        if d.get("module_hash") != module.module_hash():
            raise CacheError("module hash mismatch")
        try:
            gens: list[list[Gen]] = []
            for s, lvl in enumerate(d["gens"]):
                level = []
                for idx, rec in enumerate(lvl):
                    if s == 0:
                        diff: Union[int, DiffPairs] = 0
                        for c in rec["cells"]:
                            diff |= 1 << c
                    else:
                        diff = DiffPairs(
                            (h, tuple(mono)) for h, mono in rec["pairs"]
                        )
                    level.append(Gen(s, rec["t"], idx, rec["label"], diff))
                gens.append(level)
            return cls(module, d["s_max"], d["t_max"], _gens=gens)
        except (KeyError, TypeError, ValueError) as e:
            raise CacheError(f"malformed resolution payload: {e}") from None


class CacheError(ValueError):
    pass


def minimal_resolution(m: GradedModule, s_max: int, t_max: int) -> FreeResolution:
    return FreeResolution(m, s_max, t_max)


def shifted_resolution(
    r: FreeResolution, m2: GradedModule, shift: int
) -> FreeResolution:
    """Resolution of m2 obtained by regrading r when m2 is r.module shifted.

    The sweep depends only on degree differences, so the result is identical
    to a fresh build of m2 (labels included) at a fraction of the cost.
    """
    from .gradedmod import is_shift_isomorphic

    if not is_shift_isomorphic(r.module, m2, shift):
        raise ValueError("m2 is not a degree shift of r.module")
    gens: list[list[Gen]] = []
    for s, lvl in enumerate(r.gens):
        seen: dict[int, int] = {}
        level = []
        for g in lvl:
            t2 = g.t + shift
            i2 = seen.get(t2, 0)
            seen[t2] = i2 + 1
            level.append(Gen(s, t2, g.idx, f"g{s}_{t2}_{i2}", g.diff))
        gens.append(level)
    return FreeResolution(m2, r.s_max, r.t_max + shift, _gens=gens)


def save_resolution(r: FreeResolution, path) -> None:
    blob = json.dumps(r.to_json_dict(), separators=(",", ":"))
    with open(path, "w") as fh:
        fh.write(blob)


def load_resolution(path, module: GradedModule, s_max: int, t_max: int) -> FreeResolution:
    """Load and validate a cached resolution; CacheError on any mismatch."""
    try:
        with open(path) as fh:
            d = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise CacheError(f"unreadable cache file: {e}") from None
    r = FreeResolution.from_json_dict(d, module)
    if r.s_max != s_max or r.t_max != t_max:
        raise CacheError("cached bounds do not match the request")
    return r


# ---------------------------------------------------------------- Ext maps


class ExtMap:
    """Map Ext(source.module) -> Ext(target.module) induced by a module map
    target.module -> source.module (Ext is contravariant)."""

    def __init__(
        self,
        source: FreeResolution,
        target: FreeResolution,
        mats: dict[tuple[int, int], BitMatrix],
        s_max: int,
        t_max: int,
    ):
        self.source = source
        self.target = target
        self.s_max = s_max
        self.t_max = t_max
        self._mats = mats

    def matrix(self, s: int, t: int) -> BitMatrix:
        got = self._mats.get((s, t))
        if got is None:
            got = BitMatrix.zeros(
                self.target.ext_dim(s, t), self.source.ext_dim(s, t)
            )
        return got

    def apply(self, x: ExtClass) -> ExtClass:
        if x.res is not self.source:
            raise ValueError("class does not live on the map's source")
        if x.s > self.s_max or x.t > self.t_max:
            raise ValueError(
                f"bidegree ({x.s},{x.t}) outside map window "
                f"(s_max={self.s_max}, t_max={self.t_max})"
            )
        return ExtClass(
            self.target, x.s, x.t, self.matrix(x.s, x.t).mul_vec(x.coords)
        )

    def kernel_at(self, s: int, t: int) -> list[BitVector]:
        return self.matrix(s, t).kernel_basis()

    def compose(self, inner: "ExtMap") -> "ExtMap":
        """self ∘ inner (inner applied first)."""
        if inner.target is not self.source:
            raise ValueError("composition mismatch")
        s_max = min(self.s_max, inner.s_max)
        t_max = min(self.t_max, inner.t_max)
        mats = {}
        for s in range(s_max + 1):
            for t in self._all_ts(inner.source, s, t_max):
                mats[(s, t)] = self.matrix(s, t) @ inner.matrix(s, t)
        return ExtMap(inner.source, self.target, mats, s_max, t_max)

    @staticmethod
    def _all_ts(res: FreeResolution, s: int, t_max: int):
        return sorted(
            {g.t for g in res.gens[s] if g.t <= t_max} if s <= res.s_max else set()
        )


def _batched_solve(
    mat: BitMatrix, rhs: list[BitVector], variant: int
) -> list[BitVector]:
    xs = mat.solve_many(rhs)
    for i, x in enumerate(xs):
        if x is None:
            raise ValueError("lift solve failed: resolution not exact?")
    if variant:
        ker = mat.kernel_basis()
        if ker:
            xs = [x ^ ker[0] for x in xs]
    return xs


def induced_ext_map(
    f: ModuleMap,
    rs: FreeResolution,
    rt: FreeResolution,
    lift_variant: int = 0,
) -> ExtMap:
    """Ext(rs.module) -> Ext(rt.module) induced by f: rt.module -> rs.module.

    The chain map psi: F(rt) -> F(rs) covering f is built level by level
    with batched solves; the Ext matrices read off the unit coefficients.
    lift_variant != 0 perturbs every particular solution by a kernel vector
    (used by tests to confirm independence of the lift).
    """
    if f.shift != 0:
        raise ValueError("only degree-preserving maps induce Ext maps here")
    if f.source.content_key() != rt.module.content_key():
        raise ValueError("f.source must match rt.module")
    if f.target.content_key() != rs.module.content_key():
        raise ValueError("f.target must match rs.module")
    s_lim = min(rs.s_max, rt.s_max)
    t_lim = min(rs.t_max, rt.t_max)

    psi: dict[tuple[int, int], int] = {}  # (s, gen idx in rt) -> rs mask

    # level 0, batched per degree
    by_t: dict[int, list[Gen]] = {}
    for g in rt.gens[0]:
        if g.t <= t_lim:
            by_t.setdefault(g.t, []).append(g)
    for t, gens in sorted(by_t.items()):
        E = rs.differential_matrix(0, t)
        rhs = []
        for g in gens:
            tgt_mask = f.apply_mask(g.diff)
            rhs.append(BitVector(E.nrows, rs._local_module_mask(t, tgt_mask)))
        xs = _batched_solve(E, rhs, lift_variant)
        for g, x in zip(gens, xs):
            psi[(0, g.idx)] = x.bits

    # higher levels
    for s in range(1, s_lim + 1):
        by_t = {}
        for g in rt.gens[s]:
            if g.t <= t_lim:
                by_t.setdefault(g.t, []).append(g)
        for t, gens in sorted(by_t.items()):
            D = rs.differential_matrix(s, t)
            rows = rs.old_basis(s - 1, t)
            row_pos = {pair: i for i, pair in enumerate(rows)}
            down_basis = {
                th: rs.full_basis(s - 1, th)
                for th in {rt.gens[s - 1][h].t for g in gens for h, _ in g.diff}
            }
            rhs = []
            for g in gens:
                mask = 0
                for h_idx, b in g.diff:
                    th = rt.gens[s - 1][h_idx].t
                    hmask = psi.get((s - 1, h_idx), 0)
                    fb = down_basis[th]
                    while hmask:
                        low = hmask & -hmask
                        k_idx, c = fb[low.bit_length() - 1]
                        hmask ^= low
                        for e in mono_product(b, c):
                            mask ^= 1 << row_pos[(k_idx, e)]
                rhs.append(BitVector(len(rows), mask))
            xs = _batched_solve(D, rhs, lift_variant)
            for g, x in zip(gens, xs):
                psi[(s, g.idx)] = x.bits

    # read off unit coefficients
    mats: dict[tuple[int, int], BitMatrix] = {}
    for s in range(s_lim + 1):
        ts = {g.t for g in rt.gens[s] if g.t <= t_lim}
        ts |= {g.t for g in rs.gens[s] if g.t <= t_lim}
        for t in sorted(ts):
            nt = rt.ext_dim(s, t)
            ns = rs.ext_dim(s, t)
            if nt == 0 or ns == 0:
                continue
            old_len = len(rs.old_basis(s, t))
            M = BitMatrix.zeros(nt, ns)
            for i, g in enumerate(rt.gens_at(s, t)):
                bits = psi.get((s, g.idx), 0)
                for j in range(ns):
                    if (bits >> (old_len + j)) & 1:
                        M.set(i, j, 1)
            mats[(s, t)] = M
    return ExtMap(rs, rt, mats, s_lim, t_lim)


def identity_ext_map(r: FreeResolution) -> ExtMap:
    mats = {}
    for s in range(r.s_max + 1):
        for t in sorted({g.t for g in r.gens[s]}):
            mats[(s, t)] = BitMatrix.identity(r.ext_dim(s, t))
    return ExtMap(r, r, mats, r.s_max, r.t_max)


# ------------------------------------------------------------ Yoneda product


def _is_trivial_sphere(m: GradedModule) -> bool:
    return len(m.basis) == 1 and not m.action and m.degrees[0] == 0


def yoneda_product(
    r: FreeResolution,
    a: ExtClass,
    x: ExtClass,
    lift_variant: int = 0,
) -> ExtClass:
    """Left action of a sphere class a on x in Ext(r.module).

    a must live on a resolution of the one-cell module in degree zero; x
    lives on r.  The cocycle x is lifted to a chain map F(r) -> shifted
    sphere resolution, and the product pairs a with the unit coefficients
    of the lift at level a.s.
    """
    L = a.res
    if not _is_trivial_sphere(L.module):
        raise ValueError("left factor must live on the degree-0 sphere")
    if x.res is not r:
        raise ValueError("x must live on r")
    sig, tau = a.s, a.t
    s_out, t_out = x.s + sig, x.t + tau
    if s_out > r.s_max or t_out > r.t_max:
        raise ValueError(
            f"product bidegree ({s_out},{t_out}) overflows the window of r"
        )
    if sig > L.s_max or tau > L.t_max:
        raise ValueError("left factor outside its own resolution window")

    # X_i on generators of r at level x.s + i, keyed (i, gen idx);
    # values are masks over full_basis(L, i, t_g - x.t)
    lift: dict[tuple[int, int], int] = {}
    for g in r.gens_at(x.s, x.t):
        pos = g.idx
        loc = r._at[(x.s, x.t)].index(pos)
        if x.coords[loc]:
            # full_basis(L, 0, 0) is the single unit pair
            lift[(0, pos)] = 1
    for i in range(1, sig + 1):
        by_t: dict[int, list[Gen]] = {}
        for g in r.gens[x.s + i]:
            if x.t <= g.t <= x.t + tau:
                by_t.setdefault(g.t, []).append(g)
        for tg, gens in sorted(by_t.items()):
            tl = tg - x.t
            D = L.differential_matrix(i, tl)
            rows = L.old_basis(i - 1, tl)
            row_pos = {pair: p for p, pair in enumerate(rows)}
            rhs = []
            for g in gens:
                mask = 0
                for h_idx, b in g.diff:
                    hmask = lift.get((i - 1, h_idx), 0)
                    if not hmask:
                        continue
                    th = r.gens[x.s + i - 1][h_idx].t
                    fb = L.full_basis(i - 1, th - x.t)
                    mm = hmask
                    while mm:
                        low = mm & -mm
                        k_idx, c = fb[low.bit_length() - 1]
                        mm ^= low
                        for e in mono_product(b, c):
                            mask ^= 1 << row_pos[(k_idx, e)]
                rhs.append(BitVector(len(rows), mask))
            xs = _batched_solve(D, rhs, lift_variant)
            for g, v in zip(gens, xs):
                lift[(i, g.idx)] = v.bits

    out_gens = r.gens_at(s_out, t_out)
    old_len = len(L.old_basis(sig, tau))
    la_gens = L._at.get((sig, tau), [])
    coords = 0
    for loc, g in enumerate(out_gens):
        bits = lift.get((sig, g.idx), 0)
        val = 0
        for j, _ in enumerate(la_gens):
            if a.coords[j] and (bits >> (old_len + j)) & 1:
                val ^= 1
        if val:
            coords |= 1 << loc
    return ExtClass(r, s_out, t_out, BitVector(len(out_gens), coords))
