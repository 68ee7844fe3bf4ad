"""Graded modules over the Steenrod algebra in a finite degree window.

The builders here produce the cohomology of stunted projective spectra
over R, C, H.  Cells are u^k in degree d*k (d = 1, 2, 4) and the action is
the Thom-isomorphism binomial formula

    Sq^{d*j} u^k  =  C(k, j) mod 2 * u^{k+j},

with Sq^r = 0 whenever d does not divide r (for C and H).  Negative k is
handled through the power series (1+x)^k over F2: the coefficient only
depends on k mod 2^L once 2^L > j, which is also the module-level face of
James periodicity.

Truncation above a recorded degree is an honest module quotient (the span
of the discarded top cells is a submodule since Sq raises degree), so the
Adem relations keep holding; Ext consumers must stay below the recorded
truncation_degree.
"""

from __future__ import annotations

import enum
import hashlib
import json
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

from .f2linalg import BitMatrix, BitVector
from .steenrod import SteenrodElement, adem_normalize, binom_nonneg_mod2


def binom_mod2(k: int, j: int) -> int:
    """Coefficient of x^j in (1+x)^k over F2, any integer k, j >= 0."""
    if j < 0:
        raise ValueError("negative lower index")
    if j == 0:
        return 1
    if k >= 0:
        return binom_nonneg_mod2(k, j)
    # reduce to a nonnegative representative mod 2^L with 2^L > j
    L = j.bit_length()
    kp = k % (1 << L)
    return binom_nonneg_mod2(kp, j)


class Field(enum.Enum):
    """Ground field of the projective spectrum; value is d_K."""

    R = 1
    C = 2
    H = 4

    @property
    def d(self) -> int:
        return self.value

    @classmethod
    def parse(cls, s: str) -> "Field":
        try:
            return cls[s.upper()]
        except KeyError:
            raise ValueError(f"unknown field {s!r}; expected R, C, or H") from None


class GradedModule:
    """Finite F2 basis with a Steenrod action, windowed by degree.

    basis: list of (label, degree), nondecreasing in degree.
    action maps (r, index) to an int bitmask over basis indices in degree
    degree(index) + r.  truncation_degree None means the module is exact
    (no cells were discarded); otherwise Ext is trusted only for internal
    degrees <= truncation_degree.
    """

    __slots__ = ("window", "basis", "action", "truncation_degree",
                 "degrees", "_by_degree", "_hash")

    def __init__(
        self,
        window: tuple[int, int],
        basis: Sequence[tuple[str, int]],
        action: dict[tuple[int, int], int],
        truncation_degree: Optional[int] = None,
    ):
        self.window = (int(window[0]), int(window[1]))
        self.basis = [(str(lbl), int(d)) for lbl, d in basis]
        self.degrees = tuple(d for _, d in self.basis)
        for i in range(len(self.degrees) - 1):
            if self.degrees[i] > self.degrees[i + 1]:
                raise ValueError("basis must be ordered by degree")
        self._by_degree: dict[int, list[int]] = {}
        for i, d in enumerate(self.degrees):
            self._by_degree.setdefault(d, []).append(i)
        n = len(self.basis)
        clean: dict[tuple[int, int], int] = {}
        for (r, i), mask in action.items():
            if r < 1 or not 0 <= i < n:
                raise ValueError(f"bad action key {(r, i)}")
            if mask >> n:
                raise ValueError("action mask out of range")
            want = self.degrees[i] + r
            m = mask
            while m:
                low = m & -m
                j = low.bit_length() - 1
                if self.degrees[j] != want:
                    raise ValueError(
                        f"action (Sq^{r}, {i}) target {j} has degree "
                        f"{self.degrees[j]}, expected {want}"
                    )
                m ^= low
            if mask:
                clean[(r, i)] = mask
        self.action = clean
        self.truncation_degree = truncation_degree
        self._hash = None

    # -- structure queries ------------------------------------------------

    def dim(self, degree: int) -> int:
        return len(self._by_degree.get(degree, ()))

    def indices_in_degree(self, degree: int) -> list[int]:
        return list(self._by_degree.get(degree, ()))

    def degree_offset(self, degree: int) -> int:
        # basis indices in a degree are contiguous; offset of the first one
        idxs = self._by_degree.get(degree)
        return idxs[0] if idxs else 0

    def labels_in_degree(self, degree: int) -> list[str]:
        return [self.basis[i][0] for i in self.indices_in_degree(degree)]

    def cell_key(self, i: int) -> int:
        """Cell index k for builder-produced labels 'u{k}' / 'x{degree}'."""
        lbl = self.basis[i][0]
        if lbl.startswith("u"):
            return int(lbl[1:])
        raise ValueError(f"basis element {lbl!r} has no cell key")

    # -- action -----------------------------------------------------------

    def act_index(self, r: int, i: int) -> int:
        if r == 0:
            return 1 << i
        return self.action.get((r, i), 0)

    def act_mask(self, r: int, mask: int) -> int:
        if r == 0:
            return mask
        out = 0
        while mask:
            low = mask & -mask
            out ^= self.act_index(r, low.bit_length() - 1)
            mask ^= low
        return out

    def act_word(self, word: Sequence[int], mask: int) -> int:
        # rightmost operation acts first
        for r in reversed(word):
            if not mask:
                return 0
            mask = self.act_mask(r, mask)
        return mask

    def act_elt(self, e: SteenrodElement, mask: int) -> int:
        out = 0
        for t in e.terms:
            out ^= self.act_word(t, mask)
        return out

    # -- identity / serialization ------------------------------------------

    def content_key(self) -> tuple:
        """Structure with labels stripped; used for map preconditions and
        the resolution cache key (label spelling must not split caches)."""
        return (
            self.window,
            self.degrees,
            tuple(sorted((r, i, m) for (r, i), m in self.action.items())),
            self.truncation_degree,
        )

    def module_hash(self) -> str:
        h = self._hash
        if h is None:
            blob = repr(self.content_key()).encode()
            h = hashlib.sha256(blob).hexdigest()[:16]
            self._hash = h
        return h

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedModule)
            and self.window == other.window
            and self.basis == other.basis
            and self.action == other.action
            and self.truncation_degree == other.truncation_degree
        )

    def __repr__(self) -> str:
        return (
            f"GradedModule({len(self.basis)} cells, window={self.window}, "
            f"trunc={self.truncation_degree})"
        )

    def to_json_dict(self) -> dict:
        action = []
        for (r, i), mask in sorted(self.action.items()):
            to = []
            m = mask
            while m:
                low = m & -m
                to.append(low.bit_length() - 1)
                m ^= low
            action.append({"r": r, "from": i, "to": to})
        return {
            "window": list(self.window),
            "cells": [{"label": lbl, "degree": d} for lbl, d in self.basis],
            "action": action,
            "truncation_degree": self.truncation_degree,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=False,
                          separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, d: dict) -> "GradedModule":
        action = {}
        for rec in d["action"]:
            mask = 0
            for j in rec["to"]:
                mask |= 1 << j
            action[(rec["r"], rec["from"])] = mask
        return cls(
            tuple(d["window"]),
            [(c["label"], c["degree"]) for c in d["cells"]],
            action,
            d["truncation_degree"],
        )

    @classmethod
    def from_json(cls, s: str) -> "GradedModule":
        return cls.from_json_dict(json.loads(s))


# ---------------------------------------------------------------- builders


def sphere_module(degree: int) -> GradedModule:
    """Single F2 class; every positive Sq acts by zero.  Exact (no window
    truncation), so resolutions may use any internal degree."""
    return GradedModule(
        (degree, degree), [(f"u{degree}", degree)], {}, truncation_degree=None
    )


def stunted_module(
    K: Field, bot: int, top: int, hi_degree: Optional[int] = None
) -> GradedModule:
    """Cohomology of the stunted projective spectrum with cells bot..top.

    Cell u^k sits in degree d_K*k.  With hi_degree=None this is the honest
    finite complex (exact in every degree, truncation_degree None).  With
    hi_degree given, the module is a cut-off model of the spectrum with
    cells bot..infinity, faithful only through that degree: cells above it
    are dropped and truncation_degree is recorded so Ext consumers stay in
    the safe window.  hi_degree must stay below the degree of the first
    cell the caller did not provide.
    """
    if bot > top:
        raise ValueError(f"bot {bot} > top {top}")
    d = K.d
    trunc: Optional[int] = None
    if hi_degree is not None:
        if hi_degree >= d * (top + 1):
            raise ValueError(
                f"hi_degree {hi_degree} reaches the missing cell {top + 1} "
                f"(degree {d * (top + 1)}); raise top"
            )
        trunc = hi_degree
    cells = [
        k
        for k in range(bot, top + 1)
        if hi_degree is None or d * k <= hi_degree
    ]
    if not cells:
        raise ValueError("window excludes every cell")
    index = {k: i for i, k in enumerate(cells)}
    action: dict[tuple[int, int], int] = {}
    for k in cells:
        for j in range(1, cells[-1] - k + 1):
            tgt = k + j
            if tgt not in index:
                continue
            if binom_mod2(k, j):
                action[(d * j, index[k])] = 1 << index[tgt]
    return GradedModule(
        (d * cells[0], d * cells[-1]),
        [(f"u{k}", d * k) for k in cells],
        action,
        truncation_degree=trunc,
    )


def check_adem_compatible(m: GradedModule) -> None:
    """Verify every Adem relation that fits in the window holds on every
    basis element; raises AssertionError with the offending data."""
    span = m.window[1] - m.window[0]
    for b in range(1, span + 1):
        for a in range(1, 2 * b):
            if a + b > span:
                continue
            rhs_elt = adem_normalize((a, b))
            for i in range(len(m.basis)):
                lhs = m.act_mask(a, m.act_mask(b, 1 << i))
                rhs = m.act_elt(rhs_elt, 1 << i)
                assert lhs == rhs, (
                    f"Adem failure: Sq^{a} Sq^{b} on {m.basis[i][0]}: "
                    f"{lhs:b} vs {rhs:b}"
                )


def is_shift_isomorphic(m1: GradedModule, m2: GradedModule, shift: int) -> bool:
    """True when m2 is m1 with every degree moved up by `shift` and the
    identical action table (same index order) — module-level periodicity."""
    if len(m1.basis) != len(m2.basis):
        return False
    if any(d1 + shift != d2 for d1, d2 in zip(m1.degrees, m2.degrees)):
        return False
    return m1.action == m2.action


# ---------------------------------------------------------------- maps


class ModuleMap:
    """Degree-preserving (up to `shift`) map of graded modules.

    Stored per degree: matrix taking source coordinates in degree t to
    target coordinates in degree t + shift (column-vector convention).
    Degrees without an entry are zero maps.
    """

    __slots__ = ("source", "target", "shift", "_mats")

    def __init__(
        self,
        source: GradedModule,
        target: GradedModule,
        mats: dict[int, BitMatrix],
        shift: int = 0,
    ):
        self.source = source
        self.target = target
        self.shift = shift
        self._mats = {}
        for t, mat in mats.items():
            if mat.ncols != source.dim(t) or mat.nrows != target.dim(t + shift):
                raise ValueError(f"matrix shape mismatch in degree {t}")
            if not mat.is_zero():
                self._mats[t] = mat

    @classmethod
    def from_index_map(
        cls,
        source: GradedModule,
        target: GradedModule,
        f: Callable[[int], int],
        shift: int = 0,
    ) -> "ModuleMap":
        """f sends a source basis index to a target bitmask (or 0)."""
        mats: dict[int, BitMatrix] = {}
        for t in sorted({d for d in source.degrees}):
            src_idx = source.indices_in_degree(t)
            tgt_idx = target.indices_in_degree(t + shift)
            pos = {j: p for p, j in enumerate(tgt_idx)}
            mat = BitMatrix.zeros(len(tgt_idx), len(src_idx))
            for c, i in enumerate(src_idx):
                mask = f(i)
                while mask:
                    low = mask & -mask
                    j = low.bit_length() - 1
                    if j not in pos:
                        raise ValueError("image outside expected degree")
                    mat.set(pos[j], c, 1)
                    mask ^= low
            mats[t] = mat
        return cls(source, target, mats, shift)

    @classmethod
    def identity(cls, m: GradedModule) -> "ModuleMap":
        return cls.from_index_map(m, m, lambda i: 1 << i)

    def matrix(self, t: int) -> BitMatrix:
        mat = self._mats.get(t)
        if mat is None:
            mat = BitMatrix.zeros(self.target.dim(t + self.shift),
                                  self.source.dim(t))
        return mat

    def apply(self, t: int, v: BitVector) -> BitVector:
        return self.matrix(t).mul_vec(v)

    def apply_mask(self, mask: int) -> int:
        """Whole-module index-mask version (shift-aware)."""
        out = 0
        while mask:
            low = mask & -mask
            i = low.bit_length() - 1
            t = self.source.degrees[i]
            col = self.matrix(t)
            src_pos = self.source.indices_in_degree(t).index(i)
            tgt_idx = self.target.indices_in_degree(t + self.shift)
            for rpos in range(col.nrows):
                if col.get(rpos, src_pos):
                    out ^= 1 << tgt_idx[rpos]
            mask ^= low
        return out

    def compose(self, inner: "ModuleMap") -> "ModuleMap":
        """self ∘ inner (inner applied first)."""
        if inner.target is not self.source and inner.target != self.source:
            raise ValueError("composition mismatch")
        mats = {}
        for t in sorted({d for d in inner.source.degrees}):
            mats[t] = self.matrix(t + inner.shift) @ inner.matrix(t)
        return ModuleMap(inner.source, self.target, mats,
                         self.shift + inner.shift)

    def check_commutes(self) -> None:
        """Assert f(Sq^r x) == Sq^r f(x) wherever both sides make sense."""
        src, tgt = self.source, self.target
        max_r = max(
            [r for (r, _) in src.action] + [r for (r, _) in tgt.action],
            default=0,
        )
        for r in range(1, max_r + 1):
            for i in range(len(src.basis)):
                left = self.apply_mask(src.act_index(r, i))
                right = tgt.act_mask(r, self.apply_mask(1 << i))
                assert left == right, (
                    f"map does not commute with Sq^{r} on index {i}"
                )


class SkeletalMaps(NamedTuple):
    incl: ModuleMap
    quot: ModuleMap


def _stunted_field_of(m: GradedModule) -> Field:
    # recover d from the cell spacing; single-cell modules behave as spheres
    keys = [m.cell_key(i) for i in range(len(m.basis))]
    degs = m.degrees
    if len(keys) >= 2:
        d = (degs[1] - degs[0]) // (keys[1] - keys[0])
    else:
        d = degs[0] // keys[0] if keys[0] else 1
    for f in Field:
        if f.d == d:
            return f
    raise ValueError("cannot infer field from cell layout")


def skeletal_maps(m: GradedModule, split_cell: int) -> SkeletalMaps:
    """Split a stunted module at a cell index.

    incl : the submodule spanned by cells >= split_cell, included into m
           (a submodule because Sq raises degree);
    quot : m projected onto the span of cells < split_cell, which is the
           quotient by that submodule.

    A single-cell piece on either side is returned as sphere_module of the
    right degree so that spellings agree everywhere downstream.
    """
    K = _stunted_field_of(m)
    keys = [m.cell_key(i) for i in range(len(m.basis))]
    bot, top = keys[0], keys[-1]
    if not bot < split_cell <= top:
        raise ValueError(
            f"split_cell {split_cell} outside cell range ({bot}, {top}]"
        )
    upper = (
        sphere_module(K.d * top)
        if split_cell == top
        else stunted_module(K, split_cell, top, hi_degree=m.truncation_degree)
    )
    lower = (
        sphere_module(K.d * bot)
        if split_cell == bot + 1
        else stunted_module(K, bot, split_cell - 1)
    )
    cell_to_upper = {k: i for i, k in enumerate(keys) if k >= split_cell}
    up_order = sorted(cell_to_upper)
    incl = ModuleMap.from_index_map(
        upper, m, lambda i: 1 << cell_to_upper[up_order[i]]
    )
    low_order = [k for k in keys if k < split_cell]
    low_pos = {k: i for i, k in enumerate(low_order)}
    quot = ModuleMap.from_index_map(
        m,
        lower,
        lambda i: (1 << low_pos[keys[i]]) if keys[i] in low_pos else 0,
    )
    return SkeletalMaps(incl, quot)
