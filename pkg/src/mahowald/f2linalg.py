"""Bit-packed linear algebra over the two-element field.

Vectors are immutable and int-backed; matrices pack rows into numpy uint64
words so that row elimination is a handful of vectorized XORs.  Everything
downstream (Steenrod products, resolutions, Ext maps, the tower driver)
reduces its work to rref / solve / kernel_basis here, so conventions are
pinned tightly:

* pivot choice in rref is the lowest column, then the lowest row — results
  are deterministic and reproducible across runs and thread counts;
* solve() zeroes every free variable, so lifts chosen downstream are unique;
* kernel_basis() orders its output by free-column index.

Matrices act on column vectors: solve(m, b) finds x with m @ x == b where
len(x) == m.ncols and len(b) == m.nrows.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

_U64 = np.dtype("<u8")
_ONE = np.uint64(1)


def _nwords(ncols: int) -> int:
    return (ncols + 63) >> 6


class BitVector:
    """Immutable F2 vector; bit i of `bits` is coordinate i."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int = 0):
        if n < 0:
            raise ValueError("negative length")
        if bits < 0 or (bits >> n) != 0:
            raise ValueError(f"bits out of range for length {n}")
        self.n = n
        self.bits = bits

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(n, 0)

    @classmethod
    def unit(cls, n: int, i: int) -> "BitVector":
        if not 0 <= i < n:
            raise ValueError(f"unit index {i} out of range for length {n}")
        return cls(n, 1 << i)

    @classmethod
    def from_support(cls, n: int, positions: Iterable[int]) -> "BitVector":
        bits = 0
        for p in positions:
            bits |= 1 << p
        return cls(n, bits)

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        # position 0 is the leftmost character: "1100" == e0 + e1
        bits = 0
        for i, ch in enumerate(s):
            if ch == "1":
                bits |= 1 << i
            elif ch != "0":
                raise ValueError(f"bad bit character {ch!r}")
        return cls(len(s), bits)

    def to_string(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BitVector(self.n, self.bits ^ other.bits)

    def dot(self, other: "BitVector") -> int:
        if self.n != other.n:
            raise ValueError("length mismatch")
        return (self.bits & other.bits).bit_count() & 1

    def support(self) -> tuple[int, ...]:
        bits, out = self.bits, []
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return tuple(out)

    def popcount(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def __bool__(self) -> bool:
        return self.bits != 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.n == other.n
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __repr__(self) -> str:
        return f"BitVector('{self.to_string()}')"


def _bits_to_words(bits: int, nwords: int) -> np.ndarray:
    return np.frombuffer(bits.to_bytes(nwords * 8, "little"), dtype=_U64).copy()


def _words_to_bits(words: np.ndarray) -> int:
    return int.from_bytes(words.tobytes(), "little")


class BitMatrix:
    """Dense F2 matrix, rows packed little-endian into uint64 words.

    Mutable only through set() during an initial builder phase; every
    algorithm here works on a copy and all published values are frozen by
    convention.
    """

    __slots__ = ("nrows", "ncols", "_w")

    def __init__(self, nrows: int, ncols: int, _words: Optional[np.ndarray] = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative dimension")
        self.nrows = nrows
        self.ncols = ncols
        if _words is None:
            _words = np.zeros((nrows, _nwords(ncols)), dtype=_U64)
        self._w = _words

    # -- construction --------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        m = cls(n, n)
        for i in range(n):
            m.set(i, i, 1)
        return m

    @classmethod
    def from_rows(cls, rows: Sequence, ncols: Optional[int] = None) -> "BitMatrix":
        """Rows may be BitVectors, int bitmasks, or 0/1 sequences."""
        conv = []
        for r in rows:
            if isinstance(r, BitVector):
                if ncols is None:
                    ncols = r.n
                elif r.n != ncols:
                    raise ValueError("row length mismatch")
                conv.append(r.bits)
            elif isinstance(r, int):
                conv.append(r)
            else:
                bits = 0
                for i, x in enumerate(r):
                    if x:
                        bits |= 1 << i
                if ncols is None:
                    ncols = len(r)
                elif len(r) != ncols:
                    raise ValueError("row length mismatch")
                conv.append(bits)
        if ncols is None:
            raise ValueError("ncols required when rows are int bitmasks or empty")
        nw = _nwords(ncols)
        words = np.zeros((len(conv), nw), dtype=_U64)
        for i, bits in enumerate(conv):
            if bits >> ncols:
                raise ValueError("row bits exceed ncols")
            words[i] = _bits_to_words(bits, nw)
        return cls(len(conv), ncols, words)

    @classmethod
    def from_cols(cls, cols: Sequence, nrows: int) -> "BitMatrix":
        return cls.from_rows(cols, nrows).transpose()

    @classmethod
    def from_dense(cls, arr) -> "BitMatrix":
        arr = np.asarray(arr, dtype=np.uint8) & 1
        if arr.ndim != 2:
            raise ValueError("need a 2-d array")
        nrows, ncols = arr.shape
        nw = _nwords(ncols)
        if ncols == 0 or nrows == 0:
            return cls(nrows, ncols)
        packed = np.packbits(arr, axis=1, bitorder="little")
        padded = np.zeros((nrows, nw * 8), dtype=np.uint8)
        padded[:, : packed.shape[1]] = packed
        return cls(nrows, ncols, padded.view(_U64))

    def to_dense(self) -> np.ndarray:
        if self.nrows == 0 or self.ncols == 0:
            return np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        flat = np.unpackbits(
            np.ascontiguousarray(self._w).view(np.uint8), axis=1, bitorder="little"
        )
        return flat[:, : self.ncols]

    # -- element access -------------------------------------------------

    def get(self, i: int, j: int) -> int:
        self._check(i, j)
        return int((self._w[i, j >> 6] >> np.uint64(j & 63)) & _ONE)

    def set(self, i: int, j: int, v: int) -> None:
        # builder phase only; published matrices are never mutated
        self._check(i, j)
        bit = _ONE << np.uint64(j & 63)
        if v:
            self._w[i, j >> 6] |= bit
        else:
            self._w[i, j >> 6] &= ~bit

    def _check(self, i: int, j: int) -> None:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError((i, j))

    def row(self, i: int) -> BitVector:
        return BitVector(self.ncols, self.row_bits(i))

    def row_bits(self, i: int) -> int:
        if not 0 <= i < self.nrows:
            raise IndexError(i)
        return _words_to_bits(self._w[i])

    def rows(self) -> list[BitVector]:
        return [self.row(i) for i in range(self.nrows)]

    def column(self, j: int) -> BitVector:
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        if self.nrows == 0:
            return BitVector(0)
        col = (self._w[:, j >> 6] >> np.uint64(j & 63)) & _ONE
        return BitVector.from_support(
            self.nrows, [i for i in range(self.nrows) if col[i]]
        )

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.nrows, self.ncols, self._w.copy())

    def is_zero(self) -> bool:
        return not self._w.any()

    # -- algebra ----------------------------------------------------------

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def _row_mask(self, i: int) -> np.ndarray:
        flat = np.unpackbits(
            np.ascontiguousarray(self._w[i]).view(np.uint8), bitorder="little"
        )
        return flat[: self.ncols].astype(bool)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise ValueError("inner dimension mismatch")
        out = BitMatrix.zeros(self.nrows, other.ncols)
        if self.ncols == 0 or self.nrows == 0 or other.ncols == 0:
            return out
        bw = other._w
        for i in range(self.nrows):
            mask = self._row_mask(i)
            if mask.any():
                out._w[i] = np.bitwise_xor.reduce(bw[mask], axis=0)
        return out

    def mul_vec(self, x: BitVector) -> BitVector:
        """Matrix-vector product m @ x (x indexed by columns)."""
        if x.n != self.ncols:
            raise ValueError("dimension mismatch")
        out = 0
        for i in range(self.nrows):
            if (self.row_bits(i) & x.bits).bit_count() & 1:
                out |= 1 << i
        return BitVector(self.nrows, out)

    def augment(self, other: "BitMatrix") -> "BitMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        rows = [
            self.row_bits(i) | (other.row_bits(i) << self.ncols)
            for i in range(self.nrows)
        ]
        return BitMatrix.from_rows(rows, self.ncols + other.ncols)

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        rows = [self.row_bits(i) for i in range(self.nrows)]
        rows += [other.row_bits(i) for i in range(other.nrows)]
        return BitMatrix.from_rows(rows, self.ncols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and bool(np.array_equal(self._w, other._w))
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"

    # -- elimination -------------------------------------------------------

    def _rref_inplace(self, scan_cols: int) -> tuple[int, ...]:
        """Full reduction on columns [0, scan_cols); row ops span all words."""
        w = self._w
        pivots = []
        r = 0
        for c in range(scan_cols):
            if r == self.nrows:
                break
            wi, sh = c >> 6, np.uint64(c & 63)
            col = (w[:, wi] >> sh) & _ONE
            live = np.nonzero(col[r:])[0]
            if live.size == 0:
                continue
            p = r + int(live[0])
            if p != r:
                w[[r, p]] = w[[p, r]]
                col[[r, p]] = col[[p, r]]
            mask = col.astype(bool)
            mask[r] = False
            if mask.any():
                w[mask] ^= w[r]
            pivots.append(c)
            r += 1
        return tuple(pivots)

    def rref(self) -> tuple["BitMatrix", tuple[int, ...], int]:
        """Reduced row echelon form; returns (reduced, pivot_cols, rank)."""
        m = self.copy()
        pivots = m._rref_inplace(self.ncols)
        return m, pivots, len(pivots)

    def rank(self) -> int:
        return len(self.copy()._rref_inplace(self.ncols))

    def solve(self, b: BitVector) -> Optional[BitVector]:
        return self.solve_many([b])[0]

    def solve_many(self, bs: Sequence[BitVector]) -> list[Optional[BitVector]]:
        """Solve m @ x = b for each b; one elimination for the whole batch.

        Free variables are set to 0; returns None where b is outside the
        column space.
        """
        k = len(bs)
        for b in bs:
            if b.n != self.nrows:
                raise ValueError(
                    f"rhs length {b.n} != rows {self.nrows}"
                )
        if k == 0:
            return []
        aug_rows = []
        for i in range(self.nrows):
            bits = self.row_bits(i)
            for j, b in enumerate(bs):
                if (b.bits >> i) & 1:
                    bits |= 1 << (self.ncols + j)
            aug_rows.append(bits)
        aug = BitMatrix.from_rows(aug_rows, self.ncols + k)
        pivots = aug._rref_inplace(self.ncols)
        rank = len(pivots)
        red = [aug.row_bits(i) for i in range(self.nrows)]
        # any leftover row with a live rhs bit marks that system inconsistent
        bad = 0
        for i in range(rank, self.nrows):
            bad |= red[i] >> self.ncols
        out: list[Optional[BitVector]] = []
        for j in range(k):
            if (bad >> j) & 1:
                out.append(None)
                continue
            x = 0
            for i, p in enumerate(pivots):
                if (red[i] >> (self.ncols + j)) & 1:
                    x |= 1 << p
            out.append(BitVector(self.ncols, x))
        return out

    def kernel_basis(self) -> list[BitVector]:
        """Basis of {x : m @ x == 0}, ordered by free-column index."""
        red, pivots, rank = self.rref()
        pivset = set(pivots)
        rows_int = [red.row_bits(i) for i in range(rank)]
        basis = []
        for f in range(self.ncols):
            if f in pivset:
                continue
            v = 1 << f
            for i, p in enumerate(pivots):
                if (rows_int[i] >> f) & 1:
                    v |= 1 << p
            basis.append(BitVector(self.ncols, v))
        return basis


class EchelonSpan:
    """Incrementally maintained row space, int-backed, for membership tests.

    Rows are stored keyed by pivot == lowest set bit; distinct pivots cannot
    cancel, so a residue whose lowest bit has no pivot row is certified
    outside the span without full reduction.
    """

    __slots__ = ("ncols", "rows")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, int] = {}

    def reduce(self, bits: int) -> int:
        while bits:
            p = (bits & -bits).bit_length() - 1
            row = self.rows.get(p)
            if row is None:
                return bits
            bits ^= row
        return 0

    def add(self, bits: int) -> bool:
        """Insert a vector; True when the span grew."""
        while bits:
            p = (bits & -bits).bit_length() - 1
            row = self.rows.get(p)
            if row is None:
                self.rows[p] = bits
                return True
            bits ^= row
        return False

    def contains(self, bits: int) -> bool:
        return self.reduce(bits) == 0

    @property
    def dim(self) -> int:
        return len(self.rows)


# module-level spellings of the matrix kernels, matching the public contract


def rref(m: BitMatrix) -> tuple[BitMatrix, tuple[int, ...], int]:
    return m.rref()


def rank(m: BitMatrix) -> int:
    return m.rank()


def solve(m: BitMatrix, b: BitVector) -> Optional[BitVector]:
    return m.solve(b)


def solve_many(m: BitMatrix, bs: Sequence[BitVector]) -> list[Optional[BitVector]]:
    return m.solve_many(bs)


def kernel_basis(m: BitMatrix) -> list[BitVector]:
    return m.kernel_basis()
