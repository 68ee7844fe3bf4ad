"""Arithmetic in the mod-2 Steenrod algebra.

Elements are kept in the admissible basis: monomials Sq^{i_1}...Sq^{i_k}
with i_j >= 2*i_{j+1}.  An inadmissible adjacent pair Sq^a Sq^b (a < 2b)
is rewritten with the Adem relation

    Sq^a Sq^b = sum_{c=0}^{a//2} C(b-c-1, a-2c) Sq^{a+b-c} Sq^c   (mod 2),

whose c=0 term is the single letter Sq^{a+b}.  Rewriting the leftmost bad
pair strictly decreases the moment ordering, so normalization terminates;
admissible monomials are a basis, so the result is canonical.

Monomials are plain int tuples; the empty tuple is the unit.  Elements are
immutable term sets in a single degree; addition is symmetric difference.
"""

from __future__ import annotations

import functools
import re
from typing import Iterable, Sequence

Monomial = tuple[int, ...]


def binom_nonneg_mod2(n: int, k: int) -> int:
    """C(n, k) mod 2 for n, k >= 0 by Lucas: 1 iff k's bits are within n's."""
    if k < 0 or k > n:
        return 0
    return 1 if (n & k) == k else 0


def is_admissible(word: Sequence[int]) -> bool:
    return all(word[j] >= 2 * word[j + 1] for j in range(len(word) - 1))


@functools.cache
def _adem_pair(a: int, b: int) -> tuple[Monomial, ...]:
    # expansion of the inadmissible pair (a, b), a < 2b; every output word
    # with two letters is automatically admissible
    out = []
    for c in range(a // 2 + 1):
        if binom_nonneg_mod2(b - c - 1, a - 2 * c):
            out.append((a + b,) if c == 0 else (a + b - c, c))
    return tuple(out)


def _normalize_words(words: Iterable[Monomial]) -> frozenset:
    """Mod-2 sum of arbitrary words, rewritten into the admissible basis."""
    out: set[Monomial] = set()
    stack = list(words)
    while stack:
        w = stack.pop()
        for j in range(len(w) - 1):
            if w[j] < 2 * w[j + 1]:
                pre, post = w[:j], w[j + 2:]
                for rep in _adem_pair(w[j], w[j + 1]):
                    stack.append(pre + rep + post)
                break
        else:
            out ^= {w}
    return frozenset(out)


# product cache on admissible monomial pairs: the hot path when composing
# module actions and expanding resolution differentials.  Add-only dict —
# concurrent readers are safe, double computation is harmless.
_prod_cache: dict[tuple[Monomial, Monomial], frozenset] = {}


def mono_product(m1: Monomial, m2: Monomial) -> frozenset:
    key = (m1, m2)
    hit = _prod_cache.get(key)
    if hit is None:
        hit = _normalize_words([m1 + m2])
        _prod_cache[key] = hit
    return hit


class SteenrodElement:
    """Homogeneous element with admissible terms; immutable."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Iterable[Monomial] = ()):
        tset = frozenset(tuple(t) for t in terms)
        for t in tset:
            if not is_admissible(t):
                raise ValueError(f"inadmissible term {t}")
            if sum(t) != degree:
                raise ValueError(f"term {t} not of degree {degree}")
        self.degree = degree
        self.terms = tset

    @classmethod
    def zero(cls, degree: int = 0) -> "SteenrodElement":
        return cls(degree)

    @classmethod
    def unit(cls) -> "SteenrodElement":
        return cls(0, [()])

    @classmethod
    def sq(cls, r: int) -> "SteenrodElement":
        if r < 0:
            raise ValueError("negative Sq")
        return cls.unit() if r == 0 else cls(r, [(r,)])

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "SteenrodElement") -> "SteenrodElement":
        if self.degree != other.degree and self.terms and other.terms:
            raise ValueError("inhomogeneous sum")
        deg = self.degree if self.terms else other.degree
        return SteenrodElement(deg, self.terms ^ other.terms)

    def __mul__(self, other: "SteenrodElement") -> "SteenrodElement":
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SteenrodElement):
            return NotImplemented
        if not self.terms and not other.terms:
            return True  # zero is zero in any degree
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def sorted_terms(self) -> list[Monomial]:
        return sorted(self.terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            "Sq0" if not t else " ".join(f"Sq{i}" for i in t)
            for t in self.sorted_terms()
        )

    def __repr__(self) -> str:
        return f"<{self.render()}>"


_FACTOR_RE = re.compile(r"^Sq(\d+)$")


def parse(text: str) -> SteenrodElement:
    """Inverse of render(); arbitrary (even inadmissible) input is normalized."""
    text = text.strip()
    if text == "0":
        return SteenrodElement.zero(0)
    words = []
    for chunk in text.split("+"):
        factors = chunk.split()
        word = []
        for f in factors:
            m = _FACTOR_RE.match(f)
            if not m:
                raise ValueError(f"cannot parse factor {f!r}")
            r = int(m.group(1))
            if r:
                word.append(r)
        words.append(tuple(word))
    if not words:
        raise ValueError("empty expression")
    deg = sum(words[0])
    for w in words:
        if sum(w) != deg:
            raise ValueError("inhomogeneous expression")
    return SteenrodElement(deg, _normalize_words(words))


def adem_normalize(word: Sequence[int]) -> SteenrodElement:
    """Rewrite a product of Sq's into the admissible basis."""
    w = []
    for i in word:
        if i < 0:
            raise ValueError("negative Sq exponent")
        if i:  # Sq^0 = 1 just drops out
            w.append(i)
    return SteenrodElement(sum(w), _normalize_words([tuple(w)]))


def multiply(a: SteenrodElement, b: SteenrodElement) -> SteenrodElement:
    terms: frozenset = frozenset()
    for m1 in a.terms:
        for m2 in b.terms:
            terms = terms ^ mono_product(m1, m2)
    return SteenrodElement(a.degree + b.degree, terms)


@functools.cache
def _max_admissible_degree(head_cap: int) -> int:
    # largest degree of an admissible word whose first letter is <= head_cap
    return 0 if head_cap <= 0 else head_cap + _max_admissible_degree(head_cap // 2)


def basis(n: int) -> list[Monomial]:
    """All admissible monomials of degree n, lexicographically ordered."""
    if n < 0:
        raise ValueError("negative degree")
    if n == 0:
        return [()]
    out: list[Monomial] = []

    def rec(rem: int, cap: int, prefix: list[int]) -> None:
        if rem == 0:
            out.append(tuple(prefix))
            return
        for i in range(1, min(cap, rem) + 1):
            if rem - i <= _max_admissible_degree(i // 2):
                prefix.append(i)
                rec(rem - i, i // 2, prefix)
                prefix.pop()

    rec(n, n, [])
    return sorted(out)
