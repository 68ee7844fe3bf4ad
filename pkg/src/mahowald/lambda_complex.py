"""Lambda-complex route to sphere Ext, independent of the resolution sweep.

Cochains are spanned by admissible words L(i1)...L(is) with 2*i_k >= i_{k+1};
L(i) sits in bidegree (1, i+1).  The differential

    d L(n) = sum_{j>=1} C(n-j, j) L(n-j) L(j-1)   (mod 2)

extends by the Leibniz rule, and inadmissible pairs straighten through

    L(a) L(b) = sum_{k < b//2 - a} C(b-2a-2-k, k) L(b-a-1-k) L(2a+1+k)

for b > 2a.  The integer-division bound matters: L(0)L(1) rewrites to the
empty sum.  Cohomology in bidegree (s, t) is Ext^{s,t} over the Steenrod
algebra; nothing here touches the Adem machinery or the resolution sweep,
so agreement between the two routes is a genuine cross-check.  Only the
bit-matrix rank computation is shared.
"""

from __future__ import annotations

import functools
from typing import Iterator

from .f2linalg import BitMatrix
from .steenrod import binom_nonneg_mod2

Word = tuple[int, ...]


def lambda_bidegree(word: Word) -> tuple[int, int]:
    return len(word), len(word) + sum(word)


def is_admissible_word(word: Word) -> bool:
    return all(2 * word[k] >= word[k + 1] for k in range(len(word) - 1))


@functools.cache
def _pair_rule(a: int, b: int) -> frozenset:
    if b <= 2 * a:
        return frozenset([(a, b)])
    out: set = set()
    for k in range(b // 2 - a):
        if binom_nonneg_mod2(b - 2 * a - 2 - k, k):
            out ^= {(b - a - 1 - k, 2 * a + 1 + k)}
    return frozenset(out)


def straighten(word: Word) -> frozenset:
    """Admissible-basis expansion of an arbitrary word."""
    out: set = set()
    stack = [tuple(word)]
    while stack:
        w = stack.pop()
        for p in range(len(w) - 1):
            if w[p + 1] > 2 * w[p]:
                for pair in _pair_rule(w[p], w[p + 1]):
                    stack.append(w[:p] + pair + w[p + 2 :])
                break
        else:
            out ^= {w}
    return frozenset(out)


@functools.cache
def _d_letter(n: int) -> frozenset:
    out: set = set()
    for j in range(1, n + 1):
        if binom_nonneg_mod2(n - j, j):
            out ^= {(n - j, j - 1)}
    return frozenset(out)


def d_word(word: Word) -> frozenset:
    """Differential of an admissible word, in the admissible basis."""
    out: set = set()
    for p, letter in enumerate(word):
        for pair in _d_letter(letter):
            out ^= straighten(word[:p] + pair + word[p + 1 :])
    return frozenset(out)


@functools.cache
def admissible_words(s: int, t: int) -> tuple[Word, ...]:
    """All admissible words in bidegree (s, t), lexicographically sorted."""
    total = t - s
    if s < 0 or total < 0:
        return ()
    if s == 0:
        return ((),) if total == 0 else ()

    def gen(length: int, remaining: int, cap: int) -> Iterator[Word]:
        if length == 0:
            if remaining == 0:
                yield ()
            return
        # remaining letters are bounded by the doubling chain cap, 2cap, ...
        if cap < remaining and cap * ((1 << length) - 1) < remaining:
            return
        for first in range(min(cap, remaining) + 1):
            for rest in gen(length - 1, remaining - first, 2 * first):
                yield (first,) + rest

    return tuple(sorted(gen(s, total, total)))


class LambdaComplex:
    """Bidegree-windowed Ext computation from the cochain complex."""

    def __init__(self, s_max: int, t_max: int):
        self.s_max = s_max
        self.t_max = t_max
        self._rank: dict[tuple[int, int], int] = {}

    def _d_rank(self, s: int, t: int) -> int:
        """Rank of d: (s,t) -> (s+1,t)."""
        key = (s, t)
        got = self._rank.get(key)
        if got is not None:
            return got
        src = admissible_words(s, t)
        tgt = admissible_words(s + 1, t)
        if not src or not tgt:
            self._rank[key] = 0
            return 0
        pos = {w: i for i, w in enumerate(tgt)}
        cols = []
        for w in src:
            mask = 0
            for out in d_word(w):
                mask ^= 1 << pos[out]
            cols.append(mask)
        r = BitMatrix.from_cols(cols, len(tgt)).rank()
        self._rank[key] = r
        return r

    def ext_dim(self, s: int, t: int) -> int:
        if not (0 <= s <= self.s_max and t <= self.t_max):
            raise ValueError(
                f"bidegree ({s},{t}) outside window (s_max={self.s_max},"
                f" t_max={self.t_max})"
            )
        n = len(admissible_words(s, t))
        if n == 0:
            return 0
        below = self._d_rank(s - 1, t) if s > 0 else 0
        return n - self._d_rank(s, t) - below


def check_dd_zero(word: Word) -> bool:
    """d(d w) == 0 in the admissible basis; w need not be admissible."""
    acc: set = set()
    for w in straighten(word):
        acc ^= d_word(w)
    out: set = set()
    for w in acc:
        out ^= d_word(w)
    return not out
