"""Strategy orbits under signed cyclic shifts.

One step of the shift moves every answer one input forward and re-enters
the last answer negated at input 0. The shifts generate a group of order 2m
that contains the global sign flip (m steps), and its orbits on {+1,-1}^m
are the signed binary necklaces counted by u_m.
"""
import logging
import math
from functools import lru_cache, total_ordering

import numpy as np
from sympy import divisors, totient

from symbell.errors import BudgetExceededError
from symbell.symcorr import Strategy

logger = logging.getLogger(__name__)

NECKLACE_CAP = 26
MULTISET_BUDGET = 10 ** 9
_CHUNK = 1 << 20


@total_ordering
class Necklace(object):
    """Orbit of a strategy, stored as its lexicographically smallest member."""

    __slots__ = ('rep',)

    def __init__(self, rep):
        self.rep = rep

    @property
    def word(self):
        return self.rep.word

    @property
    def m(self):
        return self.rep.m

    def __eq__(self, other):
        return isinstance(other, Necklace) and self.rep == other.rep

    def __lt__(self, other):
        return (self.m, self.word) < (other.m, other.word)

    def __hash__(self):
        return hash(self.rep)

    def __repr__(self):
        return 'Necklace({})'.format(self.rep)


def necklace_count(m):
    """u_m, the number of orbits, by the odd-divisor necklace formula."""
    if m < 1:
        raise ValueError("m must be positive, got {}".format(m))
    total = sum(int(totient(d)) * 2 ** (m // d) for d in divisors(m) if d % 2)
    count, rest = divmod(total, 2 * m)
    if rest:
        raise ArithmeticError("necklace sum {} not divisible by {}".format(total, 2 * m))
    return count


def shift_word(word, m):
    """One signed cyclic step on an m-bit word (bit m-1 is input 0)."""
    return (word >> 1) | ((~word & 1) << (m - 1))


def canonical_word(word, m):
    best = cur = word
    for _ in range(2 * m - 1):
        cur = shift_word(cur, m)
        if cur < best:
            best = cur
    return best


def canonical_necklace(strategy):
    m = strategy.m
    return Necklace(Strategy.from_word(canonical_word(strategy.word, m), m))


@lru_cache(maxsize=None)
def necklace_words(m, cap=NECKLACE_CAP):
    """Sorted canonical words for m inputs.

    Every orbit contains a word starting with -1 (bit 0), so only the lower
    half of the words is scanned, in vectorised chunks.
    """
    if m > cap:
        raise BudgetExceededError("necklace enumeration for m={}".format(m), m, cap)
    half = 1 << (m - 1)
    top = np.int64(1) << np.int64(m - 1)
    reps = []
    for start in range(0, half, _CHUNK):
        words = np.arange(start, min(start + _CHUNK, half), dtype=np.int64)
        best = words.copy()
        cur = words
        for _ in range(2 * m - 1):
            cur = (cur >> 1) | (((~cur) & 1) * top)
            np.minimum(best, cur, out=best)
        reps.append(words[best == words])
    found = tuple(int(w) for w in np.concatenate(reps))
    logger.debug("m=%d: %d necklaces", m, len(found))
    return found


def enumerate_necklaces(m, cap=NECKLACE_CAP):
    """All orbits for m inputs, sorted by representative."""
    return [Necklace(Strategy.from_word(w, m)) for w in necklace_words(m, cap)]


def reflection_map(necklaces):
    """Index of the orbit of the reflected representative, for each orbit."""
    index = {n.word: i for i, n in enumerate(necklaces)}
    return [index[canonical_necklace(n.rep.reflect()).word] for n in necklaces]


def multiset_count(n_items, length):
    return math.comb(n_items + length - 1, length)


def _unrank(rank, n_items, length):
    """Non-decreasing tuple of given lexicographic rank."""
    # non-decreasing a_i <-> strictly increasing a_i + i over n_items + length - 1 symbols
    n = n_items + length - 1
    out = []
    x = 0
    for i in range(length):
        while True:
            c = math.comb(n - x - 1, length - i - 1)
            if rank < c:
                break
            rank -= c
            x += 1
        out.append(x - i)
        x += 1
    return tuple(out)


def _successor(t, n_items):
    t = list(t)
    i = len(t) - 1
    while i >= 0 and t[i] == n_items - 1:
        i -= 1
    if i < 0:
        return None
    v = t[i] + 1
    t[i:] = [v] * (len(t) - i)
    return tuple(t)


class MultisetCursor(object):
    """Contiguous range of non-decreasing index tuples in lexicographic order.

    Cursors split into independent contiguous sub-ranges; concatenating the
    pieces reproduces the parent sequence.
    """

    def __init__(self, n_items, length, start=0, stop=None, necklaces=None, keep=None):
        self.n_items = n_items
        self.length = length
        self.total = multiset_count(n_items, length) if n_items or not length else 0
        self.start = start
        self.stop = self.total if stop is None else stop
        self.necklaces = necklaces
        self.keep = keep

    def __len__(self):
        return max(0, self.stop - self.start)

    def __iter__(self):
        if len(self) == 0:
            return
        t = _unrank(self.start, self.n_items, self.length)
        for _ in range(len(self)):
            if self.keep is None or self.keep(t):
                yield t
            t = _successor(t, self.n_items)

    def split(self, parts):
        parts = max(1, min(parts, len(self) or 1))
        size, extra = divmod(len(self), parts)
        cursors = []
        lo = self.start
        for p in range(parts):
            hi = lo + size + (1 if p < extra else 0)
            cursors.append(MultisetCursor(self.n_items, self.length, lo, hi, self.necklaces, self.keep))
            lo = hi
        return cursors


class ReflectionFilter(object):
    """Drop tuples whose reflected canonical multiset sorts strictly earlier."""

    def __init__(self, reflected):
        self.reflected = reflected

    def __call__(self, t):
        return tuple(sorted(self.reflected[i] for i in t)) >= t


def multiset_iterator(m, n_parties, budget=MULTISET_BUDGET, refine=False):
    """Cursor over the (N-1)-multisets of orbit representatives.

    :param m: inputs per party
    :param n_parties: N
    :param budget: largest accepted number of tuples
    :param refine: also prune with the reflection symmetry
    :return: a MultisetCursor of necklace index tuples
    """
    necklaces = enumerate_necklaces(m)
    length = n_parties - 1
    count = multiset_count(len(necklaces), length)
    if count > budget:
        raise BudgetExceededError("orbit enumeration for N={} m={}".format(n_parties, m), count, budget)
    keep = ReflectionFilter(reflection_map(necklaces)) if refine else None
    return MultisetCursor(len(necklaces), length, necklaces=necklaces, keep=keep)


if __name__ == "__main__":
    import argparse
    parser = argparse.ArgumentParser(description='List signed binary necklaces.')
    parser.add_argument('-m', type=int, required=True, help="Number of inputs per party.")
    args = parser.parse_args()
    for n in enumerate_necklaces(args.m):
        print(n.rep)
    print("u_{} = {}".format(args.m, necklace_count(args.m)))
