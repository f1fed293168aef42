"""Reduced representation of symmetric correlation tensors.

Under the symmetries of the GHZ tensor with polygon measurements, an
N-partite correlation tensor on [0, m)^N is determined by ceil(m/2) numbers:
the value f_j at index-sum class j, every other entry being +/- f_j.
Inputs are 0-based, so the (0, ..., 0) entry belongs to class 0.

All kernels work on the Z_{2m} lift of the reduced vector, the antiperiodic
profile F with F[s + m] = -F[s]; an entry of the expanded tensor is
F[(x_1 + ... + x_N) mod 2m].
"""
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from symbell.errors import BudgetExceededError, SymbellError

logger = logging.getLogger(__name__)

#: returned by class_of_index for the identically zero class (m even, r = m/2)
ZERO = (None, 0)

EXPAND_CAP = 10 ** 7


@dataclass(frozen=True)
class ScenarioParams(object):
    """Number of parties N and inputs per party m."""

    n_parties: int
    n_inputs: int

    def __post_init__(self):
        if int(self.n_parties) != self.n_parties or self.n_parties < 2:
            raise ValueError("need at least 2 parties, got {}".format(self.n_parties))
        if int(self.n_inputs) != self.n_inputs or self.n_inputs < 2:
            raise ValueError("need at least 2 inputs per party, got {}".format(self.n_inputs))

    @property
    def dim(self):
        """Dimension ceil(m/2) of the invariant subspace."""
        return (self.n_inputs + 1) // 2

    def __str__(self):
        return "N={} m={}".format(self.n_parties, self.n_inputs)


@dataclass(frozen=True)
class Strategy(object):
    """Deterministic answers (+1 or -1) of one party to its m inputs.

    Words encode position 0 in the most significant bit, with -1 -> 0 and
    +1 -> 1, so integer order on words is lexicographic order with -1 < +1.
    """

    signs: tuple

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if any(s not in (1, -1) for s in signs):
            raise ValueError("strategy entries must be +1 or -1, got {}".format(self.signs))
        object.__setattr__(self, 'signs', signs)

    @property
    def m(self):
        return len(self.signs)

    @property
    def word(self):
        w = 0
        for s in self.signs:
            w = (w << 1) | (s > 0)
        return w

    @classmethod
    def from_word(cls, word, m):
        return cls(tuple(1 if (word >> (m - 1 - x)) & 1 else -1 for x in range(m)))

    @classmethod
    def constant(cls, m, sign=-1):
        return cls((sign,) * m)

    def shift(self, k=1):
        """Apply k signed cyclic steps: entries moved past the end re-enter negated."""
        m = self.m
        k %= 2 * m
        signs = list(self.signs)
        for _ in range(k):
            signs = [-signs[-1]] + signs[:-1]
        return Strategy(tuple(signs))

    def negate(self):
        return Strategy(tuple(-s for s in self.signs))

    def reflect(self):
        """Input x -> -x on Z_2m: keep entry 0, entry m - x becomes -s_x."""
        m = self.m
        return Strategy((self.signs[0],) + tuple(-self.signs[m - x] for x in range(1, m)))

    def __str__(self):
        return ' '.join('+' if s > 0 else '-' for s in self.signs)


@dataclass(frozen=True)
class ReducedVector(object):
    """A point or functional of the invariant subspace, entry j for class j.

    Exact vectors hold Fractions, floating vectors hold floats.
    """

    params: ScenarioParams
    entries: tuple

    def __post_init__(self):
        entries = tuple(self.entries)
        if len(entries) != self.params.dim:
            raise ValueError("reduced vector for {} needs {} entries, got {}".format(
                self.params, self.params.dim, len(entries)))
        if all(isinstance(e, (int, Fraction, np.integer)) for e in entries):
            entries = tuple(Fraction(int(e)) if not isinstance(e, Fraction) else e for e in entries)
        else:
            entries = tuple(float(e) for e in entries)
        object.__setattr__(self, 'entries', entries)

    @property
    def exact(self):
        return all(isinstance(e, Fraction) for e in self.entries)

    @property
    def is_integral(self):
        return self.exact and all(e.denominator == 1 for e in self.entries)

    def integers(self):
        """Entries as Python ints, for integral exact vectors only."""
        if not self.is_integral:
            raise ValueError("vector {} is not integral".format(self))
        return tuple(e.numerator for e in self.entries)

    def as_array(self):
        return np.array([float(e) for e in self.entries])

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, j):
        return self.entries[j]

    def __neg__(self):
        return ReducedVector(self.params, tuple(-e for e in self.entries))

    def __str__(self):
        return '[' + ', '.join(str(e) for e in self.entries) + ']'


@dataclass(frozen=True)
class AntiperiodicProfile(object):
    """Values F[0..2m) with F[s + m] = -F[s]."""

    values: tuple

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) % 2:
            raise ValueError("profile length must be even, got {}".format(len(values)))
        m = len(values) // 2
        for s in range(m):
            if values[s + m] != -values[s]:
                raise ValueError("profile is not antiperiodic at {}: {} vs {}".format(
                    s, values[s], values[s + m]))
        object.__setattr__(self, 'values', values)

    @property
    def m(self):
        return len(self.values) // 2

    def as_array(self, dtype=np.int64):
        return np.array(self.values, dtype=dtype)

    def to_reduced(self, params):
        if params.n_inputs != self.m:
            raise ValueError("profile has m={}, params have m={}".format(self.m, params.n_inputs))
        return ReducedVector(params, self.values[:params.dim])


def class_of_sum(s, m):
    """Class and sign of the index sum s (any integer; only s mod 2m matters)."""
    q, r = divmod(s, m)
    if 2 * r < m:
        return r, (-1) ** (q % 2)
    if 2 * r > m:
        return m - r, (-1) ** ((q + 1) % 2)
    return ZERO


def class_of_index(indices, params):
    """Class and sign of a tensor position.

    :param indices: N integers in [0, m)
    :param params: the scenario
    :return: (class, sign) or ZERO
    """
    m = params.n_inputs
    if len(indices) != params.n_parties:
        raise ValueError("expected {} indices, got {}".format(params.n_parties, len(indices)))
    for x in indices:
        if not 0 <= x < m:
            raise ValueError("index {} out of range [0, {})".format(x, m))
    return class_of_sum(sum(indices), m)


def class_weight(params, j):
    """Number of positions of [0, m)^N in class j, any sign."""
    if not 0 <= j < params.dim:
        raise ValueError("class {} out of range [0, {})".format(j, params.dim))
    base = params.n_inputs ** (params.n_parties - 1)
    return base if j == 0 else 2 * base


def class_weights(params):
    return tuple(class_weight(params, j) for j in range(params.dim))


def validate_class_weights(max_parties=3, max_inputs=6):
    """Check the closed-form class sizes against a brute-force count.

    Raises SymbellError on disagreement.
    """
    for n in range(2, max_parties + 1):
        for m in range(2, max_inputs + 1):
            params = ScenarioParams(n, m)
            counts = [0] * params.dim
            zeros = 0
            for idx in itertools.product(range(m), repeat=n):
                j, _ = class_of_index(idx, params)
                if j is None:
                    zeros += 1
                else:
                    counts[j] += 1
            if tuple(counts) != class_weights(params):
                raise SymbellError("class weights for {} are {}, brute force gives {}".format(
                    params, class_weights(params), counts))
            if sum(counts) + zeros != m ** n:
                raise SymbellError("classes of {} do not partition the tensor".format(params))
    logger.debug("class weights validated up to N=%d, m=%d", max_parties, max_inputs)


def ghz_reduced(params):
    """Floating reduced GHZ tensor, entry j = cos(pi j / m)."""
    m = params.n_inputs
    return ReducedVector(params, tuple(math.cos(math.pi * j / m) for j in range(params.dim)))


def antiperiodic_profile(f):
    """Lift a reduced vector to its Z_2m profile."""
    m = f.params.n_inputs
    zero = Fraction(0) if f.exact else 0.0
    head = []
    for s in range(m):
        if 2 * s < m:
            head.append(f[s])
        elif 2 * s > m:
            head.append(-f[m - s])
        else:
            head.append(zero)
    return AntiperiodicProfile(tuple(head) + tuple(-v for v in head))


def unit_profiles(params):
    """Integer profiles E_j of the unit vectors e_j, as a (D, 2m) array."""
    m = params.n_inputs
    rows = np.zeros((params.dim, 2 * m), dtype=np.int64)
    for t in range(2 * m):
        j, sign = class_of_sum(t, m)
        if j is not None:
            rows[j, t] = sign
    return rows


def residue_counts(strategies, m):
    """Signed counts over Z_2m of the product of the parties' answers.

    counts[t] sums prod_n a^(n)_{x_n} over all index tuples whose sum is
    t mod 2m.
    """
    counts = [1] + [0] * (2 * m - 1)
    for strategy in strategies:
        if strategy.m != m:
            raise ValueError("strategy {} does not have {} inputs".format(strategy, m))
        new = [0] * (2 * m)
        for x, sign in enumerate(strategy.signs):
            for t, c in enumerate(counts):
                if c:
                    new[(t + x) % (2 * m)] += sign * c
        counts = new
    return counts


def class_sums(counts, params):
    """Unnormalised reduced coordinates sum_t counts[t] E_j[t]."""
    m = params.n_inputs
    sums = [0] * params.dim
    for t, c in enumerate(counts):
        if c:
            j, sign = class_of_sum(t, m)
            if j is not None:
                sums[j] += sign * c
    return sums


def project_strategy(strategies, params):
    """Symmetrised vertex of the deterministic strategy given by N party strategies."""
    if len(strategies) != params.n_parties:
        raise ValueError("expected {} strategies, got {}".format(params.n_parties, len(strategies)))
    sums = class_sums(residue_counts(strategies, params.n_inputs), params)
    return ReducedVector(params, tuple(Fraction(s, class_weight(params, j)) for j, s in enumerate(sums)))


def weighted_dot(f, v):
    """Full-tensor inner product of the symmetric expansions of f and v."""
    if f.params != v.params:
        raise ValueError("cannot pair vectors of {} and {}".format(f.params, v.params))
    return sum(w * a * b for w, a, b in zip(class_weights(f.params), f, v))


def _index_sum_grid(params, cap):
    size = params.n_inputs ** params.n_parties
    if size > cap:
        raise BudgetExceededError("full tensor of {}".format(params), size, cap)
    grids = np.indices((params.n_inputs,) * params.n_parties)
    return grids.sum(axis=0) % (2 * params.n_inputs)


def expand_full(f, cap=EXPAND_CAP):
    """Materialise the m^N symmetric tensor of f. Test oracle only."""
    sums = _index_sum_grid(f.params, cap)
    profile = np.array(antiperiodic_profile(f).values, dtype=object if f.exact else float)
    return profile[sums]


def project_full(tensor, params, cap=EXPAND_CAP):
    """Reynolds projection of a full tensor onto the reduced coordinates."""
    sums = _index_sum_grid(params, cap)
    tensor = np.asarray(tensor)
    exact = tensor.dtype == object
    profiles = unit_profiles(params)
    entries = []
    for j in range(params.dim):
        signs = profiles[j][sums]
        total = sum((tensor * signs).flat) if exact else float((tensor * signs).sum())
        entries.append(Fraction(total, class_weight(params, j)) if exact
                       else total / class_weight(params, j))
    return ReducedVector(params, tuple(entries))
