"""Local (classical) bound of a symmetric Bell functional.

The bound is the largest Bell value reachable with deterministic strategies.
Because the functional is invariant under signed shifts of any party (the
compensating shift can be absorbed by another party), the first N-1 parties
range over a multiset of orbit representatives while the last party answers
with the sign of its conditional value. The conditional values come from a
convolution over Z_2m of the parties' strategies.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from symbell.errors import BudgetExceededError
from symbell.necklaces import (MULTISET_BUDGET, ReflectionFilter, enumerate_necklaces,
                               multiset_count, multiset_iterator, reflection_map)
from symbell.symcorr import (ReducedVector, Strategy, antiperiodic_profile, expand_full,
                             residue_counts)

logger = logging.getLogger(__name__)

EXACT = 'EXACT'
HEURISTIC_LOWER = 'HEURISTIC_LOWER'

_INT64_HEADROOM = 2 ** 62
# smaller enumerations always run serially
_PARALLEL_MIN = 10 ** 4
# representatives scored per matrix product
_BLOCK = 4096


@dataclass(frozen=True)
class BoundOptions(object):
    """Tuning of the bound searches; none of these change the result."""

    n_jobs: int = 1
    budget: int = MULTISET_BUDGET
    refine: bool = False
    max_witnesses: int = 64
    chunks_per_job: int = 4
    progress: bool = False
    restarts: int = 10
    max_sweeps: int = 1000


@dataclass(frozen=True)
class BoundResult(object):
    """bound is exact for mode EXACT and a lower bound otherwise.

    witnesses hold full N-party strategy tuples attaining the bound, the
    lexicographically smallest first.
    """

    bound: object
    witnesses: tuple
    mode: str
    evaluated: int = 0

    @property
    def witness(self):
        return self.witnesses[0]


@dataclass(frozen=True)
class ConvolutionState(object):
    """Signed counts of the partial product over Z_2m."""

    counts: tuple

    @classmethod
    def neutral(cls, m):
        return cls((1,) + (0,) * (2 * m - 1))

    @property
    def m(self):
        return len(self.counts) // 2


def convolve_party(state, strategy):
    """Fold one more party into the state: c'[t] = sum_x s_x c[t - x]."""
    if strategy.m != state.m:
        raise ValueError("strategy {} does not have {} inputs".format(strategy, state.m))
    return ConvolutionState(tuple(_convolve(state.counts, strategy.signs)))


def _convolve(counts, signs):
    size = len(counts)
    new = [0] * size
    for x, s in enumerate(signs):
        for t, c in enumerate(counts):
            if c:
                new[(t + x) % size] += s * c
    return new


def score_with_last_party(profile, state):
    """Best value over the last party's answers given the others' state.

    :param profile: AntiperiodicProfile (or sequence) F of length 2m
    :param state: ConvolutionState of the other N-1 parties
    :return: (score, optimal last-party Strategy), ties answered with +1
    """
    values = _last_values(profile, state)
    score = sum(abs(v) for v in values)
    return score, Strategy(tuple(1 if v >= 0 else -1 for v in values))


def _last_values(profile, state):
    F = profile.values if hasattr(profile, 'values') else tuple(profile)
    size = len(F)
    return [sum(c * F[(t + y) % size] for t, c in enumerate(state.counts) if c) for y in range(size // 2)]


def last_party_completions(profile, state, cap=64):
    """Every optimal last-party answer, at most cap of them.

    Inputs whose conditional value is 0 may be answered either way; the
    first completion answers them all with +1.
    """
    values = _last_values(profile, state)
    base = [1 if v >= 0 else -1 for v in values]
    free = [y for y, v in enumerate(values) if v == 0]
    completions = []
    for flips in itertools.islice(itertools.product((1, -1), repeat=len(free)), cap):
        signs = list(base)
        for y, s in zip(free, flips):
            signs[y] = s
        completions.append(Strategy(tuple(signs)))
    return completions


def bell_value(f, strategies):
    """Exact Bell value sum_x f_x prod_n a^(n)_{x_n} of a full strategy tuple."""
    m = f.params.n_inputs
    F = antiperiodic_profile(f).values
    return sum(c * F[t] for t, c in enumerate(residue_counts(strategies, m)) if c)


def _integer_profile(f):
    """Common-denominator scaling: (scale, integer profile values)."""
    if not f.exact:
        raise ValueError("local bounds need exact coefficients, got {}".format(f))
    scale = math.lcm(*(e.denominator for e in f))
    values = tuple(int(v * scale) for v in antiperiodic_profile(f).values)
    return scale, values


def _unscale(total, scale):
    return Fraction(int(total), scale)


def _pick_dtype(F, params):
    m, n = params.n_inputs, params.n_parties
    worst = max(abs(v) for v in F) * m ** n * 2
    return np.int64 if worst < _INT64_HEADROOM else object


class ContractionKernel(object):
    """Folding and last-party operators of one integer profile.

    States are folded with a gather over Z_2m followed by a product with the
    sign vector, so only the orbit representatives' signs are kept.
    """

    def __init__(self, F, params, necklaces):
        m = params.n_inputs
        self.m = m
        self.dtype = _pick_dtype(F, params)
        size = 2 * m
        rows = np.arange(m)[:, None]
        cols = np.arange(size)[None, :]
        # shifts[x, t] = t - x and Fmat[y, t] = F[t + y], both mod 2m
        self.shifts = (cols - rows) % size
        self.Fmat = np.array(F, dtype=self.dtype)[(cols + rows) % size]
        sign_dtype = np.int8 if self.dtype is np.int64 else object
        self.signs = np.array([n.rep.signs for n in necklaces], dtype=sign_dtype).reshape(len(necklaces), m)

    def __len__(self):
        return len(self.signs)

    def neutral(self):
        state = np.zeros(2 * self.m, dtype=self.dtype)
        state[0] = 1
        return state

    def fold(self, state, signs):
        """c'[t] = sum_x s_x c[t - x]"""
        return np.asarray(signs).astype(self.dtype) @ state[self.shifts]

    def last_operator(self, state):
        """m x m matrix taking a sign vector to the last-party values after folding it into state."""
        return state[self.shifts] @ self.Fmat.T

    def state_of(self, strategies):
        state = self.neutral()
        for s in strategies:
            state = self.fold(state, s.signs)
        return state


def _scan(cursor, kernel, reflected, cap, progress):
    """Best score and tied full-index tuples over one range of prefixes."""
    best = None
    ties = []
    evaluated = 0
    stack = [kernel.neutral()]
    previous = ()
    prefixes = tqdm(cursor, total=len(cursor), disable=not progress, desc='local bound')
    for prefix in prefixes:
        common = 0
        while common < len(previous) and previous[common] == prefix[common]:
            common += 1
        del stack[common + 1:]
        for k in prefix[common:]:
            stack.append(kernel.fold(stack[-1], kernel.signs[k]))
        previous = prefix
        operator = kernel.last_operator(stack[-1])
        lo = prefix[-1] if prefix else 0
        for start in range(lo, len(kernel), _BLOCK):
            values = kernel.signs[start:start + _BLOCK].astype(kernel.dtype) @ operator
            scores = np.abs(values).sum(axis=1)
            candidates = np.arange(start, start + len(scores))
            if reflected is not None:
                keep = np.array([reflected(prefix + (int(k),)) for k in candidates], dtype=bool)
                scores = scores[keep]
                candidates = candidates[keep]
                if not len(scores):
                    continue
            evaluated += len(scores)
            top = int(scores.max())
            if best is None or top > best:
                best = top
                ties = []
            if top == best and len(ties) < cap:
                hits = candidates[np.asarray(scores == top, dtype=bool)]
                ties.extend(prefix + (int(k),) for k in hits[:cap - len(ties)])
    return best, ties, evaluated


def exact_local_bound(f, options=BoundOptions()):
    """Exact local bound by orbit enumeration.

    :param f: exact ReducedVector; rationals are scaled to integers and back
    :param options: BoundOptions
    :return: BoundResult with mode EXACT
    :raises BudgetExceededError: when the orbit multiset count exceeds the budget
    """
    params = f.params
    n = params.n_parties
    scale, F = _integer_profile(f)
    necklaces = enumerate_necklaces(params.n_inputs)
    u = len(necklaces)
    total = multiset_count(u, n - 1)
    if total > options.budget:
        raise BudgetExceededError("exact local bound for {}".format(params), total, options.budget)
    kernel = ContractionKernel(F, params, necklaces)
    reflected = ReflectionFilter(reflection_map(necklaces)) if options.refine else None
    prefixes = multiset_iterator(params.n_inputs, n - 1, budget=options.budget)
    logger.debug("exact local bound for %s: %d orbit tuples, dtype %s",
                params, total, getattr(kernel.dtype, '__name__', kernel.dtype))

    if options.n_jobs == 1 or total < _PARALLEL_MIN:
        parts = [_scan(prefixes, kernel, reflected, options.max_witnesses, options.progress)]
    else:
        chunks = prefixes.split(max(1, options.n_jobs) * options.chunks_per_job)
        parts = Parallel(n_jobs=options.n_jobs)(
            delayed(_scan)(c, kernel, reflected, options.max_witnesses, False) for c in chunks)

    best = max(p[0] for p in parts if p[0] is not None)
    ties = []
    for score, found, _ in parts:
        if score == best:
            ties.extend(found)
    ties = ties[:options.max_witnesses]
    evaluated = sum(p[2] for p in parts)

    witnesses = []
    extra = []
    for t in ties:
        strategies = tuple(necklaces[i].rep for i in t)
        state = ConvolutionState(tuple(residue_counts(strategies, params.n_inputs)))
        score, _ = score_with_last_party(F, state)
        if score != best:
            raise ArithmeticError("witness {} rescored to {} instead of {}".format(t, score, best))
        first, *others = last_party_completions(F, state, max(1, options.max_witnesses))
        witnesses.append(strategies + (first,))
        extra.extend(strategies + (last,) for last in others)
    # answers to zero-valued inputs reach further vertices of the same face
    witnesses.extend(extra[:options.max_witnesses])
    logger.debug("exact bound %s (scaled by %d) with %d witnesses", best, scale, len(witnesses))
    return BoundResult(_unscale(best, scale), tuple(witnesses), EXACT, evaluated)


def _alternate(F, params, seed, trivial_start, max_sweeps):
    """Best-response sweeps from one starting point; returns (score, strategies)."""
    m, n = params.n_inputs, params.n_parties
    kernel = ContractionKernel(F, params, [])
    if trivial_start:
        parties = [np.full(m, -1, dtype=np.int64) for _ in range(n)]
    else:
        rng = np.random.default_rng(seed)
        parties = [rng.choice(np.array([-1, 1]), size=m) for _ in range(n)]

    def others(i):
        return kernel.state_of(Strategy(tuple(p)) for j, p in enumerate(parties) if j != i)

    for sweep in range(max_sweeps):
        changed = False
        for i in range(n):
            values = kernel.Fmat @ others(i)
            current = int(np.dot(parties[i], values))
            improved = int(np.abs(values).sum())
            if improved > current:
                parties[i] = np.where(values >= 0, 1, -1)
                changed = True
        if not changed:
            break
    strategies = [Strategy(tuple(int(s) for s in p)) for p in parties[:-1]]
    state = ConvolutionState(tuple(residue_counts(strategies, m)))
    score, last = score_with_last_party(F, state)
    return score, tuple(strategies) + (last,)


def heuristic_local_bound(f, seed=0, options=BoundOptions()):
    """Lower bound on the local bound from alternating best responses.

    Restart 0 starts from every party answering -1; the others start from
    random strategies seeded deterministically from ``seed``.
    """
    params = f.params
    scale, F = _integer_profile(f)
    children = np.random.SeedSequence(seed).spawn(max(1, options.restarts))
    runs = Parallel(n_jobs=options.n_jobs)(
        delayed(_alternate)(F, params, child, i == 0, options.max_sweeps)
        for i, child in enumerate(children))
    score, witness = runs[0]
    for s, w in runs[1:]:
        if s > score:
            score, witness = s, w
    logger.debug("heuristic bound %s after %d restarts", score, len(runs))
    return BoundResult(_unscale(score, scale), (witness,), HEURISTIC_LOWER, len(runs))


def brute_force_local_bound(f, params=None, cap=1 << 20):
    """Local bound by enumerating every strategy of N-1 parties. Test oracle.

    :param f: a ReducedVector, or a full m^N tensor together with params
    """
    if isinstance(f, ReducedVector):
        params = f.params
        tensor = expand_full(f)
    else:
        tensor = np.asarray(f, dtype=object)
    m, n = params.n_inputs, params.n_parties
    cost = 2 ** (m * (n - 1) - 1)
    if cost > cap:
        raise BudgetExceededError("brute-force local bound for {}".format(params), cost, cap)
    singles = [np.array(s, dtype=object) for s in itertools.product((-1, 1), repeat=m)]
    # flipping every party but the last is absorbed by the absolute value
    firsts = [s for s in singles if s[0] == -1]
    best = None
    for combo in itertools.product(singles, repeat=n - 2):
        for head in firsts:
            values = tensor
            for s in (head,) + combo:
                values = np.tensordot(s, values, axes=(0, 0))
            score = sum(abs(v) for v in values)
            if best is None or score > best:
                best = score
    return Fraction(best) if not isinstance(best, float) else best
