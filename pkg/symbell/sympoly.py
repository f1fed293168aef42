"""Vertices, extreme points and facets of the symmetrised local polytope.

Meant for small scenarios: every deterministic strategy is projected onto the
reduced coordinates (orbits of the first N-1 parties, all strategies of the
last one), and the hull is worked out with exact certificates.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy
from joblib import Parallel, delayed
from scipy.optimize import linprog

from symbell.errors import BudgetExceededError, SingularSystemError, VerificationError
from symbell.fwsolver import extract_facet
from symbell.necklaces import enumerate_necklaces, multiset_count, multiset_iterator
from symbell.symcorr import (ReducedVector, Strategy, class_weights, residue_counts, unit_profiles,
                             weighted_dot)

logger = logging.getLogger(__name__)

VERTEX_BUDGET = 10 ** 7
EXTREME_CAP = 5000
EXTREME_MAX_DIM = 5
FACET_CAP = 500
FACET_MAX_DIM = 4

_LP_EPS = 1e-9


@dataclass(frozen=True)
class SymVertexSet(object):
    """Distinct projections of deterministic strategies, sorted, with one witness each."""

    params: object
    vertices: tuple
    witnesses: tuple

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def is_negation_closed(self):
        keys = {v.entries for v in self.vertices}
        return all(tuple(-e for e in k) in keys for k in keys)


@dataclass(frozen=True)
class FacetEnumeration(object):
    """Facets as (integer normal, exact bound) pairs."""

    params: object
    facets: tuple

    def __len__(self):
        return len(self.facets)

    def __iter__(self):
        return iter(self.facets)

    @property
    def cross_polytope(self):
        """True when the facet count is 2^D, as for a cross-polytope."""
        return len(self.facets) == 2 ** self.params.dim


def _last_party_signs(m):
    return np.array(list(itertools.product((-1, 1), repeat=m)), dtype=np.int64)


def _project_range(cursor, params, reps):
    """First witness of every class-sum key reachable from one range of prefixes."""
    m = params.n_inputs
    size = 2 * m
    E = unit_profiles(params)
    lasts = _last_party_signs(m)
    found = {}
    for prefix in cursor:
        strategies = [reps[i] for i in prefix]
        counts = np.array(residue_counts(strategies, m), dtype=np.int64)
        # P[x, j]: class j sum contributed by the last party answering at input x
        shifted = np.array([np.roll(counts, x) for x in range(m)])
        P = shifted @ E.T
        sums = lasts @ P
        keys, first = np.unique(sums, axis=0, return_index=True)
        for key, i in zip(map(tuple, keys.tolist()), first):
            if key not in found:
                found[key] = tuple(strategies) + (Strategy(tuple(int(s) for s in lasts[i])),)
    return found


def enumerate_sym_vertices(params, budget=VERTEX_BUDGET, n_jobs=1):
    """All distinct symmetrised vertices of a scenario.

    :param params: ScenarioParams
    :param budget: largest accepted number of projected strategies
    :param n_jobs: joblib workers over contiguous prefix ranges
    :return: SymVertexSet sorted by entries
    """
    m, n = params.n_inputs, params.n_parties
    necklaces = enumerate_necklaces(m)
    cost = multiset_count(len(necklaces), n - 1) * 2 ** m
    if cost > budget:
        raise BudgetExceededError("vertex enumeration for {}".format(params), cost, budget)
    reps = [k.rep for k in necklaces]
    cursor = multiset_iterator(m, n, budget=budget)
    chunks = cursor.split(max(1, n_jobs) * 4) if n_jobs != 1 else [cursor]
    parts = Parallel(n_jobs=n_jobs)(delayed(_project_range)(c, params, reps) for c in chunks)
    merged = {}
    for part in parts:
        for key, witness in part.items():
            merged.setdefault(key, witness)
    weights = class_weights(params)
    vertices = {}
    for key, witness in merged.items():
        v = ReducedVector(params, tuple(Fraction(s, w) for s, w in zip(key, weights)))
        vertices[v.entries] = (v, witness)
    ordered = [vertices[k] for k in sorted(vertices)]
    logger.info("%s: %d symmetrised vertices from %d projections", params, len(ordered), cost)
    return SymVertexSet(params, tuple(v for v, _ in ordered), tuple(w for _, w in ordered))


def _rational(e):
    e = Fraction(e)
    return sympy.Rational(e.numerator, e.denominator)


def _separating_functional(point, others):
    """Integer functional strictly maximised at point over the others, or None."""
    D = len(point)
    if not len(others):
        return tuple([0] * D)
    # maximise <c, p> - t with <c, q> <= t, |c| <= 1
    cost = np.concatenate([-point, [1.0]])
    A_ub = np.hstack([others, -np.ones((len(others), 1))])
    lp = linprog(cost, A_ub=A_ub, b_ub=np.zeros(len(others)),
                 bounds=[(-1, 1)] * D + [(None, None)], method='highs')
    if lp.status != 0 or -lp.fun <= _LP_EPS:
        return None
    return tuple(int(c) for c in np.rint(lp.x[:D] * 10 ** 6))


def _convex_combination(point, others):
    """Support indices of a convex combination of the others equal to point, or None."""
    k = len(others)
    if not k:
        return None
    A_eq = np.vstack([others.T, np.ones((1, k))])
    b_eq = np.concatenate([point, [1.0]])
    lp = linprog(np.zeros(k), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * k, method='highs')
    if lp.status != 0:
        return None
    return [i for i in range(k) if lp.x[i] > 1e-12]


def _verify_combination(point, support):
    """Exact nonnegative weights over support summing to one and reproducing point."""
    A = sympy.Matrix([[_rational(q[j]) for q in support] for j in range(len(point))]
                     + [[1] * len(support)])
    b = sympy.Matrix([_rational(e) for e in point] + [1])
    try:
        solution, free = A.gauss_jordan_solve(b)
    except ValueError:
        return False
    if free.shape[0]:
        solution = solution.subs({s: 0 for s in free})
    return all(x >= 0 for x in solution) and A * solution == b


def extreme_points(vset, cap=EXTREME_CAP, max_dim=EXTREME_MAX_DIM):
    """Extreme points of the hull of a vertex set, each backed by an exact certificate.

    Kept points have a separating integer functional checked in exact
    arithmetic; dropped points have an exact convex combination of the rest.
    """
    params = vset.params
    if len(vset) > cap or params.dim > max_dim:
        raise BudgetExceededError(
            "extreme points of {} vertices in dimension {}".format(len(vset), params.dim), len(vset), cap)
    points = np.array([v.as_array() for v in vset.vertices], dtype=float).reshape(len(vset), params.dim)
    kept = []
    for i, v in enumerate(vset.vertices):
        mask = np.arange(len(points)) != i
        others = points[mask]
        exact_others = [u for j, u in enumerate(vset.vertices) if j != i]
        c = _separating_functional(points[i], others)
        if c is not None:
            top = sum(a * e for a, e in zip(c, v))
            if all(sum(a * e for a, e in zip(c, u)) < top for u in exact_others):
                kept.append(i)
                continue
        support = _convex_combination(points[i], others)
        if support is not None and _verify_combination(v, [exact_others[j] for j in support]):
            continue
        raise VerificationError("could not certify whether {} is extreme".format(v))
    logger.debug("%s: %d of %d points are extreme", params, len(kept), len(vset))
    return SymVertexSet(params, tuple(vset.vertices[i] for i in kept), tuple(vset.witnesses[i] for i in kept))


def _valid_bound(f, vertices):
    """Exact bound of f if every vertex satisfies it with D independent ties, else None."""
    values = [weighted_dot(f, v) for v in vertices]
    top = max(values)
    tight = [v for v, x in zip(vertices, values) if x == top]
    rank = sympy.Matrix([[_rational(e) for e in v] for v in tight]).rank()
    return top if rank == f.params.dim else None


def enumerate_facets(vset, cap=FACET_CAP, max_dim=FACET_MAX_DIM):
    """All facets of the symmetrised polytope by supporting-hyperplane search.

    :param vset: SymVertexSet (extreme points are taken first)
    :return: FacetEnumeration with gcd-reduced normals and exact bounds
    """
    params = vset.params
    if params.dim > max_dim:
        raise BudgetExceededError("facet enumeration in dimension {}".format(params.dim), params.dim, max_dim)
    extreme = extreme_points(vset)
    if len(extreme) > cap:
        raise BudgetExceededError("facet enumeration over {} extreme points".format(len(extreme)),
                                  len(extreme), cap)
    W = np.array(class_weights(params), dtype=float)
    points = np.array([v.as_array() for v in extreme.vertices]).reshape(len(extreme), params.dim) * W
    found = {}
    for subset in itertools.combinations(range(len(extreme)), params.dim):
        try:
            normal = np.linalg.solve(points[list(subset)], np.ones(params.dim))
        except np.linalg.LinAlgError:
            continue
        values = points @ normal
        if values.max() > 1 + _LP_EPS and values.min() < 1 - _LP_EPS:
            continue
        try:
            f = extract_facet([extreme.vertices[i] for i in subset])
        except SingularSystemError:
            continue
        for g in (f, -f):
            if g.entries in found:
                continue
            bound = _valid_bound(g, extreme.vertices)
            if bound is not None:
                found[g.entries] = (g, int(bound) if bound.denominator == 1 else bound)
    facets = tuple(found[k] for k in sorted(found))
    logger.info("%s: %d facets (cross-polytope count %d)", params, len(facets), 2 ** params.dim)
    return FacetEnumeration(params, facets)


if __name__ == "__main__":
    import argparse
    from symbell.symcorr import ScenarioParams
    parser = argparse.ArgumentParser(description='Enumerate the symmetrised local polytope.')
    parser.add_argument('-N', type=int, required=True, help="Number of parties.")
    parser.add_argument('-m', type=int, required=True, help="Number of inputs per party.")
    args = parser.parse_args()
    vset = enumerate_sym_vertices(ScenarioParams(args.N, args.m))
    print("{} vertices".format(len(vset)))
    for f, L in enumerate_facets(vset):
        print("{} <= {}".format(f, L))
