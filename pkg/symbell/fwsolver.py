"""Frank-Wolfe separation of the noisy GHZ point from the symmetrised local polytope.

fw_minimize projects a target v0 * r onto the polytope with a lazified
blended pairwise conditional-gradient method; visibility_search restarts it
with the visibility where the separating hyperplane crosses the ray, keeping
the active set, until the hyperplane is a certified facet.

Inner products use the class weights divided by m^(N-1), i.e. (1, 2, ..., 2).
"""
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
import sympy
from scipy.optimize import linprog

from symbell.errors import BudgetExceededError, CertificationError, SingularSystemError
from symbell.localbound import (EXACT, BoundOptions, ConvolutionState, exact_local_bound,
                                heuristic_local_bound, score_with_last_party)
from symbell.necklaces import multiset_count, necklace_count
from symbell.symcorr import (ReducedVector, Strategy, antiperiodic_profile, class_weights,
                             ghz_reduced, project_strategy, residue_counts, weighted_dot)

logger = logging.getLogger(__name__)

HEURISTIC = 'HEURISTIC'
AUTO = 'AUTO'
UNCERTIFIED = 'NONE'
LMO_MODES = (EXACT, HEURISTIC, AUTO)

_TOLERANCE_FLOOR = 1e-22
_INSIDE = 1e-30


@dataclass(frozen=True)
class FWConfig(object):
    gap_tolerance: float = 1e-10
    max_iterations: int = 10 ** 6
    lmo_mode: str = AUTO
    heuristic_restarts: int = 10
    seed: int = 0
    exact_lmo_party_threshold: int = 8
    #: AUTO uses the exact oracle up to this many orbit tuples
    auto_budget: int = 10 ** 6
    overshoot: float = 1e-6
    max_rounds: int = 100
    gradient_scale: int = 10 ** 12
    stall_iterations: int = 1000
    local_model_tolerance: float = 1e-12

    def __post_init__(self):
        mode = str(self.lmo_mode).upper()
        if mode not in LMO_MODES:
            raise ValueError("unknown LMO mode {}, expected one of {}".format(self.lmo_mode, LMO_MODES))
        object.__setattr__(self, 'lmo_mode', mode)
        for name in ('gap_tolerance', 'overshoot', 'local_model_tolerance'):
            if getattr(self, name) <= 0:
                raise ValueError("{} must be positive, got {}".format(name, getattr(self, name)))
        if self.max_iterations < 1 or self.max_rounds < 1:
            raise ValueError("iteration and round limits must be positive")


@dataclass(frozen=True)
class ActiveAtom(object):
    """Exact vertex with the strategy tuple it was projected from."""

    vertex: ReducedVector
    witness: tuple
    weight: float = 0.0

    @property
    def key(self):
        return self.vertex.entries


@dataclass(frozen=True)
class FWResult(object):
    iterate: ReducedVector
    atoms: tuple
    gap: float
    objective: float
    history: tuple
    lmo_calls: int
    iterations: int
    converged: bool


@dataclass(frozen=True)
class LocalModel(object):
    """Convex combination of vertices reproducing visibility * r."""

    visibility: float
    atoms: tuple
    residual: float

    @property
    def weights(self):
        return tuple(a.weight for a in self.atoms)


@dataclass(frozen=True)
class FacetCertificate(object):
    params: object
    coeffs: ReducedVector
    local_bound: object
    quantum_value: float
    quantum_symbolic: str
    visibility: float
    visibility_exact: str
    active_vertices: tuple = ()
    certified: str = EXACT
    is_facet: bool = False
    trivial_saturates: object = None
    rounds: int = 0
    lmo_calls: int = 0


def fw_weights(params):
    base = params.n_inputs ** (params.n_parties - 1)
    return np.array([w // base for w in class_weights(params)], dtype=float)


def resolve_lmo_mode(params, config):
    if config.lmo_mode != AUTO:
        return config.lmo_mode
    if params.n_parties >= config.exact_lmo_party_threshold:
        return EXACT
    count = multiset_count(necklace_count(params.n_inputs), params.n_parties - 1)
    return EXACT if count <= config.auto_budget else HEURISTIC


def _bound(f, mode, config, options):
    if mode == EXACT:
        return exact_local_bound(f, options)
    options = replace(options, restarts=config.heuristic_restarts)
    return heuristic_local_bound(f, seed=config.seed, options=options)


def lmo(gradient, config=FWConfig(), options=BoundOptions()):
    """Vertex minimising the weighted pairing with the gradient.

    The gradient is normalised to max-abs 1, scaled by config.gradient_scale
    and rounded; the witness of the local bound of its negation gives the vertex.
    """
    params = gradient.params
    g = np.asarray(gradient.as_array(), dtype=float)
    top = float(np.abs(g).max())
    ints = np.rint(-g / top * config.gradient_scale) if top > 0 else np.zeros_like(g)
    f = ReducedVector(params, tuple(int(v) for v in ints))
    witness = _bound(f, resolve_lmo_mode(params, config), config, options).witness
    return ActiveAtom(project_strategy(witness, params), witness, 1.0)


class ActiveSet(object):
    """Atoms of the current convex decomposition, deduplicated on exact vertices."""

    def __init__(self, dim, atoms=()):
        self.vertices = []
        self.witnesses = []
        self.index = {}
        self.matrix = np.empty((0, dim))
        self.weights = np.empty(0)
        for atom in atoms:
            idx = self.add(atom)
            self.weights[idx] += atom.weight
        if self.weights.sum() > 0:
            self.weights /= self.weights.sum()

    def __len__(self):
        return len(self.vertices)

    def add(self, atom):
        """Index of the atom's vertex, appended with weight 0 when new."""
        if atom.key in self.index:
            return self.index[atom.key]
        self.index[atom.key] = len(self.vertices)
        self.vertices.append(atom.vertex)
        self.witnesses.append(atom.witness)
        self.matrix = np.vstack([self.matrix, atom.vertex.as_array()[None, :]])
        self.weights = np.append(self.weights, 0.0)
        return len(self.vertices) - 1

    def prune(self):
        keep = np.flatnonzero(self.weights > 0)
        if len(keep) == len(self.vertices):
            return
        self.vertices = [self.vertices[i] for i in keep]
        self.witnesses = [self.witnesses[i] for i in keep]
        self.index = {v.entries: i for i, v in enumerate(self.vertices)}
        self.matrix = self.matrix[keep]
        self.weights = self.weights[keep] / self.weights[keep].sum()

    def point(self):
        return self.weights @ self.matrix

    def atoms(self):
        return tuple(ActiveAtom(v, w, float(lam))
                     for v, w, lam in zip(self.vertices, self.witnesses, self.weights))


def _line_search(wg, d, w, gamma_max):
    curvature = float(np.dot(w * d, d))
    if curvature <= 0:
        return 0.0
    return min(max(-float(np.dot(wg, d)) / curvature, 0.0), gamma_max)


def fw_minimize(target, config=FWConfig(), active=None, options=BoundOptions(), tolerance=None):
    """Minimise 0.5 * |x - target|^2 over the symmetrised local polytope.

    :param target: floating ReducedVector v0 * r
    :param config: FWConfig
    :param active: atoms to warm start from
    :param options: BoundOptions passed to the LMO
    :param tolerance: gap tolerance, config.gap_tolerance when None
    :return: FWResult
    """
    params = target.params
    w = fw_weights(params)
    t = target.as_array()
    tol = config.gap_tolerance if tolerance is None else tolerance
    atoms = ActiveSet(params.dim, tuple(active) if active else ())
    lmo_calls = 0
    if not len(atoms):
        atoms.add(lmo(ReducedVector(params, tuple(-t)), config, options))
        atoms.weights[0] = 1.0
        lmo_calls += 1

    def objective(x):
        d = x - t
        return 0.5 * float(np.dot(w * d, d))

    x = atoms.point()
    history = [objective(x)]
    phi = math.inf
    gap = math.inf
    converged = False
    stalled = 0
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        g = x - t
        wg = w * g
        scores = atoms.matrix @ wg
        support = np.flatnonzero(atoms.weights > 0)
        away = support[np.argmax(scores[support])]
        local = int(np.argmin(scores))
        local_gap = float(scores[away] - scores[local])
        if local_gap >= phi and local_gap > 0:
            # pairwise step inside the active set
            d = atoms.matrix[local] - atoms.matrix[away]
            gamma_max = float(atoms.weights[away])
            gamma = _line_search(wg, d, w, gamma_max)
            if gamma == gamma_max:
                atoms.weights[local] += gamma_max
                atoms.weights[away] = 0.0
            else:
                atoms.weights[local] += gamma
                atoms.weights[away] -= gamma
            atoms.prune()
        else:
            idx = atoms.add(lmo(ReducedVector(params, tuple(g)), config, options))
            lmo_calls += 1
            gap = float(np.dot(wg, x) - np.dot(wg, atoms.matrix[idx]))
            if gap <= tol:
                converged = True
                atoms.prune()
                break
            if phi == math.inf:
                phi = gap / 2
            if gap >= phi / 2:
                d = atoms.matrix[idx] - x
                gamma = _line_search(wg, d, w, 1.0)
                if gamma >= 1.0:
                    atoms.weights[:] = 0.0
                    atoms.weights[idx] = 1.0
                else:
                    atoms.weights *= 1.0 - gamma
                    atoms.weights[idx] += gamma
                atoms.prune()
            else:
                phi = min(gap, phi / 2)
        x = atoms.point()
        value = objective(x)
        stalled = stalled + 1 if value >= history[-1] else 0
        history.append(value)
        if stalled >= config.stall_iterations:
            logger.warning("Frank-Wolfe stalled at objective %.3e, gap %.3e", value, gap)
            break
    logger.debug("Frank-Wolfe: %d iterations, %d LMO calls, gap %.3e", iterations, lmo_calls, gap)
    return FWResult(ReducedVector(params, tuple(x)), atoms.atoms(), gap, history[-1], tuple(history),
                    lmo_calls, iterations, converged)


def _to_rational(e):
    e = Fraction(e)
    return sympy.Rational(e.numerator, e.denominator)


def _gcd_reduce(ints):
    common = 0
    for c in ints:
        common = math.gcd(common, c)
    return [c // common for c in ints] if common else list(ints)


def extract_facet(vertices):
    """Integer functional whose hyperplane passes through D exact vertices.

    :raises SingularSystemError: when the vertices are linearly dependent
    """
    if not vertices:
        raise SingularSystemError("no vertices to extract a facet from")
    params = vertices[0].params
    if len(vertices) != params.dim:
        raise SingularSystemError("need {} vertices, got {}".format(params.dim, len(vertices)))
    weights = class_weights(params)
    A = sympy.Matrix([[w * _to_rational(e) for w, e in zip(weights, v)] for v in vertices])
    if A.rank() < params.dim:
        raise SingularSystemError("vertices {} are linearly dependent".format([str(v) for v in vertices]))
    solution = A.LUsolve(sympy.ones(params.dim, 1))
    scale = math.lcm(*[int(sympy.fraction(s)[1]) for s in solution])
    f = ReducedVector(params, tuple(_gcd_reduce([int(s * scale) for s in solution])))
    if weighted_dot(f, ghz_reduced(params)) < 0:
        f = -f
    return f


def quantum_value(f):
    """Value of f on the GHZ tensor, as a float and a sympy expression."""
    params = f.params
    m = params.n_inputs
    expr = sum(w * _to_rational(c) * sympy.cos(sympy.pi * j / m)
               for j, (w, c) in enumerate(zip(class_weights(params), f)))
    return float(weighted_dot(f, ghz_reduced(params))), sympy.simplify(expr)


def _rank(vertices):
    if not vertices:
        return 0
    return sympy.Matrix([[_to_rational(e) for e in v] for v in vertices]).rank()


def trivial_strategy_score(f):
    """Bell value reached when the first N-1 parties all answer -1."""
    params = f.params
    m = params.n_inputs
    firsts = [Strategy.constant(m)] * (params.n_parties - 1)
    state = ConvolutionState(tuple(residue_counts(firsts, m)))
    return score_with_last_party(antiperiodic_profile(f), state)[0]


def _certificate(f, result, mode):
    L = result.bound
    L = int(L) if L.denominator == 1 else L
    Q, Q_expr = quantum_value(f)
    saturating = {}
    for witness in result.witnesses:
        v = project_strategy(witness, f.params)
        saturating.setdefault(v.entries, v)
    saturating = tuple(saturating.values())
    for v in saturating:
        value = weighted_dot(f, v)
        if value != L:
            raise CertificationError("{} reaches {} on {}, but its local bound is {}".format(f, value, v, L))
    if Q_expr != 0:
        v_expr = str(sympy.radsimp(_to_rational(L) / Q_expr))
        visibility = float(L) / Q
    else:
        v_expr, visibility = 'oo', math.inf
    if mode != EXACT:
        logger.warning("putative certificate for %s: bound %s is a heuristic lower bound", f, L)
    return FacetCertificate(f.params, f, L, Q, str(Q_expr), visibility, v_expr, saturating, mode,
                            _rank(saturating) == f.params.dim, trivial_strategy_score(f) == L)


def certify(f, options=BoundOptions(), mode=EXACT, config=FWConfig()):
    """Local bound, quantum value and visibility of an integer functional.

    :param f: integral ReducedVector
    :param options: BoundOptions for the bound computation
    :param mode: EXACT, or HEURISTIC for a putative certificate
    :return: FacetCertificate
    :raises CertificationError: when a witness of the bound does not reach it
    """
    if not f.is_integral:
        raise ValueError("certification needs integer coefficients, got {}".format(f))
    return _certificate(f, _bound(f, mode, config, options), mode)


def local_model_visibility(atoms, params):
    """Largest v with v * r in the convex hull of the atoms' vertices."""
    if not atoms:
        return 0.0
    r = ghz_reduced(params).as_array()
    V = np.array([a.vertex.as_array() for a in atoms], dtype=float)
    k = len(V)
    c = np.zeros(k + 1)
    c[-1] = -1.0
    A_eq = np.zeros((params.dim + 1, k + 1))
    A_eq[:params.dim, :k] = V.T
    A_eq[:params.dim, k] = -r
    A_eq[params.dim, :k] = 1.0
    b_eq = np.zeros(params.dim + 1)
    b_eq[-1] = 1.0
    lp = linprog(c, A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * k + [(0, 1)], method='highs')
    return float(lp.x[-1]) if lp.status == 0 else 0.0


def _decompose(vertices, visibility, params, tolerance):
    """Convex weights of visibility * r over D vertices, or None outside their hull."""
    V = np.array([v.as_array() for v in vertices], dtype=float)
    r = ghz_reduced(params).as_array()
    try:
        lam = np.linalg.solve(V.T, visibility * r)
    except np.linalg.LinAlgError:
        return None
    if lam.min() < -tolerance or abs(lam.sum() - 1) > 1e-9:
        return None
    lam = np.clip(lam, 0.0, None)
    return lam / lam.sum()


def _independent_by_slack(candidates, wg, x, dim):
    """The D linearly independent vertices closest to the separating hyperplane, greedily."""
    level = float(np.dot(wg, x))
    ranked = sorted(candidates, key=lambda a: (float(np.dot(wg, a.vertex.as_array())) - level, a.key))
    chosen = []
    for atom in ranked:
        if _rank([c.vertex for c in chosen] + [atom.vertex]) == len(chosen) + 1:
            chosen.append(atom)
            if len(chosen) == dim:
                break
    return chosen


def _facet_mode(params, config, options):
    """Certification is exact whenever the budget allows."""
    if config.lmo_mode == EXACT:
        return EXACT
    count = multiset_count(necklace_count(params.n_inputs), params.n_parties - 1)
    return EXACT if count <= options.budget else HEURISTIC


def visibility_search(params, config=FWConfig(), options=BoundOptions()):
    """Visibility of the GHZ point together with the facet that cuts it off.

    A candidate facet is accepted once its bound is verified and the point
    v * r it predicts decomposes over its saturating vertices.

    :return: (FacetCertificate, LocalModel)
    """
    r = ghz_reduced(params)
    r_arr = r.as_array()
    w = fw_weights(params)
    mode = _facet_mode(params, config, options)
    v = 1.0
    active = None
    seen = {}
    lmo_calls = 0
    last = None
    for rounds in range(1, config.max_rounds + 1):
        target = ReducedVector(params, tuple(v * r_arr))
        start = ActiveSet(params.dim, tuple(active) if active else ())
        tolerance = config.gap_tolerance
        if len(start):
            d = start.point() - target.as_array()
            tolerance = max(tolerance * min(1.0, float(np.dot(w * d, d))), _TOLERANCE_FLOOR)
        result = fw_minimize(target, config, active, options, tolerance=tolerance)
        lmo_calls += result.lmo_calls
        active = result.atoms
        for atom in active:
            seen.setdefault(atom.key, atom)
        x = result.iterate.as_array()
        wg = w * (x - target.as_array())
        inside = result.objective <= _INSIDE or float(np.dot(wg, r_arr)) >= 0
        if inside:
            logger.info("round %d: v=%.10f is inside the polytope", rounds, v)
            # fall back on the previous hyperplane, or the one normal to r
            wg, x = last if last is not None else (-w * r_arr, x)
        else:
            last = (wg, x)
        v_sep = float(np.dot(wg, x)) / float(np.dot(wg, r_arr))
        logger.info("round %d: v=%.10f, separating v=%.10f, %d atoms, %d LMO calls",
                    rounds, v, v_sep, len(active), result.lmo_calls)

        chosen = _independent_by_slack(list(seen.values()), wg, x, params.dim)
        if len(chosen) == params.dim:
            f = extract_facet([a.vertex for a in chosen])
            value = weighted_dot(f, chosen[0].vertex)
            bound = _bound(f, mode, config, options)
            if mode == EXACT and bound.bound < value:
                raise CertificationError("vertices of {} reach {} above its exact bound {}".format(
                    f, value, bound.bound))
            if bound.bound <= value:
                visibility = float(value) / weighted_dot(f, r)
                lam = _decompose([a.vertex for a in chosen], visibility, params, config.local_model_tolerance)
                if lam is not None:
                    cert = replace(_certificate(f, bound, mode),
                                   active_vertices=tuple(a.vertex for a in chosen),
                                   rounds=rounds, lmo_calls=lmo_calls)
                    atoms = tuple(replace(a, weight=float(l)) for a, l in zip(chosen, lam))
                    V = np.array([a.vertex.as_array() for a in chosen])
                    residual = float(np.linalg.norm(lam @ V - visibility * r_arr))
                    logger.info("facet %s certified (%s): L=%s, v=%s", f, mode, cert.local_bound,
                                cert.visibility_exact)
                    return cert, LocalModel(visibility, atoms, residual)
            else:
                for witness in bound.witnesses:
                    atom = ActiveAtom(project_strategy(witness, params), witness)
                    seen.setdefault(atom.key, atom)
                logger.debug("candidate %s is not valid: bound %s > %s", f, bound.bound, value)
        v_next = min(v_sep * (1 + config.overshoot), v)
        if inside and v_next >= v:
            break
        v = v_next

    logger.warning("no certified facet for %s", params)
    return _uncertified(params, last, active, mode, config, options, lmo_calls)


def _uncertified(params, last, active, mode, config, options, lmo_calls):
    if last is None:
        raise SingularSystemError("no separating direction found for {}".format(params))
    g = last[0] / fw_weights(params)
    normal = np.rint(-g / float(np.abs(g).max()) * 10 ** 6)
    f = ReducedVector(params, tuple(_gcd_reduce([int(c) for c in normal])))
    try:
        cert = certify(f, options, mode, config)
    except BudgetExceededError:
        cert = certify(f, options, HEURISTIC, config)
    cert = replace(cert, certified=UNCERTIFIED, is_facet=False, lmo_calls=lmo_calls, rounds=config.max_rounds)
    atoms = tuple(active or ())
    return cert, LocalModel(local_model_visibility(atoms, params), atoms, math.nan)


if __name__ == "__main__":
    import argparse
    from symbell.symcorr import ScenarioParams
    parser = argparse.ArgumentParser(description='Find the GHZ visibility facet.')
    parser.add_argument('-N', type=int, required=True, help="Number of parties.")
    parser.add_argument('-m', type=int, required=True, help="Number of inputs per party.")
    args = parser.parse_args()
    cert, model = visibility_search(ScenarioParams(args.N, args.m))
    print("coeffs = {}".format(cert.coeffs))
    print("L = {}, Q = {}, v = {} ({})".format(cert.local_bound, cert.quantum_symbolic, cert.visibility,
                                                cert.visibility_exact))
