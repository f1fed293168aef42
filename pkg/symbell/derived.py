"""Quantities derived from a visibility: detection efficiency, XY-plane bound, network activation."""
import logging
import math
from dataclasses import dataclass

from scipy.optimize import brentq, minimize_scalar

logger = logging.getLogger(__name__)

V_LOW = 0.6875


@dataclass(frozen=True)
class EfficiencyResult(object):
    eta_crit: float
    residual: float


@dataclass(frozen=True)
class ActivationReport(object):
    v_m: float
    n_parties: int
    v_low: float
    threshold: float
    activated: bool
    margin: float
    asymptotic_check: bool


def efficiency_gap(eta, v, n_parties):
    """eta^N / v + (1 - eta)^N - 1; zero at the critical efficiency."""
    return eta ** n_parties / v + (1 - eta) ** n_parties - 1


def critical_efficiency(v, n_parties, xtol=1e-14):
    """Detector efficiency below which the inequality is no longer violated.

    Undetected rounds are answered with +1. The gap function is convex, zero
    at eta = 0, decreasing there and positive at eta = 1, so its other root
    lies between its minimiser and 1.
    """
    if not 0 < v < 1:
        raise ValueError("visibility must lie in (0, 1), got {}".format(v))
    if n_parties < 2:
        raise ValueError("need at least 2 parties, got {}".format(n_parties))
    low = minimize_scalar(efficiency_gap, bounds=(0.0, 1.0), args=(v, n_parties), method='bounded',
                          options={'xatol': 1e-12}).x
    if efficiency_gap(low, v, n_parties) >= 0:
        # no interior descent left to resolve, the root sits at the minimiser
        return EfficiencyResult(float(low), float(efficiency_gap(low, v, n_parties)))
    eta = brentq(efficiency_gap, low, 1.0, args=(v, n_parties), xtol=xtol, maxiter=500)
    return EfficiencyResult(eta, efficiency_gap(eta, v, n_parties))


def xy_lower_bound(v_m, m, n_parties):
    """Visibility bound for measurements anywhere in the XY plane: cos(pi / 2m)^N v_m."""
    if v_m <= 0 or m <= 0 or n_parties <= 0:
        raise ValueError("inputs must be positive, got v={} m={} N={}".format(v_m, m, n_parties))
    return math.cos(math.pi / (2 * m)) ** n_parties * v_m


def activation_check(v_m, n_parties, v_low=V_LOW):
    """Whether swapping N copies of a noisy singlet can activate nonlocality of the GHZ state.

    :param v_m: visibility of the N-partite inequality
    :param n_parties: N
    :param v_low: visibility below which the two-qubit state is known to be local
    :return: ActivationReport
    """
    if not 0 < v_m < 1 or not 0 < v_low < 1:
        raise ValueError("visibilities must lie in (0, 1), got {} and {}".format(v_m, v_low))
    threshold = v_low ** n_parties
    report = ActivationReport(v_m, n_parties, v_low, threshold, v_m < threshold, threshold - v_m,
                              2 / math.pi * 2 ** (1 / n_parties) < v_low)
    logger.debug("activation N=%d: v=%.5f vs %.5f", n_parties, v_m, threshold)
    return report


def mermin_visibility(n_parties):
    """Visibility 2^((1 - N) / 2) of the Mermin inequality, for comparison."""
    if n_parties < 2:
        raise ValueError("need at least 2 parties, got {}".format(n_parties))
    return 2 ** ((1 - n_parties) / 2)
