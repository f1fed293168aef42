import pytest

from symbell.derived import (V_LOW, activation_check, critical_efficiency, efficiency_gap, mermin_visibility,
                             xy_lower_bound)


def test_critical_efficiency_four_inputs():
    """Tests the efficiency threshold of the four-party, four-input inequality"""
    result = critical_efficiency(0.35355, 4)
    assert result.eta_crit == pytest.approx(0.7706, abs=5e-4)
    assert abs(result.residual) <= 1e-12


def test_critical_efficiency_nineteen_inputs():
    """Tests the efficiency threshold reached with nineteen inputs"""
    assert critical_efficiency(0.32500, 4).eta_crit == pytest.approx(0.7544, abs=5e-4)


def test_efficiency_root_is_nontrivial():
    """Tests that the root found is away from zero and solves the equation"""
    for n in range(2, 21):
        for v in (0.05, 0.3, 0.6, 0.9):
            result = critical_efficiency(v, n)
            assert 0 < result.eta_crit <= 1
            assert abs(efficiency_gap(result.eta_crit, v, n)) <= 1e-12
            assert efficiency_gap(result.eta_crit / 2, v, n) < 0


def test_efficiency_monotone_in_visibility():
    """Tests that a lower visibility tolerates a lower efficiency"""
    for n in (3, 4, 6):
        etas = [critical_efficiency(v, n).eta_crit for v in (0.1, 0.2, 0.4, 0.8)]
        assert etas == sorted(etas)


def test_efficiency_near_one():
    """Tests that visibilities close to one need perfect detectors"""
    assert critical_efficiency(1 - 1e-9, 3).eta_crit > 0.999


def test_efficiency_rejects_bad_visibility():
    """Tests that visibilities outside (0, 1) are rejected"""
    with pytest.raises(ValueError):
        critical_efficiency(1.0, 4)
    with pytest.raises(ValueError):
        critical_efficiency(0.0, 4)
    with pytest.raises(ValueError):
        critical_efficiency(0.5, 1)


def test_xy_lower_bound():
    """Tests the XY-plane bounds of the summary table"""
    assert xy_lower_bound(0.49132, 224, 3) == pytest.approx(0.49129, abs=5e-5)
    assert xy_lower_bound(0.32384, 128, 4) == pytest.approx(0.32374, abs=5e-5)
    bounds = [xy_lower_bound(0.3, m, 4) for m in (4, 8, 16, 32, 10 ** 6)]
    assert bounds == sorted(bounds)
    assert bounds[-1] == pytest.approx(0.3)
    with pytest.raises(ValueError):
        xy_lower_bound(0.3, 0, 4)


def test_activation():
    """Tests the star-network activation criterion"""
    assert activation_check(0.02301, 10, V_LOW).activated
    assert activation_check(0.02332, 10, V_LOW).activated
    report = activation_check(0.03521, 9)
    assert not report.activated
    assert report.threshold == pytest.approx(0.6875 ** 9)
    assert report.margin < 0
    assert activation_check(0.02301, 10).asymptotic_check
    with pytest.raises(ValueError):
        activation_check(1.2, 10)


def test_mermin_visibility():
    """Tests the Mermin comparison row"""
    assert mermin_visibility(3) == pytest.approx(0.5)
    assert mermin_visibility(5) == pytest.approx(0.25)
