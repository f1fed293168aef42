import math

import pytest

from symbell.localbound import BoundOptions, exact_local_bound
from symbell.lucas4 import (Mat4, RootTwoScalar, antidiagonal_check, closed_form_m4, det_check, lij,
                            lij_even, lij_spectral, local_bound_m4, orbit_matrices, shift_matrix,
                            visibility_m4)
from symbell.reproduce import load_table
from symbell.symcorr import ReducedVector, ScenarioParams

M4_VISIBILITIES = {3: 0.5, 4: 0.35355, 5: 0.21875, 6: 0.15468, 7: 0.09375, 8: 0.06629, 9: 0.04004,
                   10: 0.02831}


def test_shift_matrix_order():
    """Tests that the signed 4-cycle satisfies A^4 = -I"""
    A = shift_matrix()
    assert A ** 4 == -Mat4.identity()
    assert A ** 8 == Mat4.identity()


def test_orbit_matrices():
    """Tests R and S against their printed entries"""
    R, S = orbit_matrices()
    assert R.rows == ((1, -1, -1, -1), (1, 1, -1, -1), (1, 1, 1, -1), (1, 1, 1, 1))
    assert S.rows == ((1, -1, 1, -1), (1, 1, -1, 1), (-1, 1, 1, -1), (1, -1, 1, 1))
    assert R.det() == 8


def test_local_bounds_match_table():
    """Tests the recursion against every published L_N"""
    for n, L in load_table('III'):
        assert local_bound_m4(n) == L
        assert closed_form_m4(n) == L
    assert local_bound_m4(17) == 5705728


def test_local_bounds_match_enumeration():
    """Tests the closed forms against the orbit enumeration for small N"""
    for n in (3, 4, 5, 6):
        f = ReducedVector(ScenarioParams(n, 4), (1, 0) if n % 2 else (0, 1))
        assert exact_local_bound(f, BoundOptions(n_jobs=1)).bound == local_bound_m4(n)


def test_odd_bound_is_lij():
    """Tests that odd N needs only the constant orbit"""
    for n in (3, 5, 7, 9, 11):
        assert local_bound_m4(n) == lij(n - 1, 0)


def test_even_bound_is_lij_even():
    """Tests the even family seeds"""
    assert lij_even(3, 0) == local_bound_m4(4) == 32
    assert lij_even(5, 0) == local_bound_m4(6) == 224


def test_lij_matches_table():
    """Tests every printed L_ij for i, j <= 10"""
    for i, j, L in load_table('Lij'):
        assert lij(i, j) == L


def test_lij_is_symmetric():
    """Tests that swapping the orbit counts keeps the norm"""
    for i in range(6):
        for j in range(6):
            assert lij(i, j) == lij(j, i)


def test_lij_spectral():
    """Tests the eigenvalue form against the matrix powers"""
    for i in range(7):
        for j in range(7):
            assert lij_spectral(i, j) == pytest.approx(lij(i, j), rel=1e-9)


def test_det_check():
    """Tests that det R equals the product of its eigenvalues"""
    det, product = det_check()
    assert det == 8
    assert product == pytest.approx(8.0)


def test_antidiagonal_check():
    """Tests both recursions and the edge maxima up to N = 20"""
    report = antidiagonal_check(20)
    assert report.passed
    assert report.table[2, 0] == 8


def test_visibilities():
    """Tests v = L / Q for m = 4 against the published column"""
    for n, v in M4_VISIBILITIES.items():
        assert visibility_m4(n).value == pytest.approx(v, abs=5e-6)
    vis = visibility_m4(4)
    assert vis.local_bound == 32
    assert vis.quantum_value == '64*sqrt(2)'
    assert vis.value == pytest.approx(1 / math.sqrt(8))


def test_small_n_rejected():
    """Tests that the closed forms need three parties"""
    with pytest.raises(ValueError):
        local_bound_m4(2)
    with pytest.raises(ValueError):
        lij(-1, 0)


def test_root_two_arithmetic():
    """Tests exact arithmetic in Z[sqrt 2, 1/2]"""
    a = RootTwoScalar(1, 1)
    assert a * a.conjugate() == RootTwoScalar(-1)
    assert RootTwoScalar(4, 2, 1) == RootTwoScalar(2, 1)
    assert RootTwoScalar(0, 1).div_sqrt2() == RootTwoScalar(1)
    assert float(RootTwoScalar(1).div_sqrt2()) == pytest.approx(1 / math.sqrt(2))
    assert int(RootTwoScalar(6, 0, 1)) == 3
    with pytest.raises(ArithmeticError):
        int(RootTwoScalar(1, 1))
