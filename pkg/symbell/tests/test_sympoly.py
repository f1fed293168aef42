from fractions import Fraction

import pytest

from symbell.errors import BudgetExceededError
from symbell.localbound import BoundOptions, exact_local_bound
from symbell.symcorr import ScenarioParams, project_strategy, weighted_dot
from symbell.sympoly import enumerate_facets, enumerate_sym_vertices, extreme_points

VERTEX_COUNTS = {
    (3, 2): 2, (3, 3): 10, (3, 4): 10, (3, 5): 60, (3, 6): 100, (3, 7): 640,
    (4, 2): 3, (4, 3): 12, (4, 4): 21, (4, 5): 90,
    (5, 3): 14, (5, 4): 14, (5, 5): 126,
    (6, 3): 16,
}


@pytest.fixture
def worked_vertices(worked_example):
    """Return the symmetrised vertices of the worked example"""
    return enumerate_sym_vertices(worked_example)


@pytest.mark.parametrize('n,m', sorted(VERTEX_COUNTS))
def test_vertex_counts(n, m):
    """Tests the number of symmetrised vertices against the published counts"""
    assert len(enumerate_sym_vertices(ScenarioParams(n, m))) == VERTEX_COUNTS[n, m]


def test_vertices_are_sorted_and_witnessed(worked_vertices):
    """Tests that every vertex is the projection of its witness"""
    keys = [v.entries for v in worked_vertices]
    assert keys == sorted(keys)
    for v, witness in zip(worked_vertices.vertices, worked_vertices.witnesses):
        assert project_strategy(witness, v.params) == v


def test_negation_closed(worked_vertices):
    """Tests that flipping every answer of one party negates the vertex set"""
    assert worked_vertices.is_negation_closed()
    assert enumerate_sym_vertices(ScenarioParams(4, 5)).is_negation_closed()


def test_parallel_enumeration_matches():
    """Tests that workers find the same vertex set"""
    params = ScenarioParams(3, 6)
    assert enumerate_sym_vertices(params, n_jobs=2) == enumerate_sym_vertices(params)


def test_vertex_budget():
    """Tests that a large enumeration is refused"""
    with pytest.raises(BudgetExceededError):
        enumerate_sym_vertices(ScenarioParams(6, 12), budget=1000)


def test_extreme_points(worked_vertices):
    """Tests the four corners of the worked example"""
    extreme = extreme_points(worked_vertices)
    corners = {(1, Fraction(1, 3)), (1, -1), (-1, 1), (-1, Fraction(-1, 3))}
    assert {v.entries for v in extreme} == corners


def test_facets_worked_example(worked_vertices):
    """Tests that the facets are exactly +-[1, 0] and +-[2, 3]"""
    facets = enumerate_facets(worked_vertices)
    found = {(f.integers(), L) for f, L in facets}
    assert found == {((1, 0), 3), ((-1, 0), 3), ((2, 3), 12), ((-2, -3), 12)}
    assert facets.cross_polytope


def test_facet_bounds_are_local_bounds():
    """Tests every enumerated facet bound against the orbit enumeration"""
    facets = enumerate_facets(enumerate_sym_vertices(ScenarioParams(3, 4)))
    assert len(facets) > 0
    for f, L in facets:
        assert exact_local_bound(f, BoundOptions(n_jobs=1)).bound == L


def test_facets_saturated_by_vertices(worked_vertices):
    """Tests that each facet is tight on two vertices and valid on the rest"""
    for f, L in enumerate_facets(worked_vertices):
        values = [weighted_dot(f, v) for v in worked_vertices]
        assert max(values) == L
        assert values.count(L) >= 2


def test_facet_dimension_cap():
    """Tests that facet enumeration refuses high dimensions"""
    with pytest.raises(BudgetExceededError):
        enumerate_facets(enumerate_sym_vertices(ScenarioParams(2, 9)))
