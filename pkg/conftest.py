import pytest

from symbell.cache import CacheConfig, RunCache
from symbell.symcorr import ReducedVector, ScenarioParams


@pytest.fixture
def worked_example():
    """Return the two-party, three-input scenario"""
    return ScenarioParams(2, 3)


@pytest.fixture
def facet_23(worked_example):
    """Return the facet [2, 3] of the two-party, three-input polytope"""
    return ReducedVector(worked_example, (2, 3))


@pytest.fixture
def run_cache(tmp_path):
    """Return an enabled run cache backed by a temporary directory"""
    return RunCache(CacheConfig(enabled=True, directory=str(tmp_path / 'cache')))
