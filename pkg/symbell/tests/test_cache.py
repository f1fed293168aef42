import os

from symbell.cache import CACHE_ENV, CacheConfig, RunCache, cache_key, default_cache_dir


def test_key_is_stable():
    """Tests that keys depend on every component and nothing else"""
    key = cache_key('visibility', (2, 3), 'abc')
    assert key == cache_key('visibility', (2, 3), 'abc')
    assert key != cache_key('visibility', (2, 4), 'abc')
    assert key != cache_key('visibility', (2, 3), 'abd')
    assert key != cache_key('facets', (2, 3), 'abc')
    assert len(key) == 64


def test_store_and_load(run_cache):
    """Tests that a stored document is returned on the next lookup"""
    key = cache_key('visibility', (2, 3), 'abc')
    assert run_cache.load(key) is None
    path = run_cache.store(key, {'ineq': 'N=2\n'})
    assert os.path.exists(path)
    assert run_cache.load(key) == {'ineq': 'N=2\n'}
    assert run_cache.list_keys() == [key]
    assert run_cache.list_keys(prefix=key[:4]) == [key]


def test_store_replaces(run_cache):
    """Tests that storing twice keeps the last document and no temporaries"""
    key = cache_key('visibility', (3, 3), 'abc')
    run_cache.store(key, {'v': 1})
    path = run_cache.store(key, {'v': 2})
    assert run_cache.load(key) == {'v': 2}
    assert os.listdir(os.path.dirname(path)) == [key + '.json']


def test_disabled_cache(tmp_path):
    """Tests that a disabled cache neither stores nor loads"""
    cache = RunCache(CacheConfig(enabled=False, directory=str(tmp_path)))
    assert cache.store('ab' * 32, {'v': 1}) is None
    assert cache.load('ab' * 32) is None
    assert os.listdir(str(tmp_path)) == []


def test_unreadable_entry_is_a_miss(run_cache):
    """Tests that a corrupt entry is ignored"""
    key = cache_key('visibility', (2, 5), 'abc')
    path = run_cache.store(key, {'v': 1})
    with open(path, 'w') as f:
        f.write('{not json')
    assert run_cache.load(key) is None


def test_cache_dir_from_environment(monkeypatch, tmp_path):
    """Tests that the environment variable selects the directory"""
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    assert default_cache_dir() == str(tmp_path)
    assert CacheConfig().path == str(tmp_path)
