from dataclasses import replace

import pytest

from symbell.config import Settings, config_hash, load_settings
from symbell.fwsolver import EXACT


@pytest.fixture
def config_file(tmp_path):
    """Return the path of a small configuration file"""
    path = tmp_path / 'symbell.cfg'
    path.write_text('[fw]\nlmo_mode = exact\ngap_tolerance = 1e-12\nmax_rounds = 20\n\n'
                    '[localbound]\nn_jobs = 4\nrefine = yes\n\n'
                    '[cache]\nenabled = true\n')
    return str(path)


def test_defaults_without_file(tmp_path, monkeypatch):
    """Tests that the defaults apply when no file exists"""
    monkeypatch.chdir(tmp_path)
    assert load_settings() == Settings()


def test_sections_override_fields(config_file):
    """Tests that every section updates its dataclass"""
    settings = load_settings(config_file)
    assert settings.fw.lmo_mode == EXACT
    assert settings.fw.gap_tolerance == 1e-12
    assert settings.fw.max_rounds == 20
    assert settings.bound.n_jobs == 4
    assert settings.bound.refine is True
    assert settings.cache.enabled is True


def test_missing_explicit_file(tmp_path):
    """Tests that a named but absent file is an error"""
    with pytest.raises(FileNotFoundError):
        load_settings(str(tmp_path / 'absent.cfg'))


def test_unknown_option(tmp_path):
    """Tests that typos in option names are reported"""
    path = tmp_path / 'bad.cfg'
    path.write_text('[fw]\ngap_tolerence = 1e-8\n')
    with pytest.raises(ValueError):
        load_settings(str(path))


def test_unknown_section(tmp_path):
    """Tests that unknown sections are reported"""
    path = tmp_path / 'bad.cfg'
    path.write_text('[solver]\nx = 1\n')
    with pytest.raises(ValueError):
        load_settings(str(path))


def test_bad_boolean(tmp_path):
    """Tests that booleans must be spelled as booleans"""
    path = tmp_path / 'bad.cfg'
    path.write_text('[localbound]\nrefine = maybe\n')
    with pytest.raises(ValueError):
        load_settings(str(path))


def test_hash_ignores_parallelism(config_file):
    """Tests that thread counts do not change the configuration hash"""
    settings = load_settings(config_file)
    threaded = replace(settings, bound=replace(settings.bound, n_jobs=8, progress=True))
    assert config_hash(threaded) == config_hash(settings)
    assert config_hash(settings) != config_hash(Settings())
