"""Run configuration read from INI files.

Sections [fw], [localbound] and [cache] override the dataclass defaults
field by field, e.g.

    [fw]
    lmo_mode = exact
    gap_tolerance = 1e-12

    [localbound]
    n_jobs = 8
"""
import hashlib
import json
import logging
import os
from configparser import ConfigParser
from dataclasses import asdict, dataclass, field, fields, replace

from symbell.cache import CacheConfig
from symbell.fwsolver import FWConfig
from symbell.localbound import BoundOptions

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = 'symbell.cfg'

# fields that only change how fast a result is reached
_UNHASHED = {'n_jobs', 'progress', 'chunks_per_job'}


@dataclass(frozen=True)
class Settings(object):
    fw: FWConfig = field(default_factory=FWConfig)
    bound: BoundOptions = field(default_factory=BoundOptions)
    cache: CacheConfig = field(default_factory=CacheConfig)


def _coerce(raw, default, name):
    if isinstance(default, bool):
        lowered = raw.strip().lower()
        if lowered in ('1', 'yes', 'true', 'on'):
            return True
        if lowered in ('0', 'no', 'false', 'off'):
            return False
        raise ValueError("{} expects a boolean, got {}".format(name, raw))
    if isinstance(default, int):
        return int(float(raw)) if 'e' in raw.lower() else int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw.strip()


def _override(obj, items, section):
    known = {f.name: getattr(obj, f.name) for f in fields(obj)}
    changes = {}
    for name, raw in items:
        if name not in known:
            raise ValueError("unknown option {} in section [{}]".format(name, section))
        changes[name] = _coerce(raw, known[name], name)
    return replace(obj, **changes) if changes else obj


def load_settings(path=None):
    """Settings from an INI file, defaults for everything it does not set.

    :param path: explicit file (must exist), or None to use symbell.cfg when present
    """
    settings = Settings()
    if path is None:
        if not os.path.exists(DEFAULT_CONFIG_FILE):
            return settings
        path = DEFAULT_CONFIG_FILE
    elif not os.path.exists(path):
        raise FileNotFoundError("config file {} not found".format(path))
    conf = ConfigParser()
    conf.read([path])
    logger.debug("reading configuration from %s", path)
    sections = {'fw': 'fw', 'localbound': 'bound', 'cache': 'cache'}
    for section in conf.sections():
        if section not in sections:
            raise ValueError("unknown section [{}] in {}".format(section, path))
        attr = sections[section]
        value = _override(getattr(settings, attr), conf.items(section), section)
        settings = replace(settings, **{attr: value})
    return settings


def config_hash(settings):
    """SHA-256 of the canonical JSON of the result-affecting settings."""
    doc = {
        'fw': asdict(settings.fw),
        'bound': {k: v for k, v in asdict(settings.bound).items() if k not in _UNHASHED},
    }
    text = json.dumps(doc, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(text.encode('utf-8')).hexdigest()
