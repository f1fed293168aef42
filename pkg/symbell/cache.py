"""Content-addressed store of finished runs.

Entries are JSON documents named by the SHA-256 of (command, scenario,
config hash); writes go through a temporary file and an atomic rename.
"""
import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass

logger = logging.getLogger(__name__)

CACHE_ENV = 'SYMBELL_CACHE_DIR'


def default_cache_dir():
    return os.environ.get(CACHE_ENV, os.path.join(os.path.expanduser('~'), '.cache', 'symbell'))


@dataclass(frozen=True)
class CacheConfig(object):
    enabled: bool = False
    directory: str = ''

    @property
    def path(self):
        return self.directory or default_cache_dir()


def cache_key(command, params, config_hash):
    text = json.dumps([command, list(params), config_hash], sort_keys=True)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


class RunCache(object):

    def __init__(self, config=CacheConfig()):
        self.config = config
        self.data_dir = config.path

    @property
    def enabled(self):
        return self.config.enabled

    def _path(self, key):
        return os.path.join(self.data_dir, key[:2], key + '.json')

    def list_keys(self, prefix=''):
        """List the stored keys starting with prefix."""
        keys = []
        for dirpath, _, filenames in os.walk(self.data_dir):
            for filename in filenames:
                if filename.endswith('.json') and filename.startswith(prefix):
                    keys.append(filename[:-5])
        return sorted(keys)

    def load(self, key):
        """Stored document for key, or None on a miss."""
        if not self.enabled:
            return None
        path = self._path(key)
        try:
            with open(path, 'r') as f:
                data = json.load(f)
        except FileNotFoundError:
            return None
        except ValueError as err:
            logger.warning("ignoring unreadable cache entry %s: %s", path, err)
            return None
        logger.debug("cache hit %s", key)
        return data

    def store(self, key, data):
        """Write data under key, replacing any previous entry atomically."""
        if not self.enabled:
            return None
        path = self._path(key)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix='.tmp')
        try:
            with os.fdopen(fd, 'w') as f:
                json.dump(data, f, sort_keys=True, indent=1)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
        return path
