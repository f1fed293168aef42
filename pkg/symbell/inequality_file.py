"""Line-oriented ``key=value`` files describing a certified inequality.

Lines starting with '#' are comments. Floats are written with 17
significant digits so that reading a file back gives the same doubles.
"""
import json
import logging
from dataclasses import asdict, dataclass
from fractions import Fraction

from symbell.symcorr import ReducedVector, ScenarioParams
from symbell.version import version as __version__

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

_FIELDS = ('format_version', 'N', 'm', 'coeffs', 'L', 'Q', 'Q_symbolic', 'v', 'v_exact',
           'certified', 'seed', 'config_hash', 'tool_version')


def _float(x):
    return '{:.17g}'.format(x)


def _bound(text):
    value = Fraction(text)
    return value.numerator if value.denominator == 1 else value


@dataclass(frozen=True)
class InequalityFile(object):
    n_parties: int
    n_inputs: int
    coeffs: tuple
    local_bound: object
    quantum_value: float
    quantum_symbolic: str
    visibility: float
    visibility_exact: str
    certified: str
    seed: int = 0
    config_hash: str = ''
    tool_version: str = __version__
    format_version: int = FORMAT_VERSION

    @classmethod
    def from_certificate(cls, cert, seed=0, config_hash=''):
        params = cert.params
        return cls(params.n_parties, params.n_inputs, cert.coeffs.integers(), cert.local_bound,
                   cert.quantum_value, cert.quantum_symbolic, cert.visibility, cert.visibility_exact,
                   cert.certified, seed, config_hash)

    @property
    def params(self):
        return ScenarioParams(self.n_parties, self.n_inputs)

    def functional(self):
        return ReducedVector(self.params, self.coeffs)

    def as_dict(self):
        """Key/value pairs in file order, as strings."""
        return {
            'format_version': str(self.format_version),
            'N': str(self.n_parties),
            'm': str(self.n_inputs),
            'coeffs': ' '.join(str(c) for c in self.coeffs),
            'L': str(self.local_bound),
            'Q': _float(self.quantum_value),
            'Q_symbolic': self.quantum_symbolic,
            'v': _float(self.visibility),
            'v_exact': self.visibility_exact,
            'certified': self.certified,
            'seed': str(self.seed),
            'config_hash': self.config_hash,
            'tool_version': self.tool_version,
        }

    def dumps(self):
        lines = ['# symmetric Bell inequality, reduced coordinates by index-sum class']
        lines.extend('{}={}'.format(k, v) for k, v in self.as_dict().items())
        return '\n'.join(lines) + '\n'

    def to_json(self):
        doc = asdict(self)
        doc['coeffs'] = list(self.coeffs)
        doc['local_bound'] = str(self.local_bound)
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def loads(cls, text):
        values = {}
        for number, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            if '=' not in line:
                raise ValueError("line {} is not key=value: {}".format(number, line))
            key, value = line.split('=', 1)
            values[key.strip()] = value.strip()
        missing = [k for k in _FIELDS if k not in values]
        if missing:
            raise ValueError("inequality file lacks {}".format(', '.join(missing)))
        version = int(values['format_version'])
        if version > FORMAT_VERSION:
            raise ValueError("format version {} is newer than {}".format(version, FORMAT_VERSION))
        return cls(int(values['N']), int(values['m']), tuple(int(c) for c in values['coeffs'].split()),
                   _bound(values['L']), float(values['Q']), values['Q_symbolic'], float(values['v']),
                   values['v_exact'], values['certified'], int(values['seed']), values['config_hash'],
                   values['tool_version'], version)

    def write(self, path):
        with open(path, 'w') as f:
            f.write(self.dumps())
        logger.debug("wrote %s", path)
        return path

    @classmethod
    def read(cls, path):
        with open(path, 'r') as f:
            return cls.loads(f.read())
