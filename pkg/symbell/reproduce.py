"""Regenerate the published tables and diff them against the embedded values.

Each table lives in symbell/data/table_<name>.txt as whitespace separated
columns, the last one being the expected value. Cells whose recomputation
would cost more than ``max_cost`` units are reported as skipped.
"""
import logging
import os
from dataclasses import dataclass

from symbell.errors import VerificationError
from symbell.fwsolver import FWConfig, visibility_search
from symbell.localbound import BoundOptions
from symbell.lucas4 import lij, local_bound_m4, visibility_m4
from symbell.necklaces import multiset_count, necklace_count
from symbell.symcorr import ScenarioParams
from symbell.sympoly import enumerate_sym_vertices

logger = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')
TABLES = ('I', 'II', 'III', 'V', 'Lij')
DEFAULT_MAX_COST = 10 ** 5
FLOAT_TOLERANCE = 5e-6

OK = 'ok'
MISMATCH = 'MISMATCH'
SKIPPED = 'skipped'


def _number(token):
    return float(token) if '.' in token else int(token)


def table_path(name):
    if name not in TABLES:
        raise ValueError("unknown table {}, expected one of {}".format(name, TABLES))
    return os.path.join(DATA_DIR, 'table_{}.txt'.format(name))


def load_table(name):
    """Rows of a data table as tuples of ints and floats, comments dropped."""
    rows = []
    with open(table_path(name), 'r') as f:
        for line in f:
            line = line.split('#', 1)[0].strip()
            if line:
                rows.append(tuple(_number(t) for t in line.split()))
    return rows


@dataclass(frozen=True)
class ReportRow(object):
    key: str
    expected: object
    computed: object
    status: str

    def format(self):
        computed = '-' if self.computed is None else self.computed
        if isinstance(computed, float):
            computed = '{:.5f}'.format(computed)
        return '{:<16} {:>14} {:>14}  {}'.format(self.key, str(self.expected), str(computed), self.status)


@dataclass(frozen=True)
class TableReport(object):
    name: str
    rows: tuple

    @property
    def mismatches(self):
        return tuple(r for r in self.rows if r.status == MISMATCH)

    @property
    def passed(self):
        return not self.mismatches

    def count(self, status):
        return sum(1 for r in self.rows if r.status == status)

    def format(self):
        lines = ['# table {}'.format(self.name),
                 '{:<16} {:>14} {:>14}  {}'.format('cell', 'expected', 'computed', 'status')]
        lines.extend(r.format() for r in self.rows)
        lines.append('# {} ok, {} mismatched, {} skipped'.format(
            self.count(OK), self.count(MISMATCH), self.count(SKIPPED)))
        return '\n'.join(lines) + '\n'

    def check(self):
        """Raise VerificationError naming every mismatched cell."""
        if self.mismatches:
            raise VerificationError("table {}: {} mismatched ({})".format(
                self.name, len(self.mismatches), ', '.join(r.key for r in self.mismatches)))
        return self


def _compare(key, expected, computed):
    if isinstance(expected, float):
        ok = abs(computed - expected) <= FLOAT_TOLERANCE + 1e-12
    else:
        ok = computed == expected
    if not ok:
        logger.warning("%s: expected %s, computed %s", key, expected, computed)
    return ReportRow(key, expected, computed, OK if ok else MISMATCH)


def _orbit_tuples(n, m):
    return multiset_count(necklace_count(m), n - 1)


def _table_I(rows, max_cost, config, options):
    return [_compare('m={}'.format(m), u, necklace_count(m)) for m, u in rows]


def _table_II(rows, max_cost, config, options):
    report = []
    for n, m, count in rows:
        key = 'N={} m={}'.format(n, m)
        if _orbit_tuples(n, m) * 2 ** m > max_cost:
            report.append(ReportRow(key, count, None, SKIPPED))
            continue
        vset = enumerate_sym_vertices(ScenarioParams(n, m), n_jobs=options.n_jobs)
        report.append(_compare(key, count, len(vset)))
    return report


def _table_III(rows, max_cost, config, options):
    return [_compare('N={}'.format(n), L, local_bound_m4(n)) for n, L in rows]


def _table_Lij(rows, max_cost, config, options):
    return [_compare('i={} j={}'.format(i, j), L, lij(i, j)) for i, j, L in rows]


def _table_V(rows, max_cost, config, options):
    report = []
    for n, m, v in rows:
        key = 'N={} m={}'.format(n, m)
        if m == 4:
            report.append(_compare(key, v, visibility_m4(n).value))
            continue
        if _orbit_tuples(n, m) > max_cost:
            report.append(ReportRow(key, v, None, SKIPPED))
            continue
        cert, _ = visibility_search(ScenarioParams(n, m), config, options)
        report.append(_compare(key, v, cert.visibility))
    return report


_BUILDERS = {'I': _table_I, 'II': _table_II, 'III': _table_III, 'V': _table_V, 'Lij': _table_Lij}


def reproduce_table(name, max_cost=DEFAULT_MAX_COST, config=FWConfig(), options=BoundOptions()):
    """Recompute every affordable cell of a table.

    :param name: one of TABLES
    :param max_cost: largest number of orbit tuples (or projections for table II) per cell
    :param config: FWConfig for table V
    :param options: BoundOptions, n_jobs is also used for the vertex enumeration
    :return: TableReport in data file order
    """
    rows = load_table(name)
    logger.info("reproducing table %s: %d cells, max cost %d", name, len(rows), max_cost)
    return TableReport(name, tuple(_BUILDERS[name](rows, max_cost, config, options)))


if __name__ == "__main__":
    import argparse
    parser = argparse.ArgumentParser(description='Recompute a published table.')
    parser.add_argument('table', choices=TABLES, help="Table to recompute.")
    parser.add_argument('--max-cost', type=int, default=DEFAULT_MAX_COST, help="Per-cell cost cap.")
    args = parser.parse_args()
    print(reproduce_table(args.table, args.max_cost).format(), end='')
