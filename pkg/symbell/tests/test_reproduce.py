import pytest

from symbell.errors import VerificationError
from symbell.reproduce import (MISMATCH, OK, SKIPPED, TABLES, ReportRow, TableReport, load_table,
                               reproduce_table, table_path)


def test_tables_are_installed():
    """Tests that every table has a data file with rows"""
    for name in TABLES:
        assert len(load_table(name)) > 0
    with pytest.raises(ValueError):
        table_path('IV')


def test_table_rows_are_numbers():
    """Tests the parsed column types of the visibility table"""
    n, m, v = load_table('V')[0]
    assert isinstance(n, int) and isinstance(m, int)
    assert isinstance(v, float)


def test_orbit_counts():
    """Tests that the orbit count table is reproduced in full"""
    report = reproduce_table('I')
    assert report.passed
    assert report.count(OK) == 20


def test_m4_tables():
    """Tests that the m = 4 tables are reproduced in full"""
    assert reproduce_table('III').passed
    assert reproduce_table('Lij').passed


def test_visibility_table_within_cost():
    """Tests that expensive cells are skipped and the closed-form column computed"""
    report = reproduce_table('V', max_cost=0)
    assert report.passed
    assert report.count(OK) == 8
    assert report.count(SKIPPED) == len(report.rows) - 8


def test_vertex_table_within_cost():
    """Tests the cheap vertex counts"""
    report = reproduce_table('II', max_cost=2000)
    assert report.count(OK) > 0
    ok = {r.key for r in report.rows if r.status == OK}
    assert 'N=3 m=5' in ok


def test_report_is_deterministic():
    """Tests that two runs give the same text"""
    assert reproduce_table('III').format() == reproduce_table('III').format()


def test_mismatch_raises():
    """Tests that a mismatched cell fails the check"""
    report = TableReport('I', (ReportRow('m=2', 1, 1, OK), ReportRow('m=3', 3, 2, MISMATCH)))
    assert not report.passed
    assert 'MISMATCH' in report.format()
    with pytest.raises(VerificationError):
        report.check()
