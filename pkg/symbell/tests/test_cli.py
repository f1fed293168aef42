import json
import os
import subprocess
import sys

import pytest

import symbell
from symbell.cli import EXIT_BUDGET, EXIT_ERROR, EXIT_MISMATCH, EXIT_OK, main
from symbell.inequality_file import InequalityFile


@pytest.fixture
def ineq_path(tmp_path):
    """Return the path of a freshly computed worked-example inequality"""
    path = str(tmp_path / 'worked.ineq')
    assert main(['visibility', '-N', '2', '-m', '3', '--threads', '1', '-o', path]) == EXIT_OK
    return path


def test_visibility_writes_file(capsys, ineq_path):
    """Tests that the visibility command writes and prints the facet"""
    ineq = InequalityFile.read(ineq_path)
    assert ineq.coeffs == (2, 3)
    assert ineq.local_bound == 12
    assert ineq.visibility == pytest.approx(0.8)
    assert ineq.certified == 'EXACT'
    assert 'coeffs=2 3' in capsys.readouterr().out


def test_visibility_json(capsys):
    """Tests the JSON output of the visibility command"""
    assert main(['visibility', '-N', '2', '-m', '3', '--threads', '1', '--json']) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc['coeffs'] == [2, 3]
    assert doc['visibility_exact'] == '4/5'


def test_visibility_cache(tmp_path, monkeypatch, capsys):
    """Tests that a cached run prints the same record"""
    monkeypatch.setenv('SYMBELL_CACHE_DIR', str(tmp_path / 'cache'))
    argv = ['visibility', '-N', '2', '-m', '3', '--threads', '1', '--cache']
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out == first


def test_local_bound_verifies(ineq_path, capsys):
    """Tests that the recorded bound is recomputed and cross-checked"""
    assert main(['local-bound', '-i', ineq_path, '--brute-force', '--threads', '1']) == EXIT_OK
    assert 'L = 12' in capsys.readouterr().out


def test_local_bound_mismatch(ineq_path, tmp_path):
    """Tests that a wrong recorded bound exits with the mismatch code"""
    with open(ineq_path) as f:
        text = f.read().replace('L=12', 'L=11')
    bad = tmp_path / 'bad.ineq'
    bad.write_text(text)
    assert main(['local-bound', '-i', str(bad), '--threads', '1']) == EXIT_MISMATCH


def test_budget_exit_code():
    """Tests that an enumeration over budget exits with the budget code"""
    assert main(['vertices', '-N', '10', '-m', '12', '--threads', '1']) == EXIT_BUDGET


def test_bad_input_exit_code():
    """Tests that invalid values exit with the error code"""
    assert main(['efficiency', '-v', '1.5', '-N', '4']) == EXIT_ERROR


def test_necklaces(capsys):
    """Tests the orbit listing"""
    assert main(['necklaces', '-m', '5']) == EXIT_OK
    out = capsys.readouterr().out
    assert 'u_5 = 4' in out
    assert len(out.strip().splitlines()) == 5


def test_m4_parties(capsys):
    """Tests the closed-form local bound for 17 parties"""
    assert main(['m4', '--parties', '17']) == EXIT_OK
    assert 'L = 5705728' in capsys.readouterr().out


def test_m4_table(capsys):
    """Tests the L_ij grid"""
    assert main(['m4', '--table', '3', '--json']) == EXIT_OK
    assert json.loads(capsys.readouterr().out)['L'][1] == [4, 4, 8]


def test_facets(capsys):
    """Tests the facet listing of the worked example"""
    assert main(['facets', '-N', '2', '-m', '3', '--threads', '1', '--json']) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert {tuple(f['coeffs']) for f in doc['facets']} == {(1, 0), (-1, 0), (2, 3), (-2, -3)}
    assert doc['cross_polytope']


def test_vertices(capsys):
    """Tests the vertex count of three parties with three inputs"""
    assert main(['vertices', '-N', '3', '-m', '3', '--threads', '1', '--json']) == EXIT_OK
    assert json.loads(capsys.readouterr().out)['count'] == 10


def test_derived_commands(capsys):
    """Tests the efficiency, XY-plane and activation commands"""
    assert main(['efficiency', '-v', '0.35355', '-N', '4', '--json']) == EXIT_OK
    assert json.loads(capsys.readouterr().out)['eta_crit'] == pytest.approx(0.7706, abs=5e-4)
    assert main(['xy-bound', '-v', '0.49132', '-m', '224', '-N', '3', '--json']) == EXIT_OK
    assert json.loads(capsys.readouterr().out)['v_xy'] == pytest.approx(0.49129, abs=5e-5)
    assert main(['activation', '-v', '0.02301', '-N', '10', '--json']) == EXIT_OK
    assert json.loads(capsys.readouterr().out)['activated'] is True


def test_xy_bound_from_file(ineq_path, capsys):
    """Tests that the XY-plane bound can take its inputs from an inequality file"""
    capsys.readouterr()
    assert main(['xy-bound', '-i', ineq_path]) == EXIT_OK
    assert 'v_XY' in capsys.readouterr().out
    assert main(['xy-bound', '-v', '0.5']) == EXIT_ERROR


def test_reproduce(capsys):
    """Tests that the orbit count table is reproduced"""
    assert main(['reproduce', '--table', 'I']) == EXIT_OK
    assert '20 ok, 0 mismatched' in capsys.readouterr().out


def test_plot(tmp_path):
    """Tests that the polytope picture is written"""
    path = tmp_path / 'polytope.png'
    assert main(['plot', 'polytope', '-o', str(path)]) == EXIT_OK
    assert path.exists()


def test_import_leaves_matplotlib_alone():
    """Tests that importing the command line module does not load the plotting backend"""
    root = os.path.dirname(os.path.dirname(os.path.abspath(symbell.__file__)))
    code = "import sys, symbell.cli; print('symbell.plotting' in sys.modules)"
    out = subprocess.run([sys.executable, '-c', code], cwd=root, capture_output=True, text=True,
                         check=True).stdout
    assert out.strip() == 'False'
