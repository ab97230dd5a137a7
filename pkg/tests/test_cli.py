import json

import numpy as np
import pytest

from qorrelate.cli import run
from qorrelate.errors import DimensionMismatch, InputError
from qorrelate.io import (load_json, matrix_from_json, matrix_to_json,
                          measurement_from_json, measurement_to_json,
                          state_from_json, state_to_json, verdict_from_json)
from qorrelate.measurement import scm
from qorrelate.qstate import random_hs, werner


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_matrix_round_trip(rng):
    M = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    assert np.array_equal(matrix_from_json(json.loads(json.dumps(matrix_to_json(M)))), M)
    with pytest.raises(DimensionMismatch):
        matrix_from_json({'rows': 2, 'cols': 2, 're': [[1, 2]], 'im': [[0, 0]]})
    with pytest.raises(InputError):
        matrix_from_json({'rows': 1})


def test_measurement_and_state_round_trip(rng):
    X = scm(3, 0.7, 0.2)
    Y = measurement_from_json(json.dumps(measurement_to_json(X)))
    assert np.allclose(X.observables, Y.observables)
    rho = random_hs(4, rng)
    assert np.allclose(state_from_json(state_to_json(rho)), rho)
    assert measurement_from_json('om', 3).m == 9
    assert measurement_from_json({'preset': 'scm', 'd': 2, 'sic': True}).family['h'] == 0.5
    assert np.allclose(state_from_json('{"family":"werner","p":0.7}'), werner(0.7))
    assert state_from_json({'family': 'random_hs', 'd': 2, 'seed': 42}).shape == (4, 4)
    assert state_from_json({'family': 'random_hs', 'dim': 3, 'seed': 42}).shape == (3, 3)
    with pytest.raises(InputError):
        measurement_from_json({'preset': 'nope'})
    with pytest.raises(InputError):
        state_from_json({'family': 'werner'})
    with pytest.raises(InputError):
        load_json('{bad')


def test_check_entanglement_nf(capsys):
    code, out, _ = call(capsys, 'check-entanglement', '--state',
                        '{"family":"bell_diagonal","t":[-0.8,-0.8,-0.8]}', '--criterion', 'nf-C')
    v = json.loads(out)
    assert code == 0 and v['detected'] and v['lhs'] == pytest.approx(2.4)
    assert set(v) == {'criterion', 'lhs', 'bound', 'margin', 'detected', 'params'}
    assert verdict_from_json(out).detected


def test_invalid_bell_diagonal_exit_2(capsys):
    code, out, err = call(capsys, 'check-entanglement', '--state',
                          '{"family":"bell_diagonal","t":[0.8,0.8,0.8]}', '--criterion', 'nf-C')
    assert code == 2 and out == '' and len(err.strip().splitlines()) == 1


def test_check_steering_werner_om(capsys):
    code, out, _ = call(capsys, 'check-steering', '--state', '{"family":"werner","p":0.5}',
                        '--measurement-a', 'om', '--measurement-b', 'om')
    assert code == 0 and json.loads(out)['detected'] is False
    code, out, _ = call(capsys, 'check-steering', '--state', '{"family":"werner","p":0.65}')
    assert json.loads(out)['detected'] is True


def test_check_steering_xi_forms(capsys):
    state = '{"family":"bell_diagonal","t":[0.7,-0.6,0.5]}'
    code, out, _ = call(capsys, 'check-steering', '--state', state, '--criterion', 'gamma',
                        '--measurement-a', 'pauli', '--measurement-b', 'pauli', '--xi', '0.7,-0.6,0.5')
    assert code == 0 and json.loads(out)['detected']
    code, out, _ = call(capsys, 'check-steering', '--state', state, '--criterion', 'gamma',
                        '--measurement-a', 'pauli', '--measurement-b', 'pauli', '--xi', 'best')
    assert code == 0 and 'xi' in json.loads(out)['params']
    code, _, err = call(capsys, 'check-steering', '--state', state, '--criterion', 'gamma', '--xi', '-1')
    assert code == 2 and 'NonpositiveXi' in err


def test_uncertainty_bound_dichotomy(capsys):
    code, out, _ = call(capsys, 'uncertainty-bound', '--measurement', '{"preset":"dichotomy","theta":1.5707963}')
    assert code == 0 and json.loads(out)['S'] == pytest.approx(1.0, abs=1e-6)


def test_scm_and_reconstruct_round_trip(capsys, tmp_path):
    code, out, _ = call(capsys, 'scm', '--dim', '2', '--sic')
    data = json.loads(out)
    assert code == 0 and data['sic_check']['is_sic']
    mfile = tmp_path / 'm.json'
    mfile.write_text(out)
    code, out, _ = call(capsys, 'reconstruct', '--measurement', f'@{mfile}',
                        '--state', '{"family":"explicit","matrix":' + json.dumps(matrix_to_json(np.diag([0.25, 0.75]))) + '}')
    rec = json.loads(out)
    assert code == 0 and rec['is_psd']
    assert np.allclose(state_from_json(rec['state']), np.diag([0.25, 0.75]))
    code, out, _ = call(capsys, 'reconstruct', '--measurement', '{"preset":"scm","d":2,"alpha":1}',
                        '--expectations', '0,0,0,0')
    assert np.allclose(state_from_json(json.loads(out)['state']), np.eye(2) / 2)


def test_basis_and_witness(capsys):
    code, out, _ = call(capsys, 'basis', '--dim', '3', '--structure-constants')
    data = json.loads(out)
    assert code == 0 and len(data['generators']) == 8 and len(data['f']) == 8
    code, out, _ = call(capsys, 'witness', '--measurement-a', 'pauli', '--measurement-b', 'pauli',
                        '--state', '{"family":"werner","p":1}')
    assert json.loads(out)['expectation'] == pytest.approx(-2)
    code, out, _ = call(capsys, 'witness', '--measurement-a', 'pauli', '--measurement-b', 'pauli')
    assert matrix_from_json(json.loads(out)['witness']).shape == (4, 4)


def test_scan_outputs(capsys, tmp_path):
    out_file = tmp_path / 's.csv'
    svg = tmp_path / 's.svg'
    code, _, _ = call(capsys, '--seed', '3', 'scan', 'random-steering', '--n-states', '500',
                      '--xi-grid', '0.4:0.7:4', '--format', 'csv', '--output', str(out_file),
                      '--svg', str(svg))
    assert code == 0 and out_file.read_text().startswith('xi,fraction,stderr')
    assert svg.read_text().startswith('<svg')
    code, again, _ = call(capsys, 'scan', 'random-steering', '--n-states', '500', '--seed', '3',
                          '--xi-grid', '0.4:0.7:4', '--format', 'csv', '--threads', '1')
    assert again == out_file.read_text()
    code, out, _ = call(capsys, 'scan', 'isotropic', '--d-list', '2,3')
    assert json.loads(out)['rows'][1][1] == pytest.approx(0.5, abs=1e-6)
    code, out, _ = call(capsys, 'scan', 'werner', '--delta-grid', '1.5707963267948966', '--format', 'table')
    assert 'om_threshold' in out


def test_numerical_failure_exit_3(capsys):
    code, _, err = call(capsys, '--eps-conv', '1e-300', 'check-entanglement', '--state',
                        '{"family":"random_hs","d":2,"seed":1}', '--criterion', 'nf-C')
    assert code == 3 and 'NoConvergence' in err


def test_argparse_errors_and_help(capsys):
    with pytest.raises(SystemExit) as e:
        run(['check-entanglement', '--bogus'])
    assert e.value.code == 2
    with pytest.raises(SystemExit):
        run(['scan', '--help'])
    assert 'ci=10000' in capsys.readouterr().out
