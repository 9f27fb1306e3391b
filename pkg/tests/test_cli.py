# -*- coding: utf-8 -*-
"""
Created on Sat Oct 17 18:31:57 2026

@author: punctlab
"""

#%%
import json
import os

import pytest

from punctlab.cli import EXIT_CONFIG, EXIT_INVARIANT, EXIT_OK, main

#%%
D1 = {'construction': 'd1', 'horizon': 15,
      'g': {'values': [3, 1, 4], 'conv': [4, 9, 0]}}

PERMITTING = {'construction': 'permitting', 'horizon': 12, 'W': [[0, 5], [3, 9]],
              'requirements': [['flip-on-1', 'identity', 'succ', 'succ'],
                               ['identity', 'identity', 'swap', 'swap']]}

PRESSING = {'construction': 'pressing', 'horizon': 12, 'W': [[0, 6]]}

PATHOLOGICAL = {'construction': 'pathological', 'horizon': 20, 'schemes': ['constant-0'],
                'opponents': [{'kind': 'copier', 'delay': 1}],
                'g': {'values': [1], 'conv': [0]}}

@pytest.fixture(autouse=True)
def no_env_out(monkeypatch):
    monkeypatch.delenv('PUNCTLAB_OUT', raising=False)

@pytest.fixture
def out_dir(tmp_path):
    return str(tmp_path / 'out')

def _read(path):
    with open(path) as f:
        return f.read()

#%%
class TestBuild:
    def test_artifacts(self, write_config, out_dir, capsys):
        assert main(['build', '--config', write_config(D1), '--out', out_dir]) == EXIT_OK
        for name in ('A.jsonl', 'B.jsonl', 'metadata.json', 'trace.jsonl', 'build.pkl'):
            assert os.path.exists(os.path.join(out_dir, name))
        printed = json.loads(capsys.readouterr().out)
        assert sorted(printed['digests']) == ['A', 'B']

    def test_deterministic(self, write_config, tmp_path):
        path = write_config(D1)
        first, second = str(tmp_path / 'one'), str(tmp_path / 'two')
        assert main(['build', '--config', path, '--out', first]) == EXIT_OK
        assert main(['build', '--config', path, '--out', second]) == EXIT_OK
        for name in ('A.jsonl', 'B.jsonl', 'metadata.json', 'trace.jsonl'):
            assert _read(os.path.join(first, name)) == _read(os.path.join(second, name))

    def test_env_out(self, write_config, tmp_path, monkeypatch):
        monkeypatch.setenv('PUNCTLAB_OUT', str(tmp_path / 'env'))
        assert main(['build', '--config', write_config(D1), '--out', 'ignored']) == EXIT_OK
        assert os.path.exists(str(tmp_path / 'env' / 'A.jsonl'))

    def test_empty_spec(self, write_config, out_dir):
        cfg = {'construction': 'punctualize', 'horizon': 20, 'N0': 0, 'N1': 0}
        assert main(['build', '--config', write_config(cfg), '--out', out_dir]) == EXIT_CONFIG

    def test_missing_config(self, tmp_path, out_dir):
        assert main(['build', '--config', str(tmp_path / 'none.json'),
                     '--out', out_dir]) == EXIT_CONFIG

    def test_horizon_too_small(self, write_config, out_dir):
        assert main(['build', '--config', write_config(D1), '--horizon', '1',
                     '--out', out_dir]) == EXIT_CONFIG

#%%
class TestVerify:
    @pytest.mark.parametrize('cfg', [D1, PERMITTING, PRESSING],
                             ids=['d1', 'permitting', 'pressing'])
    def test_passes(self, write_config, out_dir, cfg):
        path = write_config(cfg)
        assert main(['build', '--config', path, '--out', out_dir]) == EXIT_OK
        assert main(['verify', '--config', path, '--out', out_dir]) == EXIT_OK
        with open(os.path.join(out_dir, 'report.json')) as f:
            report = json.load(f)
        assert report['passed']
        assert report['construction'] == cfg['construction']

    def test_corrupted_log(self, write_config, out_dir):
        path = write_config(D1)
        assert main(['build', '--config', path, '--out', out_dir]) == EXIT_OK
        log_path = os.path.join(out_dir, 'A.jsonl')
        rows = [json.loads(line) for line in _read(log_path).splitlines()]
        rows[2]['assign'] = []
        with open(log_path, 'w') as f:
            f.write(''.join(json.dumps(r) + '\n' for r in rows))
        assert main(['verify', '--config', path, '--out', out_dir]) == EXIT_INVARIANT
        with open(os.path.join(out_dir, 'report.json')) as f:
            report = json.load(f)
        assert not report['checks']['replay:A']
        assert report['checks']['replay:B']

    def test_without_artifacts(self, write_config, out_dir):
        assert main(['verify', '--config', write_config(D1), '--out', out_dir]) == EXIT_CONFIG

    def test_other_horizon(self, write_config, out_dir):
        path = write_config(D1)
        assert main(['build', '--config', path, '--out', out_dir]) == EXIT_OK
        assert main(['verify', '--config', path, '--horizon', '20',
                     '--out', out_dir]) == EXIT_CONFIG

    def test_pathological_checks(self, write_config, out_dir):
        path = write_config(PATHOLOGICAL)
        assert main(['build', '--config', path, '--out', out_dir]) == EXIT_OK
        assert main(['verify', '--config', path, '--out', out_dir]) == EXIT_OK
        with open(os.path.join(out_dir, 'report.json')) as f:
            checks = json.load(f)['checks']
        assert checks['diagonalized'] and checks['q-bound']

    def test_pressing_tail_rigidity(self, write_config, out_dir):
        path = write_config(PRESSING)
        assert main(['build', '--config', path, '--out', out_dir]) == EXIT_OK
        assert main(['verify', '--config', path, '--out', out_dir]) == EXIT_OK
        with open(os.path.join(out_dir, 'report.json')) as f:
            assert json.load(f)['checks']['tail-rigidity']

#%%
class TestDecode:
    def test_d1(self, write_config, out_dir, capsys):
        assert main(['decode', '--config', write_config(D1), '--out', out_dir,
                     '--x', '0']) == EXIT_OK
        assert json.loads(capsys.readouterr().out) == {'x': 0, 'g': 3, 'G_next': 2}

    def test_named_target(self, write_config, out_dir, capsys):
        assert main(['decode', 'low', '--config', write_config(PERMITTING), '--out', out_dir,
                     '--x', '3']) == EXIT_OK
        assert json.loads(capsys.readouterr().out) == {'x': 3, 'W': 1}

    def test_wrong_target(self, write_config, out_dir):
        assert main(['decode', 'low', '--config', write_config(D1), '--out', out_dir,
                     '--x', '0']) == EXIT_CONFIG

    def test_reuses_artifacts(self, write_config, out_dir, capsys):
        path = write_config(PRESSING)
        assert main(['build', '--config', path, '--out', out_dir]) == EXIT_OK
        capsys.readouterr()
        assert main(['decode', 'pressing-g', '--config', path, '--out', out_dir,
                     '--x', '0']) == EXIT_OK
        assert json.loads(capsys.readouterr().out) == {'x': 0, 'g': 6}

    def test_stale_artifacts_rebuilt(self, write_config, out_dir, capsys):
        path = write_config(PRESSING)
        assert main(['build', '--config', path, '--out', out_dir]) == EXIT_OK
        capsys.readouterr()
        assert main(['decode', 'pressing-g', '--config', path, '--horizon', '60',
                     '--out', out_dir, '--x', '2']) == EXIT_OK
        assert json.loads(capsys.readouterr().out) == {'x': 2, 'g': -1}

#%%
class TestAnalyze:
    def test_character(self, write_config, out_dir, capsys):
        assert main(['analyze', '--config', write_config(D1), '--out', out_dir]) == EXIT_OK
        rows = json.loads(capsys.readouterr().out)
        assert sorted(rows) == ['A', 'B']
        assert rows['A']['cycles']['2'] == 1

    def test_dot(self, write_config, out_dir, tmp_path):
        dot = str(tmp_path / 'a.dot')
        assert main(['analyze', '--config', write_config(D1), '--out', out_dir,
                     '--dot', dot]) == EXIT_OK
        assert _read(dot).lstrip().startswith('digraph')

    def test_pressing_table(self, write_config, out_dir, capsys):
        assert main(['analyze', '--config', write_config(PRESSING), '--out', out_dir]) == EXIT_OK
        rows = json.loads(capsys.readouterr().out)
        assert rows['components'][0]['x_e'] == 1
        assert rows['retired'] == []

#%%
class TestTrace:
    def test_rows(self, write_config, out_dir, capsys):
        assert main(['trace', '--config', write_config(PERMITTING), '--out', out_dir]) == EXIT_OK
        rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        assert rows[0] == {'stage': 1, 'event': 'error', 'e': 0, 'x': 0,
                           'condition': 'composition', 'input': 0}
