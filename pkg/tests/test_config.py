# -*- coding: utf-8 -*-
"""
Created on Sat Oct 17 17:48:10 2026

@author: punctlab
"""

#%%
import pytest

from punctlab.config import RunConfig, env_out, load_config, prepare, run_build
from punctlab.core.exceptions import ConfigError
from punctlab.encode_d1 import DeltaOneBuilder
from punctlab.oracles import CeSchedule

#%%
D1 = {'construction': 'd1', 'horizon': 12,
      'g': {'values': [3, 1, 4], 'conv': [4, 9, 0]}}

class TestRunConfig:
    def test_from_dict(self):
        cfg = RunConfig.from_dict(D1)
        assert cfg.construction == 'd1'
        assert cfg.horizon == 12
        assert cfg.options == {'g': D1['g']}
        assert cfg.to_dict() == D1

    def test_default_horizon(self):
        assert RunConfig.from_dict({'construction': 'permitting'}).horizon == 100

    def test_missing_construction(self):
        with pytest.raises(ConfigError):
            RunConfig.from_dict({'horizon': 5})

    def test_unknown_construction(self):
        with pytest.raises(ConfigError):
            RunConfig('d4', 10)

    @pytest.mark.parametrize('horizon', [0, -3, 2.5, 'ten', True, None])
    def test_bad_horizon(self, horizon):
        with pytest.raises(ConfigError):
            RunConfig('d1', horizon)

#%%
class TestLoad:
    def test_load(self, write_config):
        cfg = load_config(write_config(D1))
        assert cfg.horizon == 12
        assert cfg.name.endswith('run.json')

    def test_horizon_override(self, write_config):
        assert load_config(write_config(D1), horizon=30).horizon == 30

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / 'nothing.json'))

    def test_not_json(self, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text('{"construction": ')
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_not_an_object(self, tmp_path):
        path = tmp_path / 'list.json'
        path.write_text('[1, 2]')
        with pytest.raises(ConfigError):
            load_config(str(path))

#%%
class TestPrepare:
    def test_params(self):
        p = prepare(RunConfig.from_dict(D1))
        assert p.construction == 'd1'
        assert isinstance(p.builder, DeltaOneBuilder)
        assert p.g.value(2) == 4

    def test_permitting_inputs(self):
        cfg = RunConfig.from_dict({'construction': 'permitting', 'W': [[0, 5]],
                                   'requirements': [['identity', 'identity', 'swap', 'swap']]})
        assert prepare(cfg).W == CeSchedule(((0, 5),))

    @pytest.mark.parametrize('options', [
        {'construction': 'd1'},
        {'construction': 'd2', 'g2': {'limits': [0], 'changes': [[]]}, 'variant': 'theta'},
        {'construction': 'permitting', 'W': [[0, 5], [1, 5]]},
        {'construction': 'permitting', 'requirements': [['identity', 'identity']]},
        {'construction': 'pathological', 'g': {'values': [1], 'conv': [0]},
         'opponents': [{'kind': 'oracle'}]},
        {'construction': 'pressing', 'opponents': [{'kind': 'copier', 'delay': 0}]},
        {'construction': 'punctualize', 'N0': 0, 'N1': 0},
    ])
    def test_bad_options(self, options):
        with pytest.raises(ConfigError):
            prepare(RunConfig.from_dict(options))

    def test_run_build(self):
        out = run_build(RunConfig.from_dict(D1))
        assert out.metadata()['construction'] == 'd1'

#%%
class TestEnv:
    def test_default(self, monkeypatch):
        monkeypatch.delenv('PUNCTLAB_OUT', raising=False)
        assert env_out('out') == 'out'

    def test_override(self, monkeypatch, tmp_path):
        monkeypatch.setenv('PUNCTLAB_OUT', str(tmp_path))
        assert env_out('out') == str(tmp_path)
