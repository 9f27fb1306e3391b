# -*- coding: utf-8 -*-
"""
Created on Sun Oct 18 10:12:05 2026

@author: punctlab
"""

#%%
import pytest

from punctlab.config import load_config, run_build
from punctlab.core.machine import check_index_stage_bound, check_punctuality
from punctlab.encode_d1 import build_d1, delay_violations
from punctlab.oracles import ClockedFn

HORIZON = 2000

#%%
@pytest.fixture(scope='module')
def d1_out():
    g = ClockedFn((3, 1, 4), (4, 9, 0))
    return build_d1(g, sizes=[2, 3, 5], reveal_stages=[1, 4, 9], horizon=HORIZON)

@pytest.fixture(scope='module')
def punct_out(shipped_config):
    return run_build(load_config(shipped_config('punctualize'), horizon=HORIZON))

class TestTwoThousandStages:
    def test_d1_punctual(self, d1_out):
        for log in (d1_out.log_a, d1_out.log_b):
            assert len(log) == HORIZON
            assert check_punctuality(log).passed
            assert check_index_stage_bound(log) == []

    def test_d1_orbit_schedule(self, d1_out):
        assert d1_out.G == (1, 4, 9)
        assert delay_violations(d1_out, ClockedFn((3, 1, 4), (4, 9, 0))) == []

    def test_punctualize(self, punct_out):
        assert len(punct_out.log) == HORIZON
        assert check_punctuality(punct_out.log).passed
        assert check_index_stage_bound(punct_out.log) == []
        assert len(punct_out.chains['omega']) == 2
        assert len(punct_out.chains['zeta']) == 1
