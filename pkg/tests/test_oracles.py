# -*- coding: utf-8 -*-
"""
Created on Sat Oct 17 11:02:09 2026

@author: punctlab
"""

#%%
import pytest

from punctlab.core.exceptions import BudgetExceeded, ConfigError
from punctlab.oracles import (Approx2, Approx3, CeSchedule, ClockedFn, decode_tuple,
                              encode_tuple, eval_clocked, get_scheme, pair,
                              run_scheme, unpair)

#%%
class TestPairing:
    def test_small_values(self):
        assert [pair(0, 0), pair(0, 1), pair(1, 0), pair(0, 2)] == [0, 1, 2, 3]
        assert unpair(2) == (1, 0)
        assert unpair(pair(7, 11)) == (7, 11)

    def test_increasing_in_each_argument(self):
        for a in range(8):
            for b in range(8):
                assert pair(a + 1, b) > pair(a, b)
                assert pair(a, b + 1) > pair(a, b)

    def test_tuple_codes(self):
        assert encode_tuple(()) == 0
        assert encode_tuple((5,)) == 16
        assert encode_tuple((0, 0)) == 3
        assert decode_tuple(16) == (5,)
        assert decode_tuple(encode_tuple((4, 0, 9))) == (4, 0, 9)

    def test_tuple_codes_grow_componentwise(self):
        base = (2, 0, 3)
        for k in range(len(base)):
            bigger = base[:k] + (base[k] + 1,) + base[k + 1:]
            assert encode_tuple(bigger) > encode_tuple(base)

#%%
class TestClockedFn:
    def test_value_and_convergence(self, clocked):
        assert clocked.value(2) == 4
        assert clocked.convergence(3) == 17
        assert clocked.value(40) == 0 and clocked.convergence(40) == 0

    def test_eval_clocked(self, clocked):
        assert eval_clocked(clocked, 1, 8) is None
        assert eval_clocked(clocked, 1, 9) == 1

    def test_lengths_must_match(self):
        with pytest.raises(ConfigError):
            ClockedFn((1, 2), (0,))

    def test_from_config_defaults_conv(self):
        f = ClockedFn.from_config({'values': [4, 2]})
        assert f.conv == (0, 0)

#%%
class TestApprox2:
    def test_moves_at_scheduled_stages(self, approx2):
        assert [approx2(0, s) for s in range(9)] == [2, 2, 2, 1, 1, 1, 1, 0, 0]
        assert approx2(2, 0) == approx2.limit(2) == 2

    def test_last_change(self, approx2):
        assert approx2.last_change(3) == 20
        assert approx2.last_change(2) == 0
        assert approx2.limit(9) == 0

    @pytest.mark.parametrize('changes', [((3, 3),), ((5, 2),), ((0,),)])
    def test_bad_schedules(self, changes):
        with pytest.raises(ConfigError):
            Approx2((0,), changes)

#%%
def _agreement_by_scan(g3, x, s, t):
    value = g3(x, s, t)
    n = min(s, t)
    while n < t and g3(x, n + 1, t) == value:
        n += 1
    return n

class TestApprox3:
    def test_s_x(self, approx3):
        assert [approx3.s_x(x) for x in range(6)] == [1, 3, 4, 5, 6, 7]
        assert approx3.truth(0, 1) and not approx3.truth(0, 0)

    def test_inner_limits(self, approx3):
        assert approx3.inner_limit(0, 0) == 2
        assert approx3.inner_limit(0, 1) == 1
        assert approx3(0, 0, 0) == 4
        assert approx3(0, 0, 5) == 2
        assert approx3.settle_stage(1, 2) == 6

    def test_agreement_matches_scan(self, approx3):
        for x in range(3):
            for s in range(6):
                for t in range(10):
                    assert approx3.agreement(x, s, t) == _agreement_by_scan(approx3, x, s, t)

    def test_agreement_bounded_by_t(self, approx3):
        assert approx3.agreement(0, 5, 2) == 2
        assert all(approx3.agreement(1, s, 4) <= 4 for s in range(8))

    def test_s_below_x(self):
        with pytest.raises(ConfigError):
            Approx3((0, 0), (0, 0))

    def test_from_config(self):
        g3 = Approx3.from_config({'limits': [1], 's': [0], 'inner': [[0, 0, [3]]]})
        assert g3.inner_changes(0, 0) == (3,)
        assert g3(0, 0, 2) == 2

#%%
class TestCeSchedule:
    def test_queries(self, schedule):
        assert schedule.entry_stage(3) == 9
        assert schedule.entry_stage(1) is None
        assert schedule.contains(0, 5) and not schedule.contains(0, 4)
        assert schedule.entering_at(9) == [3]
        assert schedule.members(6) == [0]
        assert schedule.exhausted_by(10) and not schedule.exhausted_by(9)

    def test_stages_must_increase(self):
        with pytest.raises(ConfigError):
            CeSchedule(((0, 5), (1, 5)))

    def test_elements_distinct(self):
        with pytest.raises(ConfigError):
            CeSchedule(((0, 5), (0, 7)))

#%%
class TestSchemes:
    def test_apply_oracle(self):
        assert run_scheme(get_scheme('apply-oracle'), lambda y: 2 * y, 3) == 6

    def test_flip_on_1(self):
        scheme = get_scheme('flip-on-1')
        assert run_scheme(scheme, lambda y: 0, 4) == 4
        assert run_scheme(scheme, lambda y: 1, 4) == 5

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            run_scheme(get_scheme('d-first-entry'), lambda y: encode_tuple((1,) * 8), 0)
        assert run_scheme(get_scheme('d-first-entry'), lambda y: encode_tuple((6, 2)), 0) == 6

    def test_unknown(self):
        with pytest.raises(ConfigError):
            get_scheme('halting')
