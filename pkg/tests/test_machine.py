# -*- coding: utf-8 -*-
"""
Created on Sat Oct 17 10:21:40 2026

@author: punctlab
"""

#%%
import pytest

from punctlab.core.exceptions import ConfigError, HorizonExceeded, InvariantViolation
from punctlab.core.machine import (INJECTION, EnumEvent, Signature, StageMachine,
                                   StructureLog, check_index_stage_bound,
                                   check_punctuality, fresh_index, log_digest,
                                   run_lockstep)

#%%
def _self_loops(m):
    el = m.fresh()
    m.assign('f', el, el)

class TestSignature:
    def test_rejects_empty(self):
        with pytest.raises(ConfigError):
            Signature(())

    def test_rejects_duplicates(self):
        with pytest.raises(ConfigError):
            Signature(('S', 'S'))

    def test_membership(self):
        sig = Signature(('S', 'P', 'R', 'C'))
        assert 'R' in sig and 'f' not in sig
        assert len(sig) == 4

#%%
class TestStageMachine:
    def test_first_stage(self):
        m = StageMachine(INJECTION, 3, step=_self_loops)
        ev = m.advance()
        assert ev == EnumEvent(0, (0,), (('f', 0, 0),))
        assert m.stage == 1 and m.size == 1

    def test_horizon(self):
        m = StageMachine(INJECTION, 2, step=_self_loops)
        m.run()
        assert m.exhausted
        with pytest.raises(HorizonExceeded):
            m.advance()

    def test_double_assignment(self):
        m = StageMachine(INJECTION, 2)
        m.begin()
        a, b = m.fresh(), m.fresh()
        m.assign('f', a, b)
        with pytest.raises(InvariantViolation):
            m.assign('f', a, a)

    def test_assign_unknown_element(self):
        m = StageMachine(INJECTION, 2)
        m.begin()
        m.fresh()
        with pytest.raises(InvariantViolation):
            m.assign('f', 0, 1)

    def test_unknown_symbol(self):
        m = StageMachine(INJECTION, 2)
        m.begin()
        m.fresh()
        with pytest.raises(InvariantViolation):
            m.assign('S', 0, 0)

    def test_fresh_outside_stage(self):
        m = StageMachine(INJECTION, 2)
        with pytest.raises(InvariantViolation):
            m.fresh()

    def test_value_and_defined(self):
        m = StageMachine(INJECTION, 2)
        m.begin()
        a, b = m.fresh(), m.fresh()
        m.assign('f', a, b)
        assert m.value('f', a) == b
        assert m.defined('f', a) and not m.defined('f', b)

    def test_replay_is_identical(self):
        def step(m):
            for _ in range(m.stage + 1):
                _self_loops(m)
        first = StageMachine(INJECTION, 6, step=step).run()
        second = StageMachine(INJECTION, 6, step=step).run()
        assert first == second
        assert log_digest(first) == log_digest(second)

    def test_lockstep(self):
        A = StageMachine(INJECTION, 4)
        B = StageMachine(INJECTION, 4)

        def step(s):
            _self_loops(A)
            for _ in range(2):
                _self_loops(B)

        run_lockstep((A, B), step, 4)
        assert len(A.log) == len(B.log) == 4
        assert A.size == 4 and B.size == 8

#%%
class TestStructureLog:
    def test_append_out_of_order(self):
        log = StructureLog(INJECTION)
        with pytest.raises(InvariantViolation):
            log.append(EnumEvent(1, (0,)))

    def test_truncate(self, make_log):
        log = make_log([((0, 1), [(0, 1)]), ((2,), [(1, 2), (2, 0)]), ((3,), [(3, 3)])])
        t = log.truncate(1)
        assert t.size == 3
        assert t.f == {0: 1, 1: 2, 2: 0}
        assert log.truncate().size == 4

    def test_first_stage(self, make_log):
        log = make_log([((0, 1), []), ((2,), []), ((3, 4), [])])
        assert log.first_stage(4) == 2
        assert log.first_stage(9) is None
        assert list(log.first_stages()) == [0, 0, 1, 2, 2]
        assert log.size_at(1) == 3

    def test_jsonl(self, make_log, tmp_path):
        log = make_log([((0,), [(0, 0)]), ((1, 2), [(1, 2), (2, 1)])])
        path = str(tmp_path / 'A.jsonl')
        log.write(path)
        with open(path) as f:
            first = f.readline()
        assert first == '{"stage":0,"new":[0],"assign":[["f",0,0]]}\n'
        assert StructureLog.read(path, INJECTION) == log

    def test_digest_sees_changes(self, make_log):
        a = make_log([((0,), [(0, 0)])])
        b = make_log([((0, 1), [(0, 1)])])
        assert log_digest(a) != log_digest(b)

#%%
class TestPunctuality:
    def _log(self, make_log, late_stage):
        rows = [((0, 1), [(0, 0), (1, 1)]),
                ((2,), [(2, 2)]),
                ((3, 4), [(3, 3), (4, 4)]),
                ((5,), [])]
        for stage in range(4, late_stage + 1):
            el = 2 + stage
            assign = [(el, el)]
            if stage == late_stage:
                assign.append((5, 5))
            rows.append(((el,), assign))
        return make_log(rows)

    def test_assigned_within_lag(self, make_log):
        assert check_punctuality(self._log(make_log, 4)).passed

    def test_late_assignment(self, make_log):
        report = check_punctuality(self._log(make_log, 6))
        assert not report.passed
        assert len(report.violations) == 1
        v = report.violations[0]
        assert (v.element, v.first_stage, v.due_stage, v.assigned_stage) == (5, 3, 4, 6)

    def test_empty_log(self):
        assert check_punctuality(StructureLog(INJECTION)).passed

    def test_empty_stage(self, make_log):
        report = check_punctuality(make_log([((0,), [(0, 0)]), ((), [])]))
        assert report.empty_stages == (1,)
        assert not report.passed

    def test_due_past_the_end_is_not_a_violation(self, make_log):
        assert check_punctuality(make_log([((0,), [(0, 0)]), ((1,), [])])).passed

    def test_double_assignment(self, make_log):
        report = check_punctuality(make_log([((0,), [(0, 0)]), ((1,), [(0, 1), (1, 1)])]))
        assert report.double_assignments == (('f', 0),)

    def test_summary(self, make_log):
        summary = check_punctuality(self._log(make_log, 6)).summary()
        assert summary['passed'] is False
        assert summary['violations'] == [[5, 'f', 3, 4, 6]]

#%%
class TestFreshIndex:
    def test_used_prefix(self, make_log):
        log = make_log([(tuple(range(10)), [(x, x) for x in range(10)])])
        assert fresh_index(log) == 10

    def test_empty(self):
        assert fresh_index(StructureLog(INJECTION)) == 0

    def test_index_stage_bound(self):
        log = StageMachine(INJECTION, 8, step=_self_loops).run()
        assert fresh_index(log) >= 7
        assert all(el >= s for el, s in enumerate(log.first_stages()))
        assert check_index_stage_bound(log) == []
