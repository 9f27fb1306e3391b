# -*- coding: utf-8 -*-
"""
Created on Sat Oct 17 10:04:12 2026

@author: punctlab
"""

#%%
import json
import os

import pytest

from punctlab.core.machine import INJECTION, EnumEvent, StructureLog
from punctlab.oracles import Approx2, Approx3, CeSchedule, ClockedFn

#%%
def _make_log(rows, signature=INJECTION, lag=1):
    """ rows: one (new, assign) pair per stage; assign entries are
        (source, target) for injections, (symbol, source, target) otherwise
    """
    events = []
    for stage, (new, assign) in enumerate(rows):
        assign = [a if len(a) == 3 else ('f',) + tuple(a) for a in assign]
        events.append(EnumEvent(stage, tuple(new), tuple(assign)))
    return StructureLog(signature, events, lag)

@pytest.fixture
def make_log():
    return _make_log

@pytest.fixture
def write_config(tmp_path):
    """ Write a dict as a JSON config file and return its path """
    def write(cfg, name='run.json'):
        path = tmp_path / name
        path.write_text(json.dumps(cfg))
        return str(path)
    return write

@pytest.fixture
def clocked():
    return ClockedFn(values=(3, 1, 4, 1, 5), conv=(4, 9, 2, 17, 30))

@pytest.fixture
def approx2():
    return Approx2(limits=(0, 1, 2, 0, 1), changes=((3, 7), (5,), (), (10, 12, 20), (4,)))

@pytest.fixture
def approx3():
    return Approx3(limits=(1, 0, 2), s_values=(1, 3, 4),
                   inner={(0, 0): (2, 5), (1, 2): (6,)})

@pytest.fixture
def schedule():
    return CeSchedule(((0, 5), (3, 9)))

@pytest.fixture(scope='session')
def shipped_config():
    """ Path of one of the example configs in configs/ """
    def path(name):
        return os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'configs',
                            name + '.json')
    return path
