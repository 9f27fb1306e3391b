#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Tue Oct  6 11:02:17 2026

@author: punctlab
"""

#%%
import hashlib
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from tqdm import tqdm

from .exceptions import ConfigError, HorizonExceeded, InvariantViolation

logger = logging.getLogger(__name__)

#%%
@dataclass(frozen=True)
class Signature:
    """ Ordered list of unary function symbols """
    symbols: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, 'symbols', tuple(self.symbols))
        if len(self.symbols) == 0:
            raise ConfigError('signature must contain at least one symbol')
        if len(set(self.symbols)) != len(self.symbols):
            raise ConfigError('signature symbols must be distinct: {0}'.format(
                              self.symbols))

    def __contains__(self, symbol):
        return symbol in self.symbols

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

INJECTION = Signature(('f',))

#%%
@dataclass(frozen=True)
class EnumEvent:
    """ Everything a structure does during one stage: the naturals it
        enumerates and the function values it assigns
    """
    stage: int
    new: Tuple[int, ...] = ()
    assign: Tuple[Tuple[str, int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'new', tuple(self.new))
        object.__setattr__(self, 'assign', tuple(tuple(a) for a in self.assign))

    def to_json(self):
        return json.dumps({'stage': self.stage,
                           'new': list(self.new),
                           'assign': [list(a) for a in self.assign]},
                          separators=(',', ':'))

    @classmethod
    def from_json(cls, line):
        row = json.loads(line) if isinstance(line, str) else line
        return cls(stage=int(row['stage']),
                   new=tuple(int(n) for n in row['new']),
                   assign=tuple((str(s), int(a), int(b)) for s, a, b in row['assign']))

#%%
@dataclass(frozen=True)
class Truncation:
    """ Finite snapshot of a structure: the domain {0..size-1} and the
        function values assigned so far
    """
    size: int
    maps: Dict[str, Dict[int, int]] = field(default_factory=dict)

    @classmethod
    def from_map(cls, size, mapping, symbol='f'):
        return cls(size=size, maps={symbol: dict(mapping)})

    @property
    def domain(self):
        return range(self.size)

    @property
    def f(self):
        """ The map of a single-symbol structure """
        if len(self.maps) != 1:
            raise ValueError('truncation carries {0} maps'.format(len(self.maps)))
        return next(iter(self.maps.values()))

    def apply(self, symbol, x):
        return self.maps.get(symbol, {}).get(x)

#%%
class StructureLog(object):
    """ Stage-ordered list of enumeration events for one structure.

    Arguments:
        signature: Signature of the structure

        events: iterable of EnumEvent, in stage order

        lag: int, number of stages allowed between the first enumeration of
            an element and the assignment of its function values

    Methods:
        @append
        @truncate
        @first_stage
        @size_at
        @to_jsonl
        @from_jsonl
        @write
        @read
    """
    def __init__(self, signature, events=(), lag=1):
        self.signature = signature if isinstance(signature, Signature) \
                         else Signature(signature)
        self.lag = lag
        self.events = []
        for ev in events:
            self.append(ev)

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def __eq__(self, other):
        return isinstance(other, StructureLog) and \
               self.signature == other.signature and \
               self.lag == other.lag and self.events == other.events

    def __repr__(self):
        return 'StructureLog(symbols={0}, stages={1}, size={2})'.format(
               self.signature.symbols, len(self.events), self.size_at())

    def append(self, event):
        if event.stage != len(self.events):
            raise InvariantViolation('event for stage {0} appended at position {1}'.format(
                                     event.stage, len(self.events)))
        self.events.append(event)

    @property
    def last_stage(self):
        return len(self.events) - 1

    def size_at(self, stage=None):
        """ Domain size after the given stage (default: last stage) """
        stage = self.last_stage if stage is None else min(stage, self.last_stage)
        return sum(len(ev.new) for ev in self.events[:stage + 1])

    def truncate(self, stage=None):
        """ Cut the log after the given stage and collect the maps """
        stage = self.last_stage if stage is None else min(stage, self.last_stage)
        maps = {s: {} for s in self.signature}
        size = 0
        for ev in self.events[:stage + 1]:
            size += len(ev.new)
            for sym, src, tgt in ev.assign:
                maps[sym][src] = tgt
        return Truncation(size=size, maps=maps)

    def first_stages(self):
        """ Array indexed by element with the stage it was first enumerated """
        out = np.empty(self.size_at(), dtype=np.int64)
        for ev in self.events:
            if ev.new:
                out[np.asarray(ev.new, dtype=np.int64)] = ev.stage
        return out

    def first_stage(self, element):
        for ev in self.events:
            if element in ev.new:
                return ev.stage
        return None

    def new_elements(self, stage):
        return self.events[stage].new

    def to_jsonl(self):
        return ''.join(ev.to_json() + '\n' for ev in self.events)

    @classmethod
    def from_jsonl(cls, text, signature, lag=1):
        log = cls(signature, lag=lag)
        for line in text.splitlines():
            if line.strip():
                log.events.append(EnumEvent.from_json(line))
        return log

    def write(self, path):
        with open(path, 'w') as f:
            f.write(self.to_jsonl())

    @classmethod
    def read(cls, path, signature, lag=1):
        with open(path) as f:
            return cls.from_jsonl(f.read(), signature, lag)

#%%
class StageMachine(object):
    """ Deterministic stage-by-stage enumerator of a structure with domain a
        growing initial segment of the naturals. A stage is opened with
        begin(), filled with fresh() and assign(), and closed with commit().
        When a step function is given, advance() does all three.

    Arguments:
        signature: Signature or list of symbol names

        horizon: int, number of stages the machine may run

        step: callable(machine) -> None, optional builder run inside advance()

        lag: int (default 1), punctuality bound recorded on the log
    """
    def __init__(self, signature, horizon, step=None, lag=1):
        self.log = StructureLog(signature, lag=lag)
        self.signature = self.log.signature
        self.horizon = horizon
        self.step = step
        self.stage = 0
        self._open = False
        self._new = []
        self._assign = []
        self._maps = {s: {} for s in self.signature}
        self._size = 0

    def __repr__(self):
        return 'StageMachine(stage={0}, horizon={1}, size={2})'.format(
               self.stage, self.horizon, self._size)

    @property
    def size(self):
        return self._size

    @property
    def exhausted(self):
        return self.stage >= self.horizon

    def begin(self):
        if self._open:
            raise InvariantViolation('stage {0} is already open'.format(self.stage))
        if self.exhausted:
            raise HorizonExceeded('stage {0} is past horizon {1}'.format(
                                  self.stage, self.horizon))
        self._open = True

    def fresh(self):
        """ Enumerate the next unused natural """
        if not self._open:
            raise InvariantViolation('fresh() outside an open stage')
        n = self._size
        self._size += 1
        self._new.append(n)
        return n

    def assign(self, symbol, source, target):
        if not self._open:
            raise InvariantViolation('assign() outside an open stage')
        if symbol not in self.signature:
            raise InvariantViolation('unknown symbol {0}'.format(symbol))
        if not (0 <= source < self._size and 0 <= target < self._size):
            raise InvariantViolation('{0}({1})={2} refers to an element not yet enumerated'.format(
                                     symbol, source, target))
        if source in self._maps[symbol]:
            raise InvariantViolation('{0}({1}) assigned twice'.format(symbol, source))
        self._maps[symbol][source] = target
        self._assign.append((symbol, source, target))

    def value(self, symbol, source):
        return self._maps[symbol].get(source)

    def defined(self, symbol, source):
        return source in self._maps[symbol]

    def commit(self):
        if not self._open:
            raise InvariantViolation('commit() without begin()')
        event = EnumEvent(self.stage, tuple(self._new), tuple(self._assign))
        self.log.append(event)
        self.stage += 1
        self._open = False
        self._new = []
        self._assign = []
        return event

    def advance(self):
        """ Run one full stage through the step function """
        self.begin()
        if self.step is not None:
            self.step(self)
        return self.commit()

    def run(self):
        while not self.exhausted:
            self.advance()
        return self.log

#%%
@dataclass(frozen=True)
class Violation:
    element: int
    symbol: str
    first_stage: int
    due_stage: int
    assigned_stage: Optional[int]

@dataclass(frozen=True)
class PunctualityReport:
    violations: Tuple[Violation, ...] = ()
    empty_stages: Tuple[int, ...] = ()
    double_assignments: Tuple[Tuple[str, int], ...] = ()
    domain_errors: Tuple[int, ...] = ()

    @property
    def passed(self):
        return not (self.violations or self.empty_stages or
                    self.double_assignments or self.domain_errors)

    def summary(self):
        return {'passed': self.passed,
                'violations': [list((v.element, v.symbol, v.first_stage,
                                     v.due_stage, v.assigned_stage))
                               for v in self.violations],
                'empty_stages': list(self.empty_stages),
                'double_assignments': [list(d) for d in self.double_assignments],
                'domain_errors': list(self.domain_errors)}

#%%
def check_punctuality(log):
    """ Check that every element receives a value for every symbol within
        log.lag stages of its first enumeration, and that every stage
        enumerates at least one element. An element whose due stage lies
        beyond the end of the log is not counted as a violation.
    """
    symbols = log.signature.symbols
    n = log.size_at() if len(log) else 0
    first = np.full(n, -1, dtype=np.int64)
    assigned = np.full((len(symbols), n), -1, dtype=np.int64)
    sym_index = {s: k for k, s in enumerate(symbols)}
    empty, doubles, domain_errors = [], [], []
    size = 0
    for ev in log.events:
        if not ev.new:
            empty.append(ev.stage)
        if list(ev.new) != list(range(size, size + len(ev.new))):
            domain_errors.append(ev.stage)
        for el in ev.new:
            if 0 <= el < n and first[el] < 0:
                first[el] = ev.stage
        size += len(ev.new)
        for sym, src, tgt in ev.assign:
            k = sym_index.get(sym)
            if k is None or not (0 <= src < size and 0 <= tgt < size):
                domain_errors.append(ev.stage)
                continue
            if assigned[k, src] >= 0:
                doubles.append((sym, src))
                continue
            assigned[k, src] = ev.stage

    last = log.last_stage
    violations = []
    due = first + log.lag
    for k, sym in enumerate(symbols):
        late = np.nonzero((assigned[k] > due) |
                          ((assigned[k] < 0) & (due <= last)))[0]
        for el in late:
            got = int(assigned[k, el])
            violations.append(Violation(int(el), sym, int(first[el]), int(due[el]),
                                        got if got >= 0 else None))
    violations.sort(key=lambda v: (v.element, v.symbol))
    report = PunctualityReport(tuple(violations), tuple(empty), tuple(doubles),
                               tuple(sorted(set(domain_errors))))
    if not report.passed:
        logger.debug('punctuality check failed: %d violations, %d empty stages',
                     len(violations), len(empty))
    return report

#%%
def fresh_index(log):
    """ Least natural not yet used by the log """
    return log.size_at() if len(log) else 0

#%%
def check_index_stage_bound(log):
    """ Elements whose value is smaller than the stage they first appeared
        at. Empty whenever every stage enumerates at least one element.
    """
    if not len(log):
        return []
    first = log.first_stages()
    return [(int(e), int(first[e])) for e in np.nonzero(np.arange(len(first)) < first)[0]]

#%%
def log_digest(log):
    return hashlib.sha256(log.to_jsonl().encode('utf-8')).hexdigest()

#%%
def run_lockstep(machines, step, horizon, progress=False, desc=None):
    """ Advance several machines together, one stage at a time. The step
        function receives the stage number and is called between begin()
        and commit() of every machine.
    """
    for s in tqdm(range(horizon), desc=desc, disable=not progress):
        for m in machines:
            m.begin()
        step(s)
        for m in machines:
            m.commit()
