#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Wed Oct 14 16:02:17 2026

@author: punctlab
"""

#%%
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from tqdm import tqdm

from .core.exceptions import BudgetExceeded, ConfigError, DecodeError
from .oracles import CeSchedule, get_scheme, run_scheme

logger = logging.getLogger(__name__)

#%%
def _succ(x):
    return x + 1

def _swap(x):
    return x ^ 1

STRUCTURES = {
    'succ': _succ,
    'swap': _swap,
}

CONDITIONS = ('injective', 'composition', 'signature', 'budget')

#%%
@dataclass(frozen=True)
class Requirement:
    """ One requirement instance: psi_i maps A_m to A_n, psi_j maps A_n back.
        A_m and A_n are total unary structures named in STRUCTURES.
    """
    scheme_i: str
    scheme_j: str
    struct_m: str
    struct_n: str

    def __post_init__(self):
        get_scheme(self.scheme_i)
        get_scheme(self.scheme_j)
        for name in (self.struct_m, self.struct_n):
            if name not in STRUCTURES:
                raise ConfigError('unknown structure {0!r}; choose from {1}'.format(
                                  name, sorted(STRUCTURES)))

    @classmethod
    def from_config(cls, row):
        if len(row) != 4:
            raise ConfigError('a requirement is [scheme_i, scheme_j, struct_m, struct_n]')
        return cls(*row)

@dataclass(frozen=True)
class ErrorWitness:
    e: int
    x: int
    stage: int
    condition: str
    input: int

    def __post_init__(self):
        if self.condition not in CONDITIONS:
            raise ValueError('unknown condition {0!r}'.format(self.condition))

    def to_json(self):
        return {'e': self.e, 'x': self.x, 'stage': self.stage,
                'condition': self.condition, 'input': self.input}

#%%
def star_oracle(f, p):
    """ (f|p)^1^omega: f below position p, 1 from p on """
    def oracle(y):
        if y >= p:
            return 1
        return f[y] if y < len(f) else 0
    return oracle

def check_input(req, oracle, x, seen):
    """ Name of the first condition failing at input x, or None.

        seen maps images of psi_i to their sources and is updated in place.
        Conditions are tried in the order injectivity of psi_i, psi_i . psi_j
        being the identity, then signature preservation of both maps.
    """
    psi_i, psi_j = get_scheme(req.scheme_i), get_scheme(req.scheme_j)
    fm, fn = STRUCTURES[req.struct_m], STRUCTURES[req.struct_n]
    try:
        y = run_scheme(psi_i, oracle, x)
        if y in seen and seen[y] != x:
            return 'injective'
        seen[y] = x
        if run_scheme(psi_i, oracle, run_scheme(psi_j, oracle, x)) != x:
            return 'composition'
        if run_scheme(psi_i, oracle, fm(x)) != fn(y):
            return 'signature'
        if run_scheme(psi_j, oracle, fn(x)) != fm(run_scheme(psi_j, oracle, x)):
            return 'signature'
    except BudgetExceeded:
        return 'budget'
    return None

class ErrorSearch(object):
    """ Resumable search window of one requirement. Inputs below cursor have
        been checked against the current oracle without finding an error.
    """
    __slots__ = ('cursor', 'seen')

    def __init__(self):
        self.reset()

    def reset(self):
        self.cursor = 0
        self.seen = {}

def find_error(st, e, budget):
    """ Check inputs cursor .. cursor+budget-1 of requirement e against
        f* = (f|p_e)^1^omega. Returns the first ErrorWitness or None.
    """
    req = st.catalog[e]
    search = st.search[e]
    x = st.pointer[e]
    oracle = star_oracle(st.f, st.marker(x))
    for inp in range(search.cursor, search.cursor + budget):
        cond = check_input(req, oracle, inp, search.seen)
        if cond is not None:
            return ErrorWitness(e, x, st.stage, cond, inp)
        search.cursor = inp + 1
    return None

#%%
class PermitState(object):
    """ Mutable state of the permitting construction.

    Arguments:
        W: CeSchedule

        catalog: list of Requirement, in priority order

    Methods:
        @marker
        @snapshot
    """
    def __init__(self, W, catalog):
        self.W = W
        self.catalog = list(catalog)
        self.stage = 0
        self.f = []
        # m_x = vals[x] for x < len(vals), tail_start + (x - len(vals)) past it
        self.vals = []
        self.tail_start = 0
        n = len(self.catalog)
        self.pointer = list(range(n))
        self.satisfied = [False] * n
        self.g = [dict() for _ in range(n)]
        self.errors = [set() for _ in range(n)]
        self.search = [ErrorSearch() for _ in range(n)]

    def marker(self, x):
        if x < len(self.vals):
            return self.vals[x]
        return self.tail_start + (x - len(self.vals))

    def snapshot(self):
        return (tuple(self.vals), self.tail_start)

    def set_f(self, pos, value):
        if pos >= len(self.f):
            self.f.extend([0] * (pos + 1 - len(self.f)))
        old = self.f[pos]
        self.f[pos] = value
        return old != value

    def last_one(self):
        for pos in range(len(self.f) - 1, -1, -1):
            if self.f[pos] == 1:
                return pos
        return -1

def marker_of(snapshot, x):
    vals, tail = snapshot
    return vals[x] if x < len(vals) else tail + (x - len(vals))

#%%
@dataclass
class BuildOutputLow:
    f: List[int]
    f_changes: List[Tuple[int, int, int, int]]
    markers: List[Tuple[Tuple[int, ...], int]]
    pointers: List[Tuple[int, ...]]
    trace: List[dict]
    satisfied: List[bool]
    g: List[Dict[int, int]]
    W: CeSchedule
    horizon: int
    errors: List[ErrorWitness] = field(default_factory=list)

    def marker(self, x, stage=None):
        return marker_of(self.markers[-1 if stage is None else stage], x)

    def metadata(self, upto=12):
        return {'construction': 'permitting',
                'horizon': self.horizon,
                'markers': [self.marker(x) for x in range(upto)],
                'requirements': [{'e': e, 'satisfied': sat, 'pointer': self.pointers[-1][e],
                                  'g': sorted([x, v] for x, v in self.g[e].items())}
                                 for e, sat in enumerate(self.satisfied)],
                'f': self.f}

class PermittingBuilder(object):
    """ Builds f, Turing equivalent to W, such that no catalog requirement
        is met by a pair of f-computable maps unless a punctual one exists.

        Each stage s: the least unsatisfied requirement spends s checks
        searching for an error at its pointer; an error at m_x records
        g_e(x) = W(x)[s], moves the pointer to m_{x+1} and initializes every
        lower priority requirement. Then every x entering W at s gives
        permission: the least unsatisfied e with an error at m_x acts by
        setting f on [m_x, s) to 1, and the markers above x move past every
        1 of f. With no such e, only f(m_x) is set to 1.

    Arguments:
        W: CeSchedule

        catalog: list of Requirement
    """
    def __init__(self, W, catalog):
        self.W = W
        self.catalog = list(catalog)

    def _initialize(self, st, e, start, s, trace):
        for k, e2 in enumerate(range(e + 1, len(st.catalog))):
            st.satisfied[e2] = False
            st.g[e2] = {}
            st.errors[e2] = set()
            st.pointer[e2] = start + k
            st.search[e2].reset()
            trace.append({'stage': s, 'event': 'init', 'e': e2, 'pointer': start + k})

    def _search(self, st, s, trace, witnesses):
        e = next((e for e, sat in enumerate(st.satisfied) if not sat), None)
        if e is None or s == 0:
            return
        wit = find_error(st, e, s)
        if wit is None:
            return
        x = wit.x
        st.g[e][x] = 1 if self.W.contains(x, s) else 0
        st.errors[e].add(x)
        st.pointer[e] = x + 1
        st.search[e].reset()
        witnesses.append(wit)
        trace.append(dict(wit.to_json(), event='error'))
        logger.debug('stage %d: R_%d error at m_%d=%d (%s on input %d)',
                     s, e, x, st.marker(x), wit.condition, wit.input)
        self._initialize(st, e, x + 2, s, trace)

    def _permit(self, st, s, x, trace, changes):
        e = next((e for e, sat in enumerate(st.satisfied)
                  if not sat and x in st.errors[e]), None)
        mx = st.marker(x)
        if e is None:
            if st.set_f(mx, 1):
                changes.append((s, mx, 1, x))
            trace.append({'stage': s, 'event': 'permit', 'x': x, 'position': mx})
            return
        for pos in range(mx, s):
            if st.set_f(pos, 1):
                changes.append((s, pos, 1, x))
        st.satisfied[e] = True
        trace.append({'stage': s, 'event': 'act', 'e': e, 'x': x, 'from': mx, 'to': s})
        logger.debug('stage %d: R_%d acts on x=%d, f[%d:%d] = 1', s, e, x, mx, s)
        self._initialize(st, e, st.pointer[e] + 1, s, trace)
        tail = max(s, st.last_one() + 1)
        st.vals = [st.marker(y) for y in range(x + 1)]
        st.tail_start = tail
        trace.append({'stage': s, 'event': 'move', 'above': x, 'tail': tail})
        for y in self.W.members(s):
            if y >= x:
                pos = st.marker(y)
                if st.set_f(pos, 1):
                    changes.append((s, pos, 1, y))

    def build(self, horizon, progress=False):
        st = PermitState(self.W, self.catalog)
        trace, changes, witnesses = [], [], []
        markers, pointers = [], []
        for s in tqdm(range(horizon), desc='permitting', disable=not progress):
            st.stage = s
            if len(st.f) < s + 1:
                st.f.extend([0] * (s + 1 - len(st.f)))
            self._search(st, s, trace, witnesses)
            for x in sorted(self.W.entering_at(s)):
                self._permit(st, s, x, trace, changes)
            markers.append(st.snapshot())
            pointers.append(tuple(st.pointer))
        logger.info('permitting: horizon=%d, %d errors, %d satisfied, %d f changes',
                    horizon, len(witnesses), sum(st.satisfied), len(changes))
        return BuildOutputLow(list(st.f), changes, markers, pointers, trace,
                              list(st.satisfied), [dict(g) for g in st.g],
                              self.W, horizon, witnesses)

def build_low(W, catalog, horizon=100, progress=False):
    return PermittingBuilder(W, catalog).build(horizon, progress)

#%%
@dataclass(frozen=True)
class PermitReport:
    w_mismatches: Tuple[Tuple[int, int, int], ...] = ()
    f_mismatches: Tuple[Tuple[int, int, int], ...] = ()
    permit_violations: Tuple[Tuple[int, int], ...] = ()
    inconclusive: bool = False

    @property
    def passed(self):
        return not (self.w_mismatches or self.f_mismatches or self.permit_violations)

    def summary(self):
        return {'passed': self.passed, 'inconclusive': self.inconclusive,
                'w_mismatches': [list(m) for m in self.w_mismatches],
                'f_mismatches': [list(m) for m in self.f_mismatches],
                'permit_violations': [list(v) for v in self.permit_violations]}

def _f_at(f, pos):
    return f[pos] if pos < len(f) else 0

def _w_prefix(W, stage, n):
    return frozenset(y for y in W.members(stage) if y < n)

def decode_w(out, W, x):
    """ W(x) read off f: the value f(m_x) takes after the least stage whose
        W-prefix below x agrees with f at m_y, y < x
    """
    known = frozenset(y for y in range(x) if _f_at(out.f, out.marker(y)) == 1)
    s = next((t for t in range(out.horizon) if _w_prefix(W, t, x) == known), None)
    if s is None:
        raise DecodeError('no stage below {0} shows the W-prefix below {1}'.format(
                          out.horizon, x))
    return _f_at(out.f, out.marker(x, s))

def verify_equiv(out, W, upto=12):
    """ Both reductions at the horizon.

        W from f: with m_y known for y < x, take the least stage s with
        W[s]|x = {y < x : f(m_y) = 1}; m_x is its value after stage s and
        f(m_x) must be W(x).
        f from W: f(y) after the least stage s with W[s]|(y+1) = W|(y+1)
        must be the final f(y).
        Permitting: every change of f(y) happens at a stage where some
        x <= y enters W.
    """
    horizon = out.horizon
    last = horizon - 1
    w_bad, f_bad, permit_bad = [], [], []
    for x in range(upto):
        truth = 1 if W.contains(x, last) else 0
        try:
            got = decode_w(out, W, x)
        except DecodeError:
            got = -1
        if got != truth:
            w_bad.append((x, got, truth))
    for y in range(min(upto, len(out.f))):
        final = _w_prefix(W, last, y + 1)
        s = next(t for t in range(horizon) if _w_prefix(W, t, y + 1) == final)
        value = 0
        for stage, pos, v, _ in out.f_changes:
            if pos == y and stage <= s:
                value = v
        if value != out.f[y]:
            f_bad.append((y, value, out.f[y]))
    for stage, pos, _, _ in out.f_changes:
        if not any(x <= pos for x in W.entering_at(stage)):
            permit_bad.append((stage, pos))
    return PermitReport(tuple(w_bad), tuple(f_bad), tuple(permit_bad),
                        not W.exhausted_by(horizon))

#%%
def pointer_violations(out):
    """ Stages at which pointers fail to increase strictly in e """
    return [s for s, p in enumerate(out.pointers)
            if any(b <= a for a, b in zip(p, p[1:]))]

def init_causes(out):
    """ (stage, e) of every initialization, paired with the index of the
        error or act by a higher priority requirement that caused it, or None
    """
    causes = []
    cause = None
    for ev in out.trace:
        if ev['event'] in ('error', 'act'):
            cause = (ev['stage'], ev['e'])
        elif ev['event'] == 'init':
            ok = cause is not None and cause[0] == ev['stage'] and cause[1] < ev['e']
            causes.append((ev['stage'], ev['e'], cause if ok else None))
    return causes
