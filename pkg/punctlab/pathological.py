#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Tue Oct 13 11:20:08 2026

@author: punctlab
"""

#%%
import logging
from collections import Counter
from dataclasses import dataclass, field
from math import isqrt
from typing import Dict, List, Tuple

from tqdm import tqdm

from .core.exceptions import BudgetExceeded, ConfigError, DecodeError, HorizonExceeded
from .core.machine import INJECTION, StageMachine, StructureLog
from .injection import emit_cycle
from .oracles import encode_tuple, run_scheme

logger = logging.getLogger(__name__)

#%%
class Opponent(object):
    """ Opponent structure B_e. At every sub-stage it is shown the orbit
        sizes A has enumerated so far (one tuple per sub-stage) and answers
        with the sizes of the closed orbits it enumerates at that sub-stage.
    """
    kind = 'opponent'

    def sizes_at(self, u, a_emitted):
        raise NotImplementedError

    def describe(self):
        return {'kind': self.kind}

class Copier(Opponent):
    """ Copies A's sub-stage u-delay at sub-stage u """
    kind = 'copier'

    def __init__(self, delay=1):
        if delay < 0:
            raise ConfigError('copier delay must be a natural')
        self.delay = delay

    def sizes_at(self, u, a_emitted):
        v = u - self.delay
        return list(a_emitted[v]) if 0 <= v < len(a_emitted) else []

    def describe(self):
        return {'kind': self.kind, 'delay': self.delay}

class SizeFaker(Copier):
    """ A copier that also reveals one orbit of a given size at sub-stage at """
    kind = 'faker'

    def __init__(self, at, size, delay=1):
        super().__init__(delay)
        if at < 0 or size < 1:
            raise ConfigError('faker needs at >= 0 and size >= 1')
        self.at = at
        self.size = size

    def sizes_at(self, u, a_emitted):
        out = super().sizes_at(u, a_emitted)
        if u == self.at:
            out.append(self.size)
        return out

    def describe(self):
        return {'kind': self.kind, 'at': self.at, 'size': self.size, 'delay': self.delay}

class SparseCopier(Opponent):
    """ Copies A's sub-stage v at sub-stage v + isqrt(v) + 1, so its lag
        grows without bound
    """
    kind = 'sparse'

    def sizes_at(self, u, a_emitted):
        for v in range(max(0, u - isqrt(u) - 2), u):
            if v + isqrt(v) + 1 == u and v < len(a_emitted):
                return list(a_emitted[v])
        return []

OPPONENTS = {'copier': Copier, 'faker': SizeFaker, 'sparse': SparseCopier}

def opponent_from_config(cfg):
    cfg = dict(cfg)
    kind = cfg.pop('kind', None)
    if kind not in OPPONENTS:
        raise ConfigError('unknown opponent kind {0!r}; choose from {1}'.format(
                          kind, sorted(OPPONENTS)))
    try:
        return OPPONENTS[kind](**cfg)
    except TypeError as err:
        raise ConfigError('opponent {0}: {1}'.format(kind, err))

#%%
class PathState(object):
    """ Markers, oracle d and orbit counts of the pathological construction.

    Arguments:
        schemes: list of OracleScheme, Psi_0, Psi_1, ...

        opponents: list of Opponent, B_0, B_1, ...

        g: ClockedFn, the function no scheme may compute from d

        levels: number of n- and s-markers kept
    """
    def __init__(self, schemes, opponents, g, levels=None):
        self.schemes = list(schemes)
        self.opponents = list(opponents)
        self.g = g
        levels = len(self.schemes) + 2 if levels is None else levels
        self.n = [i + 1 for i in range(levels)]
        self.s = list(range(levels))
        self.acted = {}
        self.d = {}
        self.count_a = Counter()
        self.count_b = [Counter() for _ in self.opponents]
        self.a_emitted = []
        self.b_emitted = [[] for _ in self.opponents]
        self.t = 0
        self.stage = 0

    @property
    def levels(self):
        return len(self.n)

    def oracle(self, stage):
        """ d|stage as an oracle on tuple codes; positions past it read () """
        def query(y):
            return encode_tuple(self.d.get(y, ())) if y < stage else 0
        return query

    def oversized(self, e):
        """ Least k >= n_e with more orbits of size k in B_e than in A """
        bad = [k for k, c in self.count_b[e].items() if k >= self.n[e] and c > self.count_a[k]]
        return min(bad) if bad else None

    def embeds_into_a(self, j):
        return all(c <= self.count_a[k] for k, c in self.count_b[j].items())

    def prefix_embeds(self, j, T):
        need = Counter(k for sizes in self.a_emitted[:T] for k in sizes)
        return all(c <= self.count_b[j][k] for k, c in need.items())

def disagreement(st, e, stage):
    """ Least x < stage with Psi_e^{d|stage}(x) != g(x), or None """
    if e >= len(st.schemes):
        return None
    oracle = st.oracle(stage)
    for x in range(stage):
        try:
            if run_scheme(st.schemes[e], oracle, x) != st.g.value(x):
                return x
        except BudgetExceeded:
            return x
    return None

def requires_attention(st, e, stage):
    """ 'Q' if Q_e was never acted for and B_e shows more orbits of some
        size k >= n_e than A, 'P' if Psi_e^{d|stage} currently equals g,
        else None. Schemes past the catalog always require attention.
    """
    if e < len(st.opponents) and e not in st.acted and st.oversized(e) is not None:
        return 'Q'
    if e >= len(st.schemes) or disagreement(st, e, stage) is None:
        return 'P'
    return None

#%%
@dataclass
class BuildOutputPath:
    log_a: StructureLog
    logs_b: List[StructureLog]
    d: Dict[int, Tuple[int, ...]]
    d_history: List[dict]
    trace: List[dict]
    markers: List[Tuple[Tuple[int, ...], Tuple[int, ...]]]
    stage_end: List[int]
    acted: Dict[int, Tuple[int, int, int]]
    a_emitted: List[Tuple[int, ...]]
    b_emitted: List[List[Tuple[int, ...]]] = field(default_factory=list)

    @property
    def n(self):
        return self.markers[-1][0]

    @property
    def s(self):
        return self.markers[-1][1]

    def metadata(self):
        return {'construction': 'pathological',
                'n': list(self.n), 's': list(self.s),
                'acted': dict((str(e), list(v)) for e, v in sorted(self.acted.items())),
                'stage_end': self.stage_end,
                'd': dict((str(x), list(v)) for x, v in sorted(self.d.items()))}

class PathologicalBuilder(object):
    """ Builds the injection structure A (finite orbits only) together with
        the tuple valued oracle d.

        The sub-stage counter t counts enumerations into A: every sub-stage
        A receives one closed orbit and every opponent takes one step.
        Level i enumerates orbits of size n_i while s_i is sought; d(x) for
        s_{i-1} < x < s_i has one entry per opponent j <= i, the sub-stage by
        which B_j has an orbit matching the one enumerated for x, or 0.
        d(s_i) is special: entry j is the sub-stage by which A as of stage
        s_i (and as of t_{i+1}, once Q_{i+1} acted) embeds into B_j.

    Arguments:
        schemes: list of OracleScheme

        opponents: list of Opponent, at most len(schemes)+1 of them

        g: ClockedFn

        max_substages: cap on the sub-stage counter; a wait that would pass
            it raises HorizonExceeded
    """
    def __init__(self, schemes, opponents, g, max_substages=50000):
        self._check_input(schemes, opponents, max_substages)
        self.schemes = list(schemes)
        self.opponents = list(opponents)
        self.g = g
        self.max_substages = max_substages

    def _check_input(self, schemes, opponents, max_substages):
        if len(opponents) > len(schemes) + 1:
            raise ConfigError('at most len(schemes)+1 opponents are supported')
        if max_substages < 1:
            raise ConfigError('max_substages must be positive')

    #%%
    def _event(self, event, **kw):
        kw.update(t=self.st.t, stage=self.st.stage, event=event)
        self.trace.append(kw)

    def _substage(self, size):
        st = self.st
        u = st.t
        self.A.begin()
        emit_cycle(self.A, size)
        self.A.commit()
        st.a_emitted.append((size,))
        st.count_a[size] += 1
        for j, (opp, B) in enumerate(zip(st.opponents, self.B)):
            sizes = opp.sizes_at(u, st.a_emitted)
            B.begin()
            for k in sizes:
                emit_cycle(B, k)
                st.count_b[j][k] += 1
            B.commit()
            st.b_emitted[j].append(tuple(sizes))
        st.t += 1

    def _current_level(self):
        st = self.st
        return next((i for i in range(st.levels) if st.s[i] >= st.stage), st.levels - 1)

    def _set_entry(self, x, value, cause):
        st = self.st
        value = tuple(value)
        old = st.d.get(x)
        if old == value:
            return
        st.d[x] = value
        self.history.append({'stage': st.stage, 't': st.t, 'x': x,
                             'old': list(old) if old is not None else None,
                             'new': list(value), 'cause': cause})
        self._event('entry', x=x, value=list(value), cause=cause)

    def _zero_from(self, j, start, cause):
        """ Zero the j-th entry of every d(x), x >= start, that has one """
        for x in sorted(self.st.d):
            v = self.st.d[x]
            if x >= start and len(v) > j and v[j] != 0:
                self._set_entry(x, v[:j] + (0,) + v[j + 1:], cause)

    def _kick(self, name, i):
        marks = getattr(self.st, name)
        for k in range(i + 1, len(marks)):
            new = max(marks[k], marks[k - 1] + 1)
            if new != marks[k]:
                self._event('kick', marker=name, level=k, old=marks[k], new=new)
                marks[k] = new

    def _initialize_above(self, i):
        for k in range(i + 1, self.st.levels):
            self.attempt[k] += 1

    #%%
    def _wait(self, j, done, size):
        """ Run sub-stages of the given size until done() holds (entry is the
            counter) or B_j stops embedding into A (entry is 0). A slow copy
            is waited for however long it lags; only max_substages ends it.
        """
        st = self.st
        while True:
            if not st.embeds_into_a(j):
                return 0
            if done():
                return st.t
            if st.t >= self.max_substages:
                raise HorizonExceeded('stage {0}: B_{1} still owes a copy after {2} sub-stages; '
                                      'raise max_substages'.format(st.stage, j, st.t))
            self._substage(size)

    def _special(self, i):
        """ (Re)compute the special entry d(s_i) at the start of a stage """
        st = self.st
        x = st.s[i]
        tag = ('special', i, self.attempt[i])
        fresh = self.level_of.get(x) != tag
        old = (None,) * (i + 1) if fresh else st.d[x]
        T = self.stage_end[x]
        if i + 1 in st.acted:
            T = max(T, st.acted[i + 1][1])
        size = st.n[self._current_level()]
        entries, raised, dropped = [], False, []
        for j in range(i + 1):
            if j >= len(st.opponents) or j in st.acted:
                val = 0
            elif fresh:
                val = self._wait(j, lambda: st.prefix_embeds(j, T), size)
            elif old[j] == 0:
                val = st.t if st.embeds_into_a(j) and st.prefix_embeds(j, T) else 0
                raised = raised or val != 0
            else:
                val = old[j]
            if val == 0 and (fresh or old[j] != 0):
                dropped.append(j)
            entries.append(val)
        self.level_of[x] = tag
        self._set_entry(x, entries, 'special')
        for j in dropped:
            self._zero_from(j, x + 1, 'special-zero')
        if raised:
            logger.debug('stage %d: special entry d(s_%d) became nonzero, initializing above',
                         st.stage, i)
            self._event('reinit', level=i + 1)
            self._initialize_above(i)
            st.s[i + 1] = max(st.s[i + 1], st.stage + 1)
            self._kick('s', i + 1)
            self._fill(i + 1)

    def _fill_one(self, i, x):
        st = self.st
        size = st.n[i]
        self._substage(size)
        c = st.count_a[size]
        entries = []
        for j in range(i + 1):
            zero = (j >= len(st.opponents) or j in st.acted or not st.embeds_into_a(j) or
                    any(len(v) > j and v[j] == 0 for y, v in st.d.items() if y < x))
            if zero:
                entries.append(0)
            else:
                entries.append(self._wait(j, lambda: st.count_b[j][size] >= c, size))
        self.level_of[x] = ('plain', i, self.attempt[i])
        self._set_entry(x, entries, 'fill')

    def _fill(self, i):
        st = self.st
        lo = st.s[i - 1] if i > 0 else -1
        for x in range(lo + 1, st.s[i]):
            if self.level_of.get(x) != ('plain', i, self.attempt[i]):
                self._fill_one(i, x)

    def _act(self, e):
        st = self.st
        k = st.oversized(e)
        seen = [st.n[e]] + list(st.count_a) + [s for c in st.count_b for s in c]
        old = st.n[e]
        st.n[e] = max(seen) + 1
        st.acted[e] = (st.stage, st.t, k)
        self._event('act', e=e, size=k, old=old, new=st.n[e])
        logger.debug('stage %d: acted for Q_%d on size %d, n_%d -> %d',
                     st.stage, e, k, e, st.n[e])
        self._kick('n', e)
        self._zero_from(e, st.s[e], 'act')

    def _attend(self, i):
        st = self.st
        s = st.stage
        new = max(s + 1, st.s[i])
        if new != st.s[i]:
            self._event('kick', marker='s', level=i, old=st.s[i], new=new)
            st.s[i] = new
        self._kick('s', i)
        self._initialize_above(i)
        self._fill(i)

    #%%
    def build(self, horizon, progress=False):
        self.st = st = PathState(self.schemes, self.opponents, self.g)
        self.A = StageMachine(INJECTION, self.max_substages)
        self.B = [StageMachine(INJECTION, self.max_substages) for _ in self.opponents]
        self.trace, self.history = [], []
        self.stage_end, markers = [], []
        self.level_of = {}
        self.attempt = [0] * st.levels
        diagonalized = set()
        for s in tqdm(range(horizon), desc='pathological', disable=not progress):
            st.stage = s
            for i in range(st.levels):
                if st.s[i] < s:
                    self._special(i)
            L = self._current_level()
            if L < len(st.schemes) and (L == 0 or st.s[L - 1] < s):
                x = disagreement(st, L, s)
                if x is not None and (L, self.attempt[L]) not in diagonalized:
                    diagonalized.add((L, self.attempt[L]))
                    self._event('diagonalized', e=L, input=x, s_e=st.s[L])
            for i in range(st.levels):
                eligible = i == 0 or st.s[i - 1] < s
                if i < len(st.opponents) and i not in st.acted and st.oversized(i) is not None:
                    self._event('attention', kind='Q', e=i)
                    self._act(i)
                    break
                if eligible and requires_attention(st, i, s) == 'P':
                    self._event('attention', kind='P', e=i)
                    self._attend(i)
                    break
            self.stage_end.append(st.t)
            markers.append((tuple(st.n), tuple(st.s)))
        if st.schemes and not any(e == 0 for e, _ in diagonalized):
            raise HorizonExceeded('horizon {0} is too small to settle s_0'.format(horizon))
        logger.info('pathological: horizon=%d, %d sub-stages, %d acts, |d|=%d',
                    horizon, st.t, len(st.acted), len(st.d))
        return BuildOutputPath(self.A.log, [B.log for B in self.B], dict(st.d),
                               self.history, self.trace, markers, self.stage_end,
                               dict(st.acted), list(st.a_emitted),
                               [list(b) for b in st.b_emitted])

def build_pathological(schemes, opponents, g, horizon=40, max_substages=50000,
                       progress=False):
    return PathologicalBuilder(schemes, opponents, g, max_substages).build(
           horizon, progress)

#%%
def decode_q(d, e, s_i, j):
    """ Sub-stage by which B_e holds an image of a_j, the j-th orbit A
        enumerated after stage s_i: the largest e-th entry of d(x) for
        s_i <= x <= s_i + 2(j+1) + 1
    """
    bound = 0
    for x in range(s_i, s_i + 2 * (j + 1) + 2):
        entry = d.get(x, ())
        if len(entry) <= e or entry[e] == 0:
            raise DecodeError('d({0}) has no nonzero entry {1}'.format(x, e))
        bound = max(bound, entry[e])
    return bound

def q_bound_holds(out, e, s_i, j):
    """ Whether B_e, after decode_q's bound many sub-stages, has at least as
        many orbits of a_j's size as A had once a_j was enumerated
    """
    bound = decode_q(out.d, e, s_i, j)
    after = [(v, k) for v, sizes in enumerate(out.a_emitted)
             if v >= out.stage_end[s_i] for k in sizes]
    if j >= len(after):
        raise DecodeError('A enumerated fewer than {0} orbits after stage {1}'.format(j + 1, s_i))
    v, size = after[j]
    need = sum(sizes.count(size) for sizes in out.a_emitted[:v + 1])
    have = sum(sizes.count(size) for sizes in out.b_emitted[e][:bound])
    return have >= need

#%%
def marker_violations(out):
    """ Stages where n or s fails to increase in the level, or a marker
        moved down since the previous stage
    """
    bad = []
    prev = None
    for stage, (n, s) in enumerate(out.markers):
        for name, marks in (('n', n), ('s', s)):
            if any(b <= a for a, b in zip(marks, marks[1:])):
                bad.append((stage, name, 'order'))
        if prev is not None:
            for name, now, before in (('n', n, prev[0]), ('s', s, prev[1])):
                if any(a < b for a, b in zip(now, before)):
                    bad.append((stage, name, 'decrease'))
        prev = (n, s)
    return bad

def act_counts(out):
    return Counter(ev['e'] for ev in out.trace if ev['event'] == 'act')

def retired_size_violations(out):
    """ Orbits of A whose size was retired by an earlier act """
    bad = []
    for e, (_, t, k) in out.acted.items():
        for v in range(t, len(out.a_emitted)):
            if k in out.a_emitted[v]:
                bad.append((e, k, v))
    return bad

def permanence_violations(out):
    """ Changes of a nonzero j-th entry of d(x) not explained by the j-th
        entry of some d(y), y < x, turning 0 at the same stage, an act for
        Q_j, or a re-initialization of the level holding x
    """
    zeroed, acted_at = set(), set()
    for h in out.d_history:
        old, new = h['old'] or [], h['new']
        for j in range(len(new)):
            if new[j] == 0 and (j >= len(old) or old[j] != 0):
                zeroed.add((h['stage'], j, h['x']))
    for e, (stage, _, _) in out.acted.items():
        acted_at.add((stage, e))
    bad = []
    for h in out.d_history:
        old, new = h['old'], h['new']
        if old is None or h['cause'] in ('fill', 'special'):
            continue
        stage, x = h['stage'], h['x']
        for j in range(min(len(old), len(new))):
            if old[j] == 0 or old[j] == new[j]:
                continue
            if (stage, j) in acted_at or any((stage, j, y) in zeroed for y in range(x)):
                continue
            bad.append((stage, x, j, old[j], new[j]))
    return bad

def diagonalized_schemes(out):
    return sorted(set(ev['e'] for ev in out.trace if ev['event'] == 'diagonalized'))

def undiagonalized(out, n_schemes):
    """ Schemes whose level settled before the horizon (s_e was reached as a
        stage) without a witnessed disagreement
    """
    seen = set(diagonalized_schemes(out))
    return [e for e in range(n_schemes)
            if e < len(out.s) and out.s[e] < len(out.markers) and e not in seen]

def q_bound_failures(out, levels=6):
    """ (e, j) for which B_e, an opponent Q_e never acted on, lacks a_j after
        decode_q's bound. Levels are tried upwards and end at the first j the
        oracle cannot decode.
    """
    bad = []
    for e in range(len(out.logs_b)):
        if e in out.acted or e >= len(out.s):
            continue
        for j in range(levels):
            try:
                holds = q_bound_holds(out, e, out.s[e], j)
            except DecodeError:
                break
            if not holds:
                bad.append((e, j))
    return bad
