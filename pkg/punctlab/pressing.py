#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Wed Oct 14 15:06:51 2026

@author: punctlab
"""

#%%
import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from math import isqrt
from typing import Dict, List, Optional, Tuple

from networkx.algorithms import isomorphism

from .core.exceptions import (ConfigError, DecodeError, HorizonExceeded,
                              InvariantViolation, PremiseError)
from .core.machine import Signature, StageMachine, StructureLog, run_lockstep
from .injection import truncation_graph
from .oracles import CeSchedule, eval_clocked, unpair

logger = logging.getLogger(__name__)

SIGNATURE = Signature(('S', 'P', 'R', 'C'))

ACTIVE, PENDING, INACTIVE = 'active', 'pending', 'inactive'

#%%
def size_bound(e):
    """ M_e = 4e """
    return 4 * e

def m_table(upto):
    return [size_bound(e + 1) for e in range(upto)]

def cycle_return(value, root, bound):
    """ Least 0 < m <= bound with C^m(root) = root. Returns 0 when C^m(root)
        is defined and differs from root for every such m, and None when C is
        still undefined somewhere along the way. value(symbol, x) reads a map.
    """
    x = root
    for m in range(1, bound + 1):
        x = value('C', x)
        if x is None:
            return None
        if x == root:
            return m
    return 0

#%%
@dataclass
class Component:
    """ The e-th component: spine[i][j] = b_{e,i,j}, and once switched the
        duplicate dup[i][j] = d_{e,i,j} and the tail tail[i][j] = t_{e,i,j}
    """
    e: int
    size: int
    started_at: int
    spine: List[List[int]] = field(default_factory=list)
    closed_at: Optional[int] = None
    ready_at: Optional[int] = None
    switched_at: Optional[int] = None
    dup: List[List[int]] = field(default_factory=list)
    tail: List[List[int]] = field(default_factory=list)
    tail_size: Optional[int] = None
    tail_closed_at: Optional[int] = None

    @property
    def closed(self):
        return self.closed_at is not None

    @property
    def switched(self):
        return self.switched_at is not None

    @property
    def tail_closed(self):
        return self.tail_closed_at is not None

    @property
    def root(self):
        return self.spine[0][0]

    @property
    def dup_root(self):
        return self.dup[0][0] if self.dup else None

    def n_elements(self):
        return sum(len(node) for node in self.spine)

    def row(self):
        return {'e': self.e, 'x_e': self.size, 'y_e': self.tail_size,
                'root': self.root, 'nodes': len(self.spine),
                'started': self.started_at, 'closed': self.closed_at,
                'ready': self.ready_at, 'switched': self.switched_at,
                'tail_closed': self.tail_closed_at}

#%%
@dataclass
class SizePool:
    """ Cycle sizes of B: xs[e] of component e, ys[e] of the e-th tail, and
        sizes retired by opponents (size -> opponent index). Every allocation
        is recorded as (kind, e, size, bound, stage).
    """
    xs: Dict[int, int] = field(default_factory=dict)
    ys: Dict[int, int] = field(default_factory=dict)
    retired: Dict[int, int] = field(default_factory=dict)
    allocations: List[Tuple[str, int, int, int, int]] = field(default_factory=list)

    def used(self):
        return set(self.xs.values()) | set(self.ys.values())

    def unavailable(self):
        return self.used() | set(self.retired)

    def allocate(self, kind, e, bound, stage):
        taken = self.unavailable()
        size = 1
        while size in taken:
            size += 1
        if size >= bound:
            raise InvariantViolation('no {0}-size below {1} is available for e={2}'.format(
                                     kind, bound, e))
        (self.xs if kind == 'x' else self.ys)[e] = size
        self.allocations.append((kind, e, size, bound, stage))
        return size

    def retire(self, size, n):
        if size not in self.retired:
            self.retired[size] = n

#%%
@dataclass(frozen=True)
class OpponentStatus:
    state: str = ACTIVE
    witness: Optional[int] = None
    level: Optional[int] = None
    reason: str = ''
    stage: int = 0

    def to_json(self):
        return {'state': self.state, 'witness': self.witness, 'level': self.level,
                'reason': self.reason, 'stage': self.stage}

#%%
@dataclass(frozen=True)
class GTable:
    """ g(<0,x>) is the stage x enters W (-1 if never), g(<k+1,x>) the
        stage p_k(x) converges (-1 past the catalog)
    """
    W: CeSchedule
    catalog: Tuple = ()

    def __call__(self, n):
        k, x = unpair(n)
        if k == 0:
            s = self.W.entry_stage(x)
            return -1 if s is None else s
        if k - 1 < len(self.catalog):
            return self.catalog[k - 1].convergence(x)
        return -1

    def rows(self, upto):
        return [self(n) for n in range(upto)]

#%%
class PressOpponent(object):
    """ Opponent B_n over {S,P,R,C}: a copy of B lagging delay stages, each
        copied stage enumerated in B's order (or reversed), plus whatever
        extra() adds.
    """
    kind = 'copier'

    def __init__(self, delay=1, reverse=False):
        if delay < 1:
            raise ConfigError('opponent delay must be at least 1')
        self.delay = delay
        self.reverse = bool(reverse)

    def source_stage(self, s):
        """ Stage of B copied at stage s, or None """
        return s - self.delay

    def step(self, run, b_log, s):
        v = self.source_stage(s)
        if v is not None and 0 <= v < len(b_log):
            ev = b_log.events[v]
            for el in (reversed(ev.new) if self.reverse else ev.new):
                run.tr[el] = run.machine.fresh()
            for sym, src, tgt in ev.assign:
                run.machine.assign(sym, run.tr[src], run.tr[tgt])
        self.extra(run, s)

    def extra(self, run, s):
        pass

    def describe(self):
        return {'kind': self.kind, 'delay': self.delay, 'reverse': self.reverse}

class FakeCycle(PressOpponent):
    """ Copier that enumerates count closed standalone cycles of a given size
        at stage at
    """
    kind = 'fake-cycle'

    def __init__(self, at, size, count=1, delay=1, reverse=False):
        super().__init__(delay, reverse)
        if at < 0 or size < 1 or count < 1:
            raise ConfigError('fake-cycle needs at >= 0, size >= 1 and count >= 1')
        self.at = at
        self.size = size
        self.count = count

    def extra(self, run, s):
        if s != self.at:
            return
        m = run.machine
        for _ in range(self.count):
            els = [m.fresh() for _ in range(self.size)]
            for j, el in enumerate(els):
                m.assign('C', el, els[(j + 1) % self.size])
                m.assign('R', el, els[0])
                m.assign('P', el, el)
                m.assign('S', el, els[0])

    def describe(self):
        d = super().describe()
        d.update(at=self.at, size=self.size, count=self.count)
        return d

class InfiniteWitness(PressOpponent):
    """ Copier that from stage at grows a C-chain by one element per stage
        whose root never closes
    """
    kind = 'infinite-cycle'

    def __init__(self, at, delay=1, reverse=False):
        super().__init__(delay, reverse)
        if at < 0:
            raise ConfigError('infinite-cycle needs at >= 0')
        self.at = at

    def extra(self, run, s):
        if s < self.at:
            return
        m = run.machine
        el = m.fresh()
        root = run.scratch.setdefault('root', el)
        if 'tip' in run.scratch:
            m.assign('C', run.scratch['tip'], el)
        m.assign('R', el, root)
        m.assign('P', el, el)
        m.assign('S', el, root)
        run.scratch['tip'] = el

    def describe(self):
        d = super().describe()
        d.update(at=self.at)
        return d

class SparseCopy(PressOpponent):
    """ Copies B's stage v at stage v + isqrt(v) + 1, so its lag grows without
        bound while the copy stays faithful
    """
    kind = 'sparse'

    def __init__(self, reverse=False):
        super().__init__(1, reverse)

    def source_stage(self, s):
        for v in range(max(0, s - isqrt(s) - 2), s):
            if v + isqrt(v) + 1 == s:
                return v
        return None

    def describe(self):
        return {'kind': self.kind, 'reverse': self.reverse}

PRESS_OPPONENTS = {'copier': PressOpponent, 'fake-cycle': FakeCycle,
                   'infinite-cycle': InfiniteWitness,
                   'sparse': SparseCopy}

def press_opponent_from_config(cfg):
    cfg = dict(cfg)
    kind = cfg.pop('kind', None)
    if kind not in PRESS_OPPONENTS:
        raise ConfigError('unknown pressing opponent {0!r}; choose from {1}'.format(
                          kind, sorted(PRESS_OPPONENTS)))
    try:
        return PRESS_OPPONENTS[kind](**cfg)
    except TypeError as err:
        raise ConfigError('opponent {0}: {1}'.format(kind, err))

#%%
class OpponentRun(object):
    """ Live state of one opponent during a build: its machine, the copy
        translation, its status and what is known about its roots
    """
    def __init__(self, opponent, horizon):
        self.opponent = opponent
        self.machine = StageMachine(SIGNATURE, horizon)
        self.tr = {}
        self.scratch = {}
        self.status = OpponentStatus()
        self.members = Counter()
        self.cycles = {}
        self._seen = 0

    def absorb(self):
        """ Read R-assignments of committed stages not seen yet """
        events = self.machine.log.events
        for ev in events[self._seen:]:
            for sym, src, tgt in ev.assign:
                if sym == 'R':
                    self.members[tgt] += 1
        self._seen = len(events)

    def cycle(self, root, bound):
        if root in self.cycles:
            return self.cycles[root]
        m = cycle_return(self.machine.value, root, bound)
        if m:
            self.cycles[root] = m
        return m

    def has_root(self, size):
        return any(m == size for m in self.cycles.values())

#%%
class PressState(object):
    """ Everything the classification needs: the size pool, the components
        and the opponent runs
    """
    def __init__(self, opponents, horizon):
        self.pool = SizePool()
        self.components = []
        self.runs = [OpponentRun(o, horizon) for o in opponents]
        self.trace = []
        self.stage = 0

    def size_limits(self):
        """ Most elements B will ever have below a root of each closed size """
        limits = {}
        for comp in self.components:
            if comp.closed:
                limits[comp.size] = 2 * comp.n_elements()
            if comp.tail_closed:
                limits[comp.tail_size] = sum(len(node) for node in comp.tail)
        return limits

def _set_status(st, n, status):
    run = st.runs[n]
    if status != run.status:
        run.status = status
        ev = status.to_json()
        ev.update(event=status.state, n=n, stage=st.stage)
        st.trace.append(ev)
        logger.debug('stage %d: opponent %d is %s %s', st.stage, n, status.state, status.reason)
    return status

def classify_opponent(st, n, e, stage):
    """ Re-examine opponent n at level e against the bound M_{e+1}.

        A root closing at some m <= M_{e+1} that B does not use retires m and
        makes the opponent inactive; so does holding more elements below
        roots of a closed size than B ever will. Otherwise a root with no
        return within the bound makes it pending at level e.
    """
    run = st.runs[n]
    if run.status.state == INACTIVE:
        return run.status
    run.absorb()
    bound = size_bound(e + 1)
    used = st.pool.used()
    witness = None
    for root in sorted(run.members):
        m = run.cycle(root, bound)
        if m is None:
            continue
        if m == 0:
            if witness is None:
                witness = root
            continue
        if m not in used:
            st.pool.retire(m, n)
            return _set_status(st, n, OpponentStatus(INACTIVE, root, e,
                                                     'size {0}'.format(m), stage))
    counts = Counter()
    for root, m in run.cycles.items():
        counts[m] += run.members[root]
    for size, limit in st.size_limits().items():
        if counts[size] > limit:
            return _set_status(st, n, OpponentStatus(
                INACTIVE, None, e, 'multiplicity {0}x{1}'.format(counts[size], size), stage))
    old = run.status
    if witness is not None:
        level = e if old.state != PENDING else max(old.level, e)
        if old.state == PENDING and old.witness == witness and old.level == level:
            return old
        return _set_status(st, n, OpponentStatus(PENDING, witness, level, 'witness', stage))
    if old.state == PENDING and old.witness in run.cycles:
        return _set_status(st, n, replace(old, state=ACTIVE, witness=None,
                                          reason='witness closed', stage=stage))
    return old

#%%
@dataclass
class BuildOutputPressing:
    log_b: StructureLog
    log_b2: StructureLog
    logs_opp: List[StructureLog]
    components: List[Component]
    pool: SizePool
    statuses: List[OpponentStatus]
    labels: Dict[int, Tuple[str, int, int, int]]
    trace: List[dict]
    open_counts: List[int]
    gtable: GTable
    horizon: int
    _truncations: Dict[str, object] = field(default_factory=dict, repr=False)

    def truncation(self, which='b'):
        if which not in self._truncations:
            log = self.log_b if which == 'b' else self.log_b2
            self._truncations[which] = log.truncate()
        return self._truncations[which]

    def component(self, e):
        if e >= len(self.components):
            raise DecodeError('component {0} was not built before the horizon'.format(e))
        return self.components[e]

    def component_table(self):
        return [c.row() for c in self.components]

    def metadata(self):
        return {'construction': 'pressing',
                'components': self.component_table(),
                'M': m_table(len(self.components)),
                'sizes': {'x': dict((str(e), v) for e, v in sorted(self.pool.xs.items())),
                          'y': dict((str(e), v) for e, v in sorted(self.pool.ys.items())),
                          'retired': dict((str(k), v) for k, v in sorted(self.pool.retired.items()))},
                'statuses': [s.to_json() for s in self.statuses],
                'g': self.gtable.rows(8)}

#%%
class PressingBuilder(object):
    """ Builds B and B' over {S,P,R,C} component by component.

        At the end of every stage exactly one component or tail is open, its
        last spine node still waiting for S. Each stage the open item either
        closes (every non-inactive opponent n <= e/2 shows its root, or a
        witness if pending) or grows one more spine node. Once everything is
        closed the least ready component is switched: a duplicate is added
        and a tail whose P-edges are crossed between B and B'. Otherwise the
        next component starts.

    Arguments:
        W: CeSchedule

        catalog: list of ClockedFn, p_0, p_1, ...

        opponents: list of PressOpponent

    Methods:
        @build
    """
    def __init__(self, W, catalog=(), opponents=()):
        self._check_input(W, catalog, opponents)
        self.W = W
        self.catalog = tuple(catalog)
        self.opponents = list(opponents)

    def _check_input(self, W, catalog, opponents):
        if not isinstance(W, CeSchedule):
            raise ConfigError('W must be a CeSchedule')
        if any(not isinstance(o, PressOpponent) for o in opponents):
            raise ConfigError('opponents must be pressing opponents')

    #%%
    def _event(self, event, **kw):
        kw.update(stage=self.st.stage, event=event)
        self.st.trace.append(kw)

    def _fresh(self):
        el = self.B.fresh()
        if self.B2.fresh() != el:
            raise InvariantViolation('B and B\' enumerated different elements')
        return el

    def _assign(self, sym, src, tgt, tgt2=None):
        self.B.assign(sym, src, tgt)
        self.B2.assign(sym, src, tgt if tgt2 is None else tgt2)

    def _node(self, family, e, i, size, root=None):
        """ One spine node: a C-cycle of the given size with R to root (its
            own first element if none) and P the identity. S is left open.
        """
        els = [self._fresh() for _ in range(size)]
        root = els[0] if root is None else root
        for j, el in enumerate(els):
            self.labels[el] = (family, e, i, j)
            self._assign('C', el, els[(j + 1) % size])
            self._assign('R', el, root)
        return els

    def _identity_p(self, els):
        for el in els:
            self._assign('P', el, el)

    #%%
    def _level(self):
        kind, comp = self.open
        return comp.e if kind == 'component' else len(self.st.components) - 1

    def _classify(self, level):
        st = self.st
        for n in range(min(len(st.runs), level // 2 + 1)):
            classify_opponent(st, n, level, st.stage)

    def _covered(self, e, size, level):
        """ Every non-inactive opponent n <= e/2 has a root of this size, or
            a witness at level >= level if pending
        """
        for run in self.st.runs[:e // 2 + 1]:
            status = run.status
            if status.state == INACTIVE:
                continue
            if status.state == PENDING:
                if status.level is None or status.level < level:
                    return False
            elif not run.has_root(size):
                return False
        return True

    def _ready(self, comp):
        e, s = comp.e, self.st.stage
        if e % 2 == 0:
            nxt = e + 2
            return nxt < len(self.st.components) and self.st.components[nxt].closed
        k, x = unpair((e - 1) // 2)
        if k == 0:
            return self.W.contains(x, s)
        return k - 1 < len(self.catalog) and eval_clocked(self.catalog[k - 1], x, s) is not None

    #%%
    def _start(self, e):
        st = self.st
        self._classify(e)
        size = st.pool.allocate('x', e, size_bound(e + 1), st.stage)
        comp = Component(e, size, st.stage)
        node = self._node('b', e, 0, size)
        self._identity_p(node)
        comp.spine.append(node)
        st.components.append(comp)
        self.open = ('component', comp)
        self._event('start', e=e, size=size, root=node[0])
        logger.debug('stage %d: component %d started with cycle size %d', st.stage, e, size)

    def _grow(self, nodes, family, e, size, root):
        node = self._node(family, e, len(nodes), size, root)
        self._identity_p(node)
        for el in nodes[-1]:
            self._assign('S', el, node[0])
        nodes.append(node)

    def _close(self, nodes):
        for el in nodes[-1]:
            self._assign('S', el, nodes[-1][0])

    def _switch(self, comp):
        st = self.st
        top = len(st.components) - 1
        self._classify(top)
        y = st.pool.allocate('y', comp.e, size_bound(top + 1), st.stage)
        e = comp.e
        dup, droot = [], None
        for i, node in enumerate(comp.spine):
            els = [self._fresh() for _ in node]
            droot = els[0] if droot is None else droot
            for j, el in enumerate(els):
                self.labels[el] = ('d', e, i, j)
                self._assign('C', el, els[(j + 1) % len(els)])
                self._assign('R', el, droot)
            self._identity_p(els)
            dup.append(els)
        for i, els in enumerate(dup):
            target = dup[i + 1][0] if i + 1 < len(dup) else els[0]
            for el in els:
                self._assign('S', el, target)
        t0 = self._node('t', e, 0, y)
        t1 = self._node('t', e, 1, y, t0[0])
        self._assign('P', t0[0], comp.root, droot)
        self._assign('P', t1[0], droot, comp.root)
        self._identity_p(t0[1:] + t1[1:])
        for el in t0:
            self._assign('S', el, t1[0])
        comp.dup, comp.tail, comp.tail_size = dup, [t0, t1], y
        comp.switched_at = st.stage
        self.open = ('tail', comp)
        self._event('switch', e=e, y=y, tail_root=t0[0], dup_root=droot)
        logger.debug('stage %d: switched component %d, tail size %d', st.stage, e, y)

    def _settle(self):
        st = self.st
        kind, comp = self.open
        if kind == 'component':
            if self._covered(comp.e, comp.size, comp.e):
                self._close(comp.spine)
                comp.closed_at = st.stage
                self._event('close', e=comp.e, nodes=len(comp.spine))
                self.open = None
            else:
                self._grow(comp.spine, 'b', comp.e, comp.size, comp.root)
                self._event('extend', e=comp.e, nodes=len(comp.spine))
        else:
            top = len(st.components) - 1
            if self._covered(comp.e, comp.tail_size, top):
                self._close(comp.tail)
                comp.tail_closed_at = st.stage
                self._event('tail-close', e=comp.e, nodes=len(comp.tail))
                self.open = None
            else:
                self._grow(comp.tail, 't', comp.e, comp.tail_size, comp.tail[0][0])
                self._event('tail-extend', e=comp.e, nodes=len(comp.tail))

    def _next(self):
        st = self.st
        for comp in st.components:
            if comp.closed and comp.ready_at is None and self._ready(comp):
                comp.ready_at = st.stage
                self._event('ready', e=comp.e)
        ready = [c for c in st.components if c.ready_at is not None and not c.switched]
        if ready:
            self._switch(ready[0])
        else:
            self._start(len(st.components))

    #%%
    def build(self, horizon, progress=False):
        self.st = st = PressState(self.opponents, horizon)
        self.B = StageMachine(SIGNATURE, horizon)
        self.B2 = StageMachine(SIGNATURE, horizon)
        self.labels = {}
        self.open = None
        open_counts = []

        def step(s):
            st.stage = s
            if self.open is None:
                self._start(0)
            else:
                self._classify(self._level())
                self._settle()
                if self.open is None:
                    self._next()
            for run in st.runs:
                run.opponent.step(run, self.B.log, s)
            open_counts.append(sum(1 for c in st.components if not c.closed) +
                               sum(1 for c in st.components if c.switched and not c.tail_closed))

        run_lockstep([self.B, self.B2] + [r.machine for r in st.runs], step, horizon,
                     progress, desc='pressing')
        if not st.components or not st.components[0].closed:
            raise HorizonExceeded('horizon {0} is too small to close component 0'.format(horizon))
        logger.info('pressing: horizon=%d, |B|=%d, %d components, %d switches',
                    horizon, self.B.size, len(st.components),
                    sum(1 for c in st.components if c.switched))
        return BuildOutputPressing(self.B.log, self.B2.log, [r.machine.log for r in st.runs],
                                   list(st.components), st.pool,
                                   [r.status for r in st.runs], dict(self.labels),
                                   st.trace, open_counts,
                                   GTable(self.W, self.catalog), horizon)

def build_pressing(W, catalog=(), opponents=(), horizon=200, progress=False):
    return PressingBuilder(W, catalog, opponents).build(horizon, progress)

#%%
def canonical_iso(out):
    """ B -> B': the identity except that every switched component is
        exchanged with its duplicate
    """
    f = dict((el, el) for el in range(out.log_b.size_at()))
    for comp in out.components:
        if comp.switched:
            for node, dnode in zip(comp.spine, comp.dup):
                for b, d in zip(node, dnode):
                    f[b], f[d] = d, b
    return f

def brute_force_isos(out, limit=None):
    """ Every isomorphism between the final truncations of B and B', found
        by networkx's VF2 matcher on the labelled functional multigraphs
    """
    G1 = truncation_graph(out.truncation('b'))
    G2 = truncation_graph(out.truncation('b2'))
    match = isomorphism.categorical_multiedge_match('label', None)
    gm = isomorphism.MultiDiGraphMatcher(G1, G2, edge_match=match)
    found = []
    for m in gm.isomorphisms_iter():
        found.append(dict(m))
        if limit is not None and len(found) >= limit:
            break
    return found

#%%
def _image(f, f_inv, comp, out):
    img = f(comp.root)
    if f_inv(img) != comp.root:
        raise DecodeError('f_inv(f(b_{{{0},0,0}})) is not b_{{{0},0,0}}'.format(comp.e))
    if comp.switched:
        t0 = comp.tail[0][0]
        expected = out.truncation('b2').apply('P', f(t0))
        if img != expected:
            raise DecodeError('f(b_{{{0},0,0}}) = {1} but P(f(t_{{{0},0,0}})) = {2}; '
                              'f breaks the tail'.format(comp.e, img, expected))
    return img

def _below(out, e, bound):
    comp = out.component(e)
    if comp.root >= bound:
        raise DecodeError('b_{{{0},0,0}} = {1} is not below the bound {2}'.format(
                          e, comp.root, bound))
    return comp

def decode_g(f, f_inv, x, W, catalog, out):
    """ g(x) from an isomorphism f: B -> B' and its inverse.

        For e <= x, f(b_{2e,0,0}) is the duplicate root d'_{2e,0,0}, which was
        enumerated only after component 2e+2 closed, so the construction
        replayed below that index locates b_{2e+2,0,0}, and at e = x also
        b_{2x+1,0,0}. Then f(b_{2x+1,0,0}) bounds the stage at which the
        event coded by x happened; W or the catalog is replayed up to it.
    """
    bound = _image(f, f_inv, out.component(0), out)
    for e in range(x):
        comp = _below(out, 2 * e + 2, bound)
        bound = _image(f, f_inv, comp, out)
    odd = _below(out, 2 * x + 1, bound)
    bound = _image(f, f_inv, odd, out)
    k, y = unpair(x)
    if k == 0:
        s = W.entry_stage(y)
        return s if s is not None and s <= bound else -1
    if k - 1 >= len(catalog):
        return -1
    c = catalog[k - 1].convergence(y)
    if c > bound:
        raise DecodeError('p_{0}({1}) converges at {2}, past the bound {3}'.format(
                          k - 1, y, c, bound))
    return c

def decodable(out, x):
    """ Whether the build went far enough for decode_g at x: components
        0, 2, .., 2x switched and the event coded by x settled either way
    """
    if 2 * x + 2 >= len(out.components):
        return False
    if not all(out.components[2 * e].switched for e in range(x + 1)):
        return False
    odd = out.components[2 * x + 1]
    return odd.switched or out.gtable(x) <= odd.root

#%%
def _walk(t, root, size):
    """ Spine from root: list of nodes, each the C-cycle of its first
        element. None unless every node is complete and S closes the spine.
    """
    nodes = []
    node = root
    while len(nodes) <= t.size:
        cyc = [node]
        for _ in range(size - 1):
            nxt = t.apply('C', cyc[-1])
            if nxt is None:
                return None
            cyc.append(nxt)
        if t.apply('C', cyc[-1]) != node:
            return None
        nodes.append(cyc)
        nxt = t.apply('S', node)
        if nxt is None:
            return None
        if nxt == node:
            return nodes
        node = nxt
    return None

def _roots_of_size(t, size):
    roots = set(t.maps['R'].values())
    return sorted(r for r in roots if t.apply('R', r) == r and
                  cycle_return(t.apply, r, size) == size)

def local_structure(t, comp):
    """ Positions ('b'|'d'|'t', i, j) -> element of the e-th component, its
        duplicate and its tail inside a truncation, identified by cycle sizes
        and the tail's P-edges alone. None while incomplete.
    """
    out = {}
    if comp.switched:
        tails = _roots_of_size(t, comp.tail_size)
        if len(tails) != 1:
            return None
        t0 = tails[0]
        t1 = t.apply('S', t0)
        starts = (('b', t.apply('P', t0)), ('d', t.apply('P', t1) if t1 is not None else None),
                  ('t', t0))
    else:
        roots = _roots_of_size(t, comp.size)
        if len(roots) != 1:
            return None
        starts = (('b', roots[0]),)
    for family, root in starts:
        if root is None:
            return None
        size = comp.tail_size if family == 't' else comp.size
        nodes = _walk(t, root, size)
        if nodes is None:
            return None
        for i, node in enumerate(nodes):
            for j, el in enumerate(node):
                out[(family, i, j)] = el
    return out

def recover_iso(out, m, n, e):
    """ Isomorphism between the e-th local structures (component, duplicate
        and tail) of opponents B_m and B_n. The search starts at the stage the
        e-th tail closed in B, or the component itself if never switched,
        and takes the first stage at which both opponents hold the whole
        local structure.
    """
    for k in (m, n):
        if k >= len(out.statuses):
            raise PremiseError('there is no opponent {0}'.format(k))
        if out.statuses[k].state != ACTIVE:
            raise PremiseError('opponent {0} is {1}'.format(k, out.statuses[k].state))
    if e < 2 * max(m, n) + 2:
        raise PremiseError('component {0} is below 2*{1}+2'.format(e, max(m, n)))
    if e >= len(out.components):
        raise PremiseError('component {0} was not built'.format(e))
    comp = out.components[e]
    start = comp.tail_closed_at if comp.switched else comp.closed_at
    if start is None:
        raise PremiseError('component {0} is still open in B'.format(e))
    for stage in range(start, out.horizon):
        lm = local_structure(out.logs_opp[m].truncate(stage), comp)
        ln = lm if m == n else local_structure(out.logs_opp[n].truncate(stage), comp)
        if lm is not None and ln is not None:
            logger.debug('recover_iso: component %d found in B_%d and B_%d at stage %d',
                         e, m, n, stage)
            return dict((lm[pos], ln[pos]) for pos in lm)
    raise PremiseError('component {0} never completed in B_{1} and B_{2}'.format(e, m, n))

def homomorphism_violations(mapping, ta, tb):
    """ (symbol, x) with F(mapping(x)) != mapping(F(x)) on the mapped part """
    bad = []
    for sym in SIGNATURE:
        for src, img in sorted(mapping.items()):
            a = ta.apply(sym, src)
            if a is None:
                continue
            if a not in mapping or mapping[a] != tb.apply(sym, img):
                bad.append((sym, src))
    return bad

#%%
def mirror_diff(log_b, log_b2):
    """ (stage, symbol, source, target in B, target in B') for every
        assignment on which the two logs disagree
    """
    diff = []
    for ev, ev2 in zip(log_b.events, log_b2.events):
        if ev.new != ev2.new:
            raise InvariantViolation('B and B\' enumerate different elements at stage {0}'.format(
                                     ev.stage))
        a = dict(((sym, src), tgt) for sym, src, tgt in ev.assign)
        a2 = dict(((sym, src), tgt) for sym, src, tgt in ev2.assign)
        for key in sorted(set(a) | set(a2)):
            if a.get(key) != a2.get(key):
                diff.append((ev.stage, key[0], key[1], a.get(key), a2.get(key)))
    return diff

def crossed_edges(out):
    edges = []
    for comp in out.components:
        if comp.switched:
            t0, t1 = comp.tail[0][0], comp.tail[1][0]
            edges.append((comp.switched_at, 'P', t0, comp.root, comp.dup_root))
            edges.append((comp.switched_at, 'P', t1, comp.dup_root, comp.root))
    return sorted(edges)

def mirror_violations(out):
    diff = set(mirror_diff(out.log_b, out.log_b2))
    expected = set(crossed_edges(out))
    return sorted(diff ^ expected)

def single_open_violations(out):
    return [s for s, c in enumerate(out.open_counts) if c != 1]

def size_violations(out):
    """ Sizes used or retired twice, and allocations at or above their bound
        or under a bound other than M_{e+1} (M_{top+1} for tails)
    """
    pool = out.pool
    sizes = list(pool.xs.values()) + list(pool.ys.values()) + list(pool.retired)
    bad = [('repeated', k) for k, c in sorted(Counter(sizes).items()) if c > 1]
    for kind, e, size, bound, stage in pool.allocations:
        if size >= bound:
            bad.append(('bound', kind, e, size, bound))
        if kind == 'x' and bound != size_bound(e + 1):
            bad.append(('M', kind, e, bound))
    return bad

def tail_rigidity_violations(out, mappings):
    """ (k, e) where the k-th mapping does not send b_{e,0,0} to d'_{e,0,0} """
    return [(k, c.e) for k, f in enumerate(mappings)
            for c in out.components if c.switched and f.get(c.root) != c.dup_root]
