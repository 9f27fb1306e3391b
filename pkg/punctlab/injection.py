#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Wed Oct  7 09:14:30 2026

@author: punctlab
"""

#%%
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Tuple

import networkx as nx

from .core.exceptions import ConfigError, NotInjective
from .core.machine import INJECTION, StageMachine, StructureLog
from .core.utility import dump_count, parse_count

logger = logging.getLogger(__name__)

MAX_ANCHORS = 12
MAX_DOMAIN = 20000

#%%
@dataclass(frozen=True)
class OrbitDecomp:
    """ Closed cycles and open segments of a finite injection truncation.
        Cycles start at their least member, segments at their head.
    """
    cycles: Tuple[Tuple[int, ...], ...] = ()
    segments: Tuple[Tuple[int, ...], ...] = ()

    def locate(self):
        """ element -> (kind, orbit index, position) """
        where = {}
        for k, cyc in enumerate(self.cycles):
            for p, el in enumerate(cyc):
                where[el] = ('cycle', k, p)
        for k, seg in enumerate(self.segments):
            for p, el in enumerate(seg):
                where[el] = ('segment', k, p)
        return where

@dataclass(frozen=True)
class Character:
    cycles: Tuple[int, ...] = ()
    segments: Tuple[int, ...] = ()

    def cycle_counts(self):
        return Counter(self.cycles)

    def segment_counts(self):
        return Counter(self.segments)

    @property
    def total(self):
        return sum(self.cycles) + sum(self.segments)

@dataclass(frozen=True)
class InjSpec:
    """ Orbit counts of an injection structure with a punctual presentation.

    Arguments:
        N0: natural or math.inf, number of omega-chains

        N1: natural or math.inf, number of zeta-chains

        reveals: sequence of (size, stage); the finite orbit of that size
            is enumerated at that stage. Stages strictly increasing.
    """
    N0: float = 1
    N1: float = 0
    reveals: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        try:
            object.__setattr__(self, 'N0', parse_count(self.N0))
            object.__setattr__(self, 'N1', parse_count(self.N1))
        except ValueError as err:
            raise ConfigError(str(err))
        reveals = tuple((int(k), int(r)) for k, r in self.reveals)
        if any(k < 1 for k, _ in reveals):
            raise ConfigError('finite orbit sizes must be positive')
        stages = [r for _, r in reveals]
        if any(b <= a for a, b in zip(stages, stages[1:])):
            raise ConfigError('reveal stages must be strictly increasing')
        object.__setattr__(self, 'reveals', reveals)

    @classmethod
    def from_config(cls, cfg):
        return cls(cfg.get('N0', 1), cfg.get('N1', 0),
                   tuple(tuple(r) for r in cfg.get('reveals', [])))

#%%
def emit_cycle(machine, size):
    """ Enumerate a closed cycle of the given size in one stage """
    members = [machine.fresh() for _ in range(size)]
    for a, b in zip(members, members[1:] + members[:1]):
        machine.assign('f', a, b)
    return members

#%%
class PunctualInjection(object):
    """ Stepwise punctual builder for an InjSpec. Stage 0 enumerates a seed,
        the head of omega-chain 0 (or the base of zeta-chain 0 when there
        are no omega-chains). At stage s >= 1 the first min(s, N0)
        omega-chains and the first min(s, N1) zeta-chains each receive one
        new right-hand element, a chain being created by the first element
        it receives. Zeta-chains also grow one element to the left at every
        even stage >= 2. Finite orbits appear at their reveal stages.

    Methods:
        @step
        @reveal
        @chain_members
    """
    def __init__(self, spec):
        self.spec = spec
        self.omega = []
        self.zeta = []
        self.cycles = []
        self._reveals = dict((r, k) for k, r in spec.reveals)

    def _grow(self, machine, chains, i):
        if i < len(chains):
            chain = chains[i]
            new = machine.fresh()
            machine.assign('f', chain[-1], new)
            chain.append(new)
        else:
            chains.append([machine.fresh()])

    def step(self, machine):
        s = machine.stage
        if s == 0:
            if self.spec.N0 >= 1:
                self.omega.append([machine.fresh()])
            elif self.spec.N1 >= 1:
                self.zeta.append([machine.fresh()])
        else:
            for i in range(int(min(s, self.spec.N0))):
                self._grow(machine, self.omega, i)
            for i in range(int(min(s, self.spec.N1))):
                self._grow(machine, self.zeta, i)
                if s % 2 == 0 and len(self.zeta[i]) > 1:
                    left = machine.fresh()
                    machine.assign('f', left, self.zeta[i][0])
                    self.zeta[i].insert(0, left)
        self.reveal(machine)

    def reveal(self, machine):
        size = self._reveals.get(machine.stage)
        if size is not None:
            self.cycles.append(emit_cycle(machine, size))
            logger.debug('stage %d: revealed a %d-cycle', machine.stage, size)

    def chain_members(self):
        return {'omega': [list(c) for c in self.omega],
                'zeta': [list(c) for c in self.zeta],
                'cycles': [list(c) for c in self.cycles]}

#%%
@dataclass
class BuildOutputPunct:
    log: StructureLog
    spec: InjSpec
    chains: dict

    def metadata(self):
        return {'construction': 'punctualize',
                'N0': dump_count(self.spec.N0), 'N1': dump_count(self.spec.N1),
                'reveals': [list(r) for r in self.spec.reveals],
                'heads': {k: [c[0] for c in v] for k, v in self.chains.items()}}

def check_punctualizable(spec):
    if spec.N0 == 0 and spec.N1 == 0:
        raise ConfigError('punctualize needs at least one infinite orbit (N0+N1 >= 1)')

def punctualize(spec, horizon, return_builder=False):
    """ Punctual presentation of an injection structure with the given orbit
        counts, run for the given number of stages
    """
    check_punctualizable(spec)
    builder = PunctualInjection(spec)
    machine = StageMachine(INJECTION, horizon, step=builder.step)
    log = machine.run()
    logger.info('punctualize: N0=%s N1=%s horizon=%d size=%d',
                spec.N0, spec.N1, horizon, machine.size)
    if return_builder:
        return log, builder
    return log

#%%
def _functional_graph(t):
    f = t.f
    inverse = {}
    for src in sorted(f):
        inverse.setdefault(f[src], []).append(src)
    for tgt, srcs in inverse.items():
        if len(srcs) > 1:
            raise NotInjective(tgt, srcs)
    G = nx.DiGraph()
    G.add_nodes_from(range(t.size))
    G.add_edges_from(f.items())
    return G

def decompose(t):
    """ Split an injective truncation into closed cycles and maximal open
        segments. Injectivity is checked before anything else.
    """
    G = _functional_graph(t)
    f = t.f
    cycles, segments = [], []
    for comp in nx.weakly_connected_components(G):
        heads = [n for n in comp if G.in_degree(n) == 0]
        if heads:
            walk = [heads[0]]
            while walk[-1] in f:
                walk.append(f[walk[-1]])
            segments.append(tuple(walk))
        else:
            start = min(comp)
            walk = [start]
            while f[walk[-1]] != start:
                walk.append(f[walk[-1]])
            cycles.append(tuple(walk))
    cycles.sort(key=lambda c: c[0])
    segments.sort(key=lambda c: c[0])
    return OrbitDecomp(tuple(cycles), tuple(segments))

def character(d):
    return Character(tuple(sorted(len(c) for c in d.cycles)),
                     tuple(sorted(len(s) for s in d.segments)))

#%%
def _group_anchors(where, anchors):
    groups = {}
    for a in anchors:
        kind, k, p = where[a]
        groups.setdefault((kind, k), []).append((a, p))
    return sorted(groups.items())

def match_candidates(a, b, anchors, limit=None):
    """ Every injective map on the anchors that extends to an orbit-respecting
        correspondence between the truncations a and b: closed cycles go to
        closed cycles of equal size (any rotation), segment members go to the
        member at the same distance from the head of a long enough segment,
        and distinct orbits go to distinct orbits. Returns a list of dicts.
    """
    anchors = list(dict.fromkeys(anchors))
    if len(anchors) > MAX_ANCHORS:
        raise ConfigError('at most {0} anchors are supported'.format(MAX_ANCHORS))
    if a.size > MAX_DOMAIN or b.size > MAX_DOMAIN:
        raise ConfigError('truncations larger than {0} elements are not supported'.format(
                          MAX_DOMAIN))
    da, db = decompose(a), decompose(b)
    where = da.locate()
    groups = _group_anchors(where, anchors)
    results = []

    def options(kind, k, members):
        if kind == 'cycle':
            size = len(da.cycles[k])
            for j, cyc in enumerate(db.cycles):
                if len(cyc) == size:
                    for r in range(size):
                        yield ('cycle', j), {el: cyc[(p + r) % size] for el, p in members}
        else:
            need = max(p for _, p in members)
            for j, seg in enumerate(db.segments):
                if len(seg) > need:
                    yield ('segment', j), {el: seg[p] for el, p in members}

    def search(i, used, current):
        if limit is not None and len(results) >= limit:
            return
        if i == len(groups):
            results.append(dict(current))
            return
        (kind, k), members = groups[i]
        for orbit, assignment in options(kind, k, members):
            if orbit in used:
                continue
            current.update(assignment)
            used.add(orbit)
            search(i + 1, used, current)
            used.discard(orbit)
            for el in assignment:
                del current[el]

    search(0, set(), {})
    return results

def extend_mapping(a, b, mapping):
    """ Extend an anchor mapping from match_candidates along whole orbits:
        cycles by the same rotation, segments position by position as far as
        both segments reach
    """
    da, db = decompose(a), decompose(b)
    wa, wb = da.locate(), db.locate()
    out = dict(mapping)
    for src, tgt in mapping.items():
        kind, k, p = wa[src]
        kind_b, j, q = wb[tgt]
        if kind != kind_b:
            raise ValueError('{0} and {1} lie in orbits of different kinds'.format(src, tgt))
        if kind == 'cycle':
            ca, cb = da.cycles[k], db.cycles[j]
            shift = q - p
            for pos, el in enumerate(ca):
                out[el] = cb[(pos + shift) % len(cb)]
        else:
            sa, sb = da.segments[k], db.segments[j]
            shift = q - p
            for pos, el in enumerate(sa):
                if 0 <= pos + shift < len(sb):
                    out[el] = sb[pos + shift]
    return out

#%%
def truncation_graph(t):
    """ networkx multigraph of a truncation with one labelled edge per
        assigned function value
    """
    G = nx.MultiDiGraph()
    G.add_nodes_from(range(t.size))
    for sym, f in sorted(t.maps.items()):
        for src, tgt in sorted(f.items()):
            G.add_edge(src, tgt, label=sym)
    return G

def to_dot(t):
    """ DOT text of a truncation, one edge per assigned value """
    return nx.nx_pydot.to_pydot(truncation_graph(t)).to_string()

