#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Thu Oct  8 10:05:12 2026

@author: punctlab
"""

#%%
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .core.exceptions import ConfigError, DecodeError, HorizonExceeded
from .core.machine import INJECTION, StageMachine, StructureLog, run_lockstep
from .core.utility import params
from .injection import emit_cycle
from .oracles import eval_clocked

logger = logging.getLogger(__name__)

#%%
@dataclass
class BuildOutputD1:
    log_a: StructureLog
    log_b: StructureLog
    G: Tuple[int, ...]
    stage_b: Tuple[int, ...]
    orbits_a: List[Tuple[int, ...]]
    orbits_b: List[Tuple[int, ...]]
    chain_a: List[int]
    chain_b: List[int]
    canonical_iso: Dict[int, int] = field(default_factory=dict)

    def metadata(self):
        return {'construction': 'd1',
                'G': list(self.G),
                'stage_b': list(self.stage_b),
                'sizes': [len(o) for o in self.orbits_a],
                'orbit_heads_a': [o[0] for o in self.orbits_a],
                'orbit_heads_b': [o[0] for o in self.orbits_b]}

#%%
class DeltaOneBuilder(object):
    """ Builds the pair A, B for a clocked total function g.

        Both structures carry one omega-chain that grows by one element per
        stage. A enumerates its x-th finite orbit (size sizes(x)) at stage
        G(x). B enumerates its x-th finite orbit only once g(x) has
        converged and A has shown its (x+1)-th orbit, so the index of any
        element of B's x-th orbit bounds both stages.

    Arguments:
        g: ClockedFn

        sizes: strictly increasing list of orbit sizes, or None for x -> x+2

        reveal_stages: strictly increasing list of stages G(x), or None for
            x -> x+1
    """
    def __init__(self, g, sizes=None, reveal_stages=None):
        self._check_input(sizes, reveal_stages)
        self.g = g
        self.sizes = None if sizes is None else list(sizes)
        self.reveal_stages = None if reveal_stages is None else list(reveal_stages)

    def _check_input(self, sizes, reveal_stages):
        for name, seq, low in (('sizes', sizes, 1), ('reveal_stages', reveal_stages, 0)):
            if seq is None:
                continue
            seq = list(seq)
            if any(v < low for v in seq):
                raise ConfigError('{0} must be >= {1}'.format(name, low))
            if any(b <= a for a, b in zip(seq, seq[1:])):
                raise ConfigError('{0} must be strictly increasing'.format(name))

    def size(self, x):
        if self.sizes is None:
            return x + 2
        return self.sizes[x] if x < len(self.sizes) else None

    def G(self, x):
        if self.reveal_stages is None:
            return x + 1
        return self.reveal_stages[x] if x < len(self.reveal_stages) else None

    def _limit(self):
        n = 0
        while self.size(n) is not None and self.G(n) is not None:
            n += 1
            if self.sizes is None and self.reveal_stages is None:
                return None
        return n

    def build(self, horizon, progress=False):
        if self.G(0) is None or self.G(0) >= horizon:
            raise HorizonExceeded('horizon {0} does not reach the first finite orbit'.format(
                                  horizon))
        A = StageMachine(INJECTION, horizon)
        B = StageMachine(INJECTION, horizon)
        chain_a, chain_b = [], []
        orbits_a, orbits_b = [], []
        G, stage_b = [], []
        count = self._limit()

        def step(s):
            for m, chain in ((A, chain_a), (B, chain_b)):
                el = m.fresh()
                if chain:
                    m.assign('f', chain[-1], el)
                chain.append(el)
            x = len(orbits_a)
            if (count is None or x < count) and self.G(x) == s:
                orbits_a.append(tuple(emit_cycle(A, self.size(x))))
                G.append(s)
            while len(orbits_b) < len(orbits_a) - 1:
                y = len(orbits_b)
                if s < self.g.convergence(y):
                    break
                orbits_b.append(tuple(emit_cycle(B, self.size(y))))
                stage_b.append(s)
                logger.debug('stage %d: B enumerates orbit %d (size %d)', s, y, self.size(y))

        run_lockstep((A, B), step, horizon, progress, desc='d1')
        iso = {}
        for a, b in zip(chain_a, chain_b):
            iso[a] = b
        for oa, ob in zip(orbits_a, orbits_b):
            iso.update(zip(oa, ob))
        logger.info('d1: horizon=%d, %d orbits in A, %d in B', horizon,
                    len(orbits_a), len(orbits_b))
        return BuildOutputD1(A.log, B.log, tuple(G), tuple(stage_b), orbits_a,
                             orbits_b, chain_a, chain_b, iso)

def build_d1(g, sizes=None, horizon=100, reveal_stages=None, progress=False):
    return DeltaOneBuilder(g, sizes, reveal_stages).build(horizon, progress)

#%%
def cycle_at_stage(log, stage):
    """ Members of the closed cycle enumerated at the given stage, in f order """
    if stage >= len(log):
        return ()
    ev = log.events[stage]
    new = set(ev.new)
    f = dict((src, tgt) for sym, src, tgt in ev.assign if src in new and tgt in new)
    for start in ev.new:
        walk = [start]
        while walk[-1] in f and f[walk[-1]] != start and len(walk) <= len(new):
            walk.append(f[walk[-1]])
        if walk[-1] in f and f[walk[-1]] == start:
            return tuple(walk)
    return ()

def decode_d1(h, x, G0, g, log_a):
    """ Recover (g(x), G(x+1)) from an isomorphism h: A -> B.

        Starting from the stage G(0) at which A revealed its first finite
        orbit, for y = 0..x apply h to every member of A's orbits 0..y; the
        largest image is a stage by which g(y) has converged and A has
        revealed orbit y+1, which is then found by scanning A's log.
    """
    members = []
    stage = G0
    value = None
    for y in range(x + 1):
        orbit = cycle_at_stage(log_a, stage)
        if not orbit:
            raise DecodeError('A reveals no finite orbit at stage {0}'.format(stage))
        members.extend(orbit)
        bound = max(h(m) for m in members)
        nxt = next((t for t in range(stage + 1, min(bound, len(log_a) - 1) + 1)
                    if cycle_at_stage(log_a, t)), None)
        if nxt is None:
            raise DecodeError('no finite orbit of A after stage {0} below bound {1}'.format(
                              stage, bound))
        value = eval_clocked(g, y, bound)
        if value is None:
            raise DecodeError('g({0}) has not converged by image bound {1}'.format(y, bound))
        stage = nxt
    return value, stage

#%%
def delay_violations(out, g):
    """ Orbits of B that appeared before max(convergence(x), G(x+1)) """
    bad = []
    for x, sb in enumerate(out.stage_b):
        need = max(g.convergence(x), out.G[x + 1])
        if sb < need:
            bad.append((x, sb, need))
    return bad

def get_params(out):
    p = params()
    p.G = out.G
    p.stage_b = out.stage_b
    p.sizes = [len(o) for o in out.orbits_a]
    return p
