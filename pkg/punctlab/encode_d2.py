#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Fri Oct  9 13:48:26 2026

@author: punctlab
"""

#%%
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .core.exceptions import ConfigError
from .core.machine import INJECTION, StageMachine, StructureLog, run_lockstep

logger = logging.getLogger(__name__)

VARIANTS = ('omega', 'zeta')

#%%
@dataclass
class ChainMarkers:
    """ left[s][i], right[s][i]: end points of B's i-th encoding chain after
        stage s
    """
    left: List[Tuple[int, ...]] = field(default_factory=list)
    right: List[Tuple[int, ...]] = field(default_factory=list)

    def rows(self):
        for s, (l, r) in enumerate(zip(self.left, self.right)):
            yield {'stage': s, 'left': list(l), 'right': list(r)}

@dataclass
class BuildOutputD2:
    log_a: StructureLog
    log_b: StructureLog
    markers: ChainMarkers
    a_anchors: List[int]
    variant: str
    glue_stages: List[Tuple[int, int]]
    fixed_a: List[List[int]]
    fixed_b: List[List[int]]
    canonical_iso: Dict[int, int] = field(default_factory=dict)

    def metadata(self):
        return {'construction': 'd2',
                'variant': self.variant,
                'a_anchors': list(self.a_anchors),
                'glue_stages': [list(g) for g in self.glue_stages],
                'final_left': list(self.markers.left[-1]) if self.markers.left else [],
                'final_right': list(self.markers.right[-1]) if self.markers.right else []}

#%%
class _Chain(object):
    """ Two-ended chain under construction """
    __slots__ = ('left', 'right')

    def __init__(self, el):
        self.left = el
        self.right = el

class DeltaTwoBuilder(object):
    """ Builds A and B for a two-argument approximation g2.

        A keeps standard chains: chain i starts at stage i with a_{i,0} and
        grows one element to the right every stage (and one to the left in
        the zeta variant). B starts chain s at stage s and, at the least x
        whose approximation changed, glues chains x..s-1 into chain x and
        restarts chains x+1..s at fresh elements, so the eventual end of
        chain i in B is younger than every mind change of every x < i.

    Arguments:
        g2: Approx2

        variant: 'omega' or 'zeta'

        fixed_count: number of chains of the opposite infinite type,
            enumerated identically in A and B from stage 0
    """
    def __init__(self, g2, variant='omega', fixed_count=0):
        self._check_input(variant, fixed_count)
        self.g2 = g2
        self.variant = variant
        self.fixed_count = fixed_count

    def _check_input(self, variant, fixed_count):
        if variant not in VARIANTS:
            raise ConfigError('variant must be one of {0}'.format(VARIANTS))
        if int(fixed_count) != fixed_count or fixed_count < 0:
            raise ConfigError('fixed_zeta_or_omega_count must be a natural')

    def _changed(self, s):
        """ Least x < s whose approximation changed at stage s """
        for x in range(s):
            if self.g2(x, s) != self.g2(x, s - 1):
                return x
        return None

    def build(self, horizon, progress=False):
        zeta = self.variant == 'zeta'
        A = StageMachine(INJECTION, horizon)
        B = StageMachine(INJECTION, horizon)
        a_chains, b_chains = [], []
        fixed_a, fixed_b = [], []
        markers = ChainMarkers()
        glue_stages = []
        anchors = []
        family_new = [[]]

        def grow_right(m, chain):
            new = m.fresh()
            m.assign('f', chain.right, new)
            chain.right = new
            return new

        def grow_left(m, chain):
            new = m.fresh()
            m.assign('f', new, chain.left)
            chain.left = new
            return new

        def step_fixed(m, chains, s):
            if s == 0:
                for _ in range(self.fixed_count):
                    chains.append(_Chain(m.fresh()))
                return
            for chain in chains:
                grow_right(m, chain)
                if not zeta:
                    grow_left(m, chain)

        def step(s):
            # A
            for chain in a_chains:
                grow_right(A, chain)
                if zeta:
                    grow_left(A, chain)
            head = A.fresh()
            a_chains.append(_Chain(head))
            anchors.append(head)
            step_fixed(A, fixed_a, s)

            # B
            x = self._changed(s) if s > 0 else None
            if x is not None and x < s - 1:
                for j in range(x + 1, s):
                    B.assign('f', b_chains[j - 1].right, b_chains[j].left)
                b_chains[x].right = b_chains[s - 1].right
                del b_chains[x + 1:]
                glue_stages.append((s, x))
                logger.debug('stage %d: glued chains %d..%d into chain %d', s, x, s - 1, x)
            previous, family_new[0] = family_new[0], []
            by_right = dict((c.right, c) for c in b_chains)
            for el in previous:
                if not B.defined('f', el):
                    new = B.fresh()
                    B.assign('f', el, new)
                    family_new[0].append(new)
                    if el in by_right:
                        by_right[el].right = new
            for _ in range(len(b_chains), s + 1):
                fresh = B.fresh()
                b_chains.append(_Chain(fresh))
                family_new[0].append(fresh)
            if zeta:
                for chain in b_chains:
                    family_new[0].append(grow_left(B, chain))
            step_fixed(B, fixed_b, s)
            markers.left.append(tuple(c.left for c in b_chains))
            markers.right.append(tuple(c.right for c in b_chains))

        run_lockstep((A, B), step, horizon, progress, desc='d2')
        iso = dict(zip(anchors, markers.left[-1]))
        logger.info('d2 (%s): horizon=%d, %d gluings', self.variant, horizon, len(glue_stages))
        return BuildOutputD2(A.log, B.log, markers, anchors, self.variant, glue_stages,
                             [[c.left, c.right] for c in fixed_a],
                             [[c.left, c.right] for c in fixed_b], iso)

def build_d2(g2, variant='omega', fixed_zeta_or_omega_count=0, horizon=100, progress=False):
    return DeltaTwoBuilder(g2, variant, fixed_zeta_or_omega_count).build(horizon, progress)

#%%
def decode_d2(h, g2, x, anchors):
    """ g*(x, max h(a_{i,0}) over i <= x+1) """
    return g2(x, max(h(anchors[i]) for i in range(x + 2)))

#%%
def endpoint_violations(out, g2):
    """ (i, s) where chain i's left end moved although no x < i changed its
        mind at or after s
    """
    if out.variant != 'omega':
        return []
    bad = []
    left = out.markers.left
    for s in range(1, len(left)):
        for i in range(min(len(left[s - 1]), len(left[s]))):
            last = max([g2.last_change(x) for x in range(i)] or [0])
            if s > last and left[s][i] != left[s - 1][i]:
                bad.append((i, s))
    return bad

def head_index_violations(out, g2):
    """ Chains whose final end point is older than a mind change of some
        x < i that the build could see
    """
    bad = []
    horizon = len(out.markers.left)
    final = out.markers.left[-1]
    for i, head in enumerate(final):
        for x in range(i):
            last = max([c for c in g2.mind_changes(x) if c < horizon] or [0])
            if head < last:
                bad.append((i, x, head, last))
    return bad
