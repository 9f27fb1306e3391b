#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Mon Oct 12 09:31:44 2026

@author: punctlab
"""

#%%
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .core.exceptions import DecodeError
from .core.machine import INJECTION, StageMachine, StructureLog, run_lockstep
from .injection import InjSpec, PunctualInjection
from .oracles import pair, unpair

logger = logging.getLogger(__name__)

FiringState = Dict[Tuple[int, int], int]

#%%
def fires(g3, x, s, stage, st):
    """ Whether "s is the least s' >= x with lim_t g*(x,s',t) final" looks
        true at this stage.

        If s > x and g*(x,s-1,stage) already agrees with g*(x,s,stage), s
        does not look least and nothing fires. Otherwise the agreement length
        l is the largest n <= stage with g*(x,s',stage) = g*(x,s,stage) for
        every s' in [s, n]; the predicate fires iff l exceeds every earlier
        agreement length recorded for (x,s).
    """
    if s > x and g3(x, s - 1, stage) == g3(x, s, stage):
        return False
    n = g3.agreement(x, s, stage)
    if n > st.get((x, s), -1):
        st[(x, s)] = n
        return True
    return False

def firing_candidates(g3, x):
    """ The s >= x at which fires(g3, x, s, ...) can return True. For any
        other s > x, g*(x,s-1,.) and g*(x,s,.) coincide at every t, so s never
        looks least.
    """
    out = {x, g3.s_x(x)}
    for (y, r) in g3.inner:
        if y == x:
            out.update((r, r + 1))
    return sorted(s for s in out if s >= x)

#%%
@dataclass
class BuildOutputD3:
    """ Logs of A and B together with the (family, i, j) label of every
        chain element. Families: 'a', 'd' in A and 'b', 'c' in B.
    """
    log_a: StructureLog
    log_b: StructureLog
    labels_a: Dict[int, Tuple[str, int, int]]
    labels_b: Dict[int, Tuple[str, int, int]]
    a_anchors: List[int]
    c_anchors: List[int]
    d_anchors: List[int]
    b_left: List[int]
    d_left: List[int]
    rebases: List[Tuple[int, int]]
    firings: List[Tuple[int, int, Tuple[int, ...]]]
    cycles_a: List[Tuple[int, ...]] = field(default_factory=list)
    cycles_b: List[Tuple[int, ...]] = field(default_factory=list)
    canonical_h: Dict[int, int] = field(default_factory=dict)
    canonical_h_inv: Dict[int, int] = field(default_factory=dict)

    def metadata(self):
        return {'construction': 'd3',
                'a_anchors': self.a_anchors,
                'c_anchors': self.c_anchors,
                'b_left': self.b_left,
                'd_left': self.d_left,
                'rebases': [list(r) for r in self.rebases],
                'firings': [[t, i, list(xs)] for t, i, xs in self.firings]}

#%%
class DeltaThreeBuilder(object):
    """ Builds A and B for a three-argument approximation g3.

        A: standard omega-chains a_{i,*} and chains d_{i,*} that grow to the
        left exactly at stages where some P(x,i), x <= i, fires.
        B: omega-chains b_{i,*} (j >= i) whose left end is moved to fresh
        elements whenever some <x,n> <= i has an inner mind change, and
        standard zeta-chains c_{i,*}.
        Finite orbits are copied into both structures at their reveal stages.

    Arguments:
        g3: Approx3

        finite: InjSpec whose reveal schedule supplies the finite orbits
    """
    def __init__(self, g3, finite=None):
        self.g3 = g3
        self.finite = finite if finite is not None else InjSpec(0, 0, ())

    def build(self, horizon, progress=False):
        g3 = self.g3
        A = StageMachine(INJECTION, horizon)
        B = StageMachine(INJECTION, horizon)
        fin_a = PunctualInjection(self.finite)
        fin_b = PunctualInjection(self.finite)
        labels_a, labels_b = {}, {}
        a_rows = []          # a_rows[i] = [a_{i,0}, a_{i,1}, ...]
        c_rows = []          # c_rows[i][j] = c_{i,j}
        b_ends, d_ends = [], []   # [left, right, next label]
        d_origin = []
        rebases, firings = [], []
        state: FiringState = {}
        candidates = {}

        def new(m, labels, family, i, j):
            el = m.fresh()
            labels[el] = (family, i, j)
            return el

        def step(s):
            # Step 1: a_{s,j} for j < s, then a_{i,s} for i <= s
            a_rows.append([new(A, labels_a, 'a', s, j) for j in range(s)])
            for i in range(s + 1):
                a_rows[i].append(new(A, labels_a, 'a', i, s))
            for j in range(s):
                A.assign('f', a_rows[s][j], a_rows[s][j + 1])
            for i in range(s):
                A.assign('f', a_rows[i][s - 1], a_rows[i][s])

            # Step 2
            fresh_b = new(B, labels_b, 'b', s, s)
            i0 = next((i for i in range(s) if g3(*unpair(i), s) != g3(*unpair(i), s - 1)), None)
            for k in range(s):
                left, right, j = b_ends[k]
                if i0 is not None and k >= i0:
                    bl = new(B, labels_b, 'b', k, j)
                    br = new(B, labels_b, 'b', k, j + 1)
                    B.assign('f', right, br)
                    B.assign('f', bl, left)
                    b_ends[k] = [bl, br, j + 2]
                else:
                    br = new(B, labels_b, 'b', k, j)
                    B.assign('f', right, br)
                    b_ends[k] = [left, br, j + 1]
            b_ends.append([fresh_b, fresh_b, s + 1])
            if i0 is not None:
                rebases.append((s, i0))
                logger.debug('stage %d: inner mind change at <%d,%d>, rebased chains %d..%d',
                             s, *unpair(i0), i0, s - 1)

            # Step 3
            c_rows.append([])
            for j in range(s):
                c_rows[s].append(new(B, labels_b, 'c', s, 2 * j))
                c_rows[s].append(new(B, labels_b, 'c', s, 2 * j + 1))
            for i in range(s + 1):
                c_rows[i].append(new(B, labels_b, 'c', i, 2 * s))
                c_rows[i].append(new(B, labels_b, 'c', i, 2 * s + 1))
            for i in range(s):
                B.assign('f', c_rows[i][2 * (s - 1)], c_rows[i][2 * s])
                B.assign('f', c_rows[i][2 * s + 1], c_rows[i][2 * s - 1])
            row = c_rows[s]
            for j in range(1, s + 1):
                B.assign('f', row[2 * j + 1], row[2 * j - 1])
            B.assign('f', row[1], row[0])
            for j in range(s):
                B.assign('f', row[2 * j], row[2 * j + 2])

            # Step 4
            fresh_d = new(A, labels_a, 'd', s, 0)
            if s > 0:
                candidates[s - 1] = firing_candidates(g3, s - 1)
            firing = {}
            for x in range(s):
                for i in candidates[x]:
                    if i < s and fires(g3, x, i, s, state):
                        firing.setdefault(i, []).append(x)
            for i in range(s):
                left, right, j = d_ends[i]
                fired = tuple(firing.get(i, ()))
                if fired:
                    dl = new(A, labels_a, 'd', i, j)
                    dr = new(A, labels_a, 'd', i, j + 1)
                    A.assign('f', right, dr)
                    A.assign('f', dl, left)
                    d_ends[i] = [dl, dr, j + 2]
                    firings.append((s, i, fired))
                else:
                    dr = new(A, labels_a, 'd', i, j)
                    A.assign('f', right, dr)
                    d_ends[i] = [left, dr, j + 1]
            d_ends.append([fresh_d, fresh_d, 1])
            d_origin.append(fresh_d)

            fin_a.reveal(A)
            fin_b.reveal(B)

        run_lockstep((A, B), step, horizon, progress, desc='d3')
        out = BuildOutputD3(A.log, B.log, labels_a, labels_b,
                            a_anchors=[r[0] for r in a_rows],
                            c_anchors=[r[0] for r in c_rows],
                            d_anchors=d_origin,
                            b_left=[e[0] for e in b_ends],
                            d_left=[e[0] for e in d_ends],
                            rebases=rebases, firings=firings,
                            cycles_a=[tuple(c) for c in fin_a.cycles],
                            cycles_b=[tuple(c) for c in fin_b.cycles])
        out.canonical_h, out.canonical_h_inv = canonical_maps(out, g3)
        logger.info('d3: horizon=%d, |A|=%d, |B|=%d, %d rebases, %d firings',
                    horizon, A.size, B.size, len(rebases), len(firings))
        return out

def build_d3(g3, horizon=100, finite=None, progress=False):
    return DeltaThreeBuilder(g3, finite).build(horizon, progress)

#%%
def zeta_labels(g3, horizon):
    """ Indices i < horizon whose d-chain is a zeta-chain in the limit """
    out = []
    x = 0
    while g3.s_x(x) < horizon:
        out.append(g3.s_x(x))
        x += 1
    return out

def canonical_maps(out, g3):
    """ Anchor parts of the intended isomorphism. A's omega-chains (a_i, and
        d_i for i not of the form s_x) ordered by start stage, a before d,
        are sent to B's b-chains in order; c-chain i is sent to d-chain s_i.
    """
    horizon = len(out.a_anchors)
    zl = set(zeta_labels(g3, horizon))
    omega_a = []
    for t in range(horizon):
        omega_a.append(out.a_anchors[t])
        if t not in zl:
            omega_a.append(out.d_left[t])
    h = dict((a, b) for a, b in zip(omega_a, out.b_left))
    h_inv = {}
    for i, c in enumerate(out.c_anchors):
        s_i = g3.s_x(i)
        if s_i < len(out.d_anchors):
            h_inv[c] = out.d_anchors[s_i]
    return h, h_inv

#%%
def decode_d3(h, h_inv, g3, x, out):
    """ g(x) from h: A -> B and its inverse.

        Phase 1 reads s* as the largest d-family index among h_inv(c_{i,0}),
        i <= x. Phase 2 applies h to a_{i,0} for i <= <x,s*>, keeps the image
        lying in the b-chain of largest index (largest label on ties) and
        uses its element index as t*. Returns g*(x, s*, t*).
    """
    s_star = -1
    for i in range(x + 1):
        lab = out.labels_a.get(h_inv(out.c_anchors[i]))
        if lab is None or lab[0] != 'd':
            raise DecodeError('h_inv(c_{{{0},0}}) is not in a d-chain'.format(i))
        s_star = max(s_star, lab[1])
    n = pair(x, s_star)
    if n >= len(out.a_anchors):
        raise DecodeError('<{0},{1}> = {2} exceeds the built a-chains'.format(x, s_star, n))
    best = None
    for i in range(n + 1):
        img = h(out.a_anchors[i])
        lab = out.labels_b.get(img)
        if lab is None or lab[0] != 'b':
            raise DecodeError('h(a_{{{0},0}}) is not in a b-chain'.format(i))
        key = (lab[1], lab[2])
        if best is None or key > best[0]:
            best = (key, img)
    t_star = best[1]
    logger.debug('decode_d3 x=%d: s*=%d t*=%d', x, s_star, t_star)
    return g3(x, s_star, t_star)

#%%
def head_stabilization(out, g3):
    """ b-chains whose final left end is younger than an inner mind change of
        some <x',s'> <= its index seen before the horizon
    """
    horizon = len(out.a_anchors)
    bad = []
    worst = 0
    for k, left in enumerate(out.b_left):
        ch = [t for t in g3.inner_changes(*unpair(k)) if t < horizon]
        worst = max([worst] + ch)
        if left < worst:
            bad.append((k, left, worst))
    return bad

def left_growth_stages(out):
    """ stage -> d-chain indices that received a new left end, read off
        A's log and labels
    """
    grown = {}
    for ev in out.log_a.events:
        new = set(ev.new)
        for sym, src, tgt in ev.assign:
            lab = out.labels_a.get(src)
            if src in new and lab is not None and lab[0] == 'd' and tgt not in new:
                grown.setdefault(ev.stage, []).append(lab[1])
    return dict((s, sorted(v)) for s, v in grown.items())

def firing_stages(out, i):
    return [t for t, j, _ in out.firings if j == i]
