#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Tue Oct  6 14:37:55 2026

@author: punctlab
"""

#%%
import bisect
import logging
from dataclasses import dataclass, field
from math import isqrt
from typing import Callable, Dict, Tuple

from .core.exceptions import BudgetExceeded, ConfigError

logger = logging.getLogger(__name__)

TupleValue = Tuple[int, ...]

#%%
def pair(a, b):
    """ Cantor pairing <a,b>, strictly increasing in each argument """
    return (a + b) * (a + b + 1) // 2 + a

def unpair(n):
    w = (isqrt(8 * n + 1) - 1) // 2
    a = n - w * (w + 1) // 2
    return a, w - a

#%%
def encode_tuple(t):
    """ Length-prefixed Cantor code of a finite tuple of naturals. The empty
        tuple is 0; a tuple of length k+1 is 1 + <k, code> where code folds
        the entries right to left with the pairing function.
    """
    t = tuple(t)
    if not t:
        return 0
    code = t[-1]
    for a in reversed(t[:-1]):
        code = pair(a, code)
    return 1 + pair(len(t) - 1, code)

def decode_tuple(n):
    if n == 0:
        return ()
    k, code = unpair(n - 1)
    entries = []
    for _ in range(k):
        a, code = unpair(code)
        entries.append(a)
    entries.append(code)
    return tuple(entries)

#%%
@dataclass(frozen=True)
class ClockedFn:
    """ A total function together with the stage at which each value
        converges. Inputs past the listed range read value 0, converging at 0.
    """
    values: Tuple[int, ...]
    conv: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'values', tuple(int(v) for v in self.values))
        object.__setattr__(self, 'conv', tuple(int(c) for c in self.conv))
        if len(self.values) != len(self.conv):
            raise ConfigError('values and conv must have equal length')
        if any(c < 0 for c in self.conv) or any(v < 0 for v in self.values):
            raise ConfigError('values and convergence stages must be naturals')

    def value(self, x):
        return self.values[x] if x < len(self.values) else 0

    def convergence(self, x):
        return self.conv[x] if x < len(self.conv) else 0

    @classmethod
    def from_config(cls, cfg):
        values = list(cfg['values'])
        conv = list(cfg.get('conv', [0] * len(values)))
        return cls(tuple(values), tuple(conv))

def eval_clocked(f, x, stage):
    """ f(x) once stage has reached its convergence stage, otherwise None """
    if stage >= f.convergence(x):
        return f.value(x)
    return None

#%%
def _check_stages(stages, what):
    stages = tuple(int(s) for s in stages)
    if any(s < 1 for s in stages):
        raise ConfigError('{0}: mind-change stages must be >= 1'.format(what))
    if any(b <= a for a, b in zip(stages, stages[1:])):
        raise ConfigError('{0}: mind-change stages must be strictly increasing'.format(what))
    return stages

def _count_after(stages, s):
    return len(stages) - bisect.bisect_right(stages, s)

@dataclass(frozen=True)
class Approx2:
    """ g*(x,s) = limit(x) + number of scheduled mind changes of x after s,
        so the value moves exactly at the scheduled stages and settles on
        the declared limit after the last one.
    """
    limits: Tuple[int, ...]
    changes: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, 'limits', tuple(int(v) for v in self.limits))
        changes = list(self.changes) + [()] * (len(self.limits) - len(self.changes))
        object.__setattr__(self, 'changes', tuple(
            _check_stages(c, 'approx2 x={0}'.format(x)) for x, c in enumerate(changes)))

    def __call__(self, x, s):
        return self.limit(x) + _count_after(self.mind_changes(x), s)

    def limit(self, x):
        return self.limits[x] if x < len(self.limits) else 0

    def mind_changes(self, x):
        return self.changes[x] if x < len(self.changes) else ()

    def last_change(self, x):
        ch = self.mind_changes(x)
        return ch[-1] if ch else 0

    @classmethod
    def from_config(cls, cfg):
        return cls(tuple(cfg['limits']), tuple(tuple(c) for c in cfg.get('changes', [])))

#%%
@dataclass(frozen=True)
class Approx3:
    """ Three-argument approximation g*(x,s,t).

    The inner limit lim_t g*(x,s,t) is limit(x) for s >= s_x and limit(x)+1
    below it, so s_x is the least s for which the inner limit is already
    the final one. Every (x,s) may carry its own list of inner mind-change
    stages in t. For x past the listed s-values, s_x continues with step 1.

    Arguments:
        limits: sequence of naturals, g(x)

        s_values: strictly increasing sequence with s_x >= x

        inner: dict (x, s) -> increasing tuple of stages >= 1
    """
    limits: Tuple[int, ...]
    s_values: Tuple[int, ...]
    inner: Dict[Tuple[int, int], Tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'limits', tuple(int(v) for v in self.limits))
        s_values = tuple(int(v) for v in self.s_values)
        for x, s in enumerate(s_values):
            if s < x:
                raise ConfigError('s_{0}={1} is below {0}'.format(x, s))
        if any(b <= a for a, b in zip(s_values, s_values[1:])):
            raise ConfigError('s_x must be strictly increasing in x')
        object.__setattr__(self, 's_values', s_values)
        object.__setattr__(self, 'inner', {
            (int(x), int(s)): _check_stages(v, 'approx3 ({0},{1})'.format(x, s))
            for (x, s), v in dict(self.inner).items()})

    def __hash__(self):
        return hash((self.limits, self.s_values, tuple(sorted(self.inner.items()))))

    def s_x(self, x):
        if x < len(self.s_values):
            return self.s_values[x]
        if not self.s_values:
            return x
        last = len(self.s_values) - 1
        return self.s_values[last] + (x - last)

    def limit(self, x):
        return self.limits[x] if x < len(self.limits) else 0

    def inner_limit(self, x, s):
        return self.limit(x) if s >= self.s_x(x) else self.limit(x) + 1

    def inner_changes(self, x, s):
        return self.inner.get((x, s), ())

    def settle_stage(self, x, s):
        """ t_{x,s}: the last inner mind change of (x,s), 0 if none """
        ch = self.inner_changes(x, s)
        return ch[-1] if ch else 0

    def __call__(self, x, s, t):
        return self.inner_limit(x, s) + _count_after(self.inner_changes(x, s), t)

    def agreement(self, x, s, t):
        """ Largest n <= t with g*(x,s',t) = g*(x,s,t) for every s' in [s,n].
            Off the scheduled pairs g*(x,.,t) only moves at s_x, so only
            s_x, the scheduled s' and their successors need checking. For
            t < s the range is empty and t itself is returned.
        """
        value = self(x, s, t)
        points = {s + 1, self.s_x(x)}
        for (y, r) in self.inner:
            if y == x:
                points.update((r, r + 1))
        for p in sorted(p for p in points if s < p <= t):
            if self(x, p, t) != value:
                return p - 1
        return t

    def truth(self, x, s):
        """ Whether s is the least s >= x whose inner limit is final """
        return s == self.s_x(x)

    @classmethod
    def from_config(cls, cfg):
        inner = {(int(x), int(s)): tuple(st) for x, s, st in cfg.get('inner', [])}
        return cls(tuple(cfg['limits']), tuple(cfg.get('s', [])), inner)

#%%
@dataclass(frozen=True)
class CeSchedule:
    """ Explicit enumeration of a c.e. set: element x enters at a stage """
    entries: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        entries = tuple((int(x), int(s)) for x, s in self.entries)
        stages = [s for _, s in entries]
        if any(b <= a for a, b in zip(stages, stages[1:])):
            raise ConfigError('c.e. schedule stages must be strictly increasing')
        elements = [x for x, _ in entries]
        if len(set(elements)) != len(elements):
            raise ConfigError('c.e. schedule elements must be distinct')
        if any(x < 0 or s < 0 for x, s in entries):
            raise ConfigError('c.e. schedule entries must be naturals')
        object.__setattr__(self, 'entries', entries)

    def entry_stage(self, x):
        for el, s in self.entries:
            if el == x:
                return s
        return None

    def contains(self, x, stage):
        s = self.entry_stage(x)
        return s is not None and s <= stage

    def entering_at(self, stage):
        return [x for x, s in self.entries if s == stage]

    def exhausted_by(self, horizon):
        return all(s < horizon for _, s in self.entries)

    def members(self, stage=None):
        return sorted(x for x, s in self.entries if stage is None or s <= stage)

    @classmethod
    def from_config(cls, rows):
        return cls(tuple((x, s) for x, s in rows))

#%%
class _Meter(object):
    def __init__(self, name, x, budget):
        self.name = name
        self.x = x
        self.budget = budget
        self.steps = 0

    def tick(self, n=1):
        self.steps += n
        if self.steps > self.budget:
            raise BudgetExceeded(self.name, self.x, self.budget)

@dataclass(frozen=True)
class OracleScheme:
    """ Host-coded total procedure with oracle access and a linear step
        budget slope*x + offset. The program is called as
        program(x, query, meter); each query costs one step and meter.tick()
        charges any further work.
    """
    name: str
    program: Callable
    slope: int = 1
    offset: int = 1

    def budget(self, x):
        return self.slope * x + self.offset

def run_scheme(scheme, oracle, x):
    meter = _Meter(scheme.name, x, scheme.budget(x))

    def query(y):
        meter.tick()
        return oracle(y)

    return scheme.program(x, query, meter)

#%%
def _identity(x, query, meter):
    return x

def _apply_oracle(x, query, meter):
    return query(x)

def _constant_0(x, query, meter):
    return 0

def _d_mod_2(x, query, meter):
    return query(x) % 2

def _d_first_entry(x, query, meter):
    t = decode_tuple(query(x))
    meter.tick(len(t))
    return t[0] if t else 0

def _flip_on_1(x, query, meter):
    return x if query(x) == 0 else x + 1

SCHEMES = {
    'identity': OracleScheme('identity', _identity, 1, 1),
    'apply-oracle': OracleScheme('apply-oracle', _apply_oracle, 1, 1),
    'constant-0': OracleScheme('constant-0', _constant_0, 1, 1),
    'd-mod-2': OracleScheme('d-mod-2', _d_mod_2, 1, 1),
    'd-first-entry': OracleScheme('d-first-entry', _d_first_entry, 1, 8),
    'flip-on-1': OracleScheme('flip-on-1', _flip_on_1, 1, 1),
}

def get_scheme(name):
    try:
        return SCHEMES[name]
    except KeyError:
        raise ConfigError('unknown scheme {0!r}; choose from {1}'.format(
                          name, sorted(SCHEMES)))
