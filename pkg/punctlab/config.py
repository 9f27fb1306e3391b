#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Thu Oct 15 10:41:26 2026

@author: punctlab
"""

#%%
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict

from .core.exceptions import ConfigError, PunctlabError
from .core.utility import check_if_file_exist, params
from .encode_d1 import DeltaOneBuilder
from .encode_d2 import DeltaTwoBuilder
from .encode_d3 import DeltaThreeBuilder
from .injection import BuildOutputPunct, InjSpec, check_punctualizable, punctualize
from .oracles import Approx2, Approx3, CeSchedule, ClockedFn, get_scheme
from .pathological import PathologicalBuilder, opponent_from_config
from .permitting import PermittingBuilder, Requirement
from .pressing import PressingBuilder, press_opponent_from_config

logger = logging.getLogger(__name__)

CONSTRUCTIONS = ('d1', 'd2', 'd3', 'pathological', 'permitting', 'pressing', 'punctualize')

#%%
@dataclass
class RunConfig:
    """ One run: the construction, its horizon and the construction's own
        options (schedules, catalogs, opponents) as read from JSON
    """
    construction: str
    horizon: int
    options: Dict[str, Any] = field(default_factory=dict)
    name: str = ''

    def __post_init__(self):
        if self.construction not in CONSTRUCTIONS:
            raise ConfigError('construction must be one of {0}, got {1!r}'.format(
                              CONSTRUCTIONS, self.construction))
        try:
            horizon = int(self.horizon)
        except (TypeError, ValueError):
            horizon = 0
        if isinstance(self.horizon, bool) or horizon != self.horizon or horizon < 1:
            raise ConfigError('horizon must be a positive natural')
        self.horizon = horizon

    @classmethod
    def from_dict(cls, d, name=''):
        d = dict(d)
        try:
            construction = d.pop('construction')
            horizon = d.pop('horizon', 100)
        except KeyError:
            raise ConfigError('config has no "construction" entry')
        return cls(construction, horizon, d, name)

    def to_dict(self):
        d = dict(self.options)
        d.update(construction=self.construction, horizon=self.horizon)
        return d

def load_config(path, horizon=None):
    """ Read a JSON config; horizon, when given, overrides the file """
    if not check_if_file_exist(path):
        raise ConfigError('no config file at {0}'.format(path))
    with open(path) as f:
        try:
            d = json.load(f)
        except json.JSONDecodeError as err:
            raise ConfigError('{0} is not valid JSON: {1}'.format(path, err))
    if not isinstance(d, dict):
        raise ConfigError('{0} must hold a JSON object'.format(path))
    if horizon is not None:
        d['horizon'] = horizon
    return RunConfig.from_dict(d, name=path)

#%%
def _d1(o):
    g = ClockedFn.from_config(o['g'])
    return DeltaOneBuilder(g, o.get('sizes'), o.get('reveal_stages')), {'g': g}

def _d2(o):
    g2 = Approx2.from_config(o['g2'])
    return DeltaTwoBuilder(g2, o.get('variant', 'omega'),
                           o.get('fixed_zeta_or_omega_count', 0)), {'g2': g2}

def _d3(o):
    g3 = Approx3.from_config(o['g3'])
    finite = InjSpec.from_config(o['finite']) if 'finite' in o else None
    return DeltaThreeBuilder(g3, finite), {'g3': g3}

def _pathological(o):
    schemes = [get_scheme(name) for name in o.get('schemes', [])]
    opponents = [opponent_from_config(c) for c in o.get('opponents', [])]
    g = ClockedFn.from_config(o['g'])
    return PathologicalBuilder(schemes, opponents, g, o.get('max_substages', 50000)), {'g': g}

def _permitting(o):
    W = CeSchedule.from_config(o.get('W', []))
    catalog = [Requirement.from_config(row) for row in o.get('requirements', [])]
    return PermittingBuilder(W, catalog), {'W': W}

def _pressing(o):
    W = CeSchedule.from_config(o.get('W', []))
    catalog = [ClockedFn.from_config(c) for c in o.get('catalog', [])]
    opponents = [press_opponent_from_config(c) for c in o.get('opponents', [])]
    return PressingBuilder(W, catalog, opponents), {'W': W, 'catalog': tuple(catalog)}

class _Punctualizer(object):
    def __init__(self, spec):
        check_punctualizable(spec)
        self.spec = spec

    def build(self, horizon, progress=False):
        log, builder = punctualize(self.spec, horizon, return_builder=True)
        return BuildOutputPunct(log, self.spec, builder.chain_members())

def _punctualize(o):
    spec = InjSpec.from_config(o)
    return _Punctualizer(spec), {'spec': spec}

_PREPARE = {'d1': _d1, 'd2': _d2, 'd3': _d3, 'pathological': _pathological,
            'permitting': _permitting, 'pressing': _pressing,
            'punctualize': _punctualize}

def prepare(cfg):
    """ Turn a RunConfig into a params bag holding its builder and the
        parsed inputs the decoders and checks need. Every schedule, catalog
        and opponent is parsed here, so a bad config fails before any stage
        runs.
    """
    try:
        builder, inputs = _PREPARE[cfg.construction](cfg.options)
    except KeyError as err:
        raise ConfigError('{0} config is missing {1}'.format(cfg.construction, err))
    except PunctlabError:
        raise
    except (TypeError, ValueError) as err:
        raise ConfigError('{0} config: {1}'.format(cfg.construction, err))
    p = params()
    p.construction = cfg.construction
    p.horizon = cfg.horizon
    p.builder = builder
    for k, v in inputs.items():
        setattr(p, k, v)
    logger.debug('prepared %s run, horizon %d', cfg.construction, cfg.horizon)
    return p

def run_build(cfg, progress=False, prepared=None):
    p = prepare(cfg) if prepared is None else prepared
    return p.builder.build(p.horizon, progress=progress)

def env_out(default):
    """ PUNCTLAB_OUT, when set, wins over the given directory """
    return os.environ.get('PUNCTLAB_OUT') or default
