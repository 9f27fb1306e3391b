#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Fri Oct 16 09:12:37 2026

@author: punctlab
"""

#%%
import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .config import env_out, load_config, prepare, run_build
from .core.exceptions import (ConfigError, DecodeError, HorizonExceeded, InvariantViolation,
                              PunctlabError)
from .core.machine import (INJECTION, StructureLog, check_index_stage_bound,
                           check_punctuality, log_digest)
from .core.utility import (check_if_file_exist, create_dir, load_obj, save_obj,
                           write_json, write_jsonl)
from .encode_d1 import decode_d1, delay_violations
from .encode_d2 import decode_d2, endpoint_violations, head_index_violations
from .encode_d3 import decode_d3, head_stabilization
from .injection import character, decompose, to_dot
from .oracles import pair
from .pathological import (act_counts, decode_q, diagonalized_schemes,
                           marker_violations, permanence_violations, q_bound_failures,
                           retired_size_violations, undiagonalized)
from .permitting import decode_w, pointer_violations, verify_equiv
from .pressing import (SIGNATURE, canonical_iso, decodable, decode_g,
                       mirror_violations, single_open_violations, size_violations,
                       tail_rigidity_violations)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG = 0, 2, 3

ARTIFACT = 'build'
CONFIG_ARTIFACT = 'config.json'

DECODERS = {'d1': 'd1', 'd2': 'd2', 'd3': 'd3', 'q': 'pathological',
            'low': 'permitting', 'pressing-g': 'pressing'}

#%%
def structure_logs(construction, out):
    """ name -> StructureLog of every structure whose punctuality is claimed """
    if construction in ('d1', 'd2', 'd3'):
        return {'A': out.log_a, 'B': out.log_b}
    if construction == 'pathological':
        return {'A': out.log_a}
    if construction == 'pressing':
        return {'B': out.log_b, 'B2': out.log_b2}
    if construction == 'punctualize':
        return {'A': out.log}
    return {}

def signature_of(construction):
    return SIGNATURE if construction == 'pressing' else INJECTION

def trace_rows(construction, out):
    """ Trace events of a build; the encodings record theirs as metadata """
    if hasattr(out, 'trace'):
        return list(out.trace)
    if construction == 'd1':
        return [{'event': 'orbit-b', 'x': x, 'stage': s} for x, s in enumerate(out.stage_b)]
    if construction == 'd2':
        return [{'event': 'glue', 'stage': s, 'x': x} for s, x in out.glue_stages]
    if construction == 'd3':
        rows = [{'event': 'rebase', 'stage': s, 'i': i} for s, i in out.rebases]
        rows += [{'event': 'fire', 'stage': s, 'i': i, 'x': list(xs)} for s, i, xs in out.firings]
        return sorted(rows, key=lambda r: (r['stage'], r['event']))
    return []

#%%
def write_artifacts(cfg, out, directory):
    construction = cfg.construction
    create_dir(directory)
    write_json(cfg.to_dict(), os.path.join(directory, CONFIG_ARTIFACT))
    for name, log in structure_logs(construction, out).items():
        log.write(os.path.join(directory, name + '.jsonl'))
    for n, log in enumerate(getattr(out, 'logs_opp', None) or getattr(out, 'logs_b', None) or []):
        log.write(os.path.join(directory, 'opponent{0}.jsonl'.format(n)))
    write_json(out.metadata(), os.path.join(directory, 'metadata.json'))
    write_jsonl(trace_rows(construction, out), os.path.join(directory, 'trace.jsonl'))
    save_obj(out, os.path.join(directory, ARTIFACT))

def load_artifact(directory):
    path = os.path.join(directory, ARTIFACT)
    if not check_if_file_exist(path + '.pkl'):
        raise ConfigError('no build artifacts in {0}; run "punctlab build" first'.format(
                          directory))
    return load_obj(path)

def built_from(cfg, directory):
    """ Whether the artifacts in directory were built from exactly this
        config (after the --horizon override)
    """
    path = os.path.join(directory, CONFIG_ARTIFACT)
    if not check_if_file_exist(path):
        return False
    with open(path) as f:
        stored = json.load(f)
    return stored == json.loads(json.dumps(cfg.to_dict()))

def _output(cfg, p, args):
    """ The stored build when it was made from this config, else a fresh one """
    directory = env_out(args.out)
    if check_if_file_exist(os.path.join(directory, ARTIFACT + '.pkl')):
        if built_from(cfg, directory):
            return load_artifact(directory)
        logger.warning('artifacts in %s were built from another config; rebuilding', directory)
    return run_build(cfg, args.progress, p)

#%%
def _as_map(table, name):
    def f(el):
        try:
            return table[el]
        except KeyError:
            raise DecodeError('{0} is undefined at {1}'.format(name, el))
    return f

def decode(construction, p, out, x, e=0):
    """ Run the construction's decoder at x with the canonical isomorphism """
    if construction == 'd1':
        value, stage = decode_d1(_as_map(out.canonical_iso, 'h'), x, out.G[0], p.g, out.log_a)
        return {'x': x, 'g': value, 'G_next': stage}
    if construction == 'd2':
        return {'x': x, 'g': decode_d2(_as_map(out.canonical_iso, 'h'), p.g2, x, out.a_anchors)}
    if construction == 'd3':
        return {'x': x, 'g': decode_d3(_as_map(out.canonical_h, 'h'),
                                       _as_map(out.canonical_h_inv, 'h_inv'), p.g3, x, out)}
    if construction == 'pathological':
        if not 0 <= e < len(out.s):
            raise DecodeError('level {0} was never reached'.format(e))
        return {'e': e, 'j': x, 'bound': decode_q(out.d, e, out.s[e], x)}
    if construction == 'permitting':
        return {'x': x, 'W': decode_w(out, p.W, x)}
    if construction == 'pressing':
        f = _as_map(canonical_iso(out), 'f')
        return {'x': x, 'g': decode_g(f, f, x, p.W, p.catalog, out)}
    raise ConfigError('{0} has no decoder'.format(construction))

#%%
@dataclass
class VerifyReport:
    construction: str
    checks: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.checks.values())

    def add(self, name, bad, detail=None):
        """ Record a check that passes when bad is empty """
        self.checks[name] = not bad
        if bad:
            self.details[name] = detail if detail is not None else [list(b) if isinstance(b, tuple)
                                                                    else b for b in bad]

    def to_json(self):
        return {'construction': self.construction, 'passed': self.passed,
                'checks': dict(self.checks), 'details': self.details}

def _decode_cases(construction, p, out):
    """ (x, expected decoder output) for every x the build reached """
    if construction == 'd1':
        for x in range(min(20, len(out.orbits_b), len(out.G) - 1)):
            yield x, {'x': x, 'g': p.g.value(x), 'G_next': out.G[x + 1]}
    elif construction == 'd2':
        for x in range(min(15, len(out.a_anchors) - 2)):
            if p.g2.last_change(x) < p.horizon:
                yield x, {'x': x, 'g': p.g2.limit(x)}
    elif construction == 'd3':
        for x in range(6):
            s_x = p.g3.s_x(x)
            if 2 * (pair(x, s_x) + 1) < p.horizon and \
               all(t < p.horizon for t in p.g3.inner_changes(x, s_x)):
                yield x, {'x': x, 'g': p.g3.limit(x)}
    elif construction == 'pressing':
        for x in range(8):
            if decodable(out, x):
                yield x, {'x': x, 'g': out.gtable(x)}

def _decode_checks(report, construction, p, out):
    bad = []
    for x, expected in _decode_cases(construction, p, out):
        try:
            got = decode(construction, p, out, x)
        except DecodeError as err:
            got = {'x': x, 'error': str(err)}
        if got != expected:
            bad.append({'got': got, 'expected': expected})
    report.add('decode', bad)

def verify(cfg, p, out, logs):
    """ Module-appropriate invariant suite plus decoder-against-limit checks.
        logs are the structure logs as read back from disk.
    """
    c = cfg.construction
    report = VerifyReport(c)
    built = structure_logs(c, out)
    for name, log in sorted(logs.items()):
        pr = check_punctuality(log)
        report.add('punctuality:' + name, not pr.passed, pr.summary())
        report.add('index-stage:' + name, check_index_stage_bound(log))
        if name in built:
            report.add('replay:' + name, log_digest(log) != log_digest(built[name]),
                       'log on disk differs from the build')
    if c == 'd1':
        report.add('delay', delay_violations(out, p.g))
    elif c == 'd2':
        report.add('endpoints', endpoint_violations(out, p.g2))
        report.add('heads', head_index_violations(out, p.g2))
    elif c == 'd3':
        report.add('heads', head_stabilization(out, p.g3))
    elif c == 'pathological':
        report.add('markers', marker_violations(out))
        report.add('acts', [e for e, k in sorted(act_counts(out).items()) if k > 1])
        report.add('retired', retired_size_violations(out))
        report.add('permanence', permanence_violations(out))
        report.add('diagonalized', undiagonalized(out, len(cfg.options.get('schemes', []))),
                   {'witnessed': diagonalized_schemes(out)})
        report.add('q-bound', q_bound_failures(out))
    elif c == 'permitting':
        eq = verify_equiv(out, p.W)
        report.add('equivalence', not eq.passed, eq.summary())
        report.add('pointers', pointer_violations(out))
    elif c == 'pressing':
        report.add('single-open', single_open_violations(out))
        report.add('sizes', size_violations(out))
        report.add('mirror', mirror_violations(out))
        report.add('tail-rigidity', tail_rigidity_violations(out, [canonical_iso(out)]))
        report.add('x0', out.pool.xs.get(0) != 1, out.pool.xs.get(0))
    if c in ('d1', 'd2', 'd3', 'pressing'):
        _decode_checks(report, c, p, out)
    return report

#%%
def analyze(construction, out):
    """ Orbit character of every injection log, or the component table """
    if construction == 'pressing':
        return {'components': out.component_table(),
                'retired': sorted(out.pool.retired),
                'statuses': [s.to_json() for s in out.statuses]}
    rows = {}
    for name, log in sorted(structure_logs(construction, out).items()):
        d = decompose(log.truncate())
        ch = character(d)
        hist = np.bincount(np.asarray(ch.cycles, dtype=np.int64)) if ch.cycles else np.zeros(0)
        rows[name] = {'cycles': {str(k): int(v) for k, v in enumerate(hist) if v},
                      'segments': list(ch.segments),
                      'elements': ch.total}
    return rows

#%%
def cmd_build(cfg, p, args):
    out = run_build(cfg, args.progress, p)
    directory = env_out(args.out)
    write_artifacts(cfg, out, directory)
    logger.info('wrote %s artifacts to %s', cfg.construction, directory)
    print(json.dumps({'construction': cfg.construction, 'out': directory,
                      'digests': {k: log_digest(v) for k, v in
                                  sorted(structure_logs(cfg.construction, out).items())}},
                     sort_keys=True))
    return EXIT_OK

def cmd_decode(cfg, p, args):
    if args.target and DECODERS[args.target] != cfg.construction:
        raise ConfigError('decoder {0} does not fit a {1} run'.format(args.target, cfg.construction))
    out = _output(cfg, p, args)
    print(json.dumps(decode(cfg.construction, p, out, args.x, args.e), sort_keys=True))
    return EXIT_OK

def cmd_verify(cfg, p, args):
    directory = env_out(args.out)
    out = load_artifact(directory)
    if not built_from(cfg, directory):
        raise ConfigError('artifacts in {0} were built from another config; '
                          'run "punctlab build" again'.format(directory))
    logs = {}
    for name in structure_logs(cfg.construction, out):
        path = os.path.join(directory, name + '.jsonl')
        if not check_if_file_exist(path):
            raise ConfigError('missing artifact {0}'.format(path))
        logs[name] = StructureLog.read(path, signature_of(cfg.construction))
    report = verify(cfg, p, out, logs)
    write_json(report.to_json(), os.path.join(directory, 'report.json'))
    print(json.dumps(report.to_json(), sort_keys=True))
    return EXIT_OK if report.passed else EXIT_INVARIANT

def cmd_analyze(cfg, p, args):
    out = _output(cfg, p, args)
    print(json.dumps(analyze(cfg.construction, out), sort_keys=True))
    if args.dot:
        logs = structure_logs(cfg.construction, out)
        if not logs:
            raise ConfigError('{0} builds no structure to draw'.format(cfg.construction))
        name = sorted(logs)[0]
        with open(args.dot, 'w') as f:
            f.write(to_dot(logs[name].truncate()))
        logger.info('wrote DOT of %s to %s', name, args.dot)
    return EXIT_OK

def cmd_trace(cfg, p, args):
    out = _output(cfg, p, args)
    for row in trace_rows(cfg.construction, out):
        print(json.dumps(row, sort_keys=True, separators=(',', ':')))
    return EXIT_OK

COMMANDS = {'build': cmd_build, 'decode': cmd_decode, 'verify': cmd_verify,
            'analyze': cmd_analyze, 'trace': cmd_trace}

#%%
def get_parser():
    parser = argparse.ArgumentParser(prog='punctlab',
                                     description='Stage-by-stage simulator of punctual '
                                                 'structure constructions')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for INFO, -vv for DEBUG')
    parser.add_argument('--progress', action='store_true', help='show stage progress bars')
    sub = parser.add_subparsers(dest='command', required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument('--config', required=True, help='JSON run config')
        sp.add_argument('--horizon', type=int, default=None, help='override the config horizon')
        sp.add_argument('--out', default='out', help='artifact directory (PUNCTLAB_OUT wins)')
        if name == 'decode':
            sp.add_argument('target', nargs='?', default=None, choices=sorted(DECODERS),
                            help='decoder; defaults to the one of the construction')
            sp.add_argument('--x', type=int, required=True)
            sp.add_argument('--e', type=int, default=0, help='opponent index for pathological')
        if name == 'analyze':
            sp.add_argument('--dot', default=None, help='write an orbit diagram in DOT format')
    return parser

def main(argv=None):
    args = get_parser().parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format='%(asctime)s %(name)s %(levelname)s: %(message)s')
    try:
        cfg = load_config(args.config, args.horizon)
        p = prepare(cfg)
        return COMMANDS[args.command](cfg, p, args)
    except (ConfigError, HorizonExceeded) as err:
        logger.error('%s', err)
        return EXIT_CONFIG
    except InvariantViolation as err:
        logger.error('invariant violated: %s', err)
        return EXIT_INVARIANT
    except PunctlabError as err:
        logger.error('%s', err)
        return EXIT_INVARIANT

if __name__ == '__main__':
    sys.exit(main())
