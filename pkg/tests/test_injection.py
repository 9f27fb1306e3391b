# -*- coding: utf-8 -*-
"""
Created on Sat Oct 17 11:40:53 2026

@author: punctlab
"""

#%%
import math

import pytest

from punctlab.core.exceptions import ConfigError, NotInjective
from punctlab.core.machine import Truncation, check_punctuality
from punctlab.injection import (InjSpec, character, check_punctualizable, decompose,
                                extend_mapping, match_candidates, punctualize,
                                to_dot, truncation_graph)

#%%
class TestInjSpec:
    def test_infinite_counts(self):
        spec = InjSpec('inf', 0)
        assert spec.N0 == math.inf

    def test_reveal_stages_increase(self):
        with pytest.raises(ConfigError):
            InjSpec(1, 0, ((2, 5), (3, 5)))

    def test_sizes_positive(self):
        with pytest.raises(ConfigError):
            InjSpec(1, 0, ((0, 5),))

    def test_needs_an_infinite_orbit(self):
        with pytest.raises(ConfigError):
            check_punctualizable(InjSpec(0, 0))

#%%
class TestPunctualize:
    def test_chain_growth(self):
        log = punctualize(InjSpec(2, 1), 5)
        assert [len(ev.new) for ev in log.events[:4]] == [1, 2, 4, 3]
        d = decompose(log.truncate(3))
        assert d.cycles == ()
        assert d.segments == ((0, 1, 3, 7), (4, 8), (6, 2, 5, 9))
        assert character(d).segments == (2, 4, 4)

    def test_punctual(self):
        log = punctualize(InjSpec('inf', 2, ((3, 4), (1, 7))), 40)
        assert check_punctuality(log).passed

    def test_reveals(self):
        log, builder = punctualize(InjSpec(1, 0, ((3, 2),)), 4, return_builder=True)
        assert len(builder.cycles) == 1
        assert character(decompose(log.truncate())).cycles == (3,)

    def test_zeta_seed(self):
        log, builder = punctualize(InjSpec(0, 1), 3, return_builder=True)
        members = builder.chain_members()
        assert members['omega'] == []
        assert members['zeta'][0][1:3] == [0, 1]

    def test_empty_spec(self):
        with pytest.raises(ConfigError):
            punctualize(InjSpec(0, 0), 5)

#%%
@pytest.fixture
def pair_of_truncations():
    a = Truncation.from_map(5, {0: 1, 1: 2, 2: 0, 3: 4})
    b = Truncation.from_map(6, {0: 1, 1: 2, 3: 4, 4: 5, 5: 3})
    return a, b

class TestDecompose:
    def test_cycles_and_segments(self, pair_of_truncations):
        a, b = pair_of_truncations
        assert decompose(a).cycles == ((0, 1, 2),)
        assert decompose(a).segments == ((3, 4),)
        assert decompose(b).cycles == ((3, 4, 5),)
        assert decompose(b).segments == ((0, 1, 2),)

    def test_not_injective(self):
        with pytest.raises(NotInjective) as err:
            decompose(Truncation.from_map(3, {0: 2, 1: 2}))
        assert err.value.target == 2

    def test_isolated_points_are_segments(self):
        assert decompose(Truncation.from_map(2, {})).segments == ((0,), (1,))

#%%
class TestMatching:
    def test_candidates(self, pair_of_truncations):
        a, b = pair_of_truncations
        found = match_candidates(a, b, [0, 3])
        assert sorted(m[0] for m in found) == [3, 4, 5]
        assert all(m[3] == 0 for m in found)

    def test_distinct_orbits(self):
        a = Truncation.from_map(4, {0: 1, 1: 0, 2: 3, 3: 2})
        b = Truncation.from_map(2, {0: 1, 1: 0})
        assert match_candidates(a, b, [0, 2]) == []

    def test_limit(self, pair_of_truncations):
        a, b = pair_of_truncations
        assert len(match_candidates(a, b, [0], limit=2)) == 2

    def test_too_many_anchors(self, pair_of_truncations):
        a, b = pair_of_truncations
        with pytest.raises(ConfigError):
            match_candidates(a, b, list(range(13)))

    def test_extend(self, pair_of_truncations):
        a, b = pair_of_truncations
        assert extend_mapping(a, b, {0: 4, 3: 0}) == {0: 4, 1: 5, 2: 3, 3: 0, 4: 1}

#%%
class TestGraphs:
    def test_truncation_graph(self, pair_of_truncations):
        G = truncation_graph(pair_of_truncations[0])
        assert G.number_of_nodes() == 5
        assert G.number_of_edges() == 4
        assert all(d['label'] == 'f' for _, _, d in G.edges(data=True))

    def test_dot(self, pair_of_truncations):
        text = to_dot(pair_of_truncations[0])
        assert text.lstrip().startswith('digraph')
