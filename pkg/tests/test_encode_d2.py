# -*- coding: utf-8 -*-
"""
Created on Sat Oct 17 13:58:02 2026

@author: punctlab
"""

#%%
import pytest

from punctlab.core.exceptions import ConfigError
from punctlab.core.machine import check_punctuality
from punctlab.encode_d2 import (DeltaTwoBuilder, build_d2, decode_d2, endpoint_violations,
                                head_index_violations)
from punctlab.injection import character, decompose
from punctlab.oracles import Approx2

#%%
class TestGluing:
    @pytest.fixture
    def g2(self):
        return Approx2(limits=(0, 1), changes=((3,),))

    @pytest.fixture
    def out(self, g2):
        return build_d2(g2, horizon=6)

    def test_anchors(self, out):
        assert out.a_anchors == [0, 2, 5, 9, 14, 20]

    def test_glue_at_mind_change(self, out):
        assert out.glue_stages == [(3, 0)]
        assert out.markers.left[2] == (0, 2, 5)
        assert out.markers.left[3] == (0, 7, 8, 9)
        assert out.markers.left[-1] == (0, 7, 8, 9, 14, 20)

    def test_glued_chain(self, out):
        f = out.log_b.truncate().f
        assert (f[3], f[4], f[5]) == (2, 5, 6)
        d = decompose(out.log_b.truncate())
        assert len(d.segments) == 6
        assert d.segments[0][:6] == (0, 1, 3, 2, 4, 5)
        assert character(decompose(out.log_a.truncate())).segments == (1, 2, 3, 4, 5, 6)

    def test_decode(self, g2, out):
        h = out.canonical_iso.__getitem__
        assert decode_d2(h, g2, 0, out.a_anchors) == 0
        assert decode_d2(h, g2, 1, out.a_anchors) == 1

    def test_invariants(self, g2, out):
        assert endpoint_violations(out, g2) == []
        assert head_index_violations(out, g2) == []

#%%
@pytest.mark.parametrize('variant,fixed', [('omega', 0), ('omega', 1), ('zeta', 2)])
class TestVariants:
    def test_punctual(self, approx2, variant, fixed):
        out = build_d2(approx2, variant, fixed, horizon=30)
        assert check_punctuality(out.log_a).passed
        assert check_punctuality(out.log_b).passed

    def test_decode_equals_limit(self, approx2, variant, fixed):
        out = build_d2(approx2, variant, fixed, horizon=30)
        h = out.canonical_iso.__getitem__
        for x in range(min(15, len(out.a_anchors) - 2)):
            if approx2.last_change(x) < 30:
                assert decode_d2(h, approx2, x, out.a_anchors) == approx2.limit(x)

    def test_endpoints_stabilize(self, approx2, variant, fixed):
        out = build_d2(approx2, variant, fixed, horizon=30)
        assert endpoint_violations(out, approx2) == []
        assert head_index_violations(out, approx2) == []

#%%
class TestConfig:
    def test_variant(self, approx2):
        with pytest.raises(ConfigError):
            DeltaTwoBuilder(approx2, variant='theta')

    def test_fixed_count(self, approx2):
        with pytest.raises(ConfigError):
            DeltaTwoBuilder(approx2, fixed_count=-1)

    def test_metadata(self, approx2):
        meta = build_d2(approx2, horizon=8).metadata()
        assert meta['construction'] == 'd2'
