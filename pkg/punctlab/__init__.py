#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Tue Oct  6 10:02:44 2026

@author: punctlab
"""

#%%
import logging

from .core import (StageMachine, StructureLog, Truncation, check_punctuality,
                   PunctlabError, ConfigError, HorizonExceeded, InvariantViolation)
from .injection import punctualize, decompose, character, match_candidates
from .encode_d1 import build_d1, decode_d1
from .encode_d2 import build_d2, decode_d2
from .encode_d3 import build_d3, decode_d3
from .pathological import build_pathological, decode_q
from .permitting import build_low, decode_w, verify_equiv
from .pressing import build_pressing, decode_g, recover_iso
from .config import RunConfig, load_config

logging.getLogger(__name__).addHandler(logging.NullHandler())
