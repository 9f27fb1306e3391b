# -*- coding: utf-8 -*-
"""
Created on Tue Oct  6 10:11:20 2026

@author: punctlab
"""

#%%
from .exceptions import (PunctlabError, ConfigError, HorizonExceeded,
                         InvariantViolation, NotInjective, BudgetExceeded,
                         DecodeError, PremiseError)
from .machine import (Signature, INJECTION, run_lockstep, EnumEvent, StructureLog, Truncation,
                      StageMachine, Violation, PunctualityReport,
                      check_punctuality, fresh_index, check_index_stage_bound,
                      log_digest)
