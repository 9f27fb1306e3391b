# -*- coding: utf-8 -*-
"""
Created on Tue Oct  6 10:12:03 2026

@author: punctlab
"""

#%%
class PunctlabError(Exception):
    """ Base class for every error raised by this library """

#%%
class ConfigError(PunctlabError):
    """ Raised when a configuration, schedule or catalog entry is invalid """

#%%
class HorizonExceeded(PunctlabError):
    """ Raised when a machine is asked to run past its horizon, or when the
        horizon is too small for a construction to reach a required stage
    """

#%%
class InvariantViolation(PunctlabError):
    """ Raised when a structural invariant of an event log is broken """

#%%
class NotInjective(PunctlabError):
    """ Two sources share a target in an injection structure """
    def __init__(self, target, sources):
        self.target = target
        self.sources = tuple(sources)
        super().__init__('elements {0} all map to {1}'.format(self.sources, target))

#%%
class BudgetExceeded(PunctlabError):
    """ A step-bounded scheme ran past its budget """
    def __init__(self, name, x, budget):
        self.name = name
        self.x = x
        self.budget = budget
        super().__init__('scheme {0} exceeded budget {1} on input {2}'.format(
                         name, budget, x))

#%%
class DecodeError(PunctlabError):
    """ A decoder was handed an oracle that cannot be an isomorphism """

#%%
class PremiseError(PunctlabError):
    """ The premise of a recovery procedure fails for the given opponents """
