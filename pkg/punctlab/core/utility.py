#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Tue Oct  6 10:20:41 2026

@author: punctlab
"""
#%%
try:
    import cPickle as pkl
except ImportError:
    import pickle as pkl
import json
import os
from math import inf

#%%
class params:
    pass

    def __repr__(self):
        return str(self.__dict__)

#%%
def load_obj(name):
    """ Function for loading a pickle file """
    with open(name + '.pkl', 'rb') as f:
        return pkl.load(f)

#%%
def save_obj(obj, name):
    """ Function for saving a variable as a pickle file """
    with open(name + '.pkl', 'wb') as f:
        pkl.dump(obj, f, pkl.HIGHEST_PROTOCOL)

#%%
def create_dir(direc):
    """ Create a dir (and its parents) if it does not already exists """
    if not os.path.exists(direc):
        os.makedirs(direc)

#%%
def check_if_file_exist(file):
    return os.path.isfile(file)

#%%
def parse_count(value):
    """ Parse a natural-or-infinite count. Accepts ints, math.inf and the
        strings "inf", "infinity", "omega"
    """
    if isinstance(value, str):
        if value.strip().lower() in ('inf', 'infinity', 'omega'):
            return inf
        value = int(value)
    if value == inf:
        return inf
    if isinstance(value, bool) or int(value) != value or value < 0:
        raise ValueError('not a natural-or-infinite count: {0}'.format(value))
    return int(value)

#%%
def dump_count(value):
    """ Inverse of parse_count for JSON output """
    return 'inf' if value == inf else int(value)

#%%
def write_json(obj, path):
    """ Write an object as sorted-key JSON, newline terminated """
    with open(path, 'w') as f:
        f.write(json.dumps(obj, sort_keys=True, indent=1))
        f.write('\n')

#%%
def write_jsonl(rows, path):
    """ Write an iterable of dicts, one compact JSON object per line """
    with open(path, 'w') as f:
        for row in rows:
            f.write(json.dumps(row, separators=(',', ':')))
            f.write('\n')
