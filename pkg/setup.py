# -*- coding: utf-8 -*-
"""
Created on Tue Oct  6 09:51:20 2026

@author: punctlab
"""

#%%
from setuptools import setup

#%%
setup(name = "punctlab",
      version = "1.0",
      description = "Stage-by-stage simulator of punctual structure constructions",
      author = "punctlab",
      packages = ["punctlab", "punctlab.core"],
      install_requires = ["numpy", "tqdm", "networkx", "pydot"],
      extras_require = {"test": ["pytest"]},
      entry_points = {"console_scripts": ["punctlab = punctlab.cli:main"]},
      license = "MIT",
      long_description = open('README.md').read())
