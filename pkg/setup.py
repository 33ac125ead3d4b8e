#!/usr/bin/env python

try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup
import sys

VERSION = "0.1"

copy_args = sys.argv[1:]

with open("README.md", "r") as fh:
    long_description = fh.read()

setup(name='credalvol',
      version=VERSION,
      script_args=copy_args,
      description='Volume of credal sets as a measure of epistemic '
                  'uncertainty',
      long_description=long_description,
      long_description_content_type="text/markdown",
      packages=['credalvol'],
      package_data={'credalvol': ['schemas/*.json']},
      install_requires=['numpy', 'scipy', 'msgpack'],
      extras_require={'validate': ['jsonschema']},
      entry_points={
          'console_scripts': ['credalvol=credalvol.cli:main']},
      classifiers=[
          "Programming Language :: Python :: 3",
          "License :: OSI Approved :: MIT License",
          "Operating System :: OS Independent",
          "Intended Audience :: Science/Research",
          "Topic :: Scientific/Engineering :: Mathematics",
      ])
