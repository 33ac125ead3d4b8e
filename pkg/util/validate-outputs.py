#!/usr/bin/python3

"""Check the output of each command line subcommand for validity against
   the schemas shipped with credalvol.

   This should be rerun whenever an output or a schema is changed.
"""

import sys
import os
import json
import tempfile
import subprocess
import credalvol.schema

topdir = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))


def inp(fname):
    return os.path.join(topdir, 'test', 'input', fname)


runs = [
    ('volume', ['volume', '--input', inp('simplex3.json')]),
    ('volume', ['volume', '--mc', '--input', inp('simplex3.json'),
                '--samples', '10000']),
    ('measures', ['measures', '--input', inp('simplex3.json')]),
    ('axioms', ['axioms', '--input', inp('interval2.json'),
                '--grouping', inp('diagonal.json')]),
    ('axioms', ['axioms', 'a3', '--base', '0.9']),
    ('axioms', ['axioms', 'lift-continuity', '--base', '0.5', '--n', '20']),
    ('table', ['axioms', 'example1', '--base', '0.5', '--n', '20']),
    ('packing_experiment', ['packing-experiment', '--d', '3', '--eps',
                            '0.015', '--restarts', '2']),
    ('table', ['packing-experiment', '--sweep-d', '2:3', '--restarts', '1']),
    ('carl_pajor', ['carl-pajor', '--d', '3', '--m', '20',
                    '--samples', '10000']),
    ('table', ['carl-pajor', '--sweep-d', '2:4', '--m', '20',
               '--samples', '10000']),
    ('lift', ['lift', '--input', inp('interval2.json'), '--target-d', '3']),
    ('table', ['idm-sim', '--p', '0.2,0.3,0.5', '--n', '50']),
    ('table', ['prior-shrinkage', '--eps', '0.05']),
    ('credal_set', ['convert', '--input', inp('simplex3.json')]),
]

failed = 0
with tempfile.TemporaryDirectory() as tmpdir:
    out = os.path.join(tmpdir, 'output.json')
    for schema, args in runs:
        print(' '.join(args[:2]))
        subprocess.check_call([sys.executable, '-m', 'credalvol.cli']
                              + args + ['--format', 'json', '--quiet',
                                        '--out', out])
        with open(out) as fh:
            obj = json.load(fh)
        try:
            credalvol.schema.validate(obj, schema)
        except credalvol.schema.ValidatorError as exc:
            print(exc)
            failed += 1
sys.exit(1 if failed else 0)
