"""Utility classes"""

import os
import concurrent.futures
import numpy as np


def _get_relative_path(reference, path):
    """Return `path` interpreted relative to `reference`"""
    if os.path.isabs(path):
        return path
    else:
        return os.path.join(os.path.dirname(reference), path)


def _text_choice_property(attr, choices, doc=None):
    """Like `property` but requires that the value be one of the set choices"""
    schoices = frozenset(choices)

    def getfunc(obj):
        return getattr(obj, "_" + attr)

    def setfunc(obj, val):
        if val is not None and val not in schoices:
            raise ValueError(
                "Invalid choice %s for %s; valid values are %s, None"
                % (repr(val), attr, ", ".join(repr(x) for x in choices)))
        setattr(obj, "_" + attr, val)

    return property(getfunc, setfunc, doc=doc)


def _substream(seed, index):
    """Return an independent random generator for task `index`.
       Streams depend only on (seed, index), never on scheduling."""
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(index,)))


def _map_tasks(func, tasks, threads=None):
    """Apply `func` to each of `tasks`, returning results in task order.
       If `threads` is greater than 1, a thread pool with at most that many
       workers is used."""
    tasks = list(tasks)
    if threads is None or threads <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with concurrent.futures.ThreadPoolExecutor(
            max_workers=min(threads, len(tasks))) as pool:
        return list(pool.map(func, tasks))


def _parse_range(text):
    """Parse an inclusive integer range such as '2:8' (or a single '5')"""
    parts = text.split(':')
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise ValueError("Invalid range %s; expected LO:HI" % repr(text))
    if hi < lo:
        raise ValueError("Empty range %s" % repr(text))
    return list(range(lo, hi + 1))


def _parse_floats(text):
    """Parse a comma-separated list of floats"""
    try:
        return [float(x) for x in text.split(',')]
    except ValueError:
        raise ValueError("Invalid number list %s" % repr(text))
