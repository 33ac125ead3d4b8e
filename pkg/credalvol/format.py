"""Utility classes to handle the JSON and CSV file formats.

   Credal sets are stored as JSON objects of the form
   ``{"d": 3, "vertices": [[p1, p2, p3], ...]}`` and groupings as
   ``{"d1": 2, "d2": 2, "map": [[i, j], ...]}``. Experiment outputs are
   written as JSON (see :class:`JsonWriter`) or, for tables, as CSV (see
   :class:`CsvWriter`).

   Numbers are written with 17 significant digits and object keys are
   sorted, so that identical data always gives identical bytes.

   See :mod:`credalvol.format_binary` for the binary (msgpack) equivalent.
"""

import csv
import json
import math
import os
import numpy as np
import credalvol


class CredalFormatError(ValueError):
    """Exception raised for a file that does not describe a valid credal
       set or grouping"""
    pass


def _as_int(value, name):
    if isinstance(value, bool) or not isinstance(value, int):
        raise CredalFormatError("%s must be an integer, not %s"
                                % (name, repr(value)))
    return value


def _credal_set_from_dict(data):
    """Build a credal set from a decoded {"d", "vertices"} mapping"""
    if not isinstance(data, dict):
        raise CredalFormatError("Credal set must be an object")
    for key in ('d', 'vertices'):
        if key not in data:
            raise CredalFormatError("Credal set is missing '%s'" % key)
    d = _as_int(data['d'], 'd')
    if d < 2:
        raise CredalFormatError("Credal set needs at least 2 labels, not %d"
                                % d)
    verts = data['vertices']
    if not isinstance(verts, list) or not verts:
        raise CredalFormatError("'vertices' must be a nonempty list")
    for v in verts:
        if not isinstance(v, list) or len(v) != d:
            raise CredalFormatError(
                "Vertex %s does not have %d entries" % (repr(v), d))
        for x in v:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise CredalFormatError("Vertex entry %s is not a number"
                                        % repr(x))
    return credalvol.make_credal_polytope(verts)


def _credal_set_to_dict(p):
    return {'d': p.d, 'vertices': p.vertex_array.tolist()}


def read_credal_set(fh):
    """Read a credal set from a JSON file handle.

       :rtype: :class:`credalvol.CredalPolytope`
       :raises CredalFormatError: if the file is not a valid credal set.
    """
    try:
        data = json.load(fh)
    except ValueError as exc:
        raise CredalFormatError("Invalid JSON: %s" % exc)
    return _credal_set_from_dict(data)


def write_credal_set(p, fh):
    """Write credal set `p` to a JSON file handle (vertices in canonical
       order, 17 significant digits)."""
    JsonWriter(fh).write(_credal_set_to_dict(p))


def read_grouping(fh):
    """Read a :class:`credalvol.Grouping` from a JSON file handle"""
    try:
        data = json.load(fh)
    except ValueError as exc:
        raise CredalFormatError("Invalid JSON: %s" % exc)
    if not isinstance(data, dict):
        raise CredalFormatError("Grouping must be an object")
    for key in ('d1', 'd2', 'map'):
        if key not in data:
            raise CredalFormatError("Grouping is missing '%s'" % key)
    pairs = data['map']
    if (not isinstance(pairs, list)
            or not all(isinstance(x, list) and len(x) == 2 for x in pairs)):
        raise CredalFormatError("'map' must be a list of [i, j] pairs")
    return credalvol.Grouping(
        [(_as_int(i, 'map entry'), _as_int(j, 'map entry'))
         for i, j in pairs],
        _as_int(data['d1'], 'd1'), _as_int(data['d2'], 'd2'))


def _is_binary(path):
    return os.path.splitext(path)[1].lower() == '.msgpack'


def read_credal_set_file(path):
    """Read a credal set from a file, in binary format if the file name
       ends in .msgpack or JSON otherwise."""
    if _is_binary(path):
        import credalvol.format_binary
        with open(path, 'rb') as fh:
            return credalvol.format_binary.read_credal_set(fh)
    with open(path) as fh:
        return read_credal_set(fh)


def write_credal_set_file(p, path):
    """Write a credal set to a file; see :func:`read_credal_set_file`"""
    if _is_binary(path):
        import credalvol.format_binary
        with open(path, 'wb') as fh:
            credalvol.format_binary.write_credal_set(p, fh)
    else:
        with open(path, 'w') as fh:
            write_credal_set(p, fh)


class JsonWriter(object):
    """Write Python objects to a file as canonical JSON.

       Dicts, lists, tuples, strings, bools, None, ints and floats are
       supported, as are numpy scalars and arrays. Floats are written with
       17 significant digits; non-finite floats are written as null.

       :param fh: Python filelike object to write to.
    """
    def __init__(self, fh):
        self.fh = fh

    def write(self, obj):
        """Write `obj` followed by a newline"""
        self.fh.write(self._repr(obj))
        self.fh.write("\n")

    def _repr(self, obj):
        if isinstance(obj, np.ndarray):
            obj = obj.tolist()
        elif isinstance(obj, np.generic):
            obj = obj.item()
        if obj is None:
            return 'null'
        elif isinstance(obj, bool):
            return 'true' if obj else 'false'
        elif isinstance(obj, int):
            return str(obj)
        elif isinstance(obj, float):
            return "%.17g" % obj if math.isfinite(obj) else 'null'
        elif isinstance(obj, str):
            return json.dumps(obj)
        elif isinstance(obj, dict):
            return "{%s}" % ", ".join(
                "%s: %s" % (json.dumps(str(k)), self._repr(obj[k]))
                for k in sorted(obj, key=str))
        elif isinstance(obj, (list, tuple)):
            return "[%s]" % ", ".join(self._repr(x) for x in obj)
        raise TypeError("Cannot write %s as JSON" % repr(obj))


def dumps(obj):
    """Return `obj` as canonical JSON text; see :class:`JsonWriter`"""
    return JsonWriter(None)._repr(obj)


class CsvWriter(object):
    """Write rows of a table to a CSV file.

       :param fh: Python filelike object to write to.
       :param list columns: Column names, written as the header.
       :param str comment: If given, written first as a line starting
              with '#'.
    """
    def __init__(self, fh, columns, comment=None):
        self.columns = list(columns)
        if comment is not None:
            fh.write("# %s\n" % comment)
        self._writer = csv.writer(fh, lineterminator='\n')
        self._writer.writerow(self.columns)

    def write(self, row):
        """Write one row, given as a dict keyed by column name"""
        self._writer.writerow([self._repr(row.get(c)) for c in self.columns])

    def _repr(self, val):
        if isinstance(val, np.generic):
            val = val.item()
        if val is None:
            return ''
        elif isinstance(val, bool):
            return 'true' if val else 'false'
        elif isinstance(val, float):
            return "%.17g" % val
        return str(val)
