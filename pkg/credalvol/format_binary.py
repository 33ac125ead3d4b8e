"""Utility classes to handle the binary credal set format.

   This stores the same content as the JSON format of
   :mod:`credalvol.format` in a msgpack map with keys 'd', 'vertices',
   'version' and 'encoder'. It requires the Python msgpack package.
"""

import credalvol
from credalvol.format import (CredalFormatError, _credal_set_from_dict,
                              _credal_set_to_dict)


def read_credal_set(fh):
    """Read a credal set from a binary file handle.

       :rtype: :class:`credalvol.CredalPolytope`
       :raises CredalFormatError: if the file is not a valid credal set.
    """
    data = _read_msgpack(fh)
    if not isinstance(data, dict):
        raise CredalFormatError("Binary credal set must be a map")
    return _credal_set_from_dict(
        dict((k, v) for k, v in data.items() if k in ('d', 'vertices')))


def write_credal_set(p, fh):
    """Write credal set `p` to a binary file handle"""
    data = _credal_set_to_dict(p)
    data.update({u'version': credalvol.__version__,
                 u'encoder': u'credalvol library'})
    _write_msgpack(data, fh)


def _read_msgpack(fh):
    """Read the msgpack data from the file"""
    import msgpack
    try:
        return msgpack.unpack(fh, raw=False)
    except ValueError as exc:
        raise CredalFormatError("Invalid msgpack data: %s" % exc)


def _write_msgpack(data, fh):
    """Write the data to the file as msgpack"""
    import msgpack
    msgpack.pack(data, fh, use_bin_type=True)
