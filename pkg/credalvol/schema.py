"""Validation of credal set files and command line outputs against the
   JSON Schema files shipped in the ``schemas`` directory.

   This requires the Python jsonschema package.
"""

import json
import os


class ValidatorError(ValueError):
    """Exception raised if an object fails to validate.
       See :func:`validate`."""
    pass


def _schema_dir():
    return os.path.join(os.path.dirname(os.path.abspath(__file__)),
                        'schemas')


def get_names():
    """Return the names of all shipped schemas, sorted"""
    return sorted(os.path.splitext(f)[0] for f in os.listdir(_schema_dir())
                  if f.endswith('.json'))


def load_schema(name):
    """Return the schema with the given name as a dict.

       :param str name: Schema name, e.g. 'volume' or 'credal_set'.
       :raises ValueError: if no such schema is shipped.
    """
    fname = os.path.join(_schema_dir(), name + '.json')
    if not os.path.exists(fname):
        raise ValueError("Unknown schema %s; options are %s"
                         % (name, ", ".join(get_names())))
    with open(fname) as fh:
        return json.load(fh)


def validate(obj, name):
    """Validate `obj` against the named schema.

       All problems are collected, not just the first one.

       :param obj: Decoded JSON object (dicts, lists, numbers, strings).
       :param str name: Schema name; see :func:`get_names`.
       :raises: :class:`ValidatorError` if the object fails to validate.
    """
    import jsonschema
    schema = load_schema(name)
    validator = jsonschema.Draft7Validator(schema)
    errors = ["%s: %s" % ("/".join(str(p) for p in e.absolute_path)
                          or "(top level)", e.message)
              for e in sorted(validator.iter_errors(obj),
                              key=lambda e: list(map(str, e.absolute_path)))]
    if errors:
        raise ValidatorError("\n\n".join(errors))
