"""Identifiers.

In memory an identifier is a ``str``, an ``int`` or a tuple of identifiers.
On disk every identifier is a string: plain strings are written as-is unless
they could be mistaken for an encoded value, everything else is written as
compact JSON (tuples become lists).
"""
import json

_RESERVED_START = set('[-"0123456789')


def check_id(value):
    if isinstance(value, bool):
        return False
    if isinstance(value, (str, int)):
        return True
    if isinstance(value, tuple):
        return all(check_id(v) for v in value)
    return False


def _jsonable(value):
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    return value


def _from_json(value):
    if isinstance(value, list):
        return tuple(_from_json(v) for v in value)
    return value


def encode_id(value):
    if isinstance(value, str):
        if value and value[0] not in _RESERVED_START:
            return value
        return json.dumps(value)
    return json.dumps(_jsonable(value), separators=(",", ":"))


def decode_id(text):
    if not isinstance(text, str):
        raise TypeError(f"identifier must be a string, got {text!r}")
    if text and text[0] in _RESERVED_START:
        value = json.loads(text)
        if isinstance(value, float):
            raise ValueError(f"bad identifier {text!r}")
        return _from_json(value)
    return text


def sort_key(value):
    """Total order on identifiers: ints < strings < tuples."""
    if isinstance(value, int):
        return (0, value)
    if isinstance(value, str):
        return (1, value)
    return (2, tuple(sort_key(v) for v in value))
