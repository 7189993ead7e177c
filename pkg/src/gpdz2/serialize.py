"""JSON documents for groupoids, Z2-groupoids, maps, squares and universe configs.

A document is ``{"version": 1, "kind": ..., "body": ...}``.  Identifiers are
strings on disk (see ``ids``); composition is stored as ``[g, f, g.f]``
triples and involutions as explicit object and morphism maps.
"""
import json

from .equivariant import EquivariantFunctor, ZTwoGroupoid
from .errors import SchemaViolation, ValidationError
from .groupoid import Functor, Groupoid, validate_groupoid
from .ids import decode_id, encode_id
from .model import LiftingProblem

VERSION = 1
KINDS = ("groupoid", "ztwo-groupoid", "map", "square", "bundle-config")


class BundleConfig:
    def __init__(self, pool):
        self.pool = pool

    def __eq__(self, other):
        return isinstance(other, BundleConfig) and other.pool == self.pool

    def __repr__(self):
        return f"BundleConfig(pool={self.pool})"


# -- to documents ----------------------------------------------------------------------

def _groupoid_body(g):
    E = encode_id
    obs, ms = g.objects, g.morphisms
    compose = []
    for gi, fi in zip(*(g.comp >= 0).nonzero()):
        compose.append([E(ms[gi]), E(ms[fi]), E(ms[g.comp[gi, fi]])])
    return {
        "objects": [E(x) for x in obs],
        "morphisms": [[E(m), E(obs[s]), E(obs[t])] for m, s, t in zip(ms, g.src, g.tgt)],
        "identity": [[E(x), E(ms[i])] for x, i in zip(obs, g.ident)],
        "inverse": [[E(m), E(ms[i])] for m, i in zip(ms, g.inv)],
        "compose": compose,
    }


def _map_body(src, tgt, obj_map, mor_map):
    E = encode_id
    return {
        "objects": [[E(x), E(tgt.objects[y])] for x, y in zip(src.objects, obj_map)],
        "morphisms": [[E(m), E(tgt.morphisms[n])] for m, n in zip(src.morphisms, mor_map)],
    }


def _ztwo_body(X):
    return {"carrier": _groupoid_body(X.carrier),
            "involution": _map_body(X.carrier, X.carrier, X.aobj, X.amor)}


def _emap_body(f):
    body = {"source": _ztwo_body(f.source), "target": _ztwo_body(f.target)}
    body.update(_map_body(f.source.carrier, f.target.carrier, f.obj_map, f.mor_map))
    return body


def serialize(value):
    """The document of a value."""
    if isinstance(value, Groupoid):
        kind, body = "groupoid", _groupoid_body(value)
    elif isinstance(value, ZTwoGroupoid):
        kind, body = "ztwo-groupoid", _ztwo_body(value)
    elif isinstance(value, EquivariantFunctor):
        kind, body = "map", _emap_body(value)
    elif isinstance(value, LiftingProblem):
        kind = "square"
        body = {k: _emap_body(getattr(value, k)) for k in ("left", "right", "top", "bottom")}
    elif isinstance(value, BundleConfig):
        kind, body = "bundle-config", {"pool": value.pool}
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")
    return {"version": VERSION, "kind": kind, "body": body}


def dumps(value):
    return json.dumps(serialize(value), indent=1) + "\n"


# -- from documents ------------------------------------------------------------------------

def _need(obj, key, typ, path):
    if not isinstance(obj, dict):
        raise SchemaViolation("expected an object", path)
    if key not in obj:
        raise SchemaViolation(f"missing field {key!r}", path)
    v = obj[key]
    if not isinstance(v, typ) or isinstance(v, bool) and typ is int:
        raise SchemaViolation(f"expected {typ.__name__}", f"{path}.{key}")
    return v


def _ident(text, path):
    if not isinstance(text, str):
        raise SchemaViolation("identifiers must be strings", path)
    try:
        return decode_id(text)
    except (ValueError, TypeError):
        raise SchemaViolation(f"bad identifier {text!r}", path) from None


def _pairs(rows, path, width):
    if not isinstance(rows, list):
        raise SchemaViolation("expected a list", path)
    out = []
    for i, r in enumerate(rows):
        if not isinstance(r, list) or len(r) != width:
            raise SchemaViolation(f"expected a list of {width} identifiers", f"{path}[{i}]")
        out.append(tuple(_ident(v, f"{path}[{i}][{j}]") for j, v in enumerate(r)))
    return out


def _known(value, known, path):
    if value not in known:
        raise SchemaViolation(f"unknown identifier {encode_id(value)!r}", path)


def _groupoid(body, path):
    objs = _need(body, "objects", list, path)
    objects = [_ident(x, f"{path}.objects[{i}]") for i, x in enumerate(objs)]
    if len(set(objects)) != len(objects):
        raise SchemaViolation("duplicate object identifier", f"{path}.objects")
    known_o = set(objects)
    morphisms = _pairs(_need(body, "morphisms", list, path), f"{path}.morphisms", 3)
    for i, (_, s, t) in enumerate(morphisms):
        _known(s, known_o, f"{path}.morphisms[{i}][1]")
        _known(t, known_o, f"{path}.morphisms[{i}][2]")
    known_m = {m for m, _, _ in morphisms}
    if len(known_m) != len(morphisms):
        raise SchemaViolation("duplicate morphism identifier", f"{path}.morphisms")
    ident = _pairs(_need(body, "identity", list, path), f"{path}.identity", 2)
    inverse = _pairs(_need(body, "inverse", list, path), f"{path}.inverse", 2)
    compose = _pairs(_need(body, "compose", list, path), f"{path}.compose", 3)
    for i, (x, m) in enumerate(ident):
        _known(x, known_o, f"{path}.identity[{i}][0]")
        _known(m, known_m, f"{path}.identity[{i}][1]")
    for i, row in enumerate(inverse):
        for j, m in enumerate(row):
            _known(m, known_m, f"{path}.inverse[{i}][{j}]")
    for i, row in enumerate(compose):
        for j, m in enumerate(row):
            _known(m, known_m, f"{path}.compose[{i}][{j}]")
    try:
        g = Groupoid.from_tables(objects, morphisms, dict(ident), compose, dict(inverse))
    except ValidationError as e:
        e.args = (f"{path}: {e.args[0]}",)
        raise
    return validate_groupoid(g)


def _functor(src, tgt, body, path, check=True):
    objs = _pairs(_need(body, "objects", list, path), f"{path}.objects", 2)
    mors = _pairs(_need(body, "morphisms", list, path), f"{path}.morphisms", 2)
    for i, (x, y) in enumerate(objs):
        _known(x, src.ob_index, f"{path}.objects[{i}][0]")
        _known(y, tgt.ob_index, f"{path}.objects[{i}][1]")
    for i, (m, n) in enumerate(mors):
        _known(m, src.mor_index, f"{path}.morphisms[{i}][0]")
        _known(n, tgt.mor_index, f"{path}.morphisms[{i}][1]")
    return Functor.from_maps(src, tgt, dict(objs), dict(mors), check=check)


def _ztwo(body, path):
    g = _groupoid(_need(body, "carrier", dict, path), f"{path}.carrier")
    a = _functor(g, g, _need(body, "involution", dict, path), f"{path}.involution")
    return ZTwoGroupoid(g, a)


def _emap(body, path):
    X = _ztwo(_need(body, "source", dict, path), f"{path}.source")
    Y = _ztwo(_need(body, "target", dict, path), f"{path}.target")
    return EquivariantFunctor(X, Y, _functor(X.carrier, Y.carrier, body, path))


def deserialize(doc):
    """The value of a document; raises ``SchemaViolation`` or ``ValidationError``."""
    if not isinstance(doc, dict):
        raise SchemaViolation("document must be an object", "$")
    version = _need(doc, "version", int, "$")
    if version != VERSION:
        raise SchemaViolation(f"unsupported version {version}", "$.version")
    kind = _need(doc, "kind", str, "$")
    if kind not in KINDS:
        raise SchemaViolation(f"unknown kind {kind!r}", "$.kind")
    body = _need(doc, "body", dict, "$")
    if kind == "groupoid":
        return _groupoid(body, "$.body")
    if kind == "ztwo-groupoid":
        return _ztwo(body, "$.body")
    if kind == "map":
        return _emap(body, "$.body")
    if kind == "square":
        parts = {k: _emap(_need(body, k, dict, "$.body"), f"$.body.{k}") for k in ("left", "right", "top", "bottom")}
        return LiftingProblem(**parts)
    pool = _need(body, "pool", int, "$.body")
    if pool < 0:
        raise SchemaViolation("pool must be non-negative", "$.body.pool")
    return BundleConfig(pool)


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaViolation(f"invalid JSON: {e.msg}", f"line {e.lineno} column {e.colno}") from None
    return deserialize(doc)
