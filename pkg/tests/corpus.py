"""Shared test corpus of small Z2-groupoids and maps between them."""
import json
import random
from functools import lru_cache

from gpdz2 import serialize
from gpdz2.equivariant import (
    EquivariantFunctor, check_I, enumerate_equivariant_maps, free_S, i_prime, nabla, one, s_i,
    to_one, trivial_action, ztwo_copairing, ztwo_coproduct, ztwo_product, ztwo_pullback,
)
from gpdz2.groupoid import group_groupoid, interval, terminal
from gpdz2.universe import build_universe


def objects():
    S1 = free_S(terminal())
    return {
        "one": one(),
        "check_I": check_I(),
        "nabla": nabla(),
        "S1": S1,
        "S_I": free_S(interval()),
        "one+one": ztwo_coproduct(one(), one()),
        "BZ2": trivial_action(group_groupoid(2)),
        "S1+one": ztwo_coproduct(S1, one()),
    }


def diagonal(X):
    idX = EquivariantFunctor.identity(X)
    return ztwo_product(X, X).pair(idX, idX)


@lru_cache(maxsize=None)
def maps():
    """Labelled maps covering fibrations and non-fibrations of several shapes."""
    out = [(f"{k}->1", to_one(X)) for k, X in objects().items()]
    out += [("i_prime", i_prime()), ("s_i", s_i())]
    n = nabla()
    idn = EquivariantFunctor.identity(n)
    out.append(("nabla x check_I -> nabla", ztwo_product(n, check_I()).first))
    out.append(("fold nabla+nabla", ztwo_copairing(idn, idn)))
    out.append(("diagonal nabla", diagonal(n)))
    b = build_universe(2)
    out.append(("p(2)", b.p))
    out.append(("diagonal U(2)", diagonal(b.U)))
    return tuple(out)


def _rename_ids(body, table):
    """Rewrite every identifier string of a carrier body through ``table``."""
    out = {}
    for key, rows in body.items():
        out[key] = [table.get(r, r) if isinstance(r, str) else [table.get(v, v) for v in r] for r in rows]
    return out


def relabel_source(q, rng):
    """``q`` with the objects and morphisms of its source renamed and shuffled.

    Goes through the document format so nothing of the original construction
    order survives.
    """
    doc = serialize.serialize(q)
    src = doc["body"]["source"]
    car = src["carrier"]
    ids = car["objects"] + [m[0] for m in car["morphisms"]]
    fresh = [json.dumps(f"e{k}") for k in range(len(ids))]
    rng.shuffle(fresh)
    table = dict(zip(ids, fresh))
    src["carrier"] = _rename_ids(car, table)
    for key in ("objects", "morphisms", "compose", "identity", "inverse"):
        rng.shuffle(src["carrier"][key])
    src["involution"] = _rename_ids(src["involution"], table)
    for key in ("objects", "morphisms"):
        doc["body"][key] = [[table[a], b] for a, b in doc["body"][key]]
        rng.shuffle(doc["body"][key])
    return serialize.deserialize(doc)


def small_bases():
    return [X for X in objects().values() if X.carrier.n_obj <= 4]


def random_coverings(n, seed=0, max_fiber=3):
    """``n`` coverings with fibers of at most ``max_fiber`` points over small bases.

    Each is the pullback of the universal covering along a randomly chosen
    map into the universe, then relabelled and shuffled.
    """
    rng = random.Random(seed)
    b = build_universe(max_fiber)
    bases = small_bases()
    cache = {}
    out = []
    while len(out) < n:
        k = rng.randrange(len(bases))
        if k not in cache:
            cache[k] = enumerate_equivariant_maps(bases[k], b.U)
        chi = rng.choice(cache[k])
        q = ztwo_pullback(chi, b.p).first
        out.append(relabel_source(q, rng))
    return out
