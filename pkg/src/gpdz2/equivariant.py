"""Groupoids with a strict involution and the equivariant functors between them."""
from dataclasses import dataclass

import numpy as np

from . import search as _search
from .errors import UnknownName, ValidationError
from .groupoid import (
    IDX, Functor, coproduct, coproduct_functor, full_subgroupoid, indiscrete,
    interval, pairing, pullback, terminal,
)


class ZTwoGroupoid:
    """A groupoid together with a functor ``alpha`` satisfying ``alpha . alpha = id``."""

    def __init__(self, carrier, involution, check=True):
        self.carrier = carrier
        self.involution = involution
        if check:
            _check_involution(carrier, involution)

    @property
    def aobj(self):
        return self.involution.obj_map

    @property
    def amor(self):
        return self.involution.mor_map

    @property
    def objects(self):
        return self.carrier.objects

    @property
    def morphisms(self):
        return self.carrier.morphisms

    def act(self, x):
        """Image of an object id under the involution."""
        return self.involution.obj(x)

    def act_mor(self, m):
        return self.involution.mor(m)

    def __eq__(self, other):
        if not isinstance(other, ZTwoGroupoid):
            return NotImplemented
        return self.carrier == other.carrier and self.involution == other.involution

    def __hash__(self):
        return hash(self.carrier)

    def __repr__(self):
        return (f"ZTwoGroupoid({self.carrier.n_obj} objects, {self.carrier.n_mor} morphisms, "
                f"{len(fixed_points(self))} fixed)")


def _check_involution(g, a):
    if a.source != g or a.target != g:
        raise ValidationError("MALFORMED", "involution must be an endofunctor of the carrier")
    back = a.obj_map[a.obj_map]
    bad = np.flatnonzero(back != np.arange(g.n_obj))
    if len(bad):
        raise ValidationError("NOT_INVOLUTIVE", f"alpha(alpha({g.objects[bad[0]]!r})) differs",
                              witness=g.objects[bad[0]])
    back = a.mor_map[a.mor_map]
    bad = np.flatnonzero(back != np.arange(g.n_mor))
    if len(bad):
        raise ValidationError("NOT_INVOLUTIVE", f"alpha(alpha({g.morphisms[bad[0]]!r})) differs",
                              witness=g.morphisms[bad[0]])


def make_ztwo(g, a):
    """Validate ``a: g -> g`` as an involution; raises ``NOT_INVOLUTIVE``."""
    return ZTwoGroupoid(g, a)


def trivial_action(g):
    return ZTwoGroupoid(g, Functor.identity(g), check=False)


class EquivariantFunctor:
    """A functor ``f`` with ``f . alpha = beta . f`` on the nose."""

    def __init__(self, source, target, functor, check=True):
        self.source = source
        self.target = target
        self.functor = functor
        if check:
            if functor.source != source.carrier or functor.target != target.carrier:
                raise ValidationError("MALFORMED", "functor does not match the carriers")
            om, mm = functor.obj_map, functor.mor_map
            bad = np.flatnonzero(om[source.aobj] != target.aobj[om])
            if len(bad):
                raise ValidationError("NOT_EQUIVARIANT", "object map does not commute with involutions",
                                      witness=source.objects[bad[0]])
            bad = np.flatnonzero(mm[source.amor] != target.amor[mm])
            if len(bad):
                raise ValidationError("NOT_EQUIVARIANT", "morphism map does not commute with involutions",
                                      witness=source.morphisms[bad[0]])

    @classmethod
    def from_maps(cls, source, target, objects, morphisms, check=True):
        F = Functor.from_maps(source.carrier, target.carrier, objects, morphisms, check=check)
        return cls(source, target, F, check=check)

    @classmethod
    def from_arrays(cls, source, target, obj_map, mor_map, check=False):
        return cls(source, target, Functor(source.carrier, target.carrier, obj_map, mor_map, check=check),
                   check=check)

    @classmethod
    def identity(cls, X):
        return cls(X, X, Functor.identity(X.carrier), check=False)

    @property
    def obj_map(self):
        return self.functor.obj_map

    @property
    def mor_map(self):
        return self.functor.mor_map

    def obj(self, x):
        return self.functor.obj(x)

    def mor(self, m):
        return self.functor.mor(m)

    def then(self, other):
        """``other . self``."""
        return EquivariantFunctor(self.source, other.target, self.functor.then(other.functor), check=False)

    def key(self):
        return self.functor.key()

    def __eq__(self, other):
        if not isinstance(other, EquivariantFunctor):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.functor == other.functor

    def __hash__(self):
        return hash(self.functor)

    def __repr__(self):
        return f"EquivariantFunctor({self.source!r} -> {self.target!r})"


# -- standard objects ---------------------------------------------------------

def one():
    return trivial_action(terminal())


def _swap_indiscrete(g, perm):
    om = np.array([g.ob_index[perm.get(x, x)] for x in g.objects], dtype=IDX)
    mm = np.array([g.mor_index[g.hom(perm.get(g.source(m), g.source(m)),
                                     perm.get(g.target(m), g.target(m)))[0]] for m in g.morphisms], dtype=IDX)
    return ZTwoGroupoid(g, Functor(g, g, om, mm))


def check_I():
    """The interval with the involution swapping its two objects."""
    return _swap_indiscrete(interval(), {0: 1, 1: 0})


def nabla():
    """Three objects; 0 and 1 are swapped and 2 is fixed."""
    names = {(0, 0): "id0", (1, 1): "id1", (2, 2): "id2", (0, 1): "phi", (1, 0): "phi-",
             (1, 2): "psi", (2, 1): "psi-", (0, 2): "psiphi", (2, 0): "psiphi-"}
    return _swap_indiscrete(indiscrete([0, 1, 2], names), {0: 1, 1: 0})


def free_S(g):
    """``g + g`` with the involution swapping the copies; ids are ``(copy, x)``."""
    c = coproduct(g, g)
    n, k = g.n_obj, g.n_mor
    om = np.concatenate([np.arange(n) + n, np.arange(n)])
    mm = np.concatenate([np.arange(k) + k, np.arange(k)])
    return ZTwoGroupoid(c, Functor(c, c, om, mm, check=False), check=False)


def free_S_map(F, source=None, target=None):
    source = source or free_S(F.source)
    target = target or free_S(F.target)
    G = coproduct_functor(F, F, source.carrier, target.carrier)
    return EquivariantFunctor(source, target, G, check=False)


def point_inclusion(at=0):
    """``i: 1 -> I`` at the given object of the interval."""
    I = interval()
    return Functor.from_maps(terminal(), I, {0: at}, {"id0": f"id{at}"})


def i_prime():
    cI, nb = check_I(), nabla()
    return EquivariantFunctor.from_maps(cI, nb, {0: 0, 1: 1},
                                        {m: m for m in cI.morphisms})


def s_i():
    return free_S_map(point_inclusion(0))


_STANDARD = {
    "one": one,
    "check_I": check_I,
    "nabla": nabla,
    "s_one": lambda: free_S(terminal()),
    "s_I": lambda: free_S(interval()),
    "i": point_inclusion,
    "i_prime": i_prime,
    "s_i": s_i,
}


def standard(name):
    """A named standard object or map; fresh but equal values on every call."""
    try:
        return _STANDARD[name]()
    except KeyError:
        raise UnknownName(f"unknown standard name {name!r}", witness=name) from None


STANDARD_NAMES = tuple(_STANDARD)


# -- orbits -----------------------------------------------------------------

@dataclass(frozen=True)
class Orbit:
    representative: object
    elements: tuple

    @property
    def fixed(self):
        return len(self.elements) == 1


def fixed_points(A):
    return [A.objects[i] for i in np.flatnonzero(A.aobj == np.arange(A.carrier.n_obj))]


def orbits(A, subset=None):
    """Orbits of an involution-stable set of objects, sorted by representative.

    The representative is the element that comes first in canonical order.
    """
    if subset is None:
        idx = list(range(A.carrier.n_obj))
    else:
        idx = sorted(A.carrier.ob_index[x] for x in subset)
    members = set(idx)
    out = []
    seen = set()
    for i in idx:
        j = int(A.aobj[i])
        if j not in members:
            raise ValidationError("NOT_CLOSED", f"{A.objects[i]!r} is in the subset but its image is not",
                                  witness=A.objects[i])
        if i in seen:
            continue
        seen.update((i, j))
        elems = (A.objects[i],) if i == j else (A.objects[i], A.objects[j])
        out.append(Orbit(A.objects[i], elems))
    return out


# -- limits, colimits, subobjects -----------------------------------------------

def to_one(X, target=None):
    target = target or one()
    return EquivariantFunctor.from_arrays(X, target, np.zeros(X.carrier.n_obj, dtype=IDX),
                                          np.zeros(X.carrier.n_mor, dtype=IDX))


def ztwo_coproduct(X, Y):
    c = coproduct(X.carrier, Y.carrier)
    a = coproduct_functor(X.involution, Y.involution, c, c)
    return ZTwoGroupoid(c, a, check=False)


def ztwo_copairing(F, G, source=None):
    source = source or ztwo_coproduct(F.source, G.source)
    return EquivariantFunctor.from_arrays(source, F.target,
                                          np.concatenate([F.obj_map, G.obj_map]),
                                          np.concatenate([F.mor_map, G.mor_map]))


class ZTwoPullback:
    """Strict pullback in the equivariant category, with its projections."""

    def __init__(self, F, G):
        pb = pullback(F.functor, G.functor)
        P = pb.groupoid
        Ia = pairing(pb, pb.first.then(F.source.involution), pb.second.then(G.source.involution))
        self.plain = pb
        self.object = ZTwoGroupoid(P, Functor(P, P, Ia.obj_map, Ia.mor_map, check=False), check=False)
        self.first = EquivariantFunctor(self.object, F.source, pb.first, check=False)
        self.second = EquivariantFunctor(self.object, G.source, pb.second, check=False)

    def __iter__(self):
        return iter((self.object, self.first, self.second))

    def pair(self, H, K):
        """Mediating map for a commuting cone ``(H, K)``."""
        M = pairing(self.plain, H.functor, K.functor)
        return EquivariantFunctor(H.source, self.object, M, check=False)


def ztwo_pullback(F, G):
    return ZTwoPullback(F, G)


def ztwo_product(X, Y):
    o = one()
    return ZTwoPullback(to_one(X, o), to_one(Y, o))


def full_sub(A, object_indices):
    """Full sub-object on an involution-stable set of object positions."""
    sub, inc = full_subgroupoid(A.carrier, object_indices)
    om = np.searchsorted(inc.obj_map, A.aobj[inc.obj_map])
    mm = np.searchsorted(inc.mor_map, A.amor[inc.mor_map])
    if not (np.array_equal(inc.obj_map[om], A.aobj[inc.obj_map])):
        raise ValidationError("NOT_CLOSED", "object set is not stable under the involution")
    S = ZTwoGroupoid(sub, Functor(sub, sub, om, mm, check=False), check=False)
    return S, EquivariantFunctor(S, A, inc, check=False)


def involution_as_map(X):
    """The involution viewed as an (invertible) equivariant map ``X -> X``."""
    return EquivariantFunctor(X, X, X.involution, check=False)


# -- enumeration ----------------------------------------------------------------

def equivariant_problem(X, A, pre_obj=None, pre_mor=None, over=None, req_obj=None, req_mor=None):
    """Search problem for equivariant maps ``X -> A``.

    ``over`` is an optional map ``f: A -> B``; then ``f . F`` must equal the
    requirement arrays.
    """
    kw = {}
    if over is not None:
        kw = dict(f_obj=over.obj_map, f_mor=over.mor_map, n_b_obj=over.target.carrier.n_obj,
                  req_obj=req_obj, req_mor=req_mor)
    return _search.build_problem(
        X.carrier, A.carrier, x_inv_obj=X.aobj, x_inv_mor=X.amor,
        a_inv_obj=A.aobj, a_inv_mor=A.amor, pre_obj=pre_obj, pre_mor=pre_mor, **kw)


def enumerate_equivariant_maps(X, A, budget=None, limit=-1, **constraints):
    """All equivariant maps ``X -> A`` in canonical order."""
    prob = equivariant_problem(X, A, **constraints)
    sols, _, _ = _search.run(prob, limit=limit, budget=budget)
    return [EquivariantFunctor.from_arrays(X, A, o, m) for o, m in sorted(sols)]


def count_equivariant_maps(X, A, budget=None, **constraints):
    prob = equivariant_problem(X, A, **constraints)
    return _search.run(prob, budget=budget, count_only=True)[1]


def underlying(f):
    return f.functor
