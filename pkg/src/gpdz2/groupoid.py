"""Finite groupoids stored as explicit tables, and functors between them.

Objects and morphisms are kept in a fixed order (the order they were given
in); that order is the canonical order used by every enumeration.  All
morphisms are explicit, including identities and inverses, and composition
is a dense table indexed by morphism positions (``-1`` where undefined).
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import search as _search
from .config import check_morphisms, get_budget
from .errors import BudgetExceeded, ValidationError
from .ids import check_id

IDX = np.int64
COMP = np.int32


class Groupoid:
    """A finite groupoid.

    Index-level tables (numpy arrays): ``src``, ``tgt`` (per morphism),
    ``ident`` (per object), ``inv`` (per morphism) and ``comp`` where
    ``comp[g, f]`` is the position of ``g . f``.
    """

    def __init__(self, objects, morphisms, src, tgt, ident, inv, comp):
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.src = np.ascontiguousarray(src, dtype=IDX)
        self.tgt = np.ascontiguousarray(tgt, dtype=IDX)
        self.ident = np.ascontiguousarray(ident, dtype=IDX)
        self.inv = np.ascontiguousarray(inv, dtype=IDX)
        self.comp = np.ascontiguousarray(comp, dtype=COMP)
        self.ob_index = {x: i for i, x in enumerate(self.objects)}
        self.mor_index = {m: i for i, m in enumerate(self.morphisms)}

    # -- construction -------------------------------------------------------

    @classmethod
    def from_tables(cls, objects, morphisms, identity, compose, inverse):
        """Build from id-level tables without checking any axiom.

        ``morphisms`` is a sequence of ``(id, source, target)``; ``compose``
        a sequence of ``(g, f, g.f)`` triples or a dict ``(g, f) -> g.f``.
        Dangling references raise ``ValidationError('MALFORMED')``.
        """
        objects = list(objects)
        ob_index = _index(objects, "object")
        mids = [m[0] for m in morphisms]
        mor_index = _index(mids, "morphism")
        n, k = len(objects), len(mids)
        check_morphisms(k)
        src = np.empty(k, dtype=IDX)
        tgt = np.empty(k, dtype=IDX)
        for i, (m, s, t) in enumerate(morphisms):
            src[i] = _lookup(ob_index, s, f"source of morphism {m!r}")
            tgt[i] = _lookup(ob_index, t, f"target of morphism {m!r}")
        ident = np.empty(n, dtype=IDX)
        if set(identity) != set(objects):
            missing = [x for x in objects if x not in identity]
            raise ValidationError("MALFORMED", f"identity table not total (missing {missing[:1]})",
                                  witness=missing[:1])
        for x, m in identity.items():
            ident[ob_index[x]] = _lookup(mor_index, m, f"identity of {x!r}")
        inv = np.empty(k, dtype=IDX)
        if set(inverse) != set(mids):
            missing = [m for m in mids if m not in inverse]
            raise ValidationError("MALFORMED", f"inverse table not total (missing {missing[:1]})",
                                  witness=missing[:1])
        for m, mi in inverse.items():
            inv[mor_index[m]] = _lookup(mor_index, mi, f"inverse of {m!r}")
        comp = np.full((k, k), -1, dtype=COMP)
        triples = compose.items() if isinstance(compose, dict) else (((g, f), h) for g, f, h in compose)
        for (g, f), h in triples:
            gi = _lookup(mor_index, g, "composition table")
            fi = _lookup(mor_index, f, "composition table")
            hi = _lookup(mor_index, h, "composition table")
            if tgt[fi] != src[gi]:
                raise ValidationError("MALFORMED", f"composite of non-composable pair ({g!r}, {f!r})",
                                      witness=(g, f))
            if comp[gi, fi] >= 0 and comp[gi, fi] != hi:
                raise ValidationError("MALFORMED", f"conflicting composites for ({g!r}, {f!r})",
                                      witness=(g, f))
            comp[gi, fi] = hi
        return cls(objects, mids, src, tgt, ident, inv, comp)

    @classmethod
    def generate(cls, objects, morphisms, identity, inverse, compose):
        """Build from structured data.

        ``morphisms`` is a sequence of ``(id, source, target)``; ``identity``,
        ``inverse`` and ``compose`` are callables on ids.  ``compose`` is only
        called on composable pairs.
        """
        objects = list(objects)
        ob_index = {x: i for i, x in enumerate(objects)}
        mids = [m[0] for m in morphisms]
        mor_index = {m: i for i, m in enumerate(mids)}
        n, k = len(objects), len(mids)
        check_morphisms(k)
        src = np.fromiter((ob_index[s] for _, s, _ in morphisms), dtype=IDX, count=k)
        tgt = np.fromiter((ob_index[t] for _, _, t in morphisms), dtype=IDX, count=k)
        ident = np.fromiter((mor_index[identity(x)] for x in objects), dtype=IDX, count=n)
        inv = np.fromiter((mor_index[inverse(m)] for m in mids), dtype=IDX, count=k)
        comp = np.full((k, k), -1, dtype=COMP)
        incoming = [[] for _ in range(n)]
        for i in range(k):
            incoming[tgt[i]].append(i)
        for gi in range(k):
            g = mids[gi]
            for fi in incoming[src[gi]]:
                comp[gi, fi] = mor_index[compose(g, mids[fi])]
        return cls(objects, mids, src, tgt, ident, inv, comp)

    # -- id-level access ----------------------------------------------------

    @property
    def n_obj(self):
        return len(self.objects)

    @property
    def n_mor(self):
        return len(self.morphisms)

    def source(self, m):
        return self.objects[self.src[self.mor_index[m]]]

    def target(self, m):
        return self.objects[self.tgt[self.mor_index[m]]]

    def identity(self, x):
        return self.morphisms[self.ident[self.ob_index[x]]]

    def inverse(self, m):
        return self.morphisms[self.inv[self.mor_index[m]]]

    def compose(self, g, f):
        h = self.comp[self.mor_index[g], self.mor_index[f]]
        if h < 0:
            raise ValueError(f"{g!r} and {f!r} are not composable")
        return self.morphisms[h]

    def hom(self, x, y):
        """Morphisms ``x -> y`` as ids, in canonical order."""
        return [self.morphisms[i] for i in self.hom_ix(self.ob_index[x], self.ob_index[y])]

    def hom_ix(self, xi, yi):
        t = self.search_tables()
        cell = xi * self.n_obj + yi
        return t["hom_idx"][t["hom_ptr"][cell]:t["hom_ptr"][cell + 1]]

    def out_ix(self, xi):
        t = self.search_tables()
        return t["out_idx"][t["out_ptr"][xi]:t["out_ptr"][xi + 1]]

    # -- derived tables -----------------------------------------------------

    def search_tables(self):
        return self._tables

    @cached_property
    def _tables(self):
        n, k = self.n_obj, self.n_mor
        order = np.lexsort((np.arange(k), self.tgt, self.src)) if k else np.zeros(0, dtype=IDX)
        cells = self.src * n + self.tgt
        counts = np.bincount(cells, minlength=n * n) if k else np.zeros(n * n, dtype=IDX)
        hom_ptr = np.zeros(n * n + 1, dtype=IDX)
        np.cumsum(counts, out=hom_ptr[1:])
        out_counts = np.bincount(self.src, minlength=n) if k else np.zeros(n, dtype=IDX)
        out_ptr = np.zeros(n + 1, dtype=IDX)
        np.cumsum(out_counts, out=out_ptr[1:])
        # composable pairs of non-identities, for propagation
        is_id = np.zeros(k, dtype=bool)
        is_id[self.ident] = True
        g_idx, f_idx = np.nonzero(self.comp >= 0)
        keep = ~(is_id[g_idx] | is_id[f_idx])
        g_idx, f_idx = g_idx[keep], f_idx[keep]
        h_idx = self.comp[g_idx, f_idx].astype(IDX)
        trip = np.stack([g_idx, f_idx, h_idx], axis=1).astype(IDX) if len(g_idx) else np.zeros((0, 3), dtype=IDX)
        members = [[] for _ in range(k)]
        for t, (g, f, h) in enumerate(trip.tolist()):
            members[g].append(t)
            if f != g:
                members[f].append(t)
            if h != g and h != f:
                members[h].append(t)
        trip_ptr = np.zeros(k + 1, dtype=IDX)
        np.cumsum([len(mm) for mm in members], out=trip_ptr[1:])
        trip_idx = np.array([t for mm in members for t in mm], dtype=IDX)
        return {
            "hom_ptr": hom_ptr,
            "hom_idx": order.astype(IDX),
            "out_ptr": out_ptr,
            "out_idx": order.astype(IDX),
            "trip": trip,
            "trip_ptr": trip_ptr,
            "trip_idx": trip_idx,
        }

    @cached_property
    def is_identity(self):
        mask = np.zeros(self.n_mor, dtype=bool)
        mask[self.ident] = True
        return mask

    def components(self):
        """Connected components as a list of sorted object-index lists."""
        parent = list(range(self.n_obj))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for s, t in zip(self.src.tolist(), self.tgt.tolist()):
            rs, rt = find(s), find(t)
            if rs != rt:
                parent[max(rs, rt)] = min(rs, rt)
        groups = {}
        for x in range(self.n_obj):
            groups.setdefault(find(x), []).append(x)
        return [groups[r] for r in sorted(groups)]

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Groupoid):
            return NotImplemented
        return (self.objects == other.objects and self.morphisms == other.morphisms
                and np.array_equal(self.src, other.src) and np.array_equal(self.tgt, other.tgt)
                and np.array_equal(self.ident, other.ident) and np.array_equal(self.inv, other.inv)
                and np.array_equal(self.comp, other.comp))

    def __hash__(self):
        return hash((self.objects, self.morphisms))

    def __repr__(self):
        return f"Groupoid({self.n_obj} objects, {self.n_mor} morphisms)"


def _index(ids, what):
    index = {}
    for i, x in enumerate(ids):
        if not check_id(x):
            raise ValidationError("MALFORMED", f"bad {what} identifier {x!r}", witness=x)
        if x in index:
            raise ValidationError("MALFORMED", f"duplicate {what} {x!r}", witness=x)
        index[x] = i
    return index


def _lookup(index, key, where):
    try:
        return index[key]
    except (KeyError, TypeError):
        raise ValidationError("MALFORMED", f"unknown id {key!r} in {where}", witness=key) from None


# -- validation -------------------------------------------------------------

def validate_groupoid(raw):
    """Validate raw tables (a dict or a ``Groupoid``) and return a ``Groupoid``.

    Raises ``ValidationError`` with code ``MALFORMED``, ``NOT_A_CATEGORY`` or
    ``NOT_A_GROUPOID``; the witness names the offending ids.
    """
    if isinstance(raw, Groupoid):
        g = raw
    else:
        try:
            g = Groupoid.from_tables(raw["objects"], raw["morphisms"], raw["identity"],
                                     raw["compose"], raw["inverse"])
        except KeyError as exc:
            raise ValidationError("MALFORMED", f"missing table {exc.args[0]!r}") from None
    M, O = g.morphisms, g.objects
    src, tgt, comp = g.src, g.tgt, g.comp
    # totality of composition on composable pairs
    composable = tgt[None, :] == src[:, None]
    missing = composable & (comp < 0)
    if missing.any():
        gi, fi = (int(v) for v in np.argwhere(missing)[0])
        raise ValidationError("MALFORMED", f"composition undefined for ({M[gi]!r}, {M[fi]!r})",
                              witness=(M[gi], M[fi]))
    ks = np.arange(g.n_mor)
    gi, fi = np.nonzero(comp >= 0)
    hi = comp[gi, fi]
    bad = (src[hi] != src[fi]) | (tgt[hi] != tgt[gi])
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise ValidationError("NOT_A_CATEGORY", "composite has wrong endpoints",
                              witness=(M[gi[j]], M[fi[j]]))
    for xi in range(g.n_obj):
        e = g.ident[xi]
        if src[e] != xi or tgt[e] != xi:
            raise ValidationError("NOT_A_CATEGORY", f"identity of {O[xi]!r} is not an endomorphism",
                                  witness=(O[xi], M[e]))
    if g.n_mor:
        left = comp[g.ident[tgt], ks]
        right = comp[ks, g.ident[src]]
        bad = (left != ks) | (right != ks)
        if bad.any():
            j = int(np.flatnonzero(bad)[0])
            raise ValidationError("NOT_A_CATEGORY", f"unit law fails at {M[j]!r}", witness=(M[j],))
    by_src = [np.flatnonzero(src == x) for x in range(g.n_obj)]
    by_tgt = [np.flatnonzero(tgt == x) for x in range(g.n_obj)]
    for gm in range(g.n_mor):
        H = by_src[tgt[gm]]
        F = by_tgt[src[gm]]
        if not len(H) or not len(F):
            continue
        hg = comp[H, gm]
        gf = comp[gm, F]
        lhs = comp[hg[:, None], F[None, :]]
        rhs = comp[H[:, None], gf[None, :]]
        if not np.array_equal(lhs, rhs):
            a, b = (int(v) for v in np.argwhere(lhs != rhs)[0])
            raise ValidationError("NOT_A_CATEGORY", "associativity fails",
                                  witness=(M[H[a]], M[gm], M[F[b]]))
    inv = g.inv
    for m in range(g.n_mor):
        mi = inv[m]
        if src[mi] != tgt[m] or tgt[mi] != src[m]:
            raise ValidationError("NOT_A_GROUPOID", f"inverse of {M[m]!r} has wrong endpoints",
                                  witness=(M[m], M[mi]))
        if comp[mi, m] != g.ident[src[m]] or comp[m, mi] != g.ident[tgt[m]]:
            raise ValidationError("NOT_A_GROUPOID", f"{M[mi]!r} is not inverse to {M[m]!r}",
                                  witness=(M[m], M[mi]))
    return g


# -- functors ---------------------------------------------------------------

class Functor:
    """A strict functor, stored as index arrays ``obj_map`` and ``mor_map``."""

    def __init__(self, source, target, obj_map, mor_map, check=True):
        self.source = source
        self.target = target
        self.obj_map = np.ascontiguousarray(obj_map, dtype=IDX)
        self.mor_map = np.ascontiguousarray(mor_map, dtype=IDX)
        if check:
            self._check()

    @classmethod
    def from_maps(cls, source, target, objects, morphisms, check=True):
        """Build from id-level dicts; every source id must be mapped."""
        try:
            om = [target.ob_index[objects[x]] for x in source.objects]
            mm = [target.mor_index[morphisms[m]] for m in source.morphisms]
        except KeyError as exc:
            raise ValidationError("MALFORMED", f"functor table references unknown or missing id {exc.args[0]!r}",
                                  witness=exc.args[0]) from None
        return cls(source, target, om, mm, check=check)

    @classmethod
    def identity(cls, g):
        return cls(g, g, np.arange(g.n_obj), np.arange(g.n_mor), check=False)

    def _check(self):
        s, t = self.source, self.target
        om, mm = self.obj_map, self.mor_map
        if om.shape != (s.n_obj,) or mm.shape != (s.n_mor,):
            raise ValidationError("MALFORMED", "functor tables have wrong length")
        if (s.n_obj and (om.min() < 0 or om.max() >= t.n_obj)) or \
                (s.n_mor and (mm.min() < 0 or mm.max() >= t.n_mor)):
            raise ValidationError("MALFORMED", "functor table out of range")
        if s.n_mor:
            bad = (t.src[mm] != om[s.src]) | (t.tgt[mm] != om[s.tgt])
            if bad.any():
                j = int(np.flatnonzero(bad)[0])
                raise ValidationError("NOT_A_FUNCTOR", f"endpoints of {s.morphisms[j]!r} not preserved",
                                      witness=(s.morphisms[j],))
        if s.n_obj:
            bad = mm[s.ident] != t.ident[om]
            if bad.any():
                j = int(np.flatnonzero(bad)[0])
                raise ValidationError("NOT_A_FUNCTOR", f"identity at {s.objects[j]!r} not preserved",
                                      witness=(s.objects[j],))
        gi, fi = np.nonzero(s.comp >= 0)
        if len(gi):
            bad = t.comp[mm[gi], mm[fi]] != mm[s.comp[gi, fi]]
            if bad.any():
                j = int(np.flatnonzero(bad)[0])
                raise ValidationError("NOT_A_FUNCTOR", "composition not preserved",
                                      witness=(s.morphisms[gi[j]], s.morphisms[fi[j]]))

    def obj(self, x):
        return self.target.objects[self.obj_map[self.source.ob_index[x]]]

    def mor(self, m):
        return self.target.morphisms[self.mor_map[self.source.mor_index[m]]]

    def then(self, other):
        """``other . self``."""
        if other.source != self.target:
            raise ValueError("functors are not composable")
        return Functor(self.source, other.target, other.obj_map[self.obj_map],
                       other.mor_map[self.mor_map], check=False)

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and np.array_equal(self.obj_map, other.obj_map)
                and np.array_equal(self.mor_map, other.mor_map))

    def __hash__(self):
        return hash((self.obj_map.tobytes(), self.mor_map.tobytes()))

    def key(self):
        return (tuple(self.obj_map.tolist()), tuple(self.mor_map.tolist()))

    def __repr__(self):
        return f"Functor({self.source!r} -> {self.target!r})"


# -- standard groupoids -----------------------------------------------------

def empty_groupoid():
    return Groupoid((), (), [], [], [], [], np.zeros((0, 0)))


def terminal():
    return Groupoid.from_tables([0], [("id0", 0, 0)], {0: "id0"}, [("id0", "id0", "id0")], {"id0": "id0"})


def indiscrete(objects, names=None):
    """The groupoid with exactly one morphism between any two objects.

    Morphism ids default to ``(x, y)`` pairs; ``names`` may override them.
    """
    objects = list(objects)
    names = dict(names or {})
    mid = {(x, y): names.get((x, y), (x, y)) for x in objects for y in objects}
    morphisms = [(mid[x, y], x, y) for x in objects for y in objects]
    back = {v: k for k, v in mid.items()}
    return Groupoid.generate(
        objects, morphisms,
        identity=lambda x: mid[x, x],
        inverse=lambda m: mid[back[m][1], back[m][0]],
        compose=lambda g, f: mid[back[f][0], back[g][1]],
    )


def interval():
    """Two objects 0, 1 and one isomorphism ``phi: 0 -> 1``."""
    return indiscrete([0, 1], {(0, 0): "id0", (1, 1): "id1", (0, 1): "phi", (1, 0): "phi-"})


def group_groupoid(order, name="g"):
    """One object with cyclic automorphism group of the given order."""
    mors = [(f"{name}{k}", 0, 0) for k in range(order)]
    return Groupoid.generate(
        [0], mors,
        identity=lambda x: f"{name}0",
        inverse=lambda m: f"{name}{(-int(m[len(name):])) % order}",
        compose=lambda g, f: f"{name}{(int(g[len(name):]) + int(f[len(name):])) % order}",
    )


# -- limits and colimits ----------------------------------------------------

def coproduct(g, h):
    """Disjoint union; ids are tagged ``(0, x)`` and ``(1, y)``."""
    objects = [(0, x) for x in g.objects] + [(1, y) for y in h.objects]
    n1, k1 = g.n_obj, g.n_mor
    k = k1 + h.n_mor
    comp = np.full((k, k), -1, dtype=COMP)
    comp[:k1, :k1] = g.comp
    hc = h.comp.astype(np.int64)
    comp[k1:, k1:] = np.where(hc >= 0, hc + k1, -1)
    return Groupoid(
        objects,
        [(0, m) for m in g.morphisms] + [(1, m) for m in h.morphisms],
        np.concatenate([g.src, h.src + n1]), np.concatenate([g.tgt, h.tgt + n1]),
        np.concatenate([g.ident, h.ident + k1]), np.concatenate([g.inv, h.inv + k1]),
        comp,
    )


def coproduct_functor(F, G, source=None, target=None):
    """``F + G`` between coproducts (``source``/``target`` may be given)."""
    source = source or coproduct(F.source, G.source)
    target = target or coproduct(F.target, G.target)
    n1, k1 = F.target.n_obj, F.target.n_mor
    return Functor(source, target,
                   np.concatenate([F.obj_map, G.obj_map + n1]),
                   np.concatenate([F.mor_map, G.mor_map + k1]), check=False)


def copairing(F, G, source=None):
    """``[F, G]: A + B -> C``."""
    source = source or coproduct(F.source, G.source)
    return Functor(source, F.target, np.concatenate([F.obj_map, G.obj_map]),
                   np.concatenate([F.mor_map, G.mor_map]), check=False)


@dataclass
class Pullback:
    """Strict pullback ``P`` of ``F: A -> C`` and ``G: B -> C``."""
    groupoid: Groupoid
    first: Functor
    second: Functor
    obj_pairs: np.ndarray = field(repr=False)
    mor_pairs: np.ndarray = field(repr=False)

    def __iter__(self):
        return iter((self.groupoid, self.first, self.second))


def pullback(F, G):
    """Objects ``(a, b)`` with ``F(a) = G(b)``, morphisms pairs likewise."""
    A, B = F.source, G.source
    if F.target != G.target:
        raise ValidationError("NOT_COMPOSABLE", "pullback needs a common codomain")
    oa, ob = np.nonzero(F.obj_map[:, None] == G.obj_map[None, :])
    ma, mb = np.nonzero(F.mor_map[:, None] == G.mor_map[None, :])
    check_morphisms(len(ma), "pullback")
    nb_o, nb_m = B.n_obj, B.n_mor
    okey = {int(a) * nb_o + int(b): i for i, (a, b) in enumerate(zip(oa, ob))}
    mkey = np.full(A.n_mor * nb_m, -1, dtype=np.int64)
    mkey[ma * nb_m + mb] = np.arange(len(ma))
    src = np.array([okey[int(A.src[a]) * nb_o + int(B.src[b])] for a, b in zip(ma, mb)], dtype=IDX)
    tgt = np.array([okey[int(A.tgt[a]) * nb_o + int(B.tgt[b])] for a, b in zip(ma, mb)], dtype=IDX)
    ident = mkey[A.ident[oa] * nb_m + B.ident[ob]]
    inv = mkey[A.inv[ma] * nb_m + B.inv[mb]]
    ca = A.comp[ma[:, None], ma[None, :]].astype(np.int64)
    cb = B.comp[mb[:, None], mb[None, :]].astype(np.int64)
    comp = np.where((ca >= 0) & (cb >= 0), mkey[np.maximum(ca, 0) * nb_m + np.maximum(cb, 0)], -1)
    P = Groupoid(
        [(A.objects[a], B.objects[b]) for a, b in zip(oa, ob)],
        [(A.morphisms[a], B.morphisms[b]) for a, b in zip(ma, mb)],
        src, tgt, ident, inv, comp,
    )
    p1 = Functor(P, A, oa, ma, check=False)
    p2 = Functor(P, B, ob, mb, check=False)
    return Pullback(P, p1, p2, np.stack([oa, ob], 1), np.stack([ma, mb], 1))


def pairing(pb, H, K):
    """The mediating functor ``Z -> P`` for ``H: Z -> A``, ``K: Z -> B``."""
    P = pb.groupoid
    okey = {(int(a), int(b)): i for i, (a, b) in enumerate(pb.obj_pairs)}
    mkey = {(int(a), int(b)): i for i, (a, b) in enumerate(pb.mor_pairs)}
    try:
        om = [okey[int(a), int(b)] for a, b in zip(H.obj_map, K.obj_map)]
        mm = [mkey[int(a), int(b)] for a, b in zip(H.mor_map, K.mor_map)]
    except KeyError:
        raise ValueError("cone does not commute") from None
    return Functor(H.source, P, om, mm, check=False)


def product(g, h):
    """Cartesian product, computed as the pullback over the terminal groupoid."""
    one = terminal()
    return pullback(to_terminal(g, one), to_terminal(h, one))


def to_terminal(g, one=None):
    one = one or terminal()
    return Functor(g, one, np.zeros(g.n_obj, dtype=IDX), np.zeros(g.n_mor, dtype=IDX), check=False)


def full_subgroupoid(g, object_indices):
    """Full subgroupoid on the given object positions, with its inclusion."""
    keep = sorted(set(int(i) for i in object_indices))
    pos = np.full(g.n_obj, -1, dtype=IDX)
    pos[keep] = np.arange(len(keep))
    mors = np.flatnonzero((pos[g.src] >= 0) & (pos[g.tgt] >= 0))
    mpos = np.full(g.n_mor, -1, dtype=np.int64)
    mpos[mors] = np.arange(len(mors))
    sub = Groupoid(
        [g.objects[i] for i in keep], [g.morphisms[i] for i in mors],
        pos[g.src[mors]], pos[g.tgt[mors]], mpos[g.ident[keep]], mpos[g.inv[mors]],
        np.where(g.comp[np.ix_(mors, mors)] >= 0, mpos[np.maximum(g.comp[np.ix_(mors, mors)], 0)], -1),
    )
    return sub, Functor(sub, g, keep, mors, check=False)


# -- predicates -------------------------------------------------------------

def is_injective_on_objects(F):
    return len(np.unique(F.obj_map)) == len(F.obj_map)


@dataclass
class EquivalenceCertificate:
    holds: bool
    hom_bijections: dict = field(default_factory=dict, repr=False)
    preimages: dict = field(default_factory=dict, repr=False)
    failure: tuple = None

    def __bool__(self):
        return self.holds


def is_equivalence(F):
    """Full, faithful and essentially surjective, with a certificate.

    The certificate lists, per pair of source objects, the hom-set bijection
    as ``(m, F(m))`` pairs and, per target object ``y``, a source object ``x``
    with an iso ``F(x) -> y``.  On failure ``failure`` is one of
    ``('not_faithful', x, y)``, ``('not_full', x, y)`` or
    ``('not_essentially_surjective', y)``.
    """
    A, B = F.source, F.target
    cert = EquivalenceCertificate(True)
    for xi in range(A.n_obj):
        for yi in range(A.n_obj):
            ms = A.hom_ix(xi, yi)
            images = F.mor_map[ms]
            x, y = A.objects[xi], A.objects[yi]
            if len(set(images.tolist())) != len(ms):
                return EquivalenceCertificate(False, cert.hom_bijections, {}, ("not_faithful", x, y))
            if len(B.hom_ix(F.obj_map[xi], F.obj_map[yi])) != len(ms):
                return EquivalenceCertificate(False, cert.hom_bijections, {}, ("not_full", x, y))
            cert.hom_bijections[x, y] = tuple((A.morphisms[m], B.morphisms[fm])
                                              for m, fm in zip(ms.tolist(), images.tolist()))
    image = {}
    for xi in range(A.n_obj):
        image.setdefault(int(F.obj_map[xi]), xi)
    for yi in range(B.n_obj):
        found = None
        for fx in sorted(image):
            hs = B.hom_ix(fx, yi)
            if len(hs):
                found = (A.objects[image[fx]], B.morphisms[hs[0]])
                break
        if found is None:
            return EquivalenceCertificate(False, cert.hom_bijections, cert.preimages,
                                          ("not_essentially_surjective", B.objects[yi]))
        cert.preimages[B.objects[yi]] = found
    return cert


@dataclass
class IsoLiftCheck:
    holds: bool
    witness: tuple = None

    def __bool__(self):
        return self.holds


def is_isofibration(F):
    """Every iso ``psi: F(a) -> y`` lifts to an iso out of ``a``.

    On failure the witness is ``(a, psi)`` for the first unliftable pair in
    canonical order.
    """
    A, B = F.source, F.target
    for ai in range(A.n_obj):
        images = set(F.mor_map[A.out_ix(ai)].tolist())
        for psi in B.out_ix(int(F.obj_map[ai])).tolist():
            if psi not in images:
                return IsoLiftCheck(False, (A.objects[ai], B.morphisms[psi]))
    return IsoLiftCheck(True)


# -- enumeration ------------------------------------------------------------

def enumerate_functors(A, B, budget=None):
    """All functors ``A -> B`` in canonical (lexicographic) order."""
    prob = _search.build_problem(A, B)
    sols, _, _ = _search.run(prob, budget=budget)
    return [Functor(A, B, o, m, check=False) for o, m in sorted(sols)]


def count_functors(A, B, budget=None):
    prob = _search.build_problem(A, B)
    return _search.run(prob, budget=budget, count_only=True)[1]


__all__ = [
    "Groupoid", "Functor", "validate_groupoid", "is_injective_on_objects",
    "is_equivalence", "is_isofibration", "pullback", "pairing", "product",
    "coproduct", "enumerate_functors", "count_functors", "terminal", "interval",
    "indiscrete", "empty_groupoid", "group_groupoid", "full_subgroupoid",
    "to_terminal", "BudgetExceeded", "get_budget",
]
