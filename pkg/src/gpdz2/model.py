"""The injective model structure on groupoids with involution, made computational.

Fibrations are tested against the two generating acyclic cofibrations
``S(i): S(1) -> S(I)`` and ``i': check_I -> nabla``.  Acyclic cofibrations
are decomposed into cell attachments (pushouts of the generators), and maps
with fibrant domain are factored through an equivariant mapping path object.
"""
from dataclasses import dataclass, field
from itertools import count

import numpy as np

from . import search as _search
from .config import get_budget
from .equivariant import (
    EquivariantFunctor, ZTwoGroupoid, check_I, enumerate_equivariant_maps, equivariant_problem,
    free_S, i_prime, nabla, one, orbits, s_i, to_one, trivial_action, ztwo_coproduct,
)
from .errors import (
    BudgetExceeded, DomainNotFibrant, EngineError, NotAcyclicCofibration, ValidationError,
)
from .groupoid import IDX, Functor, Groupoid, group_groupoid, is_equivalence, is_injective_on_objects, is_isofibration, terminal


def _nodes(budget):
    return budget.search_nodes if budget is not None else None


# -- lifting problems ---------------------------------------------------------

@dataclass
class LiftingProblem:
    """A commuting square ``right . top = bottom . left``."""
    left: EquivariantFunctor
    right: EquivariantFunctor
    top: EquivariantFunctor
    bottom: EquivariantFunctor
    check: bool = True

    def __post_init__(self):
        if self.check and self.top.then(self.right).key() != self.left.then(self.bottom).key():
            raise ValidationError("NOT_COMMUTATIVE", "square does not commute")


@dataclass
class Filler:
    diagonal: EquivariantFunctor


def solve_lifting(p, budget=None):
    """First diagonal filler in canonical order, or ``None``.

    The decision is exact: ``None`` is returned only after the search space is
    exhausted.
    """
    j, f, top, bottom = p.left, p.right, p.top, p.bottom
    Y = j.target
    pre_obj = np.full(Y.carrier.n_obj, -1, dtype=IDX)
    pre_mor = np.full(Y.carrier.n_mor, -1, dtype=IDX)
    for arr, jm, tm in ((pre_obj, j.obj_map, top.obj_map), (pre_mor, j.mor_map, top.mor_map)):
        for a, b in zip(jm.tolist(), tm.tolist()):
            if arr[a] >= 0 and arr[a] != b:
                return None
            arr[a] = b
    prob = equivariant_problem(Y, f.source, pre_obj=pre_obj, pre_mor=pre_mor, over=f,
                               req_obj=bottom.obj_map, req_mor=bottom.mor_map)
    sols, _, _ = _search.run(prob, limit=1, budget=_nodes(budget))
    if not sols:
        return None
    d = EquivariantFunctor.from_arrays(Y, f.source, *sols[0])
    if j.then(d).key() != top.key() or d.then(f).key() != bottom.key():
        raise EngineError("search returned a non-filler")
    return Filler(d)


def filler_from_data(p, obj2, psi):
    """Complete ``j(2) = obj2``, ``j(psi) = psi`` to a diagonal of a square against ``i'``.

    Everything else is forced: ``j`` agrees with the top map on ``check_I``,
    and ``psi.phi`` and the inverses follow.  Positions refer to ``p.right.source``.
    Raises ``EngineError`` if the data does not give a filler.
    """
    A = p.right.source
    G = A.carrier
    top = p.top
    phi = int(top.mor_map[top.source.carrier.mor_index["phi"]])
    psiphi = int(G.comp[psi, phi])
    if psiphi < 0:
        raise EngineError("psi is not composable with the image of phi")
    images = {"id0": G.ident[top.obj_map[0]], "id1": G.ident[top.obj_map[1]], "id2": G.ident[obj2],
              "phi": phi, "phi-": G.inv[phi], "psi": psi, "psi-": G.inv[psi],
              "psiphi": psiphi, "psiphi-": G.inv[psiphi]}
    Nb = p.left.target.carrier
    om = [int(top.obj_map[0]), int(top.obj_map[1]), int(obj2)]
    mm = [int(images[m]) for m in Nb.morphisms]
    try:
        d = EquivariantFunctor.from_arrays(p.left.target, A, om, mm, check=True)
    except ValidationError as e:
        raise EngineError(f"explicit filler data is not an equivariant functor: {e}") from None
    if p.left.then(d).key() != top.key() or d.then(p.right).key() != p.bottom.key():
        raise EngineError("explicit filler does not fill the square")
    return Filler(d)


def squares(gen, f, budget=None):
    """Yield every commuting square ``(top, bottom)`` from ``gen`` to ``f``."""
    cap = (budget or get_budget()).squares
    seen = 0
    for top in enumerate_equivariant_maps(gen.source, f.source):
        ft = top.then(f)
        pre_obj = np.full(gen.target.carrier.n_obj, -1, dtype=IDX)
        pre_mor = np.full(gen.target.carrier.n_mor, -1, dtype=IDX)
        pre_obj[gen.obj_map] = ft.obj_map
        pre_mor[gen.mor_map] = ft.mor_map
        for bottom in enumerate_equivariant_maps(gen.target, f.target, pre_obj=pre_obj, pre_mor=pre_mor):
            seen += 1
            if seen > cap:
                raise BudgetExceeded(f"more than {cap} lifting squares")
            yield top, bottom


@dataclass
class FibrationReport:
    holds: bool
    kind: str = "injective-fibration"
    generator: str = None
    square: LiftingProblem = None
    iso_witness: tuple = None
    squares_checked: int = 0

    def __bool__(self):
        return self.holds


def _s_i_square(f, a, psi):
    """The square against ``S(i)`` built from an unliftable pair ``(a, psi)``."""
    gen = s_i()
    A, B = f.source, f.target
    top = EquivariantFunctor.from_maps(gen.source, A, {(0, 0): a, (1, 0): A.act(a)},
                                       {(0, "id0"): A.carrier.identity(a),
                                        (1, "id0"): A.carrier.identity(A.act(a))})
    pre_mor = np.full(gen.target.carrier.n_mor, -1, dtype=IDX)
    pre_mor[gen.target.carrier.mor_index[(0, "phi")]] = B.carrier.mor_index[psi]
    bottom = enumerate_equivariant_maps(gen.target, B, limit=1, pre_mor=pre_mor)[0]
    return LiftingProblem(gen, f, top, bottom)


def check_against(gen, f, budget=None):
    """Check every square from ``gen`` to ``f``; report the first failure."""
    n = 0
    for top, bottom in squares(gen, f, budget):
        n += 1
        sq = LiftingProblem(gen, f, top, bottom, check=False)
        if solve_lifting(sq, budget) is None:
            return FibrationReport(False, square=sq, squares_checked=n)
    return FibrationReport(True, squares_checked=n)


def is_injective_fibration(f, budget=None):
    """Right lifting against ``S(i)`` and ``i'``.

    The ``S(i)`` half uses the adjunction with the forgetful functor: it is
    the isofibration property of the underlying functor.
    """
    iso = is_isofibration(f.functor)
    if not iso:
        a, psi = iso.witness
        return FibrationReport(False, generator="s_i", square=_s_i_square(f, a, psi), iso_witness=iso.witness)
    rep = check_against(i_prime(), f, budget)
    rep.generator = None if rep.holds else "i_prime"
    return rep


def is_fibrant(X, budget=None):
    return is_injective_fibration(to_one(X), budget)


def is_projective_fibration(f):
    return bool(is_isofibration(f.functor))


def is_cofibration(f):
    return is_injective_on_objects(f.functor)


def is_weak_equivalence(f):
    return bool(is_equivalence(f.functor))


def is_acyclic_cofibration(f):
    return is_cofibration(f) and is_weak_equivalence(f)


# -- cells --------------------------------------------------------------------

@dataclass
class CellStage:
    """One pushout of a generator along an attaching map.

    ``after`` extends ``before``: old objects and morphisms keep their
    positions, new ones are appended.  Every morphism of ``after`` is a
    triple ``(z, w, m)`` with ``m`` a morphism of ``before`` between the
    representatives of ``z`` and ``w``.
    """
    kind: str
    generator: EquivariantFunctor
    before: ZTwoGroupoid
    after: ZTwoGroupoid
    inclusion: EquivariantFunctor
    attaching: EquivariantFunctor
    cell_map: EquivariantFunctor
    new_objects: tuple
    # per new object position: generator morphism position whose image is the
    # formal iso from the representative to the new object
    edges: dict = field(repr=False)
    triples: np.ndarray = field(repr=False)

    def mediate(self, u, v):
        """The map out of the pushout induced by ``u: before -> Z`` and ``v: gen.target -> Z``."""
        Z = u.target
        Zc = Z.carrier
        n_old = self.before.carrier.n_obj
        om = np.empty(self.after.carrier.n_obj, dtype=IDX)
        om[:n_old] = u.obj_map
        T = np.empty(self.after.carrier.n_obj, dtype=IDX)
        T[:n_old] = Zc.ident[u.obj_map]
        for z, e in self.edges.items():
            T[z] = v.mor_map[e]
            om[z] = Zc.tgt[T[z]]
        z, w, m = self.triples[:, 0], self.triples[:, 1], self.triples[:, 2]
        inner = Zc.comp[u.mor_map[m], Zc.inv[T[z]]]
        mm = Zc.comp[T[w], inner].astype(IDX)
        if (inner < 0).any() or (mm < 0).any():
            raise ValidationError("NOT_COMMUTATIVE", "cocone does not commute")
        return EquivariantFunctor.from_arrays(self.after, Z, om, mm)


_fresh = count()


def _attach(X, kind, gen, attaching, new_ids, reps, corrections, new_inv, gen_obj, gen_K, edges, namer=None):
    """Shared pushout construction.

    ``reps``/``corrections``/``new_inv`` describe the new objects: the
    representative in ``X``, the correction morphism
    ``alpha(rep z) -> rep(alpha z)`` and the involution image (positions in
    the new object list, offset by ``len(X)``).
    """
    G = X.carrier
    n0, k0 = G.n_obj, G.n_mor
    n1 = n0 + len(new_ids)
    rep = np.concatenate([np.arange(n0), np.asarray(reps, dtype=IDX)]).astype(IDX)
    corr = np.concatenate([G.ident[X.aobj], np.asarray(corrections, dtype=IDX)]).astype(IDX)
    aobj = np.concatenate([X.aobj, np.asarray(new_inv, dtype=IDX)]).astype(IDX)
    triples = [(int(G.src[m]), int(G.tgt[m]), m) for m in range(k0)]
    for z in range(n1):
        for w in range(n1):
            if z < n0 and w < n0:
                continue
            for m in G.hom_ix(int(rep[z]), int(rep[w])).tolist():
                triples.append((z, w, m))
    triples = np.array(triples, dtype=IDX).reshape(-1, 3)
    k1 = len(triples)
    key = np.full((n1, n1, k0), -1, dtype=np.int64)
    key[triples[:, 0], triples[:, 1], triples[:, 2]] = np.arange(k1)
    tz, tw, tm = triples[:, 0], triples[:, 1], triples[:, 2]
    src, tgt = tz, tw
    ident = key[np.arange(n1), np.arange(n1), G.ident[rep]]
    inv = key[tw, tz, G.inv[tm]]
    comp = np.full((k1, k1), -1, dtype=np.int64)
    gi, fi = np.nonzero(tgt[None, :] == src[:, None])
    comp[gi, fi] = key[tz[fi], tw[gi], G.comp[tm[gi], tm[fi]]]
    # involution on morphisms: (z, w, m) -> (az, aw, c_w . alpha(m) . c_z^-1)
    am = G.comp[corr[tw], G.comp[X.amor[tm], G.inv[corr[tz]]]]
    amor = key[aobj[tz], aobj[tw], am]
    if (amor < 0).any() or (comp[gi, fi] < 0).any() or (ident < 0).any() or (inv < 0).any():
        raise EngineError("pushout construction produced an undefined entry")
    obj_ids = list(G.objects) + list(new_ids)
    taken = set(G.morphisms)
    mor_ids = list(G.morphisms)
    for t in range(k0, k1):
        z, w, m = (int(v) for v in triples[t])
        name = namer(z, w, m) if namer else None
        if name is None or name in taken:
            name = ("@", obj_ids[z], obj_ids[w], G.morphisms[m])
        taken.add(name)
        mor_ids.append(name)
    H = Groupoid(obj_ids, mor_ids, src, tgt, ident, inv, comp)
    after = ZTwoGroupoid(H, Functor(H, H, aobj, amor, check=False), check=False)
    inclusion = EquivariantFunctor.from_arrays(X, after, np.arange(n0), np.arange(k0))
    gom = np.asarray(gen_obj, dtype=IDX)
    gK = np.asarray(gen_K, dtype=IDX)
    Gt = gen.target.carrier
    cell_mor = key[gom[Gt.src], gom[Gt.tgt], gK]
    cell_map = EquivariantFunctor.from_arrays(gen.target, after, gom, cell_mor)
    return CellStage(kind, gen, X, after, inclusion, attaching, cell_map,
                     tuple(range(n0, n1)), edges, triples)


def attach_s_cell(X, y, new_ids=None, namer=None):
    """Pushout of ``S(i)`` along ``S(1) -> X`` sending ``(0, *)`` to position ``y``."""
    gen = s_i()
    G = X.carrier
    ay = int(X.aobj[y])
    n0 = G.n_obj
    if new_ids is None:
        tag = next(_fresh)
        new_ids = (("cell", tag, 0), ("cell", tag, 1))
    attaching = EquivariantFunctor.from_arrays(gen.source, X, [y, ay], [G.ident[y], G.ident[ay]])
    St = gen.target.carrier
    gen_obj = [{(0, 0): y, (0, 1): n0, (1, 0): ay, (1, 1): n0 + 1}[o] for o in St.objects]
    gen_K = [int(G.ident[y]) if m[0] == 0 else int(G.ident[ay]) for m in St.morphisms]
    edges = {n0: St.mor_index[(0, "phi")], n0 + 1: St.mor_index[(1, "phi")]}
    return _attach(X, "s_i", gen, attaching, new_ids, [y, ay], [G.ident[ay], G.ident[y]],
                   [n0 + 1, n0], gen_obj, gen_K, edges, namer)


def attach_i_cell(X, y, theta, new_id=None, namer=None):
    """Pushout of ``i'`` along ``check_I -> X`` given by ``theta: y -> alpha(y)``."""
    gen = i_prime()
    G = X.carrier
    ay = int(X.aobj[y])
    if G.src[theta] != y or G.tgt[theta] != ay or X.amor[theta] != G.inv[theta]:
        raise ValidationError("NOT_EQUIVARIANT", "theta must be y -> alpha(y) with alpha(theta) = theta^-1")
    n0 = G.n_obj
    if new_id is None:
        new_id = ("cell", next(_fresh), 0)
    cI = gen.source.carrier
    attaching = EquivariantFunctor.from_arrays(
        gen.source, X, [y, ay],
        [{"id0": G.ident[y], "id1": G.ident[ay], "phi": theta, "phi-": G.inv[theta]}[m] for m in cI.morphisms])
    Nb = gen.target.carrier
    gen_obj = [{0: y, 1: ay, 2: n0}[o] for o in Nb.objects]
    # the representative of the new object is alpha(y); the skeleton sends
    # phi to theta and psi to the identity
    th, thi = int(theta), int(G.inv[theta])
    idy, iday = int(G.ident[y]), int(G.ident[ay])
    skeleton = {"id0": idy, "id1": iday, "id2": iday, "phi": th, "phi-": thi,
                "psi": iday, "psi-": iday, "psiphi": th, "psiphi-": thi}
    gen_K = [skeleton[m] for m in Nb.morphisms]
    edges = {n0: Nb.mor_index["psi"]}
    return _attach(X, "i_prime", gen, attaching, (new_id,), [ay], [theta], [n0],
                   gen_obj, gen_K, edges, namer)


def verify_pushout(stage, Z, budget=None):
    """Check that ``stage`` is a pushout, by enumeration of maps into ``Z``.

    Returns the number of cocones; raises ``EngineError`` on failure.
    """
    gen = stage.generator
    # the square commutes
    lhs = stage.attaching.then(stage.inclusion)
    rhs = gen.then(stage.cell_map)
    if lhs.key() != rhs.key():
        raise EngineError("pushout square does not commute")
    out = {}
    for d in enumerate_equivariant_maps(stage.after, Z, budget=_nodes(budget)):
        pair = (stage.inclusion.then(d).key(), stage.cell_map.then(d).key())
        if pair in out:
            raise EngineError("two maps out of the pushout restrict to the same cocone")
        out[pair] = d
    cocones = 0
    for u in enumerate_equivariant_maps(stage.before, Z, budget=_nodes(budget)):
        ua = stage.attaching.then(u)
        pre_obj = np.full(gen.target.carrier.n_obj, -1, dtype=IDX)
        pre_mor = np.full(gen.target.carrier.n_mor, -1, dtype=IDX)
        pre_obj[gen.obj_map] = ua.obj_map
        pre_mor[gen.mor_map] = ua.mor_map
        for v in enumerate_equivariant_maps(gen.target, Z, pre_obj=pre_obj, pre_mor=pre_mor, budget=_nodes(budget)):
            cocones += 1
            d = out.get((u.key(), v.key()))
            if d is None:
                raise EngineError("cocone without a mediating map")
            if stage.mediate(u, v).key() != d.key():
                raise EngineError("mediating map disagrees with enumeration")
    if cocones != len(out):
        raise EngineError("mediating maps and cocones are not in bijection")
    return cocones


# -- cell decomposition ---------------------------------------------------------

@dataclass
class CellDecomposition:
    """``f = matching_iso . composite`` with ``composite`` a chain of cells."""
    map: EquivariantFunctor
    stages: list
    composite: EquivariantFunctor
    matching_iso: EquivariantFunctor

    def kinds(self):
        return [s.kind for s in self.stages]


def _first_solution(X, A, **kw):
    sols = enumerate_equivariant_maps(X, A, limit=1, **kw)
    if not sols:
        raise EngineError("expected an equivariant map to exist")
    return sols[0]


def cell_decompose(f):
    """Decompose an acyclic cofibration into ``S(i)``- and ``i'``-cells.

    Orbits of the missing objects are added in canonical order.  A fixed
    object ``x`` gets an ``i'``-cell attached along ``beta(v)^-1 . v`` and a
    free orbit gets an ``S(i)``-cell, where ``v: y -> x`` is the first
    morphism (canonical order) into ``x`` from an object already added.
    """
    if not is_acyclic_cofibration(f):
        raise NotAcyclicCofibration("input is not an acyclic cofibration")
    A, B = f.source, f.target
    Bc = B.carrier
    X = A
    mu = f
    stages = []
    missing = set(range(Bc.n_obj)) - set(f.obj_map.tolist())
    for orb in orbits(B, [Bc.objects[i] for i in sorted(missing)]):
        x = Bc.ob_index[orb.representative]
        covered = set(mu.obj_map.tolist())
        cands = [m for m in np.flatnonzero(Bc.tgt == x).tolist() if int(Bc.src[m]) in covered]
        theta_b = min(cands)
        yb = int(Bc.src[theta_b])
        back_obj = {int(b): i for i, b in enumerate(mu.obj_map.tolist())}
        y = back_obj[yb]
        n0 = X.carrier.n_obj
        if orb.fixed:
            bt = int(B.amor[theta_b])
            loop_b = int(Bc.comp[Bc.inv[bt], theta_b])
            back_mor = {int(b): i for i, b in enumerate(mu.mor_map.tolist())}
            theta = back_mor[loop_b]
            Nb = nabla().carrier
            pre_obj = [yb, int(B.aobj[yb]), x]
            pre_mor = np.full(Nb.n_mor, -1, dtype=IDX)
            pre_mor[Nb.mor_index["phi"]] = loop_b
            pre_mor[Nb.mor_index["psi"]] = bt
            v = _first_solution(nabla(), B, pre_obj=pre_obj, pre_mor=pre_mor)
            new_id = Bc.objects[x] if Bc.objects[x] not in X.carrier.ob_index else None
            stage = attach_i_cell(X, y, theta, new_id=new_id, namer=_namer_via(mu, B, n0, {n0: bt}))
        else:
            gen_t = s_i().target
            St = gen_t.carrier
            pre_obj = np.full(St.n_obj, -1, dtype=IDX)
            pre_obj[St.ob_index[(0, 0)]] = yb
            pre_obj[St.ob_index[(0, 1)]] = x
            pre_mor = np.full(St.n_mor, -1, dtype=IDX)
            pre_mor[St.mor_index[(0, "phi")]] = theta_b
            v = _first_solution(gen_t, B, pre_obj=pre_obj, pre_mor=pre_mor)
            ids = (Bc.objects[x], Bc.objects[int(B.aobj[x])])
            if any(i in X.carrier.ob_index for i in ids):
                ids = None
            T_new = {n0: theta_b, n0 + 1: int(B.amor[theta_b])}
            stage = attach_s_cell(X, y, new_ids=ids, namer=_namer_via(mu, B, n0, T_new))
        mu = stage.mediate(mu, v)
        stages.append(stage)
        X = stage.after
    composite = EquivariantFunctor.from_arrays(A, X, np.arange(A.carrier.n_obj), np.arange(A.carrier.n_mor))
    if sorted(mu.obj_map.tolist()) != list(range(Bc.n_obj)) or sorted(mu.mor_map.tolist()) != list(range(Bc.n_mor)):
        raise EngineError("matching map is not an isomorphism")
    if composite.then(mu).key() != f.key():
        raise EngineError("decomposition does not recompose to the input")
    return CellDecomposition(f, stages, composite, mu)


def _namer_via(mu, B, n0, T_new):
    """Name new morphisms after their images in ``B`` (clashes fall back to tags)."""
    Bc = B.carrier

    def name(z, w, m):
        tz = T_new[z] if z >= n0 else int(Bc.ident[mu.obj_map[z]])
        tw = T_new[w] if w >= n0 else int(Bc.ident[mu.obj_map[w]])
        img = int(Bc.comp[tw, Bc.comp[mu.mor_map[m], Bc.inv[tz]]])
        return Bc.morphisms[img]
    return name


def verify_decomposition(dec, budget=None):
    """Re-check a decomposition: pushouts, acyclicity of stages, recomposition."""
    for stage in dec.stages:
        verify_pushout(stage, dec.map.target, budget)
        if not is_acyclic_cofibration(stage.inclusion):
            raise EngineError("a cell inclusion is not an acyclic cofibration")
        if not is_acyclic_cofibration(stage.generator):
            raise EngineError("generator is not an acyclic cofibration")
    mu = dec.matching_iso
    if dec.composite.then(mu).key() != dec.map.key():
        raise EngineError("composite and matching iso do not recompose the input")
    return True


# -- corpus of acyclic cofibrations ---------------------------------------------------

@dataclass
class CellComplex:
    """A relative cell complex ``base -> stages[-1].after`` (identity if no stage)."""
    label: str
    base: ZTwoGroupoid
    stages: list

    @property
    def target(self):
        return self.stages[-1].after if self.stages else self.base

    @property
    def map(self):
        Y = self.target
        return EquivariantFunctor.from_arrays(self.base, Y, np.arange(self.base.carrier.n_obj),
                                              np.arange(self.base.carrier.n_mor))


def standard_bases():
    """Small objects used as domains of the acyclic cofibration corpus."""
    z2 = group_groupoid(2)
    return {
        "one": one(),
        "check_I": check_I(),
        "s_one": free_S(terminal()),
        "one+one": ztwo_coproduct(one(), one()),
        "BZ2": trivial_action(z2),
        "nabla": nabla(),
    }


def attachments(X):
    """All cell attachments on ``X`` as ``(kind, args)`` in canonical order."""
    out = [("s_i", (y,)) for y in range(X.carrier.n_obj)]
    for t in enumerate_equivariant_maps(check_I(), X):
        out.append(("i_prime", (int(t.obj_map[0]), int(t.mor_map[t.source.carrier.mor_index["phi"]]))))
    return out


def _apply(X, kind, args):
    return attach_s_cell(X, *args) if kind == "s_i" else attach_i_cell(X, *args)


def acyclic_cofibration_corpus(bases=None, max_objects=4, include_identities=True):
    """Relative cell complexes on the standard bases with at most ``max_objects`` objects."""
    bases = bases if bases is not None else standard_bases()
    corpus = []
    for name, base in bases.items():
        if include_identities:
            corpus.append(CellComplex(f"{name}", base, []))
        frontier = [(name, base, [])]
        while frontier:
            label, X, stages = frontier.pop(0)
            for kind, args in attachments(X):
                grow = 2 if kind == "s_i" else 1
                if X.carrier.n_obj + grow > max_objects:
                    continue
                st = _apply(X, kind, args)
                lab = f"{label}+{kind}{list(args)}"
                cc = CellComplex(lab, base, stages + [st])
                corpus.append(cc)
                frontier.append((lab, st.after, stages + [st]))
    return corpus


def lift_through_cells(cc, f, top, bottom):
    """Build a filler stage by stage; ``None`` if some generator square has none."""
    d = top
    for stage in cc.stages:
        gtop = stage.attaching.then(d)
        gbottom_o = bottom.obj_map[stage.cell_map.obj_map]
        gbottom_m = bottom.mor_map[stage.cell_map.mor_map]
        gbottom = EquivariantFunctor.from_arrays(stage.generator.target, f.target, gbottom_o, gbottom_m)
        sol = solve_lifting(LiftingProblem(stage.generator, f, gtop, gbottom, check=False))
        if sol is None:
            return None
        d = stage.mediate(d, sol.diagonal)
    if cc.map.then(d).key() != top.key() or d.then(f).key() != bottom.key():
        raise EngineError("stagewise lift is not a filler")
    return d


@dataclass
class CharacterizationReport:
    generator_verdict: bool
    direct_verdict: bool
    stagewise_verdict: bool
    squares_checked: int
    failing: tuple = None
    kind: str = "generator-characterization"

    @property
    def agree(self):
        return self.generator_verdict == self.direct_verdict == self.stagewise_verdict

    def __bool__(self):
        return self.agree


def verify_generator_characterization(f, corpus=None, budget=None):
    """Compare the generator test with direct lifting against a corpus of cell complexes."""
    corpus = corpus if corpus is not None else acyclic_cofibration_corpus()
    gen_verdict = bool(is_injective_fibration(f, budget))
    direct = stagewise = True
    failing = None
    n = 0
    for cc in corpus:
        j = cc.map
        for top, bottom in squares(j, f, budget):
            n += 1
            sq = LiftingProblem(j, f, top, bottom, check=False)
            ok = solve_lifting(sq, budget) is not None
            st = lift_through_cells(cc, f, top, bottom) is not None
            if not ok and direct:
                direct = False
                failing = (cc.label, sq)
            if not st:
                stagewise = False
            if st and not ok:
                raise EngineError("stagewise lift exists but direct search found none")
    return CharacterizationReport(gen_verdict, direct, stagewise, n, failing)


# -- factorization ----------------------------------------------------------------------

@dataclass
class Factorization:
    middle: ZTwoGroupoid
    j: EquivariantFunctor
    q: EquivariantFunctor


def mapping_path_object(f):
    """Objects ``(a, c, g: f(a) -> c)``; morphisms ``(m_a, m_c, g)`` out of ``(a, c, g)``."""
    A, C = f.source, f.target
    Ac, Cc = A.carrier, C.carrier
    objects = []
    for a in range(Ac.n_obj):
        for g in Cc.out_ix(int(f.obj_map[a])).tolist():
            objects.append((Ac.objects[a], Cc.objects[Cc.tgt[g]], Cc.morphisms[g]))
    by_a = {}
    for o in objects:
        by_a.setdefault(o[0], []).append(o)
    morphisms = []
    for (a, c, g) in objects:
        for ma in Ac.out_ix(Ac.ob_index[a]).tolist():
            a2 = Ac.objects[Ac.tgt[ma]]
            fma = Cc.morphisms[f.mor_map[ma]]
            for (_, c2, g2) in by_a[a2]:
                mc = Cc.compose(g2, Cc.compose(fma, Cc.inverse(g)))
                morphisms.append(((Ac.morphisms[ma], mc, g), (a, c, g), (a2, c2, g2)))

    def compose(m2, m1):
        ma2, mc2, _ = m2
        ma1, mc1, g = m1
        return (Ac.compose(ma2, ma1), Cc.compose(mc2, mc1), g)

    def inverse(m):
        ma, mc, g = m
        g2 = Cc.compose(mc, Cc.compose(g, Cc.morphisms[f.mor_map[Ac.mor_index[Ac.inverse(ma)]]]))
        return (Ac.inverse(ma), Cc.inverse(mc), g2)

    def identity(o):
        a, c, g = o
        return (Ac.identity(a), Cc.identity(c), g)

    P = Groupoid.generate(objects, morphisms, identity, inverse, compose)
    aobj = [P.ob_index[(A.act(a), C.act(c), C.act_mor(g))] for a, c, g in P.objects]
    amor = [P.mor_index[(A.act_mor(ma), C.act_mor(mc), C.act_mor(g))] for ma, mc, g in P.morphisms]
    return ZTwoGroupoid(P, Functor(P, P, aobj, amor, check=False), check=False)


def factorize(f, budget=None):
    """Factor ``f`` as an acyclic cofibration followed by an injective fibration.

    Requires a fibrant domain; raises ``DomainNotFibrant`` otherwise.
    """
    if not is_fibrant(f.source, budget):
        raise DomainNotFibrant("factorization needs a fibrant domain")
    A, C = f.source, f.target
    Ac, Cc = A.carrier, C.carrier
    M = mapping_path_object(f)
    P = M.carrier
    jo = [P.ob_index[(a, f.obj(a), Cc.identity(f.obj(a)))] for a in Ac.objects]
    jm = [P.mor_index[(m, f.mor(m), Cc.identity(f.obj(Ac.source(m))))] for m in Ac.morphisms]
    j = EquivariantFunctor.from_arrays(A, M, jo, jm, check=True)
    qo = [Cc.ob_index[c] for _, c, _ in P.objects]
    qm = [Cc.mor_index[mc] for _, mc, _ in P.morphisms]
    q = EquivariantFunctor.from_arrays(M, C, qo, qm, check=True)
    if j.then(q).key() != f.key():
        raise EngineError("q . j != f")
    if not is_acyclic_cofibration(j):
        raise EngineError("j is not an acyclic cofibration")
    if not is_injective_fibration(q, budget):
        raise EngineError("q is not an injective fibration")
    return Factorization(M, j, q)


def fibrant_replacement(X, max_cells=16, budget=None):
    """Attach ``i'``-cells until ``X -> 1`` is an injective fibration.

    Returns ``(Y, j)`` with ``j: X -> Y`` a relative cell complex.
    """
    Y = X
    stages = []
    for _ in range(max_cells + 1):
        rep = is_fibrant(Y, budget)
        if rep:
            cc = CellComplex("fibrant-replacement", X, stages)
            return cc.target, cc.map
        top = rep.square.top
        y = int(top.obj_map[0])
        theta = int(top.mor_map[top.source.carrier.mor_index["phi"]])
        st = attach_i_cell(Y, y, theta)
        stages.append(st)
        Y = st.after
    raise BudgetExceeded(f"no fibrant replacement within {max_cells} cells")
