"""Brute-force reference computations.

Everything here is written from the definitions with itertools over plain
Python data, without the search kernel or any package construction, so that
golden values are reproduced independently before they are frozen in tests.
Run as a script to print them.
"""
from itertools import combinations, permutations, product


# -- raw groupoids: (objects, {mor: (src, tgt)}, {(g, f): g.f}, {x: id}) ------

def raw(G):
    """Plain-dict copy of a package groupoid's tables."""
    mors = {G.morphisms[i]: (G.objects[G.src[i]], G.objects[G.tgt[i]]) for i in range(G.n_mor)}
    comp = {}
    for g in range(G.n_mor):
        for f in range(G.n_mor):
            if G.tgt[f] == G.src[g]:
                comp[G.morphisms[g], G.morphisms[f]] = G.morphisms[G.comp[g, f]]
    ident = {G.objects[x]: G.morphisms[G.ident[x]] for x in range(G.n_obj)}
    return list(G.objects), mors, comp, ident


def raw_interval():
    objs = [0, 1]
    mors = {"id0": (0, 0), "id1": (1, 1), "phi": (0, 1), "phi-": (1, 0)}
    comp = {}
    for g, (gs, gt) in mors.items():
        for f, (fs, ft) in mors.items():
            if ft == gs:
                comp[g, f] = next(m for m, st in mors.items() if st == (fs, gt))
    return objs, mors, comp, {0: "id0", 1: "id1"}


def raw_terminal():
    return [0], {"id0": (0, 0)}, {("id0", "id0"): "id0"}, {0: "id0"}


def functors(A, B, inv_a=None, inv_b=None):
    """Every strict functor ``A -> B`` by exhaustive assignment of morphisms.

    With ``inv_a``/``inv_b`` (pairs of object and morphism dicts) only the
    equivariant ones are kept.
    """
    oa, ma, ca, ia = A
    ob, mb, cb, ib = B
    names = list(ma)
    out = []
    for Fo in product(ob, repeat=len(oa)):
        fo = dict(zip(oa, Fo))
        choices = [[n for n, (s, t) in mb.items() if (s, t) == (fo[ma[m][0]], fo[ma[m][1]])] for m in names]
        for Fm in product(*choices):
            fm = dict(zip(names, Fm))
            if any(fm[ia[x]] != ib[fo[x]] for x in oa):
                continue
            if any(fm[h] != cb[fm[g], fm[f]] for (g, f), h in ca.items()):
                continue
            if inv_a is not None:
                (ao, am), (bo, bm) = inv_a, inv_b
                if any(fo[ao[x]] != bo[fo[x]] for x in oa) or any(fm[am[m]] != bm[fm[m]] for m in names):
                    continue
            out.append((fo, fm))
    return out


def is_isofibration(A, B, F):
    """Every iso out of ``F(a)`` has a preimage out of ``a``."""
    oa, ma, _, _ = A
    ob, mb, _, _ = B
    fo, fm = F
    for a in oa:
        images = {fm[m] for m, (s, _) in ma.items() if s == a}
        if any(s == fo[a] and n not in images for n, (s, _) in mb.items()):
            return False
    return True


def strict_pullback_objects(A, B, C, F, G):
    """Object pairs ``(a, b)`` with ``F(a) = G(b)``."""
    return [(a, b) for a in A[0] for b in B[0] if F[0][a] == G[0][b]]


# -- the finite universe from its definition ------------------------------------------

def universe_objects(N):
    """Triples ``(A, B, phi)``: subsets of ``range(N)`` with a bijection ``phi: A -> B``."""
    subsets = [frozenset(c) for k in range(N + 1) for c in combinations(range(N), k)]
    out = []
    for A in subsets:
        for B in subsets:
            if len(A) != len(B):
                continue
            sa, sb = sorted(A), sorted(B)
            for img in permutations(sb):
                out.append((A, B, dict(zip(sa, img))))
    return out


def is_fixed(obj):
    """Fixed by ``(A, B, phi) -> (B, A, phi^-1)``."""
    A, B, phi = obj
    inv = {v: k for k, v in phi.items()}
    return A == B and phi == inv


def bijections(X, Y):
    xs, ys = sorted(X), sorted(Y)
    if len(xs) != len(ys):
        return []
    return [dict(zip(xs, p)) for p in permutations(ys)]


def universe_hom(src, tgt):
    """Pairs ``(rho, tau)`` with ``psi . rho = tau . phi``."""
    (A, B, phi), (C, D, psi) = src, tgt
    return [(r, t) for r in bijections(A, C) for t in bijections(B, D)
            if all(psi[r[a]] == t[phi[a]] for a in A)]


def universe_morphism_count(N):
    obs = universe_objects(N)
    return sum(len(universe_hom(s, t)) for s in obs for t in obs)


def path_object_counts(N):
    """Objects and morphisms of the path object of ``U -> 1`` from the definition.

    Objects are isos ``phi: x -> y`` of ``U``; a morphism from ``phi`` to
    ``phi'`` is a pair ``(rho: x -> x', tau: y -> y')`` with ``phi' rho = tau phi``.
    """
    obs = universe_objects(N)
    isos = [(x, y, m) for x in obs for y in obs for m in universe_hom(x, y)]

    def compose(g, f):
        (r2, t2), (r1, t1) = g, f
        return ({a: r2[r1[a]] for a in r1}, {b: t2[t1[b]] for b in t1})

    n_mor = 0
    for (x, y, phi) in isos:
        for (x2, y2, phi2) in isos:
            for rho in universe_hom(x, x2):
                for tau in universe_hom(y, y2):
                    if compose(phi2, rho) == compose(tau, phi):
                        n_mor += 1
    return len(isos), n_mor


def pi_sections_over_point(fiber_sizes):
    """Sections of a map over a discrete base: one choice per base point."""
    return len(list(product(*[range(k) for k in fiber_sizes])))


def golden():
    I, T = raw_interval(), raw_terminal()
    swap_o = {0: 1, 1: 0}
    swap_m = {"id0": "id1", "id1": "id0", "phi": "phi-", "phi-": "phi"}
    # I x I -> I, first projection, built by hand
    pobjs = [(a, b) for a in I[0] for b in I[0]]
    pmors = {(m, n): ((I[1][m][0], I[1][n][0]), (I[1][m][1], I[1][n][1])) for m in I[1] for n in I[1]}
    pcomp = {((g1, g2), (f1, f2)): (I[2][g1, f1], I[2][g2, f2])
             for (g1, f1) in I[2] for (g2, f2) in I[2]}
    pid = {(a, b): (I[3][a], I[3][b]) for (a, b) in pobjs}
    P = (pobjs, pmors, pcomp, pid)
    proj = ({o: o[0] for o in pobjs}, {m: m[0] for m in pmors})
    obs2 = universe_objects(2)
    n_ob_p, n_mor_p = path_object_counts(2)
    return {
        "functors I->I": len(functors(I, I)),
        "functors 1->I": len(functors(T, I)),
        "maps checkI->checkI": len(functors(I, I, (swap_o, swap_m), (swap_o, swap_m))),
        "maps 1->checkI": len(functors(T, I, ({0: 0}, {"id0": "id0"}), (swap_o, swap_m))),
        "S(I) objects": 2 * len(I[0]),
        "S(I) morphisms": 2 * len(I[1]),
        "P_1 checkI objects": sum(1 for _ in I[1]),
        "pullback of 0,1 inclusions": len(strict_pullback_objects(
            T, T, I, ({0: 0}, {}), ({0: 1}, {}))),
        "first projection IxI->I isofibration": is_isofibration(P, I, proj),
        "U(2) objects": len(obs2),
        "U(2) fixed objects": sum(map(is_fixed, obs2)),
        "U(2) morphisms": universe_morphism_count(2),
        "P_1U(2) objects": n_ob_p,
        "P_1U(2) morphisms": n_mor_p,
        "U(0) objects": len(universe_objects(0)),
        "U(1) objects": len(universe_objects(1)),
        "U(3) objects": len(universe_objects(3)),
        "U(3) fixed objects": sum(map(is_fixed, universe_objects(3))),
        "pi sections over S(1), fibers 2": pi_sections_over_point([2, 2]),
    }


if __name__ == "__main__":
    for k, v in golden().items():
        print(f"{k:40} {v}")
