"""Pure-Python functor search (fallback backend).

Depth-first search over the variables "image of object x" (in index order)
followed by "image of morphism m" (in index order), with candidates tried in
increasing index order.  Every assignment is propagated through identities,
inverses, endpoints, composition triples, the involutions and the
requirements; propagated values are forced, so solutions come out in
lexicographic order of ``(object images, morphism images)``.
"""
from ..errors import BudgetExceeded

BACKEND = "python"


class _Stop(Exception):
    pass


def search(p, limit=-1, budget=10**7, count_only=False):
    """Return ``(solutions, count, nodes)``.

    ``solutions`` holds ``(obj_images, mor_images)`` tuples (empty when
    ``count_only``); ``limit < 0`` means no limit.
    """
    x_src = p.x_src.tolist()
    x_tgt = p.x_tgt.tolist()
    x_ident = p.x_ident.tolist()
    x_inv = p.x_inv.tolist()
    trip = p.x_trip.tolist()
    trip_ptr = p.x_trip_ptr.tolist()
    trip_idx = p.x_trip_idx.tolist()
    equi = len(p.x_aobj) > 0
    x_aobj = p.x_aobj.tolist()
    x_amor = p.x_amor.tolist()
    a_src = p.a_src.tolist()
    a_tgt = p.a_tgt.tolist()
    a_ident = p.a_ident.tolist()
    a_inv = p.a_inv.tolist()
    a_comp = p.a_comp
    a_aobj = p.a_aobj.tolist()
    a_amor = p.a_amor.tolist()
    hom_ptr = p.a_hom_ptr.tolist()
    hom_idx = p.a_hom_idx.tolist()
    a_fixed = p.a_fixed.tolist()
    has_f = len(p.f_obj) > 0 or len(p.fib_ptr) > 0
    f_obj = p.f_obj.tolist()
    f_mor = p.f_mor.tolist()
    req_obj = p.req_obj.tolist()
    req_mor = p.req_mor.tolist()
    fib_ptr = p.fib_ptr.tolist()
    fib_idx = p.fib_idx.tolist()

    n_ox = len(x_ident)
    n_mx = len(x_src)
    n_oa = len(a_ident)
    img_o = [-1] * n_ox
    img_m = [-1] * n_mx
    trail = []
    comp_rows = {}

    def comp(g, f):
        row = comp_rows.get(g)
        if row is None:
            row = a_comp[g].tolist()
            comp_rows[g] = row
        return row[f]

    def propagate(stack):
        # stack items: (is_mor, index, value)
        while stack:
            is_mor, i, v = stack.pop()
            if v < 0:
                return False
            if not is_mor:
                cur = img_o[i]
                if cur >= 0:
                    if cur != v:
                        return False
                    continue
                if has_f and req_obj[i] >= 0 and f_obj[v] != req_obj[i]:
                    return False
                img_o[i] = v
                trail.append(i)
                stack.append((True, x_ident[i], a_ident[v]))
                if equi:
                    stack.append((False, x_aobj[i], a_aobj[v]))
            else:
                cur = img_m[i]
                if cur >= 0:
                    if cur != v:
                        return False
                    continue
                if has_f and req_mor[i] >= 0 and f_mor[v] != req_mor[i]:
                    return False
                img_m[i] = v
                trail.append(n_ox + i)
                stack.append((False, x_src[i], a_src[v]))
                stack.append((False, x_tgt[i], a_tgt[v]))
                stack.append((True, x_inv[i], a_inv[v]))
                if equi:
                    stack.append((True, x_amor[i], a_amor[v]))
                for k in range(trip_ptr[i], trip_ptr[i + 1]):
                    g, f, h = trip[trip_idx[k]]
                    Fg = img_m[g]
                    Ff = img_m[f]
                    Fh = img_m[h]
                    if Fg >= 0 and Ff >= 0:
                        stack.append((True, h, comp(Fg, Ff)))
                    elif Fh >= 0 and Ff >= 0:
                        stack.append((True, g, comp(Fh, a_inv[Ff])))
                    elif Fg >= 0 and Fh >= 0:
                        stack.append((True, f, comp(a_inv[Fg], Fh)))
        return True

    def undo(mark):
        while len(trail) > mark:
            t = trail.pop()
            if t < n_ox:
                img_o[t] = -1
            else:
                img_m[t - n_ox] = -1

    solutions = []
    state = {"count": 0, "nodes": 0}
    all_objects = list(range(n_oa))

    def obj_candidates(x):
        if has_f and req_obj[x] >= 0:
            b = req_obj[x]
            return fib_idx[fib_ptr[b]:fib_ptr[b + 1]]
        if equi and x_aobj[x] == x:
            return a_fixed
        return all_objects

    def rec(var):
        while var < n_ox and img_o[var] >= 0:
            var += 1
        if var == n_ox:
            while var < n_ox + n_mx and img_m[var - n_ox] >= 0:
                var += 1
        if var == n_ox + n_mx:
            state["count"] += 1
            if not count_only:
                solutions.append((tuple(img_o), tuple(img_m)))
            if 0 <= limit <= state["count"]:
                raise _Stop
            return
        if var < n_ox:
            cands = obj_candidates(var)
            for c in cands:
                state["nodes"] += 1
                if state["nodes"] > budget:
                    raise BudgetExceeded(f"search exceeded {budget} nodes")
                mark = len(trail)
                if propagate([(False, var, c)]):
                    rec(var + 1)
                undo(mark)
        else:
            m = var - n_ox
            s = img_o[x_src[m]]
            t = img_o[x_tgt[m]]
            cell = s * n_oa + t
            for k in range(hom_ptr[cell], hom_ptr[cell + 1]):
                c = hom_idx[k]
                state["nodes"] += 1
                if state["nodes"] > budget:
                    raise BudgetExceeded(f"search exceeded {budget} nodes")
                mark = len(trail)
                if propagate([(True, m, c)]):
                    rec(var + 1)
                undo(mark)

    init = [(False, i, v) for i, v in enumerate(p.pre_obj.tolist()) if v >= 0]
    init += [(True, i, v) for i, v in enumerate(p.pre_mor.tolist()) if v >= 0]
    try:
        if propagate(init):
            rec(0)
    except _Stop:
        pass
    return solutions, state["count"], state["nodes"]
