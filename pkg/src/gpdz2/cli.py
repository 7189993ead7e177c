"""Command-line front end.

Inputs are document paths or references to built-in values:

* ``std:NAME``          a standard object or map (``one``, ``check_I``, ``nabla``, ...)
* ``terminal:NAME``     the map from a standard object to ``one``
* ``universe:N:PART``   ``U``, ``Utilde``, ``p`` or ``U->1`` for pool size ``N``

Exit codes: 0 the property holds or the construction succeeded, 1 it fails
(the report carries a witness), 2 invalid input, 3 budget or pool exhausted.
"""
import argparse
import json
import sys

from . import serialize as ser
from .config import get_budget
from .equivariant import EquivariantFunctor, STANDARD_NAMES, ZTwoGroupoid, standard, to_one
from .errors import BudgetExceeded, Gpdz2Error, PoolExhausted, SchemaViolation, UnknownName, ValidationError
from .groupoid import Groupoid, is_equivalence, validate_groupoid
from .ids import encode_id
from .model import (
    cell_decompose, factorize, is_acyclic_cofibration, is_cofibration, is_injective_fibration,
    is_projective_fibration, solve_lifting, verify_decomposition,
)
from .tt import check_pi_adjunction, path_object, pi_along, pullback_fibration
from .universe import (
    build_universe, check_univalence, check_universe_maps, classify, equivalence_type,
    universe_axiom_check,
)

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


# -- inputs ---------------------------------------------------------------------------

def _universe_part(ref):
    try:
        _, n, part = ref.split(":", 2)
        n = int(n)
    except ValueError:
        raise InputError(f"bad universe reference {ref!r}; expected universe:N:PART") from None
    b = build_universe(n)
    parts = {"U": b.U, "Utilde": b.Utilde, "p": b.p, "U->1": to_one(b.U), "Utilde->1": to_one(b.Utilde)}
    if part not in parts:
        raise InputError(f"unknown universe part {part!r}; choose from {', '.join(parts)}")
    return parts[part]


def load(ref):
    if ref.startswith("std:"):
        return standard(ref[4:])
    if ref.startswith("terminal:"):
        X = standard(ref[9:])
        if not isinstance(X, ZTwoGroupoid):
            raise InputError(f"{ref[9:]!r} is a map, not an object")
        return to_one(X)
    if ref.startswith("universe:"):
        return _universe_part(ref)
    try:
        with open(ref) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {ref}: {e.strerror}") from None
    return ser.loads(text)


def load_map(ref):
    v = load(ref)
    if not isinstance(v, EquivariantFunctor):
        raise InputError(f"{ref}: expected a map")
    return v


# -- reports ----------------------------------------------------------------------------

def _counts(X):
    G = X.carrier if isinstance(X, ZTwoGroupoid) else X
    return {"objects": G.n_obj, "morphisms": G.n_mor}


def _map_summary(f):
    return {"source": _counts(f.source), "target": _counts(f.target),
            "objects": {encode_id(x): encode_id(f.target.objects[y]) for x, y in zip(f.source.objects, f.obj_map)}}


def _square_witness(sq):
    return {"top": ser.serialize(sq.top)["body"], "bottom": ser.serialize(sq.bottom)["body"]} if sq else None


def cmd_validate(args):
    v = load(args.input)
    if isinstance(v, Groupoid):
        validate_groupoid(v)
    kind = ser.serialize(v)["kind"]
    rep = {"property": "valid-document", "holds": True, "kind": kind}
    if isinstance(v, (Groupoid, ZTwoGroupoid)):
        rep.update(_counts(v))
    return rep


def cmd_check(args):
    f = load_map(args.input)
    w = args.what
    rep = {"property": w}
    if w == "cofibration":
        rep["holds"] = is_cofibration(f)
    elif w == "weq":
        cert = is_equivalence(f.functor)
        rep["holds"] = bool(cert)
        if not cert:
            rep["witness"] = [cert.failure[0]] + [encode_id(x) for x in cert.failure[1:]]
    elif w == "acyclic-cofibration":
        rep["holds"] = is_acyclic_cofibration(f)
    elif w == "proj-fibration":
        rep["holds"] = is_projective_fibration(f)
    elif w == "inj-fibration":
        r = is_injective_fibration(f)
        rep["holds"] = r.holds
        rep["squares_checked"] = r.squares_checked
        if not r.holds:
            rep["witness"] = {"generator": r.generator, "square": _square_witness(r.square)}
    return rep


def cmd_lift(args):
    sq = load(args.input)
    if not hasattr(sq, "left"):
        raise InputError("lift expects a square document")
    fill = solve_lifting(sq)
    rep = {"property": "lifting", "holds": fill is not None}
    if fill is not None:
        rep["filler"] = ser.serialize(fill.diagonal)["body"]
    return rep


def cmd_decompose(args):
    f = load_map(args.input)
    dec = cell_decompose(f)
    verify_decomposition(dec)
    stages = []
    for s in dec.stages:
        stages.append({"cell": s.kind,
                       "attaching": {encode_id(x): encode_id(s.before.objects[y])
                                     for x, y in zip(s.attaching.source.objects, s.attaching.obj_map)},
                       "new_objects": [encode_id(s.after.objects[i]) for i in s.new_objects]})
    return {"property": "cell-decomposition", "holds": True, "stages": stages,
            "matching_iso": _map_summary(dec.matching_iso)}


def cmd_factorize(args):
    f = load_map(args.input)
    fz = factorize(f)
    return {"property": "factorization", "holds": True, "middle": _counts(fz.middle),
            "j_acyclic_cofibration": True, "q_injective_fibration": True}


def cmd_path_object(args):
    f = load_map(args.input)
    po = path_object(f)
    return {"property": "path-object", "holds": all(po.verdicts.values()), "total": _counts(po.total),
            "verdicts": po.verdicts}


def cmd_pi(args):
    g, f = load_map(args.g), load_map(args.f)
    dp = pi_along(g, f)
    adj = check_pi_adjunction(dp)
    return {"property": "dependent-product", "holds": bool(adj), "total": _counts(dp.total),
            "adjunction": [{"objects": n, "maps_into_pi": a, "maps_out_of_pullback": b, "bijective": ok}
                           for n, a, b, ok in adj.instances]}


def cmd_pullback(args):
    g, h = load_map(args.g), load_map(args.h)
    sq = pullback_fibration(g, h)
    return {"property": "pullback-of-fibration", "holds": True, "object": _counts(sq.object),
            "projection_injective_fibration": True}


def _universe_corpus(b):
    from .equivariant import free_S, ztwo_product
    from .groupoid import terminal
    S1 = free_S(terminal())
    return [to_one(S1), ztwo_product(S1, S1).first]


def cmd_universe(args):
    n = args.pool
    b = build_universe(n)
    rep = {"property": "universe", "pool": n, "U": _counts(b.U), "Utilde": _counts(b.Utilde),
           "fixed_objects": len(b.fixed_objects)}
    ok = True
    what = args.verify
    if what in ("maps", "all"):
        r = check_universe_maps(b, spot=None if n <= 3 or args.extended else 50)
        rep["maps"] = {"p_injective_fibration": r.p_fibration, "U_fibrant": r.U_fibrant,
                       "Utilde_fibrant": r.Utilde_fibrant, "explicit_fillers_checked": r.explicit_fillers_checked}
        ok = ok and r.holds
    if what in ("axioms", "all"):
        r = universe_axiom_check(b, _universe_corpus(b))
        rep["axioms"] = [{"axiom": x.axiom, "case": x.name, "status": x.status, "fiber_size": x.fiber_size}
                         for x in r.rows]
        ok = ok and r.holds
    if what in ("univalence", "all"):
        c = check_univalence(b)
        equivalence_type(b, path=c.path)
        rep["univalence"] = {"delta1_acyclic_cofibration": c.delta1_acyclic_cofibration,
                             "U_fibrant": c.U_fibrant, "path_object_fibrant": c.path_fibrant,
                             "delta1_weak_equivalence": c.delta1_weak_equivalence,
                             "conclusion": c.conclusion, "counts": c.counts}
        ok = ok and c.conclusion
    rep["holds"] = ok
    return rep


def cmd_classify(args):
    q = load_map(args.input)
    b = build_universe(args.pool, lazy=args.pool >= 4)
    w = classify(q, b)
    U = w.chi.target.carrier
    return {"property": "classification", "holds": True, "pool": args.pool,
            "chi": {encode_id(x): encode_id(U.objects[y]) for x, y in zip(q.target.objects, w.chi.obj_map)}}


def cmd_export(args):
    v = load(args.name)
    return {"property": "export", "holds": True, "document": ser.serialize(v)}


# -- driver ------------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="gpdz2", description="Checks for groupoids with involution.")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="validate a document")
    s.add_argument("input")
    s.set_defaults(run=cmd_validate)

    s = sub.add_parser("check", help="check a property of a map")
    s.add_argument("--what", required=True,
                   choices=["cofibration", "weq", "inj-fibration", "proj-fibration", "acyclic-cofibration"])
    s.add_argument("input")
    s.set_defaults(run=cmd_check)

    for name, fn, helptext in (("lift", cmd_lift, "solve a lifting square"),
                               ("decompose", cmd_decompose, "decompose an acyclic cofibration into cells"),
                               ("factorize", cmd_factorize, "factor a map with fibrant domain"),
                               ("path-object", cmd_path_object, "build and check the path object of a map")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("input")
        s.set_defaults(run=fn)

    s = sub.add_parser("pi", help="dependent product of f along g")
    s.add_argument("g")
    s.add_argument("f")
    s.set_defaults(run=cmd_pi)

    s = sub.add_parser("pullback", help="pull the fibration g back along h")
    s.add_argument("g")
    s.add_argument("h")
    s.set_defaults(run=cmd_pullback)

    s = sub.add_parser("universe", help="build and verify the universe for a pool size")
    s.add_argument("--pool", type=int, required=True)
    s.add_argument("--verify", choices=["maps", "axioms", "univalence", "all"], default="all")
    s.add_argument("--extended", action="store_true", help="check every explicit filler for pools of 4 or more")
    s.set_defaults(run=cmd_universe)

    s = sub.add_parser("classify", help="classifying map of a covering")
    s.add_argument("--pool", type=int, required=True)
    s.add_argument("input")
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("export", help="write a built-in value as a document")
    s.add_argument("name", help=f"std:NAME ({', '.join(STANDARD_NAMES)}), terminal:NAME or universe:N:PART")
    s.set_defaults(run=cmd_export)
    return p


def exit_code(report):
    """Exit status as a function of the report alone."""
    status = report.get("status")
    if status == "invalid":
        return EXIT_INVALID
    if status == "exhausted":
        return EXIT_BUDGET
    return EXIT_OK if report.get("holds") else EXIT_FAIL


def run(argv=None):
    """Parse, dispatch and return ``(exit code, report, parsed args)``."""
    args = build_parser().parse_args(argv)
    try:
        rep = args.run(args)
    except (SchemaViolation, ValidationError, UnknownName, InputError) as e:
        rep = {"status": "invalid", "holds": False, "code": getattr(e, "code", "INVALID_INPUT"), "message": str(e)}
    except (BudgetExceeded, PoolExhausted) as e:
        rep = {"status": "exhausted", "holds": False, "code": e.code, "message": str(e)}
        if isinstance(e, PoolExhausted):
            rep["fiber_size"], rep["pool"] = e.fiber_size, e.pool
    except Gpdz2Error as e:
        rep = {"status": "fails", "holds": False, "code": e.code, "message": str(e)}
    rep = {"command": args.command, **rep}
    rep.setdefault("status", "holds" if rep.get("holds") else "fails")
    rep["budget"] = {"search_nodes": get_budget().search_nodes}
    return exit_code(rep), rep, args


def _text(rep, indent=""):
    lines = []
    for k, v in rep.items():
        if isinstance(v, dict) and k != "document":
            lines.append(f"{indent}{k}:")
            lines.extend(_text(v, indent + "  "))
        elif k == "document":
            lines.append(json.dumps(v, indent=1))
        else:
            lines.append(f"{indent}{k}: {json.dumps(v) if isinstance(v, (list, dict)) else v}")
    return lines


def main(argv=None):
    code, rep, args = run(argv)
    if args.json:
        print(json.dumps(rep, indent=1, default=str))
    elif args.command == "export" and "document" in rep:
        print(json.dumps(rep["document"], indent=1))
    else:
        print("\n".join(_text(rep)))
    return code


if __name__ == "__main__":
    sys.exit(main())
