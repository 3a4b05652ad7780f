"""Command-line front end.

Inputs are JSON files or ``catalog:<id>`` references.

Matrix files ({"schema": "crystal-forge/1", "p", "r", "m", "twist",
"entries"}) carry a square matrix over W_m(F_{p^r}); each entry is the
list of its r coordinates.  Spec files ({"schema", "lie_type", "rank",
"n", "tau"?, "eta", "p"?}) carry a classification tuple; "tau" is the
image list of a node permutation.  Unknown fields are rejected.

Reports are emitted as JSON with sorted keys and exact fraction strings,
so identical inputs yield byte-identical output.  Exit codes: 0 ok,
2 parse error, 3 precision error, 4 domain error.  The environment
variable CRYSTAL_FORGE_THREADS caps worker parallelism (all current
computations run single-threaded; values < 1 are rejected).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Tuple

from . import catalog as cat
from . import crystals as cr
from . import modp
from . import roots as rootsys
from .polygons import NewtonPolygon, PolygonError
from .witt import (
    NewtonPrecisionExceeded,
    NonPrime,
    InvalidDegree,
    PrecisionExhausted,
    SemilinearMap,
    hodge_polygon,
    newton_polygon,
    semilinear_from_json,
    semilinear_to_json,
)

SCHEMA = "crystal-forge/1"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECISION = 3
EXIT_DOMAIN = 4


class ParseFailure(ValueError):
    pass


def _threads() -> int:
    raw = os.environ.get("CRYSTAL_FORGE_THREADS", "1")
    try:
        v = int(raw)
    except ValueError:
        raise ParseFailure(f"CRYSTAL_FORGE_THREADS={raw!r} is not an integer")
    if v < 1:
        raise ParseFailure("CRYSTAL_FORGE_THREADS must be >= 1")
    return v


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseFailure(f"cannot read {path}: {exc}")
    if not isinstance(obj, dict):
        raise ParseFailure("top-level JSON value must be an object")
    return obj


def _spec_from_json(obj: dict) -> cr.ShimuraTypeSpec:
    allowed = {"schema", "lie_type", "rank", "n", "tau", "eta", "p"}
    extra = set(obj) - allowed
    if extra:
        raise ParseFailure(f"unknown spec fields: {sorted(extra)}")
    missing = {"schema", "lie_type", "rank", "n", "eta"} - set(obj)
    if missing:
        raise ParseFailure(f"missing spec fields: {sorted(missing)}")
    if obj["schema"] != SCHEMA:
        raise ParseFailure(f"unsupported schema {obj['schema']!r}")
    return cr.validate(
        str(obj["lie_type"]),
        int(obj["rank"]),
        int(obj["n"]),
        obj.get("tau"),
        [int(v) for v in obj["eta"]],
    )


def _resolve(source: str, p: int, m: int):
    """Return (kind, payload): a catalog entry, a semilinear map, or a tuple spec."""
    if source.startswith("catalog:"):
        return "catalog", cat.get(source[len("catalog:") :])
    obj = _load_json(source)
    if "entries" in obj:
        try:
            return "matrix", semilinear_from_json(obj)
        except ValueError as exc:
            raise ParseFailure(str(exc))
    return "spec", _spec_from_json(obj)


def _fr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _poly_json(poly: NewtonPolygon) -> list:
    return [[_fr(s), m] for s, m in poly.pairs]


def _emit(report: dict) -> None:
    print(json.dumps(report, sort_keys=True, indent=2))


def _entry_module_map(entry: cat.CatalogEntry, p: int, m: int) -> SemilinearMap:
    if "module_map" not in entry.builders:
        raise ParseFailure(f"catalog entry {entry.id} has no module matrix")
    return entry.build("module_map", p, m)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_slopes(args) -> int:
    kind, payload = _resolve(args.source, args.p, args.m)
    report = {"schema": SCHEMA, "command": "slopes", "input": args.source}
    if kind == "matrix":
        poly = newton_polygon(payload)
    elif kind == "spec":
        poly = cr.adjoint_newton_polygon(payload)
        report["kind"] = "adjoint"
    else:
        entry = payload
        if args.adjoint or "module_map" not in entry.builders:
            if entry.spec is None:
                raise ParseFailure(f"entry {entry.id} has no classification tuple")
            poly = cr.adjoint_newton_polygon(entry.spec)
            report["kind"] = "adjoint"
        else:
            poly = newton_polygon(_entry_module_map(entry, args.p, args.m))
            report["kind"] = "module"
    report["newton"] = _poly_json(poly)
    _emit(report)
    if not args.no_render:
        print(poly.ascii(), file=sys.stderr)
    return EXIT_OK


def cmd_hodge(args) -> int:
    kind, payload = _resolve(args.source, args.p, args.m)
    if kind == "catalog":
        payload = _entry_module_map(payload, args.p, args.m)
    elif kind != "matrix":
        raise ParseFailure("hodge needs a matrix input")
    poly = hodge_polygon(payload)
    _emit(
        {
            "schema": SCHEMA,
            "command": "hodge",
            "input": args.source,
            "hodge": _poly_json(poly),
        }
    )
    return EXIT_OK


def cmd_ordinary(args) -> int:
    kind, payload = _resolve(args.source, args.p, args.m)
    minimal_id = args.minimal
    if kind == "catalog":
        fmap = _entry_module_map(payload, args.p, args.m)
        if minimal_id is None:
            minimal_id = "catalog:" + payload.id.split("-w")[0]
    elif kind == "matrix":
        fmap = payload
        if minimal_id is None:
            raise ParseFailure("matrix input needs --minimal catalog:<id>")
    else:
        raise ParseFailure("ordinary needs a matrix or catalog input")
    if not minimal_id.startswith("catalog:"):
        raise ParseFailure("--minimal must be a catalog:<id> reference")
    base = cat.get(minimal_id[len("catalog:") :])
    minimal = base.build("module_crystal").newton_polygon()
    computed = newton_polygon(fmap)
    _emit(
        {
            "schema": SCHEMA,
            "command": "ordinary",
            "input": args.source,
            "minimal": _poly_json(minimal),
            "computed": _poly_json(computed),
            "ordinary": computed == minimal,
        }
    )
    return EXIT_OK


def _spec_of(args) -> cr.ShimuraTypeSpec:
    kind, payload = _resolve(args.source, 2, 2)
    if kind == "catalog":
        if payload.spec is None:
            raise ParseFailure(f"entry {payload.id} has no classification tuple")
        return payload.spec
    if kind == "spec":
        return payload
    raise ParseFailure("this command needs a spec or catalog input")


def cmd_fshw(args) -> int:
    spec = _spec_of(args)
    E, Et = cr.epsilon_sets(spec)
    _emit(
        {
            "schema": SCHEMA,
            "command": "fshw",
            "input": args.source,
            "delta": _fr(cr.delta(spec)),
            "nodes": sorted(E),
            "nodes_reduced": sorted(Et),
            "nilpotency": list(cr.nilpotency_classes(spec)),
            "fshw": cr.fshw_invariant(spec),
        }
    )
    return EXIT_OK


def cmd_decompose(args) -> int:
    if args.source.startswith("catalog:") and args.l is not None:
        base = args.source[len("catalog:") :]
        args.source = f"catalog:{base}-l{args.l}"
    spec = _spec_of(args)
    dec = cr.minimal_decomposition(spec)
    pos = cr.positive_pdiv_type(spec)
    _emit(
        {
            "schema": SCHEMA,
            "command": "decompose",
            "input": args.source,
            "positive_type": pos.format(),
            "positive_words": pos.to_json(),
            "height": pos.height,
            "dimension": pos.dimension,
            "orbits": [
                {
                    "roots": [list(r) for r in o.roots],
                    "word": list(o.word),
                    "slope": _fr(o.slope),
                    "type": 2 if o.type2 else 1,
                }
                for o in dec.orbits
            ],
            "commutator_triples": [list(t) for t in dec.j3],
        }
    )
    return EXIT_OK


def cmd_classify_cyclic(args) -> int:
    kind, payload = _resolve(args.source, args.p, args.m)
    if kind == "catalog":
        payload = _entry_module_map(payload, args.p, args.m)
    elif kind != "matrix":
        raise ParseFailure("classify-cyclic needs a matrix input")
    t = modp.classify_cyclic(payload)
    _emit(
        {
            "schema": SCHEMA,
            "command": "classify-cyclic",
            "input": args.source,
            "type": t.format(),
            "words": t.to_json(),
            "height": t.height,
            "dimension": t.dimension,
        }
    )
    return EXIT_OK


def cmd_count_nu(args) -> int:
    formula, oracle = cr.count_nu(args.n)
    _emit(
        {
            "schema": SCHEMA,
            "command": "count-nu",
            "n": args.n,
            "formula": formula,
            "oracle": oracle,
            "agree": formula == oracle,
        }
    )
    return EXIT_OK if formula == oracle else EXIT_DOMAIN


def cmd_catalog(args) -> int:
    if args.action == "list":
        _emit({"schema": SCHEMA, "command": "catalog", "ids": cat.ids()})
        return EXIT_OK
    entry = cat.get(args.id)
    report = {
        "schema": SCHEMA,
        "command": "catalog",
        "id": entry.id,
        "title": entry.title,
        "notes": entry.notes,
        "builders": sorted(entry.builders),
        "expected": {
            k: repr(v) for k, v in sorted(entry.expected.items(), key=lambda t: t[0])
        },
    }
    if entry.spec is not None:
        report["spec"] = {
            "lie_type": entry.spec.lie_type,
            "rank": entry.spec.rank,
            "n": entry.spec.n,
            "tau": list(entry.spec.tau.perm),
            "eta": list(entry.spec.eta),
        }
    _emit(report)
    return EXIT_OK


def cmd_roots(args) -> int:
    rs = rootsys.build_root_system(args.lie_type, args.rank)
    _emit(
        {
            "schema": SCHEMA,
            "command": "roots",
            "lie_type": args.lie_type,
            "rank": args.rank,
            "root_count": len(rs.roots),
            "positive_count": len(rs.positive),
            "highest_root": list(rs.highest_root),
            "minuscule_nodes": sorted(rootsys.minuscule_nodes(args.lie_type, args.rank)),
        }
    )
    return EXIT_OK


def cmd_nilradical(args) -> int:
    rs = rootsys.build_root_system(args.lie_type, args.rank)
    nodes = args.nodes
    _emit(
        {
            "schema": SCHEMA,
            "command": "nilradical",
            "lie_type": args.lie_type,
            "rank": args.rank,
            "nodes": nodes,
            "dims": {str(x): len(rootsys.nilradical_roots(rs, x)) for x in nodes},
            "intersection": rootsys.intersect_nilradicals(rs, nodes),
        }
    )
    return EXIT_OK


def cmd_weyl_scan(args) -> int:
    rs = rootsys.build_root_system(args.lie_type, args.rank)
    best = 0
    count = 0
    for w in rootsys.weyl_elements(rs, bound=args.bound):
        count += 1
        best = max(best, rootsys.projection_dim(rs, args.x, w, args.y))
    _emit(
        {
            "schema": SCHEMA,
            "command": "weyl-scan",
            "lie_type": args.lie_type,
            "rank": args.rank,
            "x": args.x,
            "y": args.y,
            "weyl_order": count,
            "max_projection_dim": best,
            "intersection": rootsys.intersect_nilradicals(rs, {args.x, args.y}),
        }
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="crystal-forge",
        description="exact invariants of Frobenius-semilinear crystals",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_pm(sp):
        sp.add_argument("--p", type=int, default=2, help="prime for catalog builds")
        sp.add_argument("--m", type=int, default=8, help="precision for catalog builds")

    sp = sub.add_parser("slopes", help="Newton polygon of a matrix, spec, or entry")
    sp.add_argument("source")
    sp.add_argument("--adjoint", action="store_true")
    sp.add_argument("--no-render", action="store_true")
    add_pm(sp)
    sp.set_defaults(fn=cmd_slopes)

    sp = sub.add_parser("hodge", help="Hodge polygon (elementary divisors)")
    sp.add_argument("source")
    add_pm(sp)
    sp.set_defaults(fn=cmd_hodge)

    sp = sub.add_parser("ordinary", help="compare against the minimal polygon")
    sp.add_argument("source")
    sp.add_argument("--minimal", default=None)
    add_pm(sp)
    sp.set_defaults(fn=cmd_ordinary)

    sp = sub.add_parser("fshw", help="stable-image invariant of a spec")
    sp.add_argument("source")
    sp.set_defaults(fn=cmd_fshw)

    sp = sub.add_parser("decompose", help="positive p-divisible type and orbits")
    sp.add_argument("source")
    sp.add_argument("--l", type=int, default=None, help="rank suffix for catalog families")
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("classify-cyclic", help="type of a monomial matrix")
    sp.add_argument("source")
    add_pm(sp)
    sp.set_defaults(fn=cmd_classify_cyclic)

    sp = sub.add_parser("count-nu", help="torus-Levi twist count, formula vs oracle")
    sp.add_argument("n", type=int)
    sp.set_defaults(fn=cmd_count_nu)

    sp = sub.add_parser("catalog", help="list or show fixtures")
    sp.add_argument("action", choices=["list", "show"])
    sp.add_argument("id", nargs="?")
    sp.set_defaults(fn=cmd_catalog)

    sp = sub.add_parser("roots", help="root system summary")
    sp.add_argument("lie_type")
    sp.add_argument("rank", type=int)
    sp.set_defaults(fn=cmd_roots)

    sp = sub.add_parser("nilradical", help="nilradical dimensions and intersections")
    sp.add_argument("lie_type")
    sp.add_argument("rank", type=int)
    sp.add_argument("nodes", type=int, nargs="+")
    sp.set_defaults(fn=cmd_nilradical)

    sp = sub.add_parser("weyl-scan", help="max projection dimension over W")
    sp.add_argument("lie_type")
    sp.add_argument("rank", type=int)
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--y", type=int, required=True)
    sp.add_argument("--bound", type=int, default=10**6)
    sp.set_defaults(fn=cmd_weyl_scan)

    return ap


def main(argv: Optional[list] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        _threads()
        if args.command == "catalog" and args.action == "show" and not args.id:
            raise ParseFailure("catalog show needs an id")
        return args.fn(args)
    except (ParseFailure, cr.IncompatibleSteps) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NewtonPrecisionExceeded as exc:
        print(
            f"precision error: {exc} (suggested m: {exc.required_m})", file=sys.stderr
        )
        return EXIT_PRECISION
    except PrecisionExhausted as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (
        NonPrime,
        InvalidDegree,
        PolygonError,
        cat.UnknownId,
        cr.IllegalEtaNode,
        cr.IllegalAutomorphismOrder,
        cr.EmptyI1,
        rootsys.UnsupportedType,
        rootsys.NodeOutOfRange,
        rootsys.EnumerationBoundExceeded,
        modp.NotMonomial,
        modp.MissingVerschiebung,
        ValueError,
    ) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
