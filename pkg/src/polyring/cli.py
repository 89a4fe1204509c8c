"""Command line front end: ``polyring {group,trees,matrix,compare,simulate,sweep}``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .chipfire import DEFAULT_BUDGET, BudgetExceeded, Sandpile
from .graph import (
    PolygonSpec,
    SpecError,
    Topology,
    build,
    edge_presentation_matrix,
    laplacian,
    reduced_laplacian,
)
from .groups import (
    GROUP_METHODS,
    TREE_METHODS,
    CrossCheckError,
    compare_methods,
    compute_group,
    spanning_trees,
)
from .linalg import determinant, snf
from .relations import UnsupportedError, m_prime, relation_matrix, t_prime, uniform_relation_matrix

CSV_COLUMNS = ["n", "a", "b", "topology", "method", "order", "factors", "runtime_ms"]


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _int_range(text: str) -> list[int]:
    """'2..6' (inclusive), '3' or '1,4,7'."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    topo = p.add_mutually_exclusive_group()
    topo.add_argument("-t", "--topology", choices=[t.value for t in Topology], default=None)
    for t in Topology:
        topo.add_argument(f"--{t.value}", dest="topology", action="store_const", const=t.value,
                          help=f"shorthand for --topology {t.value}")
    p.add_argument("-n", type=int, required=True, help="number of polygons")
    p.add_argument("-a", type=int, help="uniform top path length per polygon")
    p.add_argument("-b", type=int, help="uniform bottom path length per polygon")
    p.add_argument("--a-list", type=_int_list, help="comma-separated a_1..a_n")
    p.add_argument("--b-list", type=_int_list, help="comma-separated b_1..b_n")


def _add_format(p: argparse.ArgumentParser, default: str = "text") -> None:
    p.add_argument("--format", choices=["json", "csv", "text"], default=default)


def _spec_from(args: argparse.Namespace, parser: argparse.ArgumentParser) -> PolygonSpec:
    scalars = args.a is not None or args.b is not None
    lists = args.a_list is not None or args.b_list is not None
    if scalars == lists:
        parser.error("give either -a/-b or --a-list/--b-list")
    topology = args.topology or "ring"
    try:
        if scalars:
            if args.a is None or args.b is None:
                parser.error("-a and -b go together")
            return PolygonSpec.uniform(args.n, args.a, args.b, topology)
        if args.a_list is None or args.b_list is None:
            parser.error("--a-list and --b-list go together")
        return PolygonSpec(args.n, args.a_list, args.b_list, Topology(topology))
    except SpecError as e:
        parser.error(str(e))


def _emit_rows(rows: list[dict], fmt: str, out) -> None:
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: r.get(k, "") for k in CSV_COLUMNS})


def _row(spec: PolygonSpec, method: str, group, runtime_ms: float) -> dict:
    return {
        "n": spec.n,
        "a": ";".join(map(str, spec.a)) if not spec.is_uniform else spec.a[0],
        "b": ";".join(map(str, spec.b)) if not spec.is_uniform else spec.b[0],
        "topology": spec.topology.value,
        "method": method,
        "order": str(group.order),
        "factors": ";".join(str(d) for d in group.invariant_factors),
        "runtime_ms": f"{runtime_ms:.3f}",
    }


def cmd_group(args, parser, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    spec = _spec_from(args, parser)
    method = args.method
    t0 = time.perf_counter()
    while True:
        try:
            res = compute_group(spec, method, verify=args.verify)
            break
        except UnsupportedError as e:
            print(f"note: method {method} not applicable ({e}); fallback used: {e.fallback}", file=err)
            method = e.fallback
        except CrossCheckError as e:
            print(f"cross-check FAILED for {spec}: {e}", file=err)
            for m, g in e.results.items():
                print(f"  {m}: {g}", file=err)
            return 1
    ms = (time.perf_counter() - t0) * 1000
    if args.format == "json":
        print(json.dumps(res.to_dict()), file=out)
    elif args.format == "csv":
        _emit_rows([_row(spec, res.method, res.group, ms)], "csv", out)
    else:
        g = res.group
        print(f"{spec}: S = {g}", file=out)
        print(f"invariant factors: {list(g.invariant_factors)}", file=out)
        print(f"order: {g.order}", file=out)
        print(f"method: {res.method}; cross-checked: {'yes' if res.cross_checked else 'no'}", file=out)
    return 0


def cmd_trees(args, parser, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    spec = _spec_from(args, parser)
    method = args.method
    while True:
        try:
            count = spanning_trees(spec, method)
            break
        except UnsupportedError as e:
            print(f"note: method {method} not applicable ({e}); fallback used: laplacian", file=err)
            method = "laplacian"
    if args.verify and method != "laplacian":
        check = spanning_trees(spec, "laplacian")
        if check != count:
            print(f"cross-check FAILED: {method} gives {count}, laplacian gives {check}", file=err)
            return 1
    if args.format == "json":
        print(json.dumps({"spec": spec.to_dict(), "method": method, "trees": str(count),
                          "cross_checked": bool(args.verify)}), file=out)
    else:
        print(count, file=out)
    return 0


def _matrix_for(spec: PolygonSpec, kind: str):
    if kind == "relation":
        return relation_matrix(spec)
    if kind in ("uniform", "mprime", "tprime"):
        if not spec.is_uniform:
            raise UnsupportedError("needs a uniform spec", fallback="relation")
        a, b = max(spec.a[0], spec.b[0]), min(spec.a[0], spec.b[0])
        if kind == "uniform":
            return uniform_relation_matrix(spec.n, a, b, spec.topology)
        if b < 1:
            raise UnsupportedError("reduced forms need a >= b >= 1", fallback="uniform")
        return m_prime(spec.n, a, b) if spec.topology is Topology.RING else t_prime(spec.n, a, b)
    g = build(spec)
    if kind == "laplacian":
        return laplacian(g)
    if kind == "reduced-laplacian":
        return reduced_laplacian(g)
    if kind == "edge":
        return edge_presentation_matrix(g)
    raise ValueError(kind)


def cmd_matrix(args, parser, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    spec = _spec_from(args, parser)
    try:
        m = _matrix_for(spec, args.kind)
    except UnsupportedError as e:
        print(f"error: {args.kind} matrix not available for {spec}: {e} (try --kind {e.fallback})",
              file=err)
        return 2
    if args.format == "json":
        print(json.dumps({"spec": spec.to_dict(), "kind": args.kind, "rows": m.to_json()}), file=out)
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        for r in m.to_rows():
            w.writerow(r)
    else:
        print(m, file=out)
        if m.is_square:
            print(f"det = {determinant(m)}", file=out)
        print(f"SNF factors = {list(snf(m).invariant_factors)}", file=out)
    return 0


def cmd_compare(args, parser, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    spec = _spec_from(args, parser)
    c = compare_methods(spec)
    if args.format == "json":
        print(json.dumps(c.to_dict()), file=out)
    else:
        for m, g in c.groups.items():
            print(f"  {m:>12}: {g}  (order {g.order})", file=out)
        for m, t in c.trees.items():
            print(f"  {'trees:' + m:>18}: {t}", file=out)
        for m, why in c.skipped.items():
            print(f"  {m:>12}: skipped ({why})", file=out)
        g = next(iter(c.groups.values()))
        if c.agree:
            print(f"agree: order {g.order}, factors {list(g.invariant_factors)}", file=out)
        else:
            print("DISAGREE", file=out)
    return 0 if c.agree else 1


def cmd_simulate(args, parser, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    spec = _spec_from(args, parser)
    g = build(spec)
    try:
        sp = Sandpile(g, args.sink)
    except ValueError as e:
        parser.error(str(e))
    if args.heights is not None:
        try:
            start = sp.config({str(k): int(v) for k, v in json.loads(args.heights).items()})
        except (ValueError, AttributeError) as e:
            parser.error(f"--heights: {e}")
        trace: list = []
        try:
            final, _ = sp.stabilize(start, seed=args.seed, trace=trace)
        except ValueError as e:
            parser.error(f"--heights: {e}")
        if args.format == "json":
            print(json.dumps({"start": start.as_map(), "stable": final.as_map(),
                              "topplings": [[v, k] for v, k in trace]}), file=out)
        else:
            for v, k in trace:
                print(f"topple {v} x{k}", file=out)
            print(f"stable: {final.to_json()}", file=out)
        return 0
    try:
        rec = sp.enumerate_recurrent(args.budget)
        ident = sp.identity(args.budget)
    except BudgetExceeded as e:
        print(f"refused: {e}", file=err)
        return 3
    det = determinant(reduced_laplacian(g, sp.sink))
    payload = {"spec": spec.to_dict(), "sink": sp.sink, "recurrent": str(len(rec)),
               "det_reduced_laplacian": str(det), "identity": ident.as_map()}
    if args.format == "json":
        print(json.dumps(payload), file=out)
    else:
        print(f"{spec} sink {sp.sink}: {len(rec)} recurrent configurations, det = {det}", file=out)
        print(f"identity: {ident.to_json()}", file=out)
    return 0 if len(rec) == det else 1


def _sweep_one(item: tuple[int, int, int, str]) -> dict:
    n, a, b, topo = item
    try:
        spec = PolygonSpec.uniform(n, a, b, topo)
    except SpecError as e:
        return {"key": item, "invalid": str(e)}
    c = compare_methods(spec)
    return {"key": item, "comparison": c}


def cmd_sweep(args, parser, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    items = [(n, a, b, t) for n in args.n for a in args.a for b in args.b for t in args.topologies]
    items.sort()
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_sweep_one, items, chunksize=8))
    else:
        results = [_sweep_one(it) for it in items]
    rows, records = [], []
    disagreements = invalid = 0
    for r in results:
        n, a, b, t = r["key"]
        if "invalid" in r:
            invalid += 1
            records.append({"spec": {"n": n, "a": a, "b": b, "topology": t}, "skipped": r["invalid"]})
            continue
        c = r["comparison"]
        disagreements += not c.agree
        records.append(c.to_dict())
        for m, g in c.groups.items():
            rows.append(_row(c.spec, m, g, c.runtime_ms.get(m, 0.0)))
    summary = (f"{len(items)} instances, {invalid} invalid skipped, "
               f"{disagreements} disagreements")
    if args.format == "csv":
        _emit_rows(rows, "csv", out)
        print(summary, file=err)
    elif args.format == "json":
        print(json.dumps({"instances": records, "summary": {
            "instances": len(items), "invalid": invalid, "disagreements": disagreements}}), file=out)
    else:
        for rec in records:
            if "skipped" in rec:
                continue
            s = PolygonSpec.from_dict(rec["spec"])
            facs = next(iter(rec["groups"].values()))
            mark = "ok " if rec["agree"] else "BAD"
            print(f"{mark} {str(s):<14} [{', '.join(facs)}]  methods: {','.join(rec['groups'])}",
                  file=out)
        print(summary, file=out)
    return 0 if disagreements == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyring",
        description="Sandpile groups and spanning trees of polygon chains and (twisted) rings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", help="sandpile group invariant factors")
    _add_spec_args(p)
    p.add_argument("--method", choices=("auto",) + GROUP_METHODS, default="auto")
    p.add_argument("--verify", action="store_true", help="cross-check with a second method")
    _add_format(p)
    p.set_defaults(func=cmd_group, parser=p)

    p = sub.add_parser("trees", help="number of spanning trees")
    _add_spec_args(p)
    p.add_argument("--method", choices=("auto",) + TREE_METHODS, default="auto")
    p.add_argument("--verify", action="store_true")
    _add_format(p)
    p.set_defaults(func=cmd_trees, parser=p)

    p = sub.add_parser("matrix", help="print a relation matrix")
    _add_spec_args(p)
    p.add_argument("--kind", default="relation",
                   choices=["relation", "uniform", "mprime", "tprime", "laplacian",
                            "reduced-laplacian", "edge"])
    _add_format(p)
    p.set_defaults(func=cmd_matrix, parser=p)

    p = sub.add_parser("compare", help="run every applicable method and compare")
    _add_spec_args(p)
    _add_format(p)
    p.set_defaults(func=cmd_compare, parser=p)

    p = sub.add_parser("simulate", help="chip-firing: stabilize or count recurrent configurations")
    _add_spec_args(p)
    p.add_argument("--sink", default=None)
    p.add_argument("--heights", default=None, help='JSON map vertex -> grains, e.g. \'{"x1": 5}\'')
    p.add_argument("--seed", type=int, default=None, help="random toppling order")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    _add_format(p)
    p.set_defaults(func=cmd_simulate, parser=p)

    p = sub.add_parser("sweep", help="cross-validate all methods over a grid of uniform specs")
    p.add_argument("-n", "--n", type=_int_range, default=_int_range("2..6"))
    p.add_argument("-a", "--a", type=_int_range, default=_int_range("0..3"))
    p.add_argument("-b", "--b", type=_int_range, default=_int_range("0..3"))
    p.add_argument("--topologies", type=lambda s: [Topology(x).value for x in s.split(",")],
                   default=["ring", "twisted"])
    p.add_argument("--jobs", type=int, default=1)
    _add_format(p, default="text")
    p.set_defaults(func=cmd_sweep, parser=p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, args.parser)


if __name__ == "__main__":
    sys.exit(main())
