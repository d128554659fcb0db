"""Command line entry point.

Exit codes: 0 success, 1 solver failure, 2 input error, 3 budget exceeded.
The constructive guarantees behind the solvers need parts of size at least
2e times the max degree (``lll``), or (1+eps) times it together with a small
local degree (``nibble``); ``solve ksfree`` applies the same thresholds to
``floor(Delta/(s-1))``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from .errors import InputError, SolverFailure, TransversalError
from .experiment import ExperimentSpec, rows_to_csv, run_experiment
from .generators import (
    gen_clique_grid,
    gen_disjoint_cliques,
    gen_random_list_coloring,
    gen_random_local_sparse,
    list_coloring_labels,
    reduce_graph_family,
    reduce_list_coloring,
)
from .graph import compute_stats, is_independent_transversal, is_ks_free_transversal
from .io import (
    _read,
    graph_to_json,
    list_coloring_to_json,
    load_graph,
    load_graph_family,
    load_list_coloring,
    load_transversal,
    write_json,
)
from .ksfree import BACKENDS, run_ksfree
from .lll import DEFAULT_MAX_RESAMPLES, lll_condition_check, moser_tardos_it
from .nibble import DEFAULT_RETRY_CAP, solve_it_detailed
from .oracle import DEFAULT_NODE_BUDGET, brute_force_transversal
from .reduce import DEFAULT_MAX_RETRIES, reduce_local_degree_detailed


def _common() -> argparse.ArgumentParser:
    # SUPPRESS keeps a value given before the subcommand from being reset here
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master seed (default 0)")
    p.add_argument("--out", default=argparse.SUPPRESS, help="output file (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    return p


def _scalar(v):
    return v if isinstance(v, (str, int, float, bool)) or v is None else json.dumps(v, separators=(",", ":"))


TRACE_COLUMNS = (
    "t", "activated", "|T|", "added", "deleted_vertices", "min_part", "max_deg", "S_t", "D_t", "retries", "schedule_ok",
)


def _emit(payload, args, rows=None, columns=()) -> None:
    """JSON by default; with ``--format csv`` write ``rows`` (or the flattened payload)."""
    if args.format == "csv":
        rows = rows if rows is not None else [payload]
        buf = io.StringIO()
        cols = list(dict.fromkeys([*columns, *(k for r in rows for k in r)]))
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows({k: _scalar(v) for k, v in r.items()} for r in rows)
        text = buf.getvalue()
        if args.out in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(args.out, "w") as fh:
                fh.write(text)
    else:
        write_json(payload, args.out)


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "disjoint-cliques":
        g = gen_disjoint_cliques(args.delta)
    elif kind == "clique-grid":
        g = gen_clique_grid(args.delta, args.n)
    elif kind == "random":
        g = gen_random_local_sparse(args.r, args.n, args.delta, args.local, args.seed)
    elif kind == "list-coloring":
        inst = gen_random_list_coloring(args.vertices, args.degree, args.list_size, args.palette, args.seed)
        write_json(list_coloring_to_json(inst), args.out)
        return 0
    elif kind == "reduce-listcoloring":
        inst = load_list_coloring(args.file)
        doc = graph_to_json(reduce_list_coloring(inst))
        doc["labels"] = [list(lab) for lab in list_coloring_labels(inst)]
        write_json(doc, args.out)
        return 0
    else:
        g = reduce_graph_family(load_graph_family(args.file))
    write_json(graph_to_json(g), args.out)
    return 0


def cmd_stats(args) -> int:
    g = load_graph(args.graph)
    out = compute_stats(g).as_dict()
    if g.num_parts and g.part_sizes().min() > 0:
        out["lll_margin"] = lll_condition_check(g)
    _emit(out, args)
    return 0


def cmd_solve(args) -> int:
    g = load_graph(args.graph)
    if args.solver == "lll":
        rep = moser_tardos_it(g, args.seed, args.max_resamples)
        _emit(rep.to_json(), args)
        return 0 if rep.success else 1
    if args.solver == "nibble":
        sol = solve_it_detailed(
            g,
            args.epsilon,
            args.seed,
            retry_cap=args.retry_cap,
            early_exit=not args.no_early_exit,
            strict=args.strict,
        )
        out = {
            "success": True,
            "transversal": sol.transversal.to_json(),
            "finisher_resamples": sol.finisher_resamples,
            "trace": sol.trace,
        }
        _emit(out, args, rows=sol.trace, columns=TRACE_COLUMNS)
        return 0
    res = run_ksfree(g, args.s, args.epsilon, args.backend, args.seed)
    _emit({"success": True, **res.to_json()}, args)
    return 0


def cmd_reduce(args) -> int:
    g = load_graph(args.graph)
    res = reduce_local_degree_detailed(
        g, args.gamma, args.epsilon, args.seed, delta=args.delta, max_retries=args.max_retries
    )
    report = res.to_json()
    if args.out in (None, "-"):
        write_json({"graph": graph_to_json(res.graph), "report": report}, None)
    else:
        write_json(graph_to_json(res.graph), args.out)
        write_json(report, args.report)
    return 0


def cmd_oracle(args) -> int:
    g = load_graph(args.graph)
    res = brute_force_transversal(g, args.s, "count" if args.count else "decide", args.node_budget)
    _emit(
        {
            "exists": res.exists,
            "witness": res.witness.to_json() if res.witness else None,
            "count": res.count,
            "nodes": res.nodes_explored,
        },
        args,
    )
    return 0


def cmd_verify(args) -> int:
    g = load_graph(args.graph)
    t = load_transversal(args.transversal)
    ok = is_independent_transversal(g, t) if args.s == 2 else is_ks_free_transversal(g, t, args.s)
    _emit({"valid": ok, "s": args.s}, args)
    return 0 if ok else 1


def cmd_experiment(args) -> int:
    spec = ExperimentSpec.from_json(_read(args.spec))
    if args.seed_given:
        spec.master_seed = args.seed
    rows = run_experiment(spec, timing=args.timing, workers=args.workers)
    if args.format == "csv":
        text = rows_to_csv(rows)
        if args.out in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(args.out, "w") as fh:
                fh.write(text)
    else:
        write_json(rows, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="indtrans", description=__doc__.splitlines()[0], parents=[common])
    ap.set_defaults(seed=0, out=None, format="json")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance")
    gsub = gen.add_subparsers(dest="kind", required=True)
    p = gsub.add_parser("disjoint-cliques", parents=[common])
    p.add_argument("--delta", type=int, required=True)
    p = gsub.add_parser("clique-grid", parents=[common])
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p = gsub.add_parser("random", parents=[common])
    p.add_argument("--r", type=int, required=True, help="number of parts")
    p.add_argument("--n", type=int, required=True, help="part size")
    p.add_argument("--delta", type=int, required=True, help="degree cap")
    p.add_argument("--local", type=int, required=True, help="per-part degree cap")
    p = gsub.add_parser("list-coloring", parents=[common], help="random list-coloring instance")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--list-size", type=int, required=True)
    p.add_argument("--palette", type=int, required=True)
    p = gsub.add_parser("reduce-listcoloring", parents=[common])
    p.add_argument("file")
    p = gsub.add_parser("reduce-family", parents=[common])
    p.add_argument("file")
    gen.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", parents=[common], help="max degree, local degree, part sizes")
    p.add_argument("graph")
    p.set_defaults(func=cmd_stats)

    solve = sub.add_parser("solve", help="find an independent or K_s-free transversal")
    ssub = solve.add_subparsers(dest="solver", required=True)
    p = ssub.add_parser("lll", parents=[common])
    p.add_argument("graph")
    p.add_argument("--max-resamples", type=int, default=DEFAULT_MAX_RESAMPLES)
    p = ssub.add_parser("nibble", parents=[common])
    p.add_argument("graph")
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--retry-cap", type=int, default=DEFAULT_RETRY_CAP)
    p.add_argument("--no-early-exit", action="store_true")
    p.add_argument("--strict", action="store_true", help="fail when no draw meets the round schedule")
    p = ssub.add_parser("ksfree", parents=[common])
    p.add_argument("graph")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--backend", choices=BACKENDS, default="lll")
    p.add_argument("--epsilon", type=float, default=0.5)
    solve.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", parents=[common], help="reduce local degree below 10")
    p.add_argument("graph")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=int, default=None, help="declared degree bound (default: observed)")
    p.add_argument("--max-retries", type=int, default=DEFAULT_MAX_RETRIES)
    p.add_argument("--report", default=None, help="schedule report file when --out is a file (default stdout)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("oracle", parents=[common], help="exact search")
    p.add_argument("graph")
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--count", action="store_true")
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", parents=[common], help="check a transversal")
    p.add_argument("graph")
    p.add_argument("--transversal", required=True)
    p.add_argument("--s", type=int, default=2)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", parents=[common], help="run a seeded sweep from a JSON spec")
    p.add_argument("spec")
    p.add_argument("--timing", action="store_true", help="fill the wall_time column")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.seed_given = any(a == "--seed" or a.startswith("--seed=") for a in argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except TransversalError as exc:
        detail = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, SolverFailure):
            detail.update(stage=exc.stage, stats=exc.stats)
        sys.stderr.write(json.dumps(detail, default=str) + "\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
