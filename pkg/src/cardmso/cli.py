"""Command-line front end.

Exit codes: 0 property holds / optimum found, 1 property fails, 2 usage or
input error, 3 budget exceeded. The --json report is a single JSON document
with fixed field order (status, witness, alpha, stats, cut_value, parts);
human output is not a machine contract.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import ilp, oracle
from .balanced import cbalanced
from .errors import BudgetExceeded, CardMSOError, CoverBudgetExceeded
from .formula import Formula, parse_formula, substitute_params
from .graph import DEFAULT_K_MAX, Graph, parse_graph
from .partitioning import PartitionInstance, mso_partition
from .solver import SolveStats, Verdict, check

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class _Dumper:
    def __init__(self, path: str):
        self.path = Path(path)
        self.count = 0
        self.path.write_text("")

    def __call__(self, instance: ilp.ILPInstance) -> None:
        self.count += 1
        with self.path.open("a") as handle:
            handle.write(f"# instance {self.count}\n")
            handle.write(ilp.format_instance(instance))


def _add_common(p: argparse.ArgumentParser, formula: bool, params: bool) -> None:
    p.add_argument("--graph", required=True, metavar="PATH")
    if formula:
        p.add_argument("--formula", required=True, metavar="PATH")
    if params:
        p.add_argument(
            "--param", action="append", default=[], metavar="NAME=INT",
            help="bind an integer parameter (repeatable)",
        )
    p.add_argument("--mode", choices=["vc", "nd"], default="vc")
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    p.add_argument("--json", action="store_true")
    p.add_argument("--dump-ilp", metavar="PATH")
    p.add_argument("--no-empty-parts", action="store_true")
    p.add_argument("--no-dedup", action="store_true")
    p.add_argument("--threads", type=int, default=1, help="worker cap (engines are serial)")
    p.add_argument("--node-budget", type=int, default=ilp.DEFAULT_NODE_BUDGET)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cardmso",
        description="Cardinality-MSO model checking, MSO partitioning and "
        "c-balanced partitioning on graphs of small vertex cover.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide a cardinality-MSO sentence")
    _add_common(p, formula=True, params=True)

    p = sub.add_parser("partition", help="partition into r parts each modelling a sentence")
    _add_common(p, formula=True, params=False)
    p.add_argument("-r", type=int, required=True)

    p = sub.add_parser("cbalance", help="minimum cut over equitable c-partitions")
    _add_common(p, formula=False, params=False)
    p.add_argument("-c", type=int, required=True)

    p = sub.add_parser("oracle-check", help="brute-force reference for check")
    _add_common(p, formula=True, params=True)

    p = sub.add_parser("oracle-partition", help="brute-force reference for partition")
    _add_common(p, formula=True, params=False)
    p.add_argument("-r", type=int, required=True)

    p = sub.add_parser("oracle-cbalance", help="brute-force reference for cbalance")
    _add_common(p, formula=False, params=False)
    p.add_argument("-c", type=int, required=True)

    return parser


def _load_graph(path: str) -> Graph:
    return parse_graph(Path(path).read_text())


def _load_formula(path: str, params: list[str]) -> Formula:
    f = parse_formula(Path(path).read_text())
    bindings = {}
    for item in params:
        name, _, value = item.partition("=")
        if not name or not value:
            raise CardMSOError(f"--param needs NAME=INT, got {item!r}")
        try:
            bindings[name] = int(value)
        except ValueError:
            raise CardMSOError(f"--param value for {name!r} is not an integer")
    if bindings or f.free_params:
        f = substitute_params(f, bindings)
    return f


def _mode_name(flag: str) -> str:
    return "vertex-cover" if flag == "vc" else "neighborhood-diversity"


def _stats_doc(stats: SolveStats) -> dict:
    return {
        "pre_evaluations": stats.pre_evaluations,
        "prefix_assignments": stats.prefix_assignments,
        "ilp_solves": stats.ilp_solves,
        "elapsed_seconds": round(stats.elapsed, 6),
        "cover_size": stats.cover_size,
        "type_count": stats.type_count,
        "reduced_vertices": stats.reduced_vertices,
    }


def _names(g: Graph, vertices) -> list[str]:
    return [g.names[v] for v in sorted(vertices)]


def _report(doc: dict, human: str, as_json: bool) -> None:
    if as_json:
        print(json.dumps(doc, indent=2))
    else:
        print(human)


def _run_check(args) -> int:
    g = _load_graph(args.graph)
    f = _load_formula(args.formula, args.param)
    dump = _Dumper(args.dump_ilp) if args.dump_ilp else None
    verdict: Verdict = check(
        g, f, mode=_mode_name(args.mode), k_max=args.k_max,
        dedup=not args.no_dedup, node_budget=args.node_budget, dump=dump,
    )
    witness_doc = None
    human = "does not hold"
    if verdict.holds:
        witness_doc = [
            {"variable": name, "vertices": _names(g, s)}
            for name, s in zip(f.prefix, verdict.witness.sets)
        ]
        lines = [
            f"{name} = {{{', '.join(_names(g, s))}}}"
            for name, s in zip(f.prefix, verdict.witness.sets)
        ]
        human = "holds\n" + "\n".join(lines)
    doc = {
        "status": "holds" if verdict.holds else "fails",
        "witness": witness_doc,
        "alpha": list(verdict.alpha) if verdict.alpha is not None else None,
        "stats": _stats_doc(verdict.stats),
        "cut_value": None,
        "parts": None,
    }
    _report(doc, human, args.json)
    return EXIT_HOLDS if verdict.holds else EXIT_FAILS


def _run_partition(args) -> int:
    g = _load_graph(args.graph)
    f = _load_formula(args.formula, [])
    dump = _Dumper(args.dump_ilp) if args.dump_ilp else None
    verdict = mso_partition(
        g, PartitionInstance(f, args.r), mode=_mode_name(args.mode),
        k_max=args.k_max, allow_empty=not args.no_empty_parts,
        node_budget=args.node_budget, dump=dump,
    )
    parts_doc = None
    human = "does not hold"
    if verdict.holds:
        parts_doc = [_names(g, p) for p in verdict.parts]
        human = "holds\n" + "\n".join(" ".join(names) if names else "(empty)" for names in parts_doc)
    doc = {
        "status": "holds" if verdict.holds else "fails",
        "witness": None,
        "alpha": None,
        "stats": _stats_doc(verdict.stats),
        "cut_value": None,
        "parts": parts_doc,
    }
    _report(doc, human, args.json)
    return EXIT_HOLDS if verdict.holds else EXIT_FAILS


def _run_cbalance(args) -> int:
    if args.mode == "nd":
        raise CardMSOError(
            "cbalance needs a vertex cover (the cut decomposition assumes "
            "every edge has a cover endpoint); --mode nd is not supported"
        )
    g = _load_graph(args.graph)
    dump = _Dumper(args.dump_ilp) if args.dump_ilp else None
    result = cbalanced(
        g, args.c, k_max=args.k_max, allow_empty=not args.no_empty_parts,
        dedup=not args.no_dedup, node_budget=args.node_budget, dump=dump,
    )
    if result is None:
        doc = {
            "status": "infeasible", "witness": None, "alpha": None,
            "stats": None, "cut_value": None, "parts": None,
        }
        _report(doc, "infeasible (empty parts disallowed)", args.json)
        return EXIT_FAILS
    parts_doc = [_names(g, p) for p in result.parts]
    human = f"cut {result.cut_value}\n" + "\n".join(
        " ".join(names) if names else "(empty)" for names in parts_doc
    )
    doc = {
        "status": "optimal",
        "witness": None,
        "alpha": None,
        "stats": _stats_doc(result.stats),
        "cut_value": result.cut_value,
        "parts": parts_doc,
    }
    _report(doc, human, args.json)
    return EXIT_HOLDS


def _run_oracle_check(args) -> int:
    g = _load_graph(args.graph)
    f = _load_formula(args.formula, args.param)
    holds = oracle.brute_check(g, f)
    doc = {
        "status": "holds" if holds else "fails", "witness": None, "alpha": None,
        "stats": None, "cut_value": None, "parts": None,
    }
    _report(doc, "holds" if holds else "does not hold", args.json)
    return EXIT_HOLDS if holds else EXIT_FAILS


def _run_oracle_partition(args) -> int:
    g = _load_graph(args.graph)
    f = _load_formula(args.formula, [])
    holds = oracle.brute_partition(g, f, args.r, allow_empty=not args.no_empty_parts)
    doc = {
        "status": "holds" if holds else "fails", "witness": None, "alpha": None,
        "stats": None, "cut_value": None, "parts": None,
    }
    _report(doc, "holds" if holds else "does not hold", args.json)
    return EXIT_HOLDS if holds else EXIT_FAILS


def _run_oracle_cbalance(args) -> int:
    g = _load_graph(args.graph)
    cut = oracle.brute_cbalanced(g, args.c, allow_empty=not args.no_empty_parts)
    if cut is None:
        _report(
            {"status": "infeasible", "witness": None, "alpha": None,
             "stats": None, "cut_value": None, "parts": None},
            "infeasible (empty parts disallowed)", args.json,
        )
        return EXIT_FAILS
    doc = {
        "status": "optimal", "witness": None, "alpha": None,
        "stats": None, "cut_value": cut, "parts": None,
    }
    _report(doc, f"cut {cut}", args.json)
    return EXIT_HOLDS


_HANDLERS = {
    "check": _run_check,
    "partition": _run_partition,
    "cbalance": _run_cbalance,
    "oracle-check": _run_oracle_check,
    "oracle-partition": _run_oracle_partition,
    "oracle-cbalance": _run_oracle_cbalance,
}


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        if getattr(args, "threads", 1) < 1:
            raise CardMSOError("--threads must be >= 1")
        if getattr(args, "node_budget", 1) < 1:
            raise CardMSOError("--node-budget must be >= 1")
        if getattr(args, "k_max", 0) < 0:
            raise CardMSOError("--k-max must be >= 0")
        return _HANDLERS[args.command](args)
    except (CoverBudgetExceeded, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CardMSOError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
