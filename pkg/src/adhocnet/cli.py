"""Command-line front end: batch verification runs with JSON reports.

Commands: check, clique-graph, compile-minsky, enumerate, simulate.
Exit codes: 0 = yes, 1 = no / no-within-bounds, 2 = usage or parse error,
3 = budget or enumeration cap exhausted.  The only environment variable
honored is ADHOCNET_OUT (default output directory); everything else is
flag-driven so runs are reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .backward import BudgetExhausted, backward_cover
from .cliquegraphs import build_clique_graph, is_bpc
from .forward import (
    CoverQuery,
    EnumerationCapError,
    bounded_diameter_degree_cover,
    cover_from,
    format_trace,
    forward_cover,
)
from .graphs import GraphError, format_graph, graph_to_dot, parse_graph
from .minsky import MachineError, compile_butterfly, compile_list, parse_machine
from .parsing import ParseError
from .protocol import ProtocolError, format_protocol, parse_action, apply_action, parse_protocol
from .topology import TopologyClass, enumerate_connected_graphs

SCHEMA = 1

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

_USAGE_ERRORS = (ParseError, GraphError, ProtocolError, MachineError,
                 ValueError, OSError)
_BUDGET_ERRORS = (BudgetExhausted, EnumerationCapError)


def _read(path):
    return Path(path).read_text(encoding="utf-8")


def _write_out(out_dir, name, content):
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")
    return str(path)


def _answer_exit(answer):
    return EXIT_YES if answer == "yes" else EXIT_NO


def _echo_args(args, keys):
    return {k: getattr(args, k) for k in keys if getattr(args, k) is not None}


# -- check ----------------------------------------------------------------


def cmd_check(args):
    process = parse_protocol(_read(args.protocol))
    if args.target not in process.states:
        raise ProtocolError(f"target {args.target!r} is not a declared state")
    cls = TopologyClass.parse(args.topology) if args.topology else None

    report = {
        "schema": SCHEMA,
        "command": "check",
        "args": _echo_args(args, ["protocol", "target", "method", "topology",
                                  "max_nodes", "diameter", "degree", "budget",
                                  "step_budget", "initial"]),
    }

    if args.method == "forward":
        if args.initial:
            start = parse_graph(_read(args.initial))
            if not set(start.labels_map().values()) <= process.init:
                raise ProtocolError("initial configuration uses non-initial states")
            if cls is not None and not cls.contains(start):
                raise ProtocolError(f"initial configuration is outside class {cls}")
            result = cover_from(process, start, args.target, args.step_budget)
        else:
            query = CoverQuery(process, args.target,
                               cls or TopologyClass.unrestricted(),
                               args.max_nodes, args.step_budget)
            result = forward_cover(query)
        report["stats"] = {"topologies_explored": result.topologies_explored,
                           "states_visited": result.states_visited}
    elif args.method == "exact-diam-deg":
        if args.diameter is None or args.degree is None:
            raise ValueError("exact-diam-deg needs --diameter and --degree")
        result = bounded_diameter_degree_cover(process, args.target,
                                               args.diameter, args.degree,
                                               node_cap=args.node_cap)
        report["stats"] = {"topologies_explored": result.topologies_explored,
                           "states_visited": result.states_visited}
    elif args.method == "backward":
        if cls is None:
            raise ValueError("backward needs --class (bounded-path:K or bpc:N)")
        if cls.kind not in ("bounded-path", "bpc") and args.budget is None:
            raise ValueError(f"class {cls} needs --budget for backward search")
        back = backward_cover(process, args.target, cls, args.budget)
        report["answer"] = back.answer
        report["stats"] = {
            "iterations": back.iterations,
            "final_basis_size": len(back.basis.elements),
            "basis_size_history": list(back.basis_size_history),
        }
        if back.certificate is not None:
            report["certificate"] = format_graph(back.certificate)
            if args.out:
                report["files"] = {
                    "certificate": _write_out(args.out, "certificate.graph",
                                              format_graph(back.certificate))}
        if args.out:
            basis_files = {}
            for i, element in enumerate(back.basis.elements):
                basis_files[f"element_{i}"] = _write_out(
                    args.out, f"basis_{i:03d}.graph", format_graph(element))
            report.setdefault("files", {}).update(basis_files)
        return report, _answer_exit(back.answer)
    else:
        raise ValueError(f"unknown method {args.method!r}")

    report["answer"] = result.answer
    if result.witness is not None:
        witness = result.witness
        report["witness"] = {
            "initial": format_graph(witness.initial),
            "trace": [a.render() for a in witness.trace],
            "final_labels": witness.final.labels_map(),
        }
        if args.out:
            report["files"] = {
                "initial": _write_out(args.out, "witness_initial.graph",
                                      format_graph(witness.initial)),
                "trace": _write_out(args.out, "witness_trace.txt",
                                    format_trace(witness)),
            }
    return report, _answer_exit(result.answer)


# -- clique-graph -----------------------------------------------------------


def cmd_clique_graph(args):
    graph = parse_graph(_read(args.graph))
    kg = build_clique_graph(graph)
    rendering = kg.to_dot() if args.format == "dot" else format_graph(kg.as_graph())
    report = {
        "schema": SCHEMA,
        "command": "clique-graph",
        "args": _echo_args(args, ["graph", "format", "bpc"]),
        "clique_count": len(kg.cliques),
        "output": rendering,
        "answer": "yes",
    }
    if args.bpc is not None:
        verdict = is_bpc(graph, args.bpc)
        report["bpc_verdict"] = verdict
        report["answer"] = "yes" if verdict else "no"
    if args.out:
        ext = "dot" if args.format == "dot" else "graph"
        report["files"] = {
            "clique_graph": _write_out(args.out, f"clique_graph.{ext}", rendering)}
    return report, _answer_exit(report["answer"])


# -- compile-minsky -----------------------------------------------------------


def cmd_compile_minsky(args):
    machine = parse_machine(_read(args.machine))
    compiled = (compile_list if args.variant == "list" else compile_butterfly)(machine)
    try:
        n1, n2 = (int(part) for part in args.lengths.split(","))
    except ValueError:
        raise ValueError(f"--lengths wants N1,N2 with integers, got {args.lengths!r}") from None
    topo = compiled.topology(n1, n2)
    out = args.out or "."
    report = {
        "schema": SCHEMA,
        "command": "compile-minsky",
        "args": _echo_args(args, ["machine", "variant", "lengths"]),
        "halt_state": compiled.halt_state,
        "entry_state": compiled.entry_state,
        "states": len(compiled.protocol.states),
        "rules": len(compiled.protocol.rules),
        "answer": "yes",
        "files": {
            "protocol": _write_out(out, "compiled.ahn",
                                   format_protocol(compiled.protocol, "compiled")),
            "topology": _write_out(out, "topology.graph", format_graph(topo)),
        },
    }
    return report, EXIT_YES


# -- enumerate -----------------------------------------------------------------


def cmd_enumerate(args):
    if args.diameter is not None or args.degree is not None:
        if args.diameter is None or args.degree is None:
            raise ValueError("enumerating a diameter/degree class needs both bounds")
        from .topology import ball_size_bound
        limit = ball_size_bound(args.diameter, args.degree)
        cls = TopologyClass.intersection(
            TopologyClass.bounded_diameter(args.diameter),
            TopologyClass.bounded_degree(args.degree))
    elif args.max_nodes is not None:
        limit = args.max_nodes
        cls = TopologyClass.parse(args.topology) if args.topology else None
    else:
        raise ValueError("need --max-nodes or --diameter/--degree")
    if limit < 1:
        raise ValueError("vertex limit must be >= 1")
    if limit > args.node_cap:
        raise EnumerationCapError(f"enumeration up to {limit} vertices exceeds cap {args.node_cap}")
    labels = [part for part in args.labels.split(",") if part]
    if not labels:
        raise ValueError("--labels needs at least one label")

    graphs = list(enumerate_connected_graphs(limit, labels, cls))
    report = {
        "schema": SCHEMA,
        "command": "enumerate",
        "args": _echo_args(args, ["max_nodes", "diameter", "degree", "labels",
                                  "topology"]),
        "count": len(graphs),
        "answer": "yes",
    }
    if not args.count:
        if args.out:
            files = {}
            for i, g in enumerate(graphs):
                files[f"graph_{i}"] = _write_out(args.out, f"enum_{i:04d}.graph",
                                                 format_graph(g))
            report["files"] = files
        else:
            report["graphs"] = [format_graph(g) for g in graphs]
    return report, EXIT_YES


# -- simulate --------------------------------------------------------------------


def cmd_simulate(args):
    process = parse_protocol(_read(args.protocol))
    config = parse_graph(_read(args.graph))
    steps = []
    for line in _read(args.trace).splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            steps.append(parse_action(line))
    states = [config.labels_map()]
    for action in steps:
        config = apply_action(process, config, action)
        states.append(config.labels_map())
    report = {
        "schema": SCHEMA,
        "command": "simulate",
        "args": _echo_args(args, ["protocol", "graph", "trace"]),
        "steps": len(steps),
        "final_labels": config.labels_map(),
        "answer": "yes",
    }
    if args.show_intermediate:
        report["intermediate_labels"] = states
    return report, EXIT_YES


# -- driver ------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="adhocnet",
        description="Coverability analysis for selective-broadcast protocols")
    sub = parser.add_subparsers(dest="cmd", required=True)

    default_out = os.environ.get("ADHOCNET_OUT")

    check = sub.add_parser("check", help="decide whether a state is coverable")
    check.add_argument("--protocol", required=True)
    check.add_argument("--target", required=True)
    check.add_argument("--method", required=True,
                       choices=["forward", "backward", "exact-diam-deg"])
    check.add_argument("--class", dest="topology", default=None,
                       help="topology class spec, e.g. bounded-path:2 or bpc:2")
    check.add_argument("--max-nodes", dest="max_nodes", type=int, default=3)
    check.add_argument("--diameter", type=int, default=None)
    check.add_argument("--degree", type=int, default=None)
    check.add_argument("--budget", type=int, default=None,
                       help="backward iteration budget (required off the wqo classes)")
    check.add_argument("--step-budget", dest="step_budget", type=int, default=None)
    check.add_argument("--initial", default=None,
                       help="fixed initial configuration file (forward only)")
    check.add_argument("--node-cap", dest="node_cap", type=int, default=6)
    check.add_argument("--out", default=default_out)
    check.set_defaults(run=cmd_check)

    kg = sub.add_parser("clique-graph", help="build the maximal clique graph")
    kg.add_argument("--graph", required=True)
    kg.add_argument("--format", choices=["text", "dot"], default="text")
    kg.add_argument("--bpc", type=int, default=None,
                    help="also report whether the graph is in the bpc class")
    kg.add_argument("--out", default=default_out)
    kg.set_defaults(run=cmd_clique_graph)

    cm = sub.add_parser("compile-minsky", help="compile a counter machine")
    cm.add_argument("--machine", required=True)
    cm.add_argument("--variant", choices=["list", "butterfly"], default="list")
    cm.add_argument("--lengths", default="1,1", help="chain lengths N1,N2")
    cm.add_argument("--out", default=default_out)
    cm.set_defaults(run=cmd_compile_minsky)

    en = sub.add_parser("enumerate", help="enumerate connected graphs up to isomorphism")
    en.add_argument("--max-nodes", dest="max_nodes", type=int, default=None)
    en.add_argument("--diameter", type=int, default=None)
    en.add_argument("--degree", type=int, default=None)
    en.add_argument("--labels", required=True, help="comma-separated label set")
    en.add_argument("--class", dest="topology", default=None)
    en.add_argument("--count", action="store_true", help="print only the count")
    en.add_argument("--node-cap", dest="node_cap", type=int, default=6)
    en.add_argument("--out", default=default_out)
    en.set_defaults(run=cmd_enumerate)

    sim = sub.add_parser("simulate", help="replay a recorded action trace")
    sim.add_argument("--protocol", required=True)
    sim.add_argument("--graph", required=True)
    sim.add_argument("--trace", required=True)
    sim.add_argument("--show-intermediate", action="store_true")
    sim.set_defaults(run=cmd_simulate)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        report, code = args.run(args)
    except _BUDGET_ERRORS as exc:
        report = {"schema": SCHEMA, "command": args.cmd,
                  "answer": "budget-exhausted", "error": str(exc)}
        code = EXIT_BUDGET
    except _USAGE_ERRORS as exc:
        report = {"schema": SCHEMA, "command": args.cmd,
                  "answer": None, "error": str(exc)}
        code = EXIT_USAGE
    report["duration_seconds"] = round(time.monotonic() - started, 6)
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
