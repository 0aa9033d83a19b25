"""Command-line entry point.

Exit codes: 0 success (or true for boolean verbs), 1 false, 2 usage
error, 3 computation error.  ``--json`` switches output to a
machine-readable form.  All verbs are side-effect free except for
explicit ``-o`` outputs.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fitting, independence, oracle, report, textio, transform
from .graph import connected_components_undirected, enumerate_vs


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_graph(g, out: str | None, fmt: str) -> None:
    if fmt == "json":
        _write_or_print(textio.emit_graph_json(g), out)
    elif fmt == "dot":
        _write_or_print(textio.to_dot(g), out)
    else:
        _write_or_print(textio.emit_graph_text(g), out)


def cmd_validate(args) -> int:
    g = textio.load_graph(args.graph)
    vs = enumerate_vs(g)
    comps = connected_components_undirected(g)
    if args.json:
        print(
            json.dumps(
                {
                    "valid": True,
                    "nodes": list(g.nodes),
                    "blocks": [list(b) for b in g.blocks],
                    "edges": len(g.edges()),
                    "undirected_components": [sorted(c) for c in comps],
                    "v_configurations": len(vs),
                }
            )
        )
    else:
        print(f"valid regression graph: {len(g.nodes)} nodes, {len(g.edges())} edges")
        print(f"blocks: {' < '.join(','.join(b) for b in g.blocks)}")
        print(f"undirected components: {len(comps)}, V configurations: {len(vs)}")
    return 0


def cmd_implies(args) -> int:
    g = textio.load_graph(args.graph)
    stmt = independence.parse_statement(args.statement)
    verdict = independence.implies(g, stmt, method=args.method)
    if args.json:
        print(json.dumps({"statement": str(stmt), "implied": verdict}))
    else:
        print("true" if verdict else "false")
    return 0 if verdict else 1


def cmd_structure(args) -> int:
    g = textio.load_graph(args.graph)
    stmts = independence.implied_structure(g, max_nodes=args.max_nodes)
    if args.json:
        print(json.dumps([str(s) for s in stmts]))
    else:
        for s in stmts:
            print(str(s))
    return 0


def cmd_marginalize(args) -> int:
    g = textio.load_graph(args.graph)
    over = [n.strip() for n in args.over.split(",") if n.strip()]
    induced = transform.marginalize(g, over)
    if args.json:
        payload = {
            "is_regression_graph": induced.is_regression_graph,
            "nodes": list(induced.nodes),
            "response_blocks": [list(b) for b in induced.response_blocks],
            "context": list(induced.context),
            "edges": [[e.a, e.b, e.kind.value] for e in induced.edges],
        }
        _write_or_print(json.dumps(payload, indent=2) + "\n", args.out)
        return 0
    if not induced.is_regression_graph:
        raise transform.TransformError(
            "marginalization left the regression-graph class; rerun with --json for the summary-graph form"
        )
    _emit_graph(induced.graph(), args.out, args.format)
    return 0


def cmd_equiv(args) -> int:
    g1 = textio.load_graph(args.graph1)
    g2 = textio.load_graph(args.graph2)
    verdict = transform.markov_equivalent(g1, g2)
    if args.json:
        print(json.dumps({"markov_equivalent": verdict}))
    else:
        print("true" if verdict else "false")
    return 0 if verdict else 1


def cmd_expand(args) -> int:
    g = textio.load_graph(args.graph)
    if args.edges:
        pairs = [tuple(p.split("~")) for p in args.edges.split(",")]
        pairs = [(a.strip(), b.strip()) for a, b in pairs]
    else:
        from .graph import EdgeKind

        pairs = [(e.a, e.b) for e in g.edges() if e.kind is EdgeKind.DASHED]
    expanded = transform.expand_hidden(g, pairs, prefix=args.prefix)
    _emit_graph(expanded, args.out, args.format)
    return 0


def cmd_oracle(args) -> int:
    import itertools

    g = textio.load_graph(args.graph)
    tol = args.tol if args.tol is not None else 1e-10
    implied = independence.implied_structure(g, max_nodes=args.max_nodes)
    implied_keys = {(s.a | s.b, s.c) for s in implied}
    covs = [
        oracle.implied_covariance(oracle.random_faithful_model(g, seed))
        for seed in range(args.seeds)
    ]
    violations = []
    nonzero_floor = 1e-6
    for i, k in itertools.combinations(g.nodes, 2):
        if g.adjacent(i, k):
            continue
        others = [n for n in g.nodes if n not in (i, k)]
        for r in range(len(others) + 1):
            for c in itertools.combinations(others, r):
                rhos = [oracle.partial_correlation_named(cov, g, i, k, c) for cov in covs]
                label = f"{i} _||_ {k} | {','.join(c)}"
                if (frozenset({i, k}), frozenset(c)) in implied_keys:
                    for seed, rho in enumerate(rhos):
                        if abs(rho) >= tol:
                            violations.append({"seed": seed, "statement": label, "rho": rho})
                elif max(abs(r_) for r_ in rhos) <= nonzero_floor:
                    violations.append(
                        {"seed": None, "statement": label + " (not implied)", "rho": max(rhos)}
                    )
    if args.json:
        print(json.dumps({"pass": not violations, "violations": violations}, indent=2))
    else:
        print(f"implied statements: {len(implied)}  seeds: {args.seeds}  tol: {tol:g}")
        if violations:
            for v in violations:
                print(f"FAIL seed={v['seed']} {v['statement']} rho={v['rho']:.3g}")
        else:
            print("PASS: all implied zeros hold and all non-implied statements separate")
    return 0 if not violations else 1


def cmd_simulate(args) -> int:
    seed = args.seed if args.seed is not None else 0
    ds = fitting.simulate_mannheim(seed, args.n)
    if args.out:
        ds.to_csv(args.out)
    else:
        ds.to_csv("/dev/stdout")
    return 0


def _config_from_args(args) -> fitting.FitConfig:
    if args.config:
        return fitting.load_config(args.config)
    return fitting.mannheim_config()


def cmd_fit(args) -> int:
    ds = fitting.Dataset.from_csv(args.data)
    cfg = _config_from_args(args)
    result = fitting.fit_sequence(ds, cfg)
    if args.out:
        report.write_report(result, args.out)
    if args.json:
        payload = {
            "graph": textio.to_json_dict(result.graph),
            "tables": {
                t.response: {
                    "selected": fitting.wilkinson(t),
                    "r2_full": t.r2_full,
                    "r2_sel": t.r2_sel,
                }
                for t in result.tables
            },
        }
        print(json.dumps(payload, indent=2))
    elif not args.out:
        print(report.render_summary(result))
    return 0


def cmd_report(args) -> int:
    ds = fitting.Dataset.from_csv(args.data)
    cfg = _config_from_args(args)
    result = fitting.fit_sequence(ds, cfg)
    print(report.render_report(result))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rg", description="regression graph toolkit")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--seed", type=int, default=None, help="random seed where applicable")
    p.add_argument("--tol", type=float, default=None, help="numeric tolerance where applicable")
    sub = p.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("validate", help="parse and validate a graph file")
    sp.add_argument("graph")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("implies", help='decide a statement like "1 _||_ 4 | 3"')
    sp.add_argument("graph")
    sp.add_argument("statement")
    sp.add_argument("--method", choices=("reach", "paths"), default="reach")
    sp.set_defaults(func=cmd_implies)

    sp = sub.add_parser("structure", help="list every implied pairwise statement")
    sp.add_argument("graph")
    sp.add_argument("--max-nodes", type=int, default=8)
    sp.set_defaults(func=cmd_structure)

    sp = sub.add_parser("marginalize", help="marginalize over a node set")
    sp.add_argument("graph")
    sp.add_argument("--over", required=True, help="comma-separated nodes")
    sp.add_argument("-o", "--out")
    sp.add_argument("--format", choices=("txt", "json", "dot"), default="txt")
    sp.set_defaults(func=cmd_marginalize)

    sp = sub.add_parser("equiv", help="decide Markov equivalence of two graphs")
    sp.add_argument("graph1")
    sp.add_argument("graph2")
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("expand", help="replace dashed edges by hidden common sources")
    sp.add_argument("graph")
    sp.add_argument("--edges", help='comma-separated pairs like "Y8~X8"; default all dashed')
    sp.add_argument("--prefix", default="L")
    sp.add_argument("-o", "--out")
    sp.add_argument("--format", choices=("txt", "json", "dot"), default="txt")
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("oracle", help="certify the graph against the Gaussian oracle")
    sp.add_argument("graph")
    sp.add_argument("--seeds", type=int, default=5)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--max-nodes", type=int, default=8)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("simulate", help="draw a synthetic child-study dataset")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--n", type=int, default=347)
    sp.add_argument("-o", "--out")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("fit", help="fit a sequence of regressions from csv data")
    sp.add_argument("data")
    sp.add_argument("--config", help="TOML config; defaults to the child-study layout")
    sp.add_argument("-o", "--out", help="report directory")
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("report", help="print the full markdown report")
    sp.add_argument("data")
    sp.add_argument("--config")
    sp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except Exception as exc:  # mapped per contract
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
