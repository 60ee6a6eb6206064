"""Command-line front end: construction, inspection, verification, export.

Exit codes: 0 success, 1 verification failure, 2 usage or capacity error.
All output is deterministic for fixed flags (randomized suites take an
explicit --seed), so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys

from .base import CapacityError, HorizonError, Tri
from . import alphabet as alph
from . import departure as dep
from . import good_sequence as good
from . import relations as rel
from . import verifier
from .prime_coding import decode, factored_str, render_value


def _parse_node(text: str) -> tuple:
    if text in ("", "-", "()"):
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise ValueError(f"node syntax is comma-separated decimal entries: {text!r}") from exc


def _parse_point(text: str, tail: bool) -> alph.PointPrefix:
    return alph.PointPrefix.from_entries(_parse_node(text), tail_ones=tail)


def _entry_json(v):
    return v if isinstance(v, int) else factored_str(v)


def _node_label(node: tuple) -> str:
    return "(" + ",".join(str(_entry_json(v)) for v in node) + ")"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


# --- commands ----------------------------------------------------------------


def cmd_alphabets(args) -> int:
    levels = alph.alphabets(args.depth)
    if args.format == "json":
        doc = {
            "schema": "hurewicz-kit/1",
            "kind": "alphabets",
            "depth": args.depth,
            "levels": [
                {
                    "level": i,
                    "size": len(a),
                    "members": [
                        {
                            "value": _entry_json(m),
                            "source": None if m == 1 else _node_label(decode(m)[:-1]),
                        }
                        for m in a
                    ],
                }
                for i, a in enumerate(levels)
            ],
        }
        _emit(_dump_json(doc), args.out)
        return 0
    lines = []
    for i, a in enumerate(levels):
        lines.append(f"A_{i}  ({len(a)} members)")
        for m in a:
            if m == 1:
                lines.append("  1")
            else:
                lines.append(f"  {render_value(m)}  from node {_node_label(decode(m)[:-1])}")
    _emit("\n".join(lines) + ("\n" if lines else ""), args.out)
    return 0


def cmd_nodes(args) -> int:
    nodes = alph.enumerate_nodes(args.length)
    if args.format == "json":
        doc = {
            "schema": "hurewicz-kit/1",
            "kind": "nodes",
            "length": args.length,
            "count": len(nodes),
            "nodes": [[_entry_json(v) for v in nd] for nd in nodes],
        }
        _emit(_dump_json(doc), args.out)
        return 0
    lines = [f"{len(nodes)} nodes of depth {args.length}"]
    lines.extend(_node_label(nd) for nd in nodes)
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_branch(args) -> int:
    b = dep.BranchIndex(_parse_node(args.s), _parse_node(args.t)) if args.action != "find" else None
    lines = []
    if args.action == "constraints":
        cons = dep.constraints(b)
        lines.append(f"branch {b}")
        lines.append(f"must be 1 at: {list(cons.ones)}")
        lines.append(f"must not be 1 at: {list(cons.non_ones)}")
        lines.append(f"top rewritten index: {b.top_index()}")
    elif args.action == "apply":
        x = _parse_point(args.point, args.tail)
        state = dep.in_domain(x, b)
        if state is not Tri.YES:
            lines.append(f"point is {state.value} for the domain of {b}")
            _emit("\n".join(lines) + "\n", args.out)
            return 0 if state is Tri.UNKNOWN else 1
        y = dep.apply(b, x)
        lines.append(f"image: {y!r}")
        for q in dep.constraints(b).ones:
            lines.append(f"  rewritten coordinate {q}: {render_value(y.coord(q))}")
    else:  # find
        x = _parse_point(args.point, args.tail)
        outcome, t = dep.find_branch(_parse_node(args.s), x)
        if outcome is Tri.YES:
            lines.append(f"branch: {dep.BranchIndex(_parse_node(args.s), t)}")
        else:
            lines.append(f"outcome: {outcome.value}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _graph_doc(g: rel.RelationGraph) -> dict:
    return {
        "schema": "hurewicz-kit/1",
        "kind": "relation-graph",
        "length": g.length,
        "node_count": len(g.nodes),
        "nodes": [[_entry_json(v) for v in nd] for nd in g.nodes],
        "edges": [
            {"s": _node_label(g.nodes[i]), "t": _node_label(g.nodes[j]), "psi": r}
            for i, j, r in g.edges
        ],
        "loops": [_node_label(g.nodes[i]) for i in g.loops],
    }


def _graph_dot(g: rel.RelationGraph) -> str:
    lines = [f"graph relation_depth_{g.length} {{"]
    loopset = set(g.loops)
    for i, nd in enumerate(g.nodes):
        attrs = f'label="{_node_label(nd)}"'
        if i in loopset:
            attrs += ", peripheries=2"  # self-related node
        lines.append(f"  n{i} [{attrs}];")
    for i, j, r in g.edges:
        lines.append(f'  n{i} -- n{j} [label="psi={r}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_relations(args) -> int:
    g = rel.t_graph(args.length)
    if args.format == "dot":
        _emit(_graph_dot(g), args.out)
    elif args.format == "json":
        _emit(_dump_json(_graph_doc(g)), args.out)
    else:
        lines = [
            f"depth {g.length}: {len(g.nodes)} nodes, "
            f"{len(g.edges)} edges, {len(g.loops)} self-related"
        ]
        for i, j, r in g.edges:
            lines.append(f"{_node_label(g.nodes[i])} -- {_node_label(g.nodes[j])}  psi={r}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_psi(args) -> int:
    s, t = _parse_node(args.s), _parse_node(args.t)
    result = rel.psi(s, t)
    if result.rank is None:
        _emit("none\n", args.out)
    else:
        w = result.witness
        _emit(
            f"psi = {result.rank}  witness branch {w.branch} (cut level {w.cut})\n",
            args.out,
        )
    return 0


def cmd_chain(args) -> int:
    s, t = _parse_node(args.s), _parse_node(args.t)
    g = rel.t_graph(args.length)
    chain = rel.t_chain(s, t, g)
    if chain is None:
        _emit("none (different equivalence classes)\n", args.out)
    else:
        _emit(" -- ".join(_node_label(nd) for nd in chain) + "\n", args.out)
    return 0


def cmd_sigma(args) -> int:
    s = _parse_node(args.s)
    sig = good.IndexMap(s)
    upto = args.upto if args.upto is not None else args.k + 1
    lines = [f"sigma_{list(s)}({k}) = {sig(k)}" for k in range(args.k, upto)]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_witness(args) -> int:
    s, t = _parse_node(args.s), _parse_node(args.t)
    u = bytes(int(ch) for ch in args.u) if args.u else b""
    x, k = good.disagreement_witness(s, t, u)
    a = good.sigma(s, k)
    b = good.sigma(t, k)
    lines = [
        f"disagreement at output index {k}",
        f"source index under {list(s)}: {a} (bit {x.bit(a)})",
        f"source index under {list(t)}: {b} (bit {x.bit(b)})",
        f"witness prefix length {len(x)} extending u of length {len(u)}",
    ]
    if len(x) <= 256:
        lines.append("bits: " + "".join(str(bit) for bit in x.bits))
    else:
        ones = [i for i, bit in enumerate(x.bits) if bit]
        lines.append(f"bits: all 0 except positions {ones}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    kwargs = {}
    if args.suite in ("departure", "no-isolated"):
        kwargs.update(depth=args.depth, horizon=args.horizon, seed=args.seed,
                      samples=args.samples)
        if args.inject_fault and args.suite == "departure":
            kwargs["fault"] = args.inject_fault
        if args.suite == "no-isolated" and args.inject_fault:
            kwargs["fault"] = args.inject_fault
    elif args.suite == "arrival-scan":
        kwargs.update(depth=args.depth, horizon=args.horizon, seed=args.seed,
                      max_chain=args.max_chain)
    elif args.suite == "good-suite":
        kwargs.update(max_s_len=args.max_s_len, max_entry=args.max_entry,
                      horizon=args.horizon, max_u_len=args.max_u_len)
    elif args.suite == "cascade":
        kwargs.update(trials=args.trials, seed=args.seed)
        if args.inject_fault:
            kwargs["fault"] = args.inject_fault
    elif args.suite == "mutation":
        kwargs.update(seed=args.seed)
    report = verifier.SUITES[args.suite](**kwargs)
    _emit(report.to_json_bytes().decode(), args.out)
    summary = (
        f"suite {args.suite}: failed={report.failed} "
        f"inconclusive={report.inconclusive}\n"
    )
    if args.out:
        sys.stdout.write(summary)
    return 1 if report.failed else 0


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hurewicz-kit",
        description="Finite-depth combinatorics of the prime-power coded "
        "product space: alphabets, branch maps, relation forests, "
        "index-substitution maps, cascade checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alphabets", help="print the level alphabets")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_alphabets)

    p = sub.add_parser("nodes", help="enumerate depth-p nodes in order")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_nodes)

    p = sub.add_parser("branch", help="inspect one branch map")
    p.add_argument("action", choices=("constraints", "apply", "find"))
    p.add_argument("--s", required=True, help="stem, comma-separated (empty for ())")
    p.add_argument("--t", default="", help="branch tuple, |t| = |s|+1")
    p.add_argument("--point", default="", help="explicit point prefix entries")
    p.add_argument("--tail", action="store_true", help="extend the point by 1s")
    p.add_argument("--out")
    p.set_defaults(func=cmd_branch)

    p = sub.add_parser("relations", help="relation graph over depth-p nodes")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("psi", help="least relating slot of two nodes")
    p.add_argument("s")
    p.add_argument("t")
    p.add_argument("--out")
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("chain", help="unique repetition-free chain between nodes")
    p.add_argument("s")
    p.add_argument("t")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("sigma", help="evaluate an index-substitution map")
    p.add_argument("--s", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--upto", type=int, default=None, help="end of an index range")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("witness", help="dense-disagreement witness for two maps")
    p.add_argument("--s", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--u", default="", help="binary word to extend, e.g. 0101")
    p.add_argument("--out")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="run a verification suite (JSON report)")
    p.add_argument("suite", choices=sorted(verifier.SUITES))
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--horizon", type=int, default=10_000)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--max-chain", type=int, default=1)
    p.add_argument("--max-s-len", type=int, default=3)
    p.add_argument("--max-entry", type=int, default=4)
    p.add_argument("--max-u-len", type=int, default=12)
    p.add_argument("--inject-fault", choices=verifier.ALL_FAULTS, default=None,
                   help="deliberately corrupt one rule to demonstrate detection")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 2
    except HorizonError as exc:
        print(f"horizon error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
