"""Command-line front end.

Exit codes: 0 success, 1 malformed input or violated precondition,
2 internal invariant breach.  All commands are deterministic given the
same inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, automaton, expr, regtree

_UNFOLD_INDENT = "  "


class _CliError(Exception):
    """User-facing input problem (maps to exit code 1)."""


def _parse_expression(text: str, require_closed: bool = False):
    try:
        return expr.parse(text, free=() if require_closed else None)
    except expr.ParseError as exc:
        raise _CliError(f"parse error: {exc}")
    except expr.UnboundVariableError as exc:
        raise _CliError(str(exc))


def cmd_parse(args) -> int:
    e = _parse_expression(args.expression)
    names = sorted(expr.free_vars(e))
    if args.format == "json":
        print(json.dumps({"expr": expr.unparse(e), "free": names}))
    else:
        print(expr.unparse(e))
        print("free: " + " ".join(names) if names else "free:")
    return 0


def cmd_compile(args) -> int:
    e = _parse_expression(args.expression)
    if args.base:
        e = expr.base(e)
    if args.dual:
        e = expr.dual(e)
    aut = automaton.compile_expr(e)
    payload = automaton.automaton_to_json(aut)
    if args.out:
        automaton.save_automaton(aut, args.out)
    else:
        print(json.dumps(payload, indent=1))
    if args.format == "json":
        print(json.dumps({"states": len(aut.states),
                          "rank": {"min": aut.rank[0], "max": aut.rank[1]}}))
    else:
        print(f"states: {len(aut.states)}")
        print(f"rank: {aut.rank[0]}..{aut.rank[1]}")
    return 0


def cmd_classify(args) -> int:
    e = _parse_expression(args.expression, require_closed=True)
    label = analysis.classify(e)
    if label.kind == "POINTED":
        rendered = f"POINTED({label.rank_bound[0]}..{label.rank_bound[1]})"
    else:
        rendered = label.kind
    if args.format == "json":
        print(json.dumps({"class": label.kind,
                          "rank": list(label.rank_bound) if label.rank_bound else None}))
    else:
        print(rendered)
    if args.witness_dir:
        outdir = Path(args.witness_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        if label.in_l is not None:
            regtree.save_tree(label.in_l, outdir / "witness_in_l.json")
        if label.in_l_minus_w is not None:
            regtree.save_tree(label.in_l_minus_w, outdir / "witness_in_l_minus_w.json")
    return 0


def _load_tree(path):
    try:
        return regtree.load_tree(path)
    except (OSError, json.JSONDecodeError, regtree.TreeError) as exc:
        raise _CliError(f"cannot load tree {path}: {exc}")


def _load_automaton(path):
    try:
        return automaton.load_automaton(path)
    except (OSError, json.JSONDecodeError, automaton.AutomatonError) as exc:
        raise _CliError(f"cannot load automaton {path}: {exc}")


def cmd_member(args) -> int:
    t = _load_tree(args.tree)
    a = _load_automaton(args.automaton)
    try:
        result = analysis.member(t, a)
    except regtree.TreeError as exc:
        raise _CliError(str(exc))
    print(json.dumps({"member": result}) if args.format == "json" else
          ("true" if result else "false"))
    return 0


def cmd_solve(args) -> int:
    t = _load_tree(args.tree)
    winner, strategy = regtree.solve_tree(t)
    name = "Even" if winner == "E" else "Odd"
    if args.format == "json":
        payload = {"winner": name}
        if strategy is not None:
            payload["strategy"] = {n: d for n, d in sorted(strategy.choice.items())}
        print(json.dumps(payload))
        return 0
    print(name)
    if strategy is not None:
        rendered = " ".join(f"{n}->{d}" for n, d in sorted(strategy.choice.items()))
        print(f"strategy: {rendered}" if rendered else "strategy:")
    return 0


def cmd_answerable(args) -> int:
    e = _parse_expression(args.expression, require_closed=True)
    aut = analysis.answerable_automaton(e)
    if args.out:
        automaton.save_automaton(aut, args.out)
    else:
        print(json.dumps(automaton.automaton_to_json(aut), indent=1))
    if args.format == "json":
        print(json.dumps({"states": len(aut.states), "empty": analysis.is_empty(aut)}))
    else:
        print(f"states: {len(aut.states)}")
    return 0


def cmd_witness(args) -> int:
    a = _load_automaton(args.automaton)
    if analysis.is_empty(a):
        raise _CliError("the language is empty, no witness exists")
    tree = analysis.witness(a)
    if args.out:
        regtree.save_tree(tree, args.out)
    else:
        print(json.dumps(regtree.tree_to_json(tree), indent=1))
    return 0


def cmd_unfold(args) -> int:
    t = _load_tree(args.tree)
    unfolded = regtree.unfold(t, args.depth)

    lines = []

    def render(node, indent):
        label, kids = node
        if isinstance(label, str):
            lines.append(f"{indent}exit {label}")
            return
        if label.is_bot():
            # bot subtrees are determined; keep the listing to the live part
            return
        lines.append(f"{indent}{label}")
        if kids is not None:
            for kid in kids:
                render(kid, indent + _UNFOLD_INDENT)

    label, _ = unfolded
    if isinstance(label, automaton.Letter) and label.is_bot():
        lines.append("bot")
    else:
        render(unfolded, "")
    print("\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zeta-arena",
        description="Compile fixpoint expressions to parity tree automata, "
                    "solve the induced games, and classify the languages.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="print the canonical form and free variables")
    p.add_argument("expression")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("compile", help="compile an expression to automaton JSON")
    p.add_argument("expression")
    p.add_argument("--out")
    p.add_argument("--base", action="store_true",
                   help="apply the base transform before compiling")
    p.add_argument("--dual", action="store_true",
                   help="apply the dual transform before compiling")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("classify", help="EMPTY | POINTED(rank) | TOP for a closed expression")
    p.add_argument("expression")
    p.add_argument("--witness-dir", help="directory to receive witness tree JSON files")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("member", help="is the tree accepted by the automaton?")
    p.add_argument("tree")
    p.add_argument("automaton")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("solve", help="winner of the game tree, and Even's strategy")
    p.add_argument("tree")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("answerable", help="write the automaton for the answerable part")
    p.add_argument("expression")
    p.add_argument("--out")
    p.set_defaults(func=cmd_answerable)

    p = sub.add_parser("witness", help="extract a member tree from an automaton")
    p.add_argument("automaton")
    p.add_argument("--out")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("unfold", help="print the live part of a depth-bounded unfolding")
    p.add_argument("tree")
    p.add_argument("--depth", type=int, default=2)
    p.set_defaults(func=cmd_unfold)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except _CliError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (expr.ParseError, expr.UnboundVariableError, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except Exception as exc:  # internal invariant breach
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
