"""Decision procedures on tree automata: emptiness, witness extraction,
membership, the answerable-part automaton, and the three-way classifier.

Everything reduces to finite games.  In the emptiness game Eve builds a
tree and an accepting run at once: at a state she either stops at a legal
final configuration or picks a letter, Adam picks a direction, and Eve
picks the successor state.  In the membership game the tree is fixed:
Adam walks it, Eve supplies run states.  Colors come from the automaton's
acceptance list, so products with conjunction acceptance induce
multi-dimensional arenas handled by the conjunction solver.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automaton import (TreeAutomaton, AutomatonError, compile_expr,
                        compress_priorities, intersect, winner_automaton,
                        _state_key)
from .expr import Expr, free_vars
from .games import EVE, ADAM, GameArena, make_arena, solve_conjunction, solve_parity
from .regtree import RegularTree, TreeError, make_tree, minimize, tree_violations

__all__ = [
    "ClassLabel", "is_empty", "witness", "member",
    "answerable_automaton", "classify",
    "emptiness_arena", "membership_arena",
]


@dataclass(frozen=True)
class ClassLabel:
    """Outcome of the three-way classification.

    ``kind`` is EMPTY, POINTED or TOP.  POINTED carries the rank of the
    compiled automaton as its strength bound and a member tree; TOP also
    carries a member that the even player loses.
    """

    kind: str
    rank_bound: tuple | None = None
    in_l: RegularTree | None = None
    in_l_minus_w: RegularTree | None = None

    def __post_init__(self):
        if self.kind not in ("EMPTY", "POINTED", "TOP"):
            raise ValueError(f"bad class label {self.kind!r}")
        if self.kind == "EMPTY" and (self.in_l or self.in_l_minus_w):
            raise ValueError("EMPTY carries no witnesses")
        if self.kind == "POINTED" and (self.in_l is None or self.in_l_minus_w is not None):
            raise ValueError("POINTED carries exactly the member witness")
        if self.kind == "TOP" and (self.in_l is None or self.in_l_minus_w is None):
            raise ValueError("TOP carries both witnesses")


# ---------------------------------------------------------------------------
# emptiness


def emptiness_arena(a: TreeAutomaton) -> GameArena:
    """Nonemptiness game, restricted to positions reachable from the
    initial states.

    Positions: ``("st", q)`` (Eve: stop at a final or pick a letter),
    ``("dir", q, letter)`` (Adam picks a direction), ``("pick", q,
    letter, d)`` (Eve picks a successor), ``("fin", q, x)`` (terminal,
    Adam-owned dead end, hence an Eve win).  Letters with an empty
    successor set in either direction are never offered: picking one
    would hand Adam an immediate win.
    """
    finals_at = {}
    for (x, q) in a.finals:
        finals_at.setdefault(q, []).append(x)
    for q in finals_at:
        finals_at[q].sort()

    letters = a.letters()
    owners, colors, edges = {}, {}, {}
    queue = [("st", q) for q in sorted(a.initial, key=_state_key)]
    seen = set(queue)

    while queue:
        pos = queue.pop()
        kind = pos[0]
        out = []
        if kind == "st":
            _, q = pos
            owners[pos] = EVE
            for x in finals_at.get(q, ()):
                out.append(("fin", q, x))
            for letter in letters:
                if a.delta(letter, 0, q) and a.delta(letter, 1, q):
                    out.append(("dir", q, letter))
        elif kind == "dir":
            _, q, letter = pos
            owners[pos] = ADAM
            out = [("pick", q, letter, 0), ("pick", q, letter, 1)]
        elif kind == "pick":
            _, q, letter, d = pos
            owners[pos] = EVE
            out = [("st", r) for r in sorted(a.delta(letter, d, q), key=_state_key)]
        else:  # fin
            owners[pos] = ADAM
            out = []
        colors[pos] = a.colors(pos[1])
        edges[pos] = tuple(out)
        for nxt in out:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)

    starts = tuple(("st", q) for q in sorted(a.initial, key=_state_key))
    return make_arena(owners, colors, edges, starts=starts)


def _solve(arena: GameArena):
    if arena.dims == 1:
        return solve_parity(arena)
    return solve_conjunction(arena)


def is_empty(a: TreeAutomaton) -> bool:
    """Does the automaton accept no tree at all?"""
    arena = emptiness_arena(a)
    regions, _, _ = _solve(arena)
    return not any(pos in regions[EVE] for pos in arena.starts)


def witness(a: TreeAutomaton) -> RegularTree:
    """A regular member of the language: the reachable subgraph of Eve's
    winning strategy in the nonemptiness game, nodes being (state,
    strategy memory) pairs, then bisimulation-minimized."""
    arena = emptiness_arena(a)
    regions, eve, _ = _solve(arena)
    start = next((pos for pos in arena.starts if pos in regions[EVE]), None)
    if start is None:
        raise AutomatonError("witness of an empty language")

    labels, children = {}, {}
    root = (start, eve.init_memory)
    queue = [root]
    seen = {root}
    while queue:
        node = queue.pop()
        pos, mem = node
        move = eve.move(pos, mem)
        if move is None:
            raise AutomatonError(f"winning strategy undefined at {pos!r}")
        if move[0] == "fin":
            labels[node] = move[2]
            continue
        _, q, letter = move
        labels[node] = letter
        mem_dir = eve.advance(eve.advance(mem, pos), move)
        kids = []
        for d in (0, 1):
            pick = ("pick", q, letter, d)
            mem_pick = eve.advance(mem_dir, pick)
            target = eve.move(pick, mem_dir)
            if target is None:
                raise AutomatonError(f"winning strategy undefined at {pick!r}")
            kid = (target, mem_pick)
            kids.append(kid)
            if kid not in seen:
                seen.add(kid)
                queue.append(kid)
        children[node] = tuple(kids)

    naming = {}

    def name(node):
        if node not in naming:
            naming[node] = f"n{len(naming)}"
        return naming[node]

    order = [root]
    idx = 0
    ordered_seen = {root}
    while idx < len(order):
        node = order[idx]
        idx += 1
        for kid in children.get(node, ()):
            if kid not in ordered_seen:
                ordered_seen.add(kid)
                order.append(kid)
    for node in order:
        name(node)

    tree = make_tree(
        name(root),
        {name(n): labels[n] for n in order},
        {name(n): (name(c0), name(c1)) for n, (c0, c1) in children.items()},
        a.rank,
        exits=a.exits,
    )
    tree = minimize(tree)
    problems = tree_violations(tree)
    if problems:
        raise AutomatonError("witness is not a valid game tree: " + "; ".join(problems))
    return tree


# ---------------------------------------------------------------------------
# membership


def membership_arena(t: RegularTree, a: TreeAutomaton, initial_state: str) -> GameArena:
    """Membership game from (root, initial_state): Adam picks directions
    at letter nodes, Eve picks successor run states; exit nodes are
    terminal and won by Eve exactly at final configurations."""
    owners, colors, edges = {}, {}, {}
    start = ("n", t.root, initial_state)
    queue = [start]
    seen = {start}
    while queue:
        pos = queue.pop()
        if pos[0] == "n":
            _, node, q = pos
            label = t.labels[node]
            if isinstance(label, str):
                owners[pos] = ADAM if (label, q) in a.finals else EVE
                out = []
            else:
                owners[pos] = ADAM
                out = [("c", node, q, 0), ("c", node, q, 1)]
        else:
            _, node, q, d = pos
            owners[pos] = EVE
            label = t.labels[node]
            child = t.children[node][d]
            out = [("n", child, r) for r in sorted(a.delta(label, d, q), key=_state_key)]
        colors[pos] = a.colors(pos[2])
        edges[pos] = tuple(out)
        for nxt in out:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return make_arena(owners, colors, edges, starts=(start,))


def member(t: RegularTree, a: TreeAutomaton) -> bool:
    """Is the denoted tree in the language?  Requires a valid tree whose
    exits all belong to the automaton's exit alphabet."""
    problems = tree_violations(t)
    if problems:
        raise TreeError("; ".join(problems))
    tree_exits = {lab for lab in t.labels.values() if isinstance(lab, str)}
    if not tree_exits <= a.exits:
        raise TreeError(f"tree exits {sorted(tree_exits - a.exits)} unknown to the automaton")
    for q in sorted(a.initial, key=_state_key):
        arena = membership_arena(t, a, q)
        regions, _, _ = _solve(arena)
        if arena.starts[0] in regions[EVE]:
            return True
    return False


# ---------------------------------------------------------------------------
# answerable part and classification


def answerable_automaton(e: Expr) -> TreeAutomaton:
    """Automaton for the members of the compiled language that the even
    player wins: the language-level answerable part.  Conjunction
    acceptance of arity 2."""
    if free_vars(e):
        raise ValueError(f"expression must be closed, found free {sorted(free_vars(e))}")
    a = compile_expr(e)
    return intersect(a, winner_automaton("E", a.rank))


def classify(e: Expr) -> ClassLabel:
    """Effective trichotomy for a closed expression: EMPTY, POINTED (all
    members even-won, with a member witness and the compiled rank as
    bound), or TOP (some member is lost, with both witnesses)."""
    if free_vars(e):
        raise ValueError(f"expression must be closed, found free {sorted(free_vars(e))}")
    a = compile_expr(e)
    solving = compress_priorities(a)
    if is_empty(solving):
        return ClassLabel("EMPTY")
    in_l = witness(solving)
    odd_part = intersect(solving, winner_automaton("O", a.rank))
    if is_empty(odd_part):
        return ClassLabel("POINTED", rank_bound=a.rank, in_l=in_l)
    return ClassLabel("TOP", rank_bound=a.rank, in_l=in_l,
                      in_l_minus_w=witness(odd_part))
