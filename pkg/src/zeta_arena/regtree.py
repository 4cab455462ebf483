"""Regular infinite binary trees with exits, as finite rooted graphs.

A node is labelled either by a gaming-alphabet ``Letter`` (then it has
exactly two ordered children) or by an exit name (a plain string, then it
has none).  Bot labels propagate: both children of a bot node must again
be bot, so a single self-looping bot node canonically represents every
all-bot subtree.  The denoted infinite tree is the unfolding from the
root.

Game trees induce parity games: Even owns the (E, m) nodes, Odd the
(O, m) nodes, moves go to non-bot children only, and a node whose
children are all bot is a dead end lost by its owner.  Exit nodes are
terminal wins for Even (a finite maximal play awaiting an outer answer).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .automaton import BOT, Letter, game_letter
from .games import ADAM, EVE, GameArena, make_arena, solve_parity

__all__ = [
    "RegularTree", "TreeStrategy", "TreeError",
    "validate", "tree_violations", "unfold", "tree_to_arena",
    "solve_tree", "enumerate_strategies", "check_strategy",
    "relabel_shape", "random_regular_tree",
    "minimize", "isomorphic", "spine_tree",
    "tree_to_json", "tree_from_json", "load_tree", "save_tree",
]


class TreeError(ValueError):
    """Malformed regular tree or misused operation."""


@dataclass(frozen=True)
class RegularTree:
    root: str
    labels: dict   # node -> Letter | exit name (str)
    children: dict  # node -> (node, node), only for Letter-labelled nodes
    rank: tuple
    exits: frozenset

    def is_exit(self, node) -> bool:
        return isinstance(self.labels[node], str)

    def sorted_nodes(self):
        return sorted(self.labels, key=_node_key)


def _node_key(n: str):
    return (len(n), n)


def make_tree(root, labels, children, rank, exits=None) -> RegularTree:
    labels = dict(labels)
    children = {n: (c[0], c[1]) for n, c in children.items()}
    if exits is None:
        exits = {lab for lab in labels.values() if isinstance(lab, str)}
    return RegularTree(root, labels, children, (rank[0], rank[1]), frozenset(exits))


def tree_violations(t: RegularTree) -> list:
    """All invariant violations, as human-readable strings."""
    problems = []
    if t.root not in t.labels:
        return [f"root {t.root!r} is not a node"]
    i, k = t.rank
    for node in t.sorted_nodes():
        label = t.labels[node]
        if isinstance(label, str):
            if node in t.children:
                problems.append(f"exit node {node!r} has children")
            if label not in t.exits:
                problems.append(f"exit label {label!r} not in the declared exit set")
            continue
        if not isinstance(label, Letter):
            problems.append(f"node {node!r} has a bad label {label!r}")
            continue
        if node not in t.children:
            problems.append(f"letter node {node!r} lacks children")
            continue
        c0, c1 = t.children[node]
        for c in (c0, c1):
            if c not in t.labels:
                problems.append(f"child {c!r} of {node!r} is not a node")
        if label.is_bot():
            for c in (c0, c1):
                lab = t.labels.get(c)
                if not (isinstance(lab, Letter) and lab.is_bot()):
                    problems.append(f"bot node {node!r} has a non-bot child {c!r}")
        elif not (i <= label.prio <= k):
            problems.append(f"letter {label} at {node!r} outside rank {t.rank}")
    return problems


def validate(t: RegularTree) -> bool:
    return not tree_violations(t)


def unfold(t: RegularTree, depth: int):
    """Depth-bounded prefix of the denoted tree, as nested pairs
    ``(label, children)`` where ``children`` is ``None`` at exits and at
    the depth bound, else a pair of unfoldings."""

    def go(node, d):
        label = t.labels[node]
        if isinstance(label, str) or d == 0:
            return (label, None)
        c0, c1 = t.children[node]
        return (label, (go(c0, d - 1), go(c1, d - 1)))

    return go(t.root, depth)


def tree_to_arena(t: RegularTree) -> GameArena:
    """Parity game induced by a game tree: positions are the non-bot
    nodes, colors are the letter priorities, exit nodes become
    self-looping Eve wins with the least even color."""
    owners, colors, edges = {}, {}, {}
    for node in t.sorted_nodes():
        label = t.labels[node]
        if isinstance(label, str):
            owners[node] = EVE
            colors[node] = (0,)
            edges[node] = (node,)
            continue
        if label.is_bot():
            continue
        owners[node] = EVE if label.player == "E" else ADAM
        colors[node] = (label.prio,)
        edges[node] = tuple(c for c in t.children[node]
                            if not _is_bot_node(t, c))
    return make_arena(owners, colors, edges, starts=(t.root,) if t.root in owners else ())


def _is_bot_node(t: RegularTree, node) -> bool:
    label = t.labels[node]
    return isinstance(label, Letter) and label.is_bot()


@dataclass(frozen=True)
class TreeStrategy:
    """Positional strategy on the tree graph: a direction for each Even
    node reachable while following it."""

    choice: dict  # node -> 0 | 1


def solve_tree(t: RegularTree):
    """Winner of the induced parity game from the root, plus a positional
    winning strategy when Even wins."""
    if not validate(t):
        raise TreeError("; ".join(tree_violations(t)))
    if _is_bot_node(t, t.root):
        return ADAM, None
    arena = tree_to_arena(t)
    regions, eve, _ = solve_parity(arena)
    if t.root not in regions[EVE]:
        return ADAM, None
    choice = {}
    seen = {t.root}
    queue = [t.root]
    while queue:
        node = queue.pop()
        label = t.labels[node]
        if isinstance(label, str):
            continue
        if label.player == "E":
            target = eve.move(node, None)
            if target is None:
                continue
            c0, c1 = t.children[node]
            choice[node] = 0 if target == c0 else 1
            nexts = [target]
        else:
            nexts = [c for c in t.children[node] if not _is_bot_node(t, c)]
        for nxt in nexts:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return EVE, TreeStrategy(choice)


def check_strategy(t: RegularTree, s: TreeStrategy) -> bool:
    """Even-strategy conditions plus winning: the chosen subgraph avoids
    bot, picks exactly one child at Even nodes, keeps all live children at
    Odd nodes, and every cycle it reaches has even maximal priority."""
    if not validate(t):
        raise TreeError("; ".join(tree_violations(t)))
    if _is_bot_node(t, t.root):
        return False
    succ = {}
    seen = {t.root}
    queue = [t.root]
    while queue:
        node = queue.pop()
        label = t.labels[node]
        if isinstance(label, str):
            succ[node] = []
            continue
        if label.is_bot():
            return False
        if label.player == "E":
            d = s.choice.get(node)
            if d not in (0, 1):
                return False
            target = t.children[node][d]
            if _is_bot_node(t, target):
                return False
            outs = [target]
        else:
            outs = [c for c in t.children[node] if not _is_bot_node(t, c)]
        succ[node] = outs
        for nxt in outs:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return not _bad_cycle(seen, succ, t)


def _bad_cycle(nodes, succ, t: RegularTree) -> bool:
    colors = {}
    for node in nodes:
        label = t.labels[node]
        colors[node] = 0 if isinstance(label, str) else label.prio
    odd_values = sorted({c for c in colors.values() if c % 2 == 1})
    for c in odd_values:
        sub = {n for n in nodes if colors[n] <= c}
        # cycle through a c-colored node within the <=c subgraph
        for start in sorted(sub, key=_node_key):
            if colors[start] != c:
                continue
            frontier = [w for w in succ.get(start, ()) if w in sub]
            visited = set(frontier)
            while frontier:
                v = frontier.pop()
                if v == start:
                    return True
                for w in succ.get(v, ()):
                    if w in sub and w not in visited:
                        visited.add(w)
                        frontier.append(w)
    return False


def enumerate_strategies(t: RegularTree, limit: int) -> list:
    """All positional winning Even-strategies, restricted to the nodes
    they actually reach, in deterministic order, up to ``limit``.  Guards
    against trees with more than 16 Even nodes."""
    if not validate(t):
        raise TreeError("; ".join(tree_violations(t)))
    even_nodes = [n for n in t.sorted_nodes()
                  if isinstance(t.labels[n], Letter)
                  and not t.labels[n].is_bot() and t.labels[n].player == "E"]
    if len(even_nodes) > 16:
        raise TreeError(f"{len(even_nodes)} Even nodes exceed the enumeration guard of 16")

    # Nodes without a live child get no option: a candidate reaching one
    # fails check_strategy, candidates avoiding it are unaffected.
    options = []
    for n in even_nodes:
        dirs = [d for d in (0, 1) if not _is_bot_node(t, t.children[n][d])]
        options.append(dirs or [None])

    found = []
    seen_restrictions = set()

    def assignments(idx, current):
        if idx == len(even_nodes):
            yield dict(current)
            return
        for d in options[idx]:
            if d is not None:
                current[even_nodes[idx]] = d
            yield from assignments(idx + 1, current)
            current.pop(even_nodes[idx], None)

    for choice in assignments(0, {}):
        strat = TreeStrategy(choice)
        if not check_strategy(t, strat):
            continue
        restriction = tuple(sorted((n, choice[n]) for n in _reached_evens(t, choice)))
        if restriction in seen_restrictions:
            continue
        seen_restrictions.add(restriction)
        found.append(TreeStrategy(dict(restriction)))
        if len(found) >= limit:
            break
    return found


def _reached_evens(t: RegularTree, choice: dict):
    reached = []
    seen = {t.root}
    queue = [t.root]
    while queue:
        node = queue.pop()
        label = t.labels[node]
        if isinstance(label, str) or label.is_bot():
            continue
        if label.player == "E":
            if node not in choice:
                continue
            reached.append(node)
            outs = [t.children[node][choice[node]]]
        else:
            outs = [c for c in t.children[node] if not _is_bot_node(t, c)]
        for nxt in outs:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return reached


def relabel_shape(t: RegularTree) -> RegularTree:
    """Forget players and priorities: live letters become (E, 0), bot
    stays bot, exits are preserved.  The result lives at rank (0, 0)."""
    labels = {}
    for node, label in t.labels.items():
        if isinstance(label, str):
            labels[node] = label
        elif label.is_bot():
            labels[node] = BOT
        else:
            labels[node] = game_letter("E", 0)
    return RegularTree(t.root, labels, dict(t.children), (0, 0), t.exits)


def random_regular_tree(rank, size: int, exits=(), seed: int = 0) -> RegularTree:
    """Seed-deterministic random game tree with ``size`` candidate nodes
    (unreachable ones are dropped); always validates."""
    if size < 1:
        raise TreeError("size must be at least 1")
    rng = random.Random(seed)
    i, k = rank
    exits = tuple(exits)
    names = [f"n{j}" for j in range(size)]
    labels, children = {}, {}
    bot_node = "nb"
    for name in names:
        roll = rng.random()
        if roll < 0.15:
            labels[name] = BOT
            children[name] = (bot_node, bot_node)
        elif exits and roll < 0.3:
            labels[name] = rng.choice(exits)
        else:
            player = rng.choice(("E", "O"))
            prio = rng.randint(i, k)
            labels[name] = game_letter(player, prio)
            children[name] = (rng.choice(names + [bot_node]),
                              rng.choice(names + [bot_node]))
    labels[bot_node] = BOT
    children[bot_node] = (bot_node, bot_node)
    # bot children collapse onto the canonical bot node
    for name, (c0, c1) in list(children.items()):
        c0 = bot_node if isinstance(labels[c0], Letter) and labels[c0].is_bot() else c0
        c1 = bot_node if isinstance(labels[c1], Letter) and labels[c1].is_bot() else c1
        children[name] = (c0, c1)
    t = make_tree(names[0], labels, children, rank, exits or None)
    return _restrict_reachable(t)


def _restrict_reachable(t: RegularTree) -> RegularTree:
    seen = {t.root}
    queue = [t.root]
    while queue:
        node = queue.pop()
        if node in t.children:
            for c in t.children[node]:
                if c not in seen:
                    seen.add(c)
                    queue.append(c)
    return RegularTree(
        t.root,
        {n: lab for n, lab in t.labels.items() if n in seen},
        {n: c for n, c in t.children.items() if n in seen},
        t.rank,
        t.exits,
    )


# ---------------------------------------------------------------------------
# quotients and isomorphism


def minimize(t: RegularTree) -> RegularTree:
    """Bisimulation quotient: merge nodes denoting identical subtrees.
    The denoted tree is unchanged."""
    t = _restrict_reachable(t)
    nodes = t.sorted_nodes()
    block = {n: (str(t.labels[n]) if isinstance(t.labels[n], Letter) else ("x", t.labels[n]))
             for n in nodes}
    while True:
        refined = {}
        for n in nodes:
            if n in t.children:
                c0, c1 = t.children[n]
                refined[n] = (block[n], block[c0], block[c1])
            else:
                refined[n] = (block[n],)
        if len(set(refined.values())) == len(set(block.values())):
            block = refined
            break
        block = refined
    rep = {}
    for n in nodes:
        rep.setdefault(block[n], n)
    node_rep = {n: rep[block[n]] for n in nodes}
    labels = {node_rep[n]: t.labels[n] for n in nodes}
    children = {node_rep[n]: (node_rep[c0], node_rep[c1])
                for n, (c0, c1) in t.children.items()}
    return _restrict_reachable(RegularTree(node_rep[t.root], labels, children, t.rank, t.exits))


def canonical_form(t: RegularTree):
    """Hashable canonical encoding of the minimized tree (breadth-first
    numbering); equal encodings mean equal denoted trees."""
    m = minimize(t)
    order = {m.root: 0}
    queue = [m.root]
    shape = []
    while queue:
        node = queue.pop(0)
        label = m.labels[node]
        if isinstance(label, str):
            shape.append(("exit", label))
            continue
        ids = []
        for c in m.children[node]:
            if c not in order:
                order[c] = len(order)
                queue.append(c)
            ids.append(order[c])
        shape.append((str(label), ids[0], ids[1]))
    return tuple(shape)


def isomorphic(a: RegularTree, b: RegularTree) -> bool:
    """Do the two graphs denote the same infinite tree?"""
    return canonical_form(a) == canonical_form(b)


def spine_tree(prio: int, player: str = "E") -> RegularTree:
    """The tree whose left spine carries (player, prio) and whose every
    right child is bot."""
    return make_tree(
        "n0",
        {"n0": game_letter(player, prio), "n1": BOT},
        {"n0": ("n0", "n1"), "n1": ("n1", "n1")},
        (0, max(prio, 0)),
        exits=(),
    )


# ---------------------------------------------------------------------------
# JSON serialization


def _label_to_json(label):
    if isinstance(label, str):
        return {"exit": label}
    if label.is_bot():
        return "bot"
    return {"player": label.player, "prio": label.prio}


def _label_from_json(obj):
    if obj == "bot":
        return BOT
    if isinstance(obj, dict) and set(obj) == {"exit"}:
        return obj["exit"]
    if isinstance(obj, dict) and set(obj) == {"player", "prio"}:
        return game_letter(obj["player"], obj["prio"])
    raise TreeError(f"bad node label {obj!r}")


def tree_to_json(t: RegularTree) -> dict:
    nodes = []
    for node in t.sorted_nodes():
        entry = {"id": node, "label": _label_to_json(t.labels[node])}
        if node in t.children:
            entry["children"] = list(t.children[node])
        nodes.append(entry)
    return {"rank": {"min": t.rank[0], "max": t.rank[1]}, "root": t.root, "nodes": nodes}


def tree_from_json(obj: dict) -> RegularTree:
    if not isinstance(obj, dict):
        raise TreeError("tree JSON must be an object")
    unknown = set(obj) - {"rank", "root", "nodes"}
    if unknown:
        raise TreeError(f"unknown field(s) in tree: {', '.join(sorted(unknown))}")
    for key in ("rank", "root", "nodes"):
        if key not in obj:
            raise TreeError(f"missing field {key!r}")
    if set(obj["rank"]) != {"min", "max"}:
        raise TreeError("rank must have exactly the fields min and max")
    labels, children = {}, {}
    for entry in obj["nodes"]:
        unknown = set(entry) - {"id", "label", "children"}
        if unknown:
            raise TreeError(f"unknown field(s) in node: {', '.join(sorted(unknown))}")
        label = _label_from_json(entry["label"])
        labels[entry["id"]] = label
        if isinstance(label, Letter):
            if "children" not in entry:
                raise TreeError(f"letter node {entry['id']!r} lacks children")
            children[entry["id"]] = tuple(entry["children"])
        elif "children" in entry:
            raise TreeError(f"exit node {entry['id']!r} must not have children")
    t = make_tree(obj["root"], labels, children,
                  (obj["rank"]["min"], obj["rank"]["max"]))
    problems = tree_violations(t)
    if problems:
        raise TreeError("; ".join(problems))
    return t


def save_tree(t: RegularTree, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(tree_to_json(t), fh, indent=1)
        fh.write("\n")


def load_tree(path) -> RegularTree:
    with open(path, encoding="utf-8") as fh:
        return tree_from_json(json.load(fh))
