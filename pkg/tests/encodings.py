"""Build shape trees (live = (E,0), dead = bot) from word patterns.

A prefix-closed language over {0,1} determines an infinite binary tree:
a path is live iff some member extends it.  We take the Myhill-Nerode
quotient via Brzozowski derivatives of a small regex AST, so the tree
comes out as a finite regular graph.  Used to build the tree encodings
of countably-branching trees from their branch-word descriptions.
"""

from __future__ import annotations

from zeta_arena.automaton import BOT, game_letter
from zeta_arena.regtree import RegularTree, make_tree

EMPTY = ("empty",)
EPS = ("eps",)


def lit(word: str):
    return ("lit", word)


def cat(*parts):
    flat = []
    for p in parts:
        if p == EMPTY:
            return EMPTY
        if p == EPS:
            continue
        if p[0] == "cat":
            flat.extend(p[1])
        else:
            flat.append(p)
    if not flat:
        return EPS
    if len(flat) == 1:
        return flat[0]
    return ("cat", tuple(flat))


def alt(*parts):
    flat = []
    for p in parts:
        if p == EMPTY:
            continue
        if p[0] == "alt":
            flat.extend(p[1])
        else:
            flat.append(p)
    flat = sorted(set(flat))
    if not flat:
        return EMPTY
    if len(flat) == 1:
        return flat[0]
    return ("alt", tuple(flat))


def star(r):
    if r in (EMPTY, EPS):
        return EPS
    if r[0] == "star":
        return r
    return ("star", r)


def nullable(r) -> bool:
    tag = r[0]
    if tag == "empty":
        return False
    if tag in ("eps", "star"):
        return True
    if tag == "lit":
        return r[1] == ""
    if tag == "cat":
        return all(nullable(p) for p in r[1])
    return any(nullable(p) for p in r[1])


def nonempty(r) -> bool:
    tag = r[0]
    if tag == "empty":
        return False
    if tag == "cat":
        return all(nonempty(p) for p in r[1])
    if tag == "alt":
        return any(nonempty(p) for p in r[1])
    return True


def derive(r, ch: str):
    tag = r[0]
    if tag in ("empty", "eps"):
        return EMPTY
    if tag == "lit":
        word = r[1]
        if word and word[0] == ch:
            return lit(word[1:]) if len(word) > 1 else EPS
        return EMPTY
    if tag == "cat":
        parts = r[1]
        head, rest = parts[0], cat(*parts[1:])
        out = cat(derive(head, ch), rest)
        if nullable(head):
            out = alt(out, derive(rest, ch))
        return out
    if tag == "alt":
        return alt(*[derive(p, ch) for p in r[1]])
    # star
    return cat(derive(r[1], ch), r)


def shape_tree(pattern) -> RegularTree:
    """Regular tree with label (E,0) at the prefixes of the pattern's
    language and bot elsewhere."""
    live = game_letter("E", 0)
    states = {pattern: "n0"}
    labels, children = {}, {}
    queue = [pattern]
    while queue:
        r = queue.pop(0)
        name = states[r]
        if not nonempty(r):
            labels[name] = BOT
            children[name] = (name, name)
            continue
        labels[name] = live
        kids = []
        for ch in "01":
            d = derive(r, ch)
            if d not in states:
                states[d] = f"n{len(states)}"
                queue.append(d)
            kids.append(states[d])
        children[name] = tuple(kids)
    return make_tree("n0", labels, children, (0, 0))


# Branch-word patterns of tree encodings: a node w of a countably
# branching tree sits at h(w), with h(eps) = eps and h(wn) =
# h(w) 00 (10)^n 01; a missing child n contributes the dead branch
# h(w) 00 (10)^n 00.

def two_node_tree_pattern():
    """Encoding of the tree {eps, 0}: the root's child 0 exists, every
    other child is missing, and the child itself is a leaf."""
    return alt(
        lit("0001"),                       # the present child 0
        cat(lit("00"), lit("10"), star(lit("10")), lit("00")),  # missing root children n >= 1
        cat(lit("0001"), lit("00"), star(lit("10")), lit("00")),  # all children of the leaf missing
    )


def zero_spine_pattern():
    """Encoding of the ill-founded tree {0^k : k}: child 0 exists at
    every level, all other children are missing."""
    level = alt(
        lit("0001"),
        cat(lit("00"), lit("10"), star(lit("10")), lit("00")),
    )
    return cat(star(lit("0001")), level)
