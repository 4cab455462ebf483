"""Brute-force reference implementations used as test oracles.

The brutes never call the optimized solvers: winners are computed by
exhaustive enumeration of positional strategies and direct cycle
analysis, which keeps them independent of (and hence a meaningful check
on) the recursive solver and the game-reduction pipeline.  Hard size
guards keep every enumeration in the obviously-terminating range; guard
violations raise, they never truncate silently.
"""

from __future__ import annotations

import random
from itertools import product

from .automaton import Letter, TreeAutomaton
from .expr import Expr, Var, Mu, Zeta, Nu, Sum, CartProd, ParProd
from .games import ADAM, EVE, GameArena, make_arena
from .regtree import RegularTree, TreeError, tree_violations

__all__ = [
    "GuardError", "brute_solve_parity", "brute_solve_conjunction",
    "brute_member", "random_expr", "random_arena",
]


class GuardError(RuntimeError):
    """An oracle size guard was exceeded."""


def _pos_key(p):
    return repr(p)


class _Graph:
    """Bitmask view of an arena for the strategy-enumeration brutes."""

    def __init__(self, arena: GameArena):
        self.ids = sorted(arena.owners, key=_pos_key)
        self.index = {p: i for i, p in enumerate(self.ids)}
        self.n = len(self.ids)
        self.owner_eve = [arena.owners[p] == EVE for p in self.ids]
        self.colors = [arena.colors[p] for p in self.ids]
        self.succ = [[self.index[q] for q in arena.edges[p]] for p in self.ids]


def _reach_masks(succ_masks, n):
    """reach[v] = positions reachable from v in one or more steps."""
    reach = list(succ_masks)
    for _ in range(n):
        changed = False
        for v in range(n):
            acc = reach[v]
            m = reach[v]
            while m:
                w = (m & -m).bit_length() - 1
                m &= m - 1
                acc |= reach[w]
            if acc != reach[v]:
                reach[v] = acc
                changed = True
        if not changed:
            break
    return reach


def _strategy_win_mask(g: _Graph, restricted_succ, player_eve: bool) -> int:
    """Positions from which every play under the fixed strategy is won by
    the strategy's owner (single color dimension)."""
    n = g.n
    succ_masks = [0] * n
    for v in range(n):
        for w in restricted_succ[v]:
            succ_masks[v] |= 1 << w

    bad = 0
    for v in range(n):
        if not restricted_succ[v] and g.owner_eve[v] == player_eve:
            bad |= 1 << v  # owned dead end

    colors = [c[0] for c in g.colors]
    # a cycle whose maximal color has the losing parity for the owner
    losing_parity = 1 if player_eve else 0
    for c in sorted({c for c in colors if c % 2 == losing_parity}):
        sub = 0
        for v in range(n):
            if colors[v] <= c:
                sub |= 1 << v
        sub_succ = [succ_masks[v] & sub if (sub >> v) & 1 else 0 for v in range(n)]
        reach = _reach_masks(sub_succ, n)
        for v in range(n):
            if colors[v] == c and (sub >> v) & 1 and (reach[v] >> v) & 1:
                bad |= 1 << v

    reach_all = _reach_masks(succ_masks, n)
    win = 0
    for v in range(n):
        if not (bad >> v) & 1 and not (reach_all[v] & bad):
            win |= 1 << v
    return win


def _enumerate_strategies(g: _Graph, player_eve: bool):
    """All positional strategies of one player, as restricted successor
    lists (opponent keeps every edge; owned dead ends keep none)."""
    owned = [v for v in range(g.n) if g.owner_eve[v] == player_eve and g.succ[v]]
    option_lists = [g.succ[v] for v in owned]
    for picks in product(*option_lists):
        restricted = []
        pick_at = dict(zip(owned, picks))
        for v in range(g.n):
            if g.owner_eve[v] == player_eve:
                restricted.append([pick_at[v]] if v in pick_at else [])
            else:
                restricted.append(list(g.succ[v]))
        yield restricted


def brute_solve_parity(arena: GameArena):
    """Winning regions by exhaustive positional-strategy enumeration.

    A position belongs to a player's region iff some positional strategy
    of that player makes every reachable cycle have the right maximal
    parity and every reachable dead end belong to the opponent.  The two
    regions are required to partition the arena.
    """
    if len(arena.owners) > 8:
        raise GuardError("brute_solve_parity is guarded to 8 positions")
    if arena.dims != 1:
        raise GuardError("brute_solve_parity handles a single color dimension")
    g = _Graph(arena)
    masks = {}
    for player, player_eve in ((EVE, True), (ADAM, False)):
        win = 0
        for restricted in _enumerate_strategies(g, player_eve):
            win |= _strategy_win_mask(g, restricted, player_eve)
            if win == (1 << g.n) - 1:
                break
        masks[player] = win
    if masks[EVE] & masks[ADAM] or (masks[EVE] | masks[ADAM]) != (1 << g.n) - 1:
        raise RuntimeError("positional regions do not partition the arena")
    return {
        EVE: frozenset(g.ids[v] for v in range(g.n) if (masks[EVE] >> v) & 1),
        ADAM: frozenset(g.ids[v] for v in range(g.n) if (masks[ADAM] >> v) & 1),
    }


def _good_subset_mask(g: _Graph, restricted_succ) -> int:
    """Nodes in some closed strongly-connected subgraph whose maximal
    color is even in all dimensions (the structures Eve can loop in)."""
    dims = len(g.colors[0]) if g.colors else 1
    good = 0
    pending = [frozenset(range(g.n))]
    while pending:
        current = pending.pop()
        if not current:
            continue
        comp_succ = {v: [w for w in restricted_succ[v] if w in current] for v in current}
        for comp in _scc_list(current, comp_succ):
            cyclic = len(comp) > 1 or comp[0] in comp_succ[comp[0]]
            if not cyclic:
                continue
            maxes = [max(g.colors[v][j] for v in comp) for j in range(dims)]
            bad_dims = [j for j in range(dims) if maxes[j] % 2 == 1]
            if not bad_dims:
                for v in comp:
                    good |= 1 << v
                continue
            offenders = {v for v in comp
                         if any(g.colors[v][j] == maxes[j] for j in bad_dims)}
            pending.append(frozenset(comp) - offenders)
    return good


def _scc_list(nodes, succ):
    order, seen = [], set()
    for root in sorted(nodes):
        if root in seen:
            continue
        stack = [(root, iter(succ[root]))]
        seen.add(root)
        while stack:
            v, it = stack[-1]
            for w in it:
                if w not in seen:
                    seen.add(w)
                    stack.append((w, iter(succ[w])))
                    break
            else:
                order.append(v)
                stack.pop()
    transposed = {v: [] for v in nodes}
    for v in nodes:
        for w in succ[v]:
            transposed[w].append(v)
    comps, assigned = [], set()
    for v in reversed(order):
        if v in assigned:
            continue
        comp = [v]
        assigned.add(v)
        frontier = [v]
        while frontier:
            u = frontier.pop()
            for w in transposed[u]:
                if w not in assigned:
                    assigned.add(w)
                    comp.append(w)
                    frontier.append(w)
        comps.append(comp)
    return comps


def brute_solve_conjunction(arena: GameArena):
    """Winning regions for a conjunction objective, via the odd player.

    The odd player's objective is a finite union of upper-parity escapes,
    so positional strategies suffice for him: enumerate them, and in each
    residual one-player graph the even player wins from a position iff
    she can reach an owned-by-odd dead end or a closed strongly-connected
    subgraph with even maximal color in every dimension.  The even
    region is the complement.
    """
    if len(arena.owners) > 6:
        raise GuardError("brute_solve_conjunction is guarded to 6 positions")
    if arena.dims > 2:
        raise GuardError("brute_solve_conjunction is guarded to 2 dimensions")
    g = _Graph(arena)
    full = (1 << g.n) - 1
    adam_win = 0
    for restricted in _enumerate_strategies(g, False):
        succ_masks = [0] * g.n
        for v in range(g.n):
            for w in restricted[v]:
                succ_masks[v] |= 1 << w
        eve_targets = _good_subset_mask(g, restricted)
        for v in range(g.n):
            if not restricted[v] and not g.owner_eve[v]:
                eve_targets |= 1 << v  # odd-player dead end
        reach = _reach_masks(succ_masks, g.n)
        eve_win = 0
        for v in range(g.n):
            if (eve_targets >> v) & 1 or (reach[v] & eve_targets):
                eve_win |= 1 << v
        adam_win |= full & ~eve_win
        if adam_win == full:
            break
    return {
        EVE: frozenset(g.ids[v] for v in range(g.n) if not (adam_win >> v) & 1),
        ADAM: frozenset(g.ids[v] for v in range(g.n) if (adam_win >> v) & 1),
    }


# ---------------------------------------------------------------------------
# membership oracle


def brute_member(t: RegularTree, a: TreeAutomaton, work_limit: int = 1_000_000) -> bool:
    """Membership by backtracking over positional run choices.

    Enumerates assignments (tree node, state, direction) -> successor
    state over the pairs actually reached, and accepts iff some complete
    assignment ends every maximal path in a final configuration and
    yields only even-maximal cycles.  Guarded to 64 reachable (node,
    state) pairs and plain parity acceptance.
    """
    problems = tree_violations(t)
    if problems:
        raise TreeError("; ".join(problems))
    if not a.is_plain():
        raise GuardError("brute_member handles plain parity acceptance only")

    pairs = set()
    for q0 in a.initial:
        frontier = [(t.root, q0)]
        while frontier:
            node, q = frontier.pop()
            if (node, q) in pairs:
                continue
            pairs.add((node, q))
            label = t.labels[node]
            if isinstance(label, str):
                continue
            for d in (0, 1):
                for r in a.delta(label, d, q):
                    if (t.children[node][d], r) not in pairs:
                        frontier.append((t.children[node][d], r))
    if len(pairs) > 64:
        raise GuardError(f"{len(pairs)} reachable pairs exceed the membership guard of 64")

    work = [0]

    def search(q0):
        assignment = {}

        def reachable_frontier():
            seen = {(t.root, q0)}
            stack = [(t.root, q0)]
            unassigned = []
            while stack:
                node, q = stack.pop()
                label = t.labels[node]
                if isinstance(label, str):
                    if (label, q) not in a.finals:
                        return None, None  # stuck at a non-final exit
                    continue
                for d in (0, 1):
                    key = (node, q, d)
                    if key not in assignment:
                        unassigned.append(key)
                        continue
                    nxt = (t.children[node][d], assignment[key])
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            return seen, unassigned

        def good_cycles(seen):
            colors = {}
            succ = {}
            for (node, q) in seen:
                colors[(node, q)] = a.acceptance[0][q]
                label = t.labels[node]
                if isinstance(label, str):
                    succ[(node, q)] = []
                    continue
                outs = []
                for d in (0, 1):
                    key = (node, q, d)
                    if key in assignment:
                        outs.append((t.children[node][d], assignment[key]))
                succ[(node, q)] = outs
            for c in sorted({v for v in colors.values() if v % 2 == 1}):
                sub = {n for n in seen if colors[n] <= c}
                for start in sub:
                    if colors[start] != c:
                        continue
                    visited = set()
                    stack = [w for w in succ[start] if w in sub]
                    while stack:
                        v = stack.pop()
                        if v == start:
                            return False
                        if v in visited:
                            continue
                        visited.add(v)
                        stack.extend(w for w in succ[v] if w in sub)
            return True

        def step():
            work[0] += 1
            if work[0] > work_limit:
                raise GuardError("brute_member work limit exceeded")
            seen, unassigned = reachable_frontier()
            if seen is None:
                return False
            if not unassigned:
                return good_cycles(seen)
            key = min(unassigned, key=_pos_key)
            node, q, d = key
            label = t.labels[node]
            for r in sorted(a.delta(label, d, q)):
                assignment[key] = r
                if step():
                    return True
                del assignment[key]
            return False

        return step()

    return any(search(q0) for q0 in sorted(a.initial))


# ---------------------------------------------------------------------------
# random generators for cross-validation


def random_expr(depth: int, vars=(), seed: int = 0) -> Expr:
    """Seed-deterministic random expression; closed when ``vars`` is
    empty.  Depth-1 expressions are leaves (a variable or one of the
    three fixpoints of the identity)."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    rng = random.Random(seed)
    counter = [0]

    def fresh():
        counter[0] += 1
        return f"V{counter[0]}"

    def leaf(scope):
        choices = []
        if scope:
            choices.extend(("var",) * 3)
        choices.extend(("zero", "unit", "one"))
        kind = rng.choice(choices)
        if kind == "var":
            return Var(rng.choice(sorted(scope)))
        name = fresh()
        cls = {"zero": Mu, "unit": Zeta, "one": Nu}[kind]
        return cls(name, Var(name))

    def go(d, scope):
        if d <= 1:
            return leaf(scope)
        kind = rng.choice(("sum", "cart", "par", "mu", "zeta", "nu", "leaf"))
        if kind == "leaf":
            return leaf(scope)
        if kind in ("sum", "cart", "par"):
            cls = {"sum": Sum, "cart": CartProd, "par": ParProd}[kind]
            return cls(go(d - 1, scope), go(d - 1, scope))
        name = fresh()
        cls = {"mu": Mu, "zeta": Zeta, "nu": Nu}[kind]
        return cls(name, go(d - 1, scope | {name}))

    return go(depth, frozenset(vars))


def random_arena(size: int, max_color: int, dims: int = 1, seed: int = 0,
                 max_degree: int = 2, dead_end_chance: float = 0.1) -> GameArena:
    """Seed-deterministic random arena for solver cross-validation."""
    if size < 1:
        raise ValueError("size must be at least 1")
    rng = random.Random(seed)
    names = [f"p{j}" for j in range(size)]
    owners, colors, edges = {}, {}, {}
    for name in names:
        owners[name] = rng.choice((EVE, ADAM))
        colors[name] = tuple(rng.randint(0, max_color) for _ in range(dims))
        if rng.random() < dead_end_chance:
            edges[name] = ()
        else:
            degree = rng.randint(1, max_degree)
            edges[name] = tuple(rng.choice(names) for _ in range(degree))
    return make_arena(owners, colors, edges)
