"""Finite two-player games with parity and conjunction-of-parity objectives.

Conventions used throughout:

* max-parity, limsup-even wins for Eve: an infinite play is good for Eve
  iff, in every color dimension, the highest color seen infinitely often
  is even;
* a position with no outgoing edges is lost by its owner (dead ends model
  run death and forced moves into dead letters);
* owners are the strings ``"E"`` (Eve / the even player) and ``"O"``
  (Adam / the odd player).

``solve_parity`` is the classical recursive attractor algorithm and
returns positional strategies for both players.  ``solve_conjunction``
handles color vectors of any width by translating each dimension into
Streett pairs, folding the pairs into a single parity objective with an
index appearance record, and projecting Eve's positional strategy on the
product back to a finite-memory strategy whose memory is the record.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

__all__ = [
    "EVE", "ADAM", "GameArena", "Strategy", "make_arena",
    "solve_parity", "solve_conjunction",
    "verify_strategy", "strategy_violations",
]

EVE = "E"
ADAM = "O"


def opponent(player: str) -> str:
    return ADAM if player == EVE else EVE


def _pos_key(p):
    return repr(p)


@dataclass(frozen=True)
class GameArena:
    """Finite game graph.

    ``owners`` maps a position to ``"E"``/``"O"``, ``colors`` to a tuple
    of naturals (one entry per objective dimension, same length for all
    positions), ``edges`` to the tuple of successor positions.  Arenas
    are not mutated after construction.
    """

    owners: dict
    colors: dict
    edges: dict
    starts: tuple = ()

    def __post_init__(self):
        positions = set(self.owners)
        if set(self.colors) != positions or set(self.edges) != positions:
            raise ValueError("owners, colors and edges must share one position set")
        dims = {len(c) for c in self.colors.values()}
        if len(dims) > 1:
            raise ValueError("all color vectors must have equal length")
        for p, owner in self.owners.items():
            if owner not in (EVE, ADAM):
                raise ValueError(f"bad owner {owner!r} at {p!r}")
            for q in self.edges[p]:
                if q not in positions:
                    raise ValueError(f"edge {p!r} -> {q!r} leaves the arena")
        for s in self.starts:
            if s not in positions:
                raise ValueError(f"start position {s!r} not in the arena")

    @property
    def positions(self):
        return sorted(self.owners, key=_pos_key)

    @property
    def dims(self) -> int:
        for c in self.colors.values():
            return len(c)
        return 1


def make_arena(owners, colors, edges, starts=()) -> GameArena:
    """Normalize inputs (dedupe edges, color tuples) into a GameArena."""
    norm_edges = {}
    for p in owners:
        seen, out = set(), []
        for q in edges.get(p, ()):
            if q not in seen:
                seen.add(q)
                out.append(q)
        norm_edges[p] = tuple(out)
    norm_colors = {p: tuple(colors[p]) for p in owners}
    return GameArena(dict(owners), norm_colors, norm_edges, tuple(starts))


@dataclass
class Strategy:
    """Finite-memory strategy.

    ``choice`` maps ``(position, memory)`` pairs at positions owned by
    ``owner`` to the successor position to move to.  ``step`` maps
    ``(memory, position)`` to the memory after *leaving* that position
    (for every position, not only owned ones); missing entries mean the
    memory is unchanged.  Positional strategies use the single memory
    value ``None``.
    """

    owner: str
    memories: tuple = (None,)
    init_memory: object = None
    choice: dict = field(default_factory=dict)
    step: dict = field(default_factory=dict)

    def move(self, position, memory):
        return self.choice.get((position, memory))

    def advance(self, memory, position):
        return self.step.get((memory, position), memory)


# ---------------------------------------------------------------------------
# parity solver (single dimension)


class _Core:
    """Integer-indexed view of an arena, with two virtual loss sinks so
    that every original dead end has the one edge that encodes its owner
    losing."""

    def __init__(self, arena: GameArena, colors=None):
        self.ids = sorted(arena.owners, key=_pos_key)
        self.index = {p: i for i, p in enumerate(self.ids)}
        n = len(self.ids)
        col = colors if colors is not None else {p: arena.colors[p][0] for p in self.ids}
        self.color = [col[p] for p in self.ids]
        self.is_eve = [arena.owners[p] == EVE for p in self.ids]
        self.succ = [[self.index[q] for q in arena.edges[p]] for p in self.ids]
        self.n_real = n
        # sink losing for Eve loops with color 1, sink losing for Adam with 0
        self.eve_sink = n
        self.adam_sink = n + 1
        self.color += [1, 0]
        self.is_eve += [True, False]
        self.succ += [[self.eve_sink], [self.adam_sink]]
        for v in range(n):
            if not self.succ[v]:
                self.succ[v] = [self.eve_sink if self.is_eve[v] else self.adam_sink]
        self.n = n + 2
        self.pred = [[] for _ in range(self.n)]
        for v in range(self.n):
            for w in self.succ[v]:
                self.pred[w].append(v)


def _attractor(core: _Core, alive: set, target: set, player_eve: bool):
    """Player's attractor to ``target`` within ``alive``; also returns the
    attractor moves for player-owned positions outside ``target``."""
    count = {}
    attr = set(target)
    strat = {}
    queue = deque(sorted(target))
    while queue:
        w = queue.popleft()
        for v in core.pred[w]:
            if v not in alive or v in attr:
                continue
            if core.is_eve[v] == player_eve:
                attr.add(v)
                strat[v] = w
                queue.append(v)
            else:
                if v not in count:
                    count[v] = sum(1 for u in core.succ[v] if u in alive)
                count[v] -= 1
                if count[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strat


def _zielonka(core: _Core, alive: frozenset):
    if not alive:
        return set(), set(), {}, {}
    d = max(core.color[v] for v in alive)
    player_eve = d % 2 == 0
    top = {v for v in alive if core.color[v] == d}
    attr, attr_strat = _attractor(core, alive, top, player_eve)
    we1, wa1, se1, sa1 = _zielonka(core, alive - frozenset(attr))
    win_p1, strat_p1 = (we1, se1) if player_eve else (wa1, sa1)
    win_o1, strat_o1 = (wa1, sa1) if player_eve else (we1, se1)
    if not win_o1:
        strat_p = dict(strat_p1)
        strat_p.update(attr_strat)
        for v in sorted(top):
            if core.is_eve[v] == player_eve and v not in strat_p:
                strat_p[v] = next(w for w in core.succ[v] if w in alive)
        if player_eve:
            return set(alive), set(), strat_p, {}
        return set(), set(alive), {}, strat_p
    battr, battr_strat = _attractor(core, alive, win_o1, not player_eve)
    we2, wa2, se2, sa2 = _zielonka(core, alive - frozenset(battr))
    win_p2, strat_p2 = (we2, se2) if player_eve else (wa2, sa2)
    win_o2, strat_o2 = (wa2, sa2) if player_eve else (we2, se2)
    strat_o = dict(strat_o1)
    strat_o.update(battr_strat)
    strat_o.update(strat_o2)
    win_o = win_o1 | battr | win_o2
    if player_eve:
        return win_p2, win_o, strat_p2, strat_o
    return win_o, win_p2, strat_o, strat_p2


def _solve_core(core: _Core):
    alive = frozenset(range(core.n))
    we, wa, se, sa = _zielonka(core, alive)
    real = range(core.n_real)
    regions = {
        EVE: frozenset(core.ids[v] for v in real if v in we),
        ADAM: frozenset(core.ids[v] for v in real if v in wa),
    }

    def project(strat, owner_eve):
        choice = {}
        for v, w in strat.items():
            if v >= core.n_real or w >= core.n_real:
                continue
            if core.is_eve[v] == owner_eve:
                choice[(core.ids[v], None)] = core.ids[w]
        return choice

    eve = Strategy(EVE, choice=project(se, True))
    adam = Strategy(ADAM, choice=project(sa, False))
    return regions, eve, adam


def solve_parity(arena: GameArena):
    """Solve a one-dimensional arena exactly.

    Returns ``(regions, eve_strategy, adam_strategy)`` where ``regions``
    maps each player to the frozenset of positions they win from; both
    strategies are positional and winning on their regions.
    """
    if arena.dims != 1:
        raise ValueError("solve_parity needs color vectors of length 1")
    return _solve_core(_Core(arena))


# ---------------------------------------------------------------------------
# conjunction of parity objectives via Streett pairs + index appearance record


def _streett_pairs(arena: GameArena):
    """One pair per odd color per dimension: (positions hitting the odd
    color, positions dominating it).  Pairs with an empty first component
    are vacuous and dropped."""
    pairs = []
    dims = arena.dims
    for j in range(dims):
        odd_colors = sorted({c[j] for c in arena.colors.values() if c[j] % 2 == 1})
        for p in odd_colors:
            e_set = frozenset(v for v in arena.owners if arena.colors[v][j] == p)
            f_set = frozenset(v for v in arena.owners if arena.colors[v][j] > p)
            if e_set:
                pairs.append((e_set, f_set))
    return pairs


def _record_update(record, f_hits):
    if not f_hits:
        return record
    moved = tuple(i for i in record if i in f_hits)
    rest = tuple(i for i in record if i not in f_hits)
    return moved + rest


def _record_priority(record, e_hits, f_hits):
    fpos = epos = 0
    for pos, i in enumerate(record, start=1):
        if i in f_hits:
            fpos = pos
        if i in e_hits:
            epos = pos
    return 2 * fpos if fpos >= epos else 2 * epos - 1


def solve_conjunction(arena: GameArena):
    """Solve an arena whose objective for Eve is the conjunction of all
    color dimensions, each read as a max-parity condition.

    Returns ``(regions, eve_strategy, adam_strategy)``.  Both strategies
    carry the index appearance record as memory (a permutation of the
    Streett pair indices); for a single dimension this degenerates to
    ``solve_parity``.
    """
    if arena.dims == 1:
        return solve_parity(arena)

    pairs = _streett_pairs(arena)
    r = len(pairs)
    hits_e = {v: frozenset(i for i in range(r) if v in pairs[i][0]) for v in arena.owners}
    hits_f = {v: frozenset(i for i in range(r) if v in pairs[i][1]) for v in arena.owners}
    init = tuple(range(r))

    # Product arena over reachable records, explored from every position.
    owners, colors, edges = {}, {}, {}
    queue = deque((p, init) for p in arena.positions)
    seen = set(queue)
    while queue:
        p, rec = queue.popleft()
        node = (p, rec)
        owners[node] = arena.owners[p]
        colors[node] = (_record_priority(rec, hits_e[p], hits_f[p]),)
        rec2 = _record_update(rec, hits_f[p])
        out = []
        for q in arena.edges[p]:
            succ = (q, rec2)
            out.append(succ)
            if succ not in seen:
                seen.add(succ)
                queue.append(succ)
        edges[node] = tuple(out)

    product = GameArena(owners, colors, edges)
    regions_prod, eve_prod, adam_prod = solve_parity(product)

    regions = {
        EVE: frozenset(p for p in arena.owners if (p, init) in regions_prod[EVE]),
        ADAM: frozenset(p for p in arena.owners if (p, init) in regions_prod[ADAM]),
    }

    memories = tuple(sorted({rec for (_, rec) in owners}))
    step = {}
    for (p, rec) in owners:
        rec2 = _record_update(rec, hits_f[p])
        if rec2 != rec:
            step[(rec, p)] = rec2

    def project(prod_strategy):
        choice = {}
        for (node, _mem), target in prod_strategy.choice.items():
            p, rec = node
            q, _ = target
            choice[(p, rec)] = q
        return choice

    eve = Strategy(EVE, memories=memories, init_memory=init,
                   choice=project(eve_prod), step=step)
    adam = Strategy(ADAM, memories=memories, init_memory=init,
                    choice=project(adam_prod), step=step)
    return regions, eve, adam


# ---------------------------------------------------------------------------
# strategy verification


def _sccs(nodes, succ):
    """Tarjan's algorithm, iterative; returns a list of strongly
    connected components (as lists) over the given node set."""
    node_list = sorted(nodes, key=_pos_key)
    index, low, on_stack = {}, {}, set()
    stack, out = [], []
    counter = [0]

    for root in node_list:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in nodes:
                    continue
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def _has_cycle_with_odd_max(nodes, succ, colors, dim):
    """Does some cycle within ``nodes`` have an odd maximal color in
    dimension ``dim``?"""
    odd_values = sorted({colors[v][dim] for v in nodes if colors[v][dim] % 2 == 1})
    for c in odd_values:
        sub = {v for v in nodes if colors[v][dim] <= c}
        sub_succ = {v: [w for w in succ.get(v, ()) if w in sub] for v in sub}
        for comp in _sccs(sub, sub_succ):
            comp_set = set(comp)
            cyclic = len(comp) > 1 or comp[0] in sub_succ.get(comp[0], ())
            if cyclic and any(colors[v][dim] == c for v in comp):
                return True
    return False


def _good_subset_nodes(nodes, succ, colors, dims):
    """Nodes lying in some closed strongly-connected subgraph whose
    maximal color is even in every dimension."""
    good = set()
    pending = [set(nodes)]
    while pending:
        current = pending.pop()
        if not current:
            continue
        cur_succ = {v: [w for w in succ.get(v, ()) if w in current] for v in current}
        for comp in _sccs(current, cur_succ):
            comp_set = set(comp)
            cyclic = len(comp) > 1 or comp[0] in cur_succ.get(comp[0], ())
            if not cyclic:
                continue
            bad_dims = [j for j in range(dims)
                        if max(colors[v][j] for v in comp) % 2 == 1]
            if not bad_dims:
                good |= comp_set
                continue
            offenders = {v for v in comp
                         if any(colors[v][j] == max(colors[w][j] for w in comp)
                                for j in bad_dims)}
            pending.append(comp_set - offenders)
    return good


def strategy_violations(arena: GameArena, strategy: Strategy, starts=None):
    """Reasons the strategy is not winning from ``starts`` (default: the
    arena's designated starts, else every position).  Empty means the
    strategy wins every play from the starts."""
    if starts is None:
        starts = arena.starts or tuple(arena.positions)
    owner = strategy.owner
    problems = []

    nodes = set()
    succ = {}
    queue = deque((p, strategy.init_memory) for p in starts)
    for node in queue:
        nodes.add(node)
    while queue:
        p, mem = queue.popleft()
        node = (p, mem)
        mem2 = strategy.advance(mem, p)
        if arena.owners[p] == owner:
            target = strategy.move(p, mem)
            if target is None:
                if arena.edges[p]:
                    problems.append(f"no move defined at {p!r} with memory {mem!r}")
                    succ[node] = []
                    continue
                succ[node] = []  # owned dead end, handled below
                continue
            if target not in arena.edges[p]:
                problems.append(f"move {p!r} -> {target!r} is not an edge")
                succ[node] = []
                continue
            outs = [(target, mem2)]
        else:
            outs = [(q, mem2) for q in arena.edges[p]]
        succ[node] = outs
        for nxt in outs:
            if nxt not in nodes:
                nodes.add(nxt)
                queue.append(nxt)
    if problems:
        return problems

    for (p, mem) in sorted(nodes, key=_pos_key):
        if not succ[(p, mem)] and arena.owners[p] == owner:
            problems.append(f"reachable dead end {p!r} is lost by the owner")
    if problems:
        return problems

    colors = {node: arena.colors[node[0]] for node in nodes}
    dims = arena.dims
    if owner == EVE:
        for j in range(dims):
            if _has_cycle_with_odd_max(nodes, succ, colors, j):
                problems.append(f"reachable cycle with odd maximal color in dimension {j}")
    else:
        if _good_subset_nodes(nodes, succ, colors, dims):
            problems.append("reachable closed subgraph with even maximal colors in every dimension")
    return problems


def verify_strategy(arena: GameArena, strategy: Strategy, starts=None) -> bool:
    """True iff the strategy wins every play from the given starts."""
    return not strategy_violations(arena, strategy, starts)
