"""Nondeterministic parity automata on infinite binary trees over the
gaming alphabet, and the constructions that compile expressions to them.

The alphabet of an automaton of rank ``(i, k)`` consists of the dead
letter ``bot`` plus the letters ``(player, priority)`` with ``i <=
priority <= k``.  Trees may stop at *exits* (leaves labelled by a free
variable); the final configurations ``(exit, state)`` say where a run may
legally stop.  Acceptance is a nonempty list of priority assignments: a
run is accepting if on every infinite branch *each* assignment has even
limsup (one assignment is plain parity acceptance; intersection products
concatenate assignment lists instead of multiplying priorities out).

Transitions are stored sparsely as ``(letter, direction, state) -> set of
states``; reading a letter with no entry kills the run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .expr import BINDERS, Expr, Var, Mu, Zeta, Nu, Sum, CartProd, ParProd

__all__ = [
    "Letter", "BOT", "game_letter", "TreeAutomaton", "AutomatonError",
    "proj_automaton", "connective_automaton", "substitute_language",
    "fixpoint_mu", "fixpoint_gamma", "compile_expr",
    "winner_automaton", "intersect", "shift_priorities",
    "compress_priorities", "shape_automaton", "trim_automaton",
    "automaton_to_json", "automaton_from_json",
    "load_automaton", "save_automaton",
]


class AutomatonError(ValueError):
    """Malformed automaton or misused construction."""


@dataclass(frozen=True)
class Letter:
    """A symbol of the gaming alphabet: ``player`` is ``"E"``, ``"O"`` or
    ``None`` for the dead letter ``bot`` (whose subtree is all-bot)."""

    player: str | None
    prio: int | None

    def is_bot(self) -> bool:
        return self.player is None

    def __str__(self):
        return "bot" if self.is_bot() else f"({self.player},{self.prio})"


BOT = Letter(None, None)


def game_letter(player: str, prio: int) -> Letter:
    if player not in ("E", "O") or prio < 0:
        raise AutomatonError(f"bad letter ({player!r}, {prio!r})")
    return Letter(player, prio)


def letter_key(letter: Letter):
    if letter.is_bot():
        return (0, "", -1)
    return (1, letter.player, letter.prio)


def _state_key(s: str):
    return (len(s), s)


@dataclass(frozen=True)
class TreeAutomaton:
    states: frozenset
    initial: frozenset
    rank: tuple
    exits: frozenset
    transitions: dict  # (Letter, dir, state) -> frozenset of states
    finals: frozenset  # pairs (exit, state)
    acceptance: tuple  # nonempty tuple of dicts state -> priority

    def __post_init__(self):
        i, k = self.rank
        if not (0 <= i <= k):
            raise AutomatonError(f"bad rank {self.rank}")
        if not self.initial <= self.states:
            raise AutomatonError("initial states outside the state set")
        for (letter, d, src), targets in self.transitions.items():
            if not letter.is_bot() and not (i <= letter.prio <= k):
                raise AutomatonError(f"letter {letter} outside rank {self.rank}")
            if d not in (0, 1):
                raise AutomatonError(f"bad direction {d!r}")
            if src not in self.states or not targets <= self.states:
                raise AutomatonError(f"transition at {src!r} mentions unknown states")
        for (x, q) in self.finals:
            if x not in self.exits or q not in self.states:
                raise AutomatonError(f"bad final configuration ({x!r}, {q!r})")
        if not self.acceptance:
            raise AutomatonError("acceptance list must be nonempty")
        for cmap in self.acceptance:
            if set(cmap) != set(self.states):
                raise AutomatonError("acceptance assignment must be total on states")

    # -- convenience accessors ------------------------------------------

    @property
    def arity(self) -> int:
        return len(self.acceptance)

    def is_plain(self) -> bool:
        return self.arity == 1

    def delta(self, letter: Letter, d: int, q: str) -> frozenset:
        return self.transitions.get((letter, d, q), frozenset())

    def colors(self, q: str) -> tuple:
        return tuple(cmap[q] for cmap in self.acceptance)

    def letters(self):
        return sorted({key[0] for key in self.transitions}, key=letter_key)

    def sorted_states(self):
        return sorted(self.states, key=_state_key)


def make_automaton(states, initial, rank, exits, transitions, finals, acceptance) -> TreeAutomaton:
    """Normalize raw collections into a TreeAutomaton, merging duplicate
    transition keys by union."""
    merged = {}
    for (letter, d, src), targets in transitions.items():
        key = (letter, d, src)
        merged[key] = merged.get(key, frozenset()) | frozenset(targets)
    return TreeAutomaton(
        states=frozenset(states),
        initial=frozenset(initial),
        rank=(rank[0], rank[1]),
        exits=frozenset(exits),
        transitions=merged,
        finals=frozenset((x, q) for (x, q) in finals),
        acceptance=tuple(dict(cmap) for cmap in acceptance),
    )


def _relabel(aut: TreeAutomaton, mapping: dict) -> TreeAutomaton:
    return make_automaton(
        states=[mapping[q] for q in aut.states],
        initial=[mapping[q] for q in aut.initial],
        rank=aut.rank,
        exits=aut.exits,
        transitions={(letter, d, mapping[src]): [mapping[t] for t in targets]
                     for (letter, d, src), targets in aut.transitions.items()},
        finals=[(x, mapping[q]) for (x, q) in aut.finals],
        acceptance=[{mapping[q]: c for q, c in cmap.items()} for cmap in aut.acceptance],
    )


class _NameSource:
    def __init__(self, start=0):
        self.n = start

    def batch(self, aut: TreeAutomaton) -> dict:
        mapping = {}
        for q in aut.sorted_states():
            mapping[q] = f"s{self.n}"
            self.n += 1
        return mapping


def _max_color(aut: TreeAutomaton) -> int:
    return max(aut.acceptance[0].values())


def _least_odd_at_least(n: int) -> int:
    return n if n % 2 == 1 else n + 1


def _least_even_at_least(n: int) -> int:
    return n if n % 2 == 0 else n + 1


def _require_plain(aut: TreeAutomaton, op: str):
    if not aut.is_plain():
        raise AutomatonError(f"{op} requires plain parity acceptance")


# ---------------------------------------------------------------------------
# basic building blocks


def proj_automaton(x: str) -> TreeAutomaton:
    """Accepts exactly the one-node tree that is the exit ``x``."""
    return make_automaton(
        states=["s0"], initial=["s0"], rank=(0, 0), exits=[x],
        transitions={}, finals=[(x, "s0")], acceptance=[{"s0": 0}],
    )


def connective_automaton(op: str, left: str = "X", right: str = "Y") -> TreeAutomaton:
    """The finite tree languages interpreting the connectives.

    ``op`` is one of ``"cart"``, ``"par"``, ``"sum-left"``, ``"sum-right"``
    or ``"sum"`` (the disjoint union of the two sum variants).  For the
    products the single tree is a root (Even for ``*``, Odd for ``@``,
    priority 0) whose children are the exits; each sum variant keeps one
    live exit child and closes the other side with bot.
    """
    a = {}
    if op in ("cart", "par"):
        root_letter = game_letter("E" if op == "cart" else "O", 0)
        return make_automaton(
            states=["s0", "s1", "s2"], initial=["s0"], rank=(0, 0),
            exits=[left, right],
            transitions={(root_letter, 0, "s0"): ["s1"],
                         (root_letter, 1, "s0"): ["s2"]},
            finals=[(left, "s1"), (right, "s2")],
            acceptance=[{"s0": 0, "s1": 0, "s2": 0}],
        )
    if op in ("sum-left", "sum-right"):
        e0 = game_letter("E", 0)
        live_dir = 0 if op == "sum-left" else 1
        exit_name = left if op == "sum-left" else right
        return make_automaton(
            states=["s0", "s1", "s2"], initial=["s0"], rank=(0, 0),
            exits=[left, right],
            transitions={(e0, live_dir, "s0"): ["s1"],
                         (e0, 1 - live_dir, "s0"): ["s2"],
                         (BOT, 0, "s2"): ["s2"],
                         (BOT, 1, "s2"): ["s2"]},
            finals=[(exit_name, "s1")],
            acceptance=[{"s0": 0, "s1": 0, "s2": 0}],
        )
    if op == "sum":
        return _disjoint_union(connective_automaton("sum-left", left, right),
                               connective_automaton("sum-right", left, right))
    raise AutomatonError(f"unknown connective {op!r}")


def _disjoint_union(a: TreeAutomaton, b: TreeAutomaton) -> TreeAutomaton:
    _require_plain(a, "union")
    _require_plain(b, "union")
    names = _NameSource()
    ma, mb = names.batch(a), names.batch(b)
    ra, rb = _relabel(a, ma), _relabel(b, mb)
    return make_automaton(
        states=ra.states | rb.states,
        initial=ra.initial | rb.initial,
        rank=(min(a.rank[0], b.rank[0]), max(a.rank[1], b.rank[1])),
        exits=a.exits | b.exits,
        transitions={**ra.transitions, **rb.transitions},
        finals=ra.finals | rb.finals,
        acceptance=[{**ra.acceptance[0], **rb.acceptance[0]}],
    )


# ---------------------------------------------------------------------------
# language substitution and fixpoints


def substitute_language(a: TreeAutomaton, bindings: dict) -> TreeAutomaton:
    """Plug the language bound to each exit into the runs of ``a``.

    Wherever a run of ``a`` could stop at a bound exit, it may instead
    continue as a run of the bound automaton; unbound exits survive.
    """
    _require_plain(a, "substitute_language")
    for x in bindings:
        if x not in a.exits:
            raise AutomatonError(f"unknown exit key {x!r}")
        _require_plain(bindings[x], "substitute_language")

    names = _NameSource()
    a2 = _relabel(a, names.batch(a))
    bound = {}
    for x in sorted(bindings):
        bound[x] = _relabel(bindings[x], names.batch(bindings[x]))

    final_exits = {}
    for (x, q) in a2.finals:
        final_exits.setdefault(x, set()).add(q)

    transitions = dict(a2.transitions)
    for (letter, d, src), targets in a2.transitions.items():
        extra = set()
        for x, sub in bound.items():
            if targets & final_exits.get(x, set()):
                extra |= sub.initial
        if extra:
            transitions[(letter, d, src)] = targets | frozenset(extra)
    for sub in bound.values():
        transitions.update(sub.transitions)

    initial = set(a2.initial)
    for x, sub in bound.items():
        if a2.initial & final_exits.get(x, set()):
            initial |= sub.initial

    finals = {(x, q) for (x, q) in a2.finals if x not in bound}
    for sub in bound.values():
        finals |= sub.finals

    ranks = [a.rank] + [sub.rank for sub in bindings.values()]
    acceptance = dict(a2.acceptance[0])
    for sub in bound.values():
        acceptance.update(sub.acceptance[0])

    return make_automaton(
        states=a2.states | frozenset().union(*[sub.states for sub in bound.values()] or [frozenset()]),
        initial=initial,
        rank=(min(r[0] for r in ranks), max(r[1] for r in ranks)),
        exits=(a.exits - set(bound)) | frozenset().union(*[sub.exits for sub in bound.values()] or [frozenset()]),
        transitions=transitions,
        finals=finals,
        acceptance=[acceptance],
    )


def fixpoint_mu(a: TreeAutomaton, x: str) -> TreeAutomaton:
    """Least-fixpoint closure of the exit ``x``.

    Runs may restart at an initial state wherever they could have stopped
    at ``x``, but each restart passes through a fresh odd-priority copy of
    the initial state, so any branch restarting infinitely often is
    rejected.  (Raising the priorities of the original initial states
    in place would also reject runs that merely revisit them through
    ordinary loops, which changes the language; the copies keep the
    original states untouched.)
    """
    _require_plain(a, "fixpoint_mu")
    if x not in a.exits:
        raise AutomatonError(f"{x!r} is not an exit")

    restart_prio = _least_odd_at_least(_max_color(a))
    copies = {}
    n = 0
    for q in sorted(a.initial, key=_state_key):
        while f"r{n}" in a.states:
            n += 1
        copies[q] = f"r{n}"
        n += 1
    final_x = {q for (y, q) in a.finals if y == x}
    restart_targets = frozenset(copies.values())

    transitions = {}
    for (letter, d, src), targets in a.transitions.items():
        if targets & final_x:
            targets = targets | restart_targets
        transitions[(letter, d, src)] = targets
    for q, copy in copies.items():
        for (letter, d, src), targets in list(transitions.items()):
            if src == q:
                transitions[(letter, d, copy)] = targets

    colors = dict(a.acceptance[0])
    for copy in copies.values():
        colors[copy] = restart_prio

    finals = {(y, q) for (y, q) in a.finals if y != x}
    finals |= {(y, copies[q]) for (y, q) in a.finals if y != x and q in copies}

    return make_automaton(
        states=a.states | restart_targets,
        initial=a.initial,
        rank=a.rank,
        exits=a.exits - {x},
        transitions=transitions,
        finals=finals,
        acceptance=[colors],
    )


def fixpoint_gamma(a: TreeAutomaton, x: str, kind: str) -> TreeAutomaton:
    """Greatest-style fixpoint closure of the exit ``x``.

    ``kind`` is ``"zeta"`` or ``"nu"``.  A fresh root state reads a
    wrapper letter (Even, j) whose left child runs the body and whose
    right child is all-bot; wherever a run could stop at ``x`` it may
    instead loop back to the root, including immediately from an initial
    final configuration.  j is the even element of {k, k+1} for zeta and
    the odd one for nu, so the two fixpoints only differ in how the
    wrapper letter scores in the induced games.
    """
    _require_plain(a, "fixpoint_gamma")
    if x not in a.exits:
        raise AutomatonError(f"{x!r} is not an exit")
    if kind not in ("zeta", "nu"):
        raise AutomatonError(f"bad fixpoint kind {kind!r}")

    k = a.rank[1]
    if kind == "zeta":
        j = k if k % 2 == 0 else k + 1
    else:
        j = k if k % 2 == 1 else k + 1
    wrapper = game_letter("E", j)
    n = 0
    while f"g{n}" in a.states or f"g{n + 1}" in a.states:
        n += 2
    root, sink = f"g{n}", f"g{n + 1}"
    even = _least_even_at_least(_max_color(a))
    final_x = {q for (y, q) in a.finals if y == x}

    transitions = {}
    for (letter, d, src), targets in a.transitions.items():
        if targets & final_x:
            targets = targets | {root}
        transitions[(letter, d, src)] = targets
    root_targets = set(a.initial)
    if a.initial & final_x:
        root_targets.add(root)
    transitions[(wrapper, 0, root)] = frozenset(root_targets)
    transitions[(wrapper, 1, root)] = frozenset({sink})
    transitions[(BOT, 0, sink)] = frozenset({sink})
    transitions[(BOT, 1, sink)] = frozenset({sink})

    colors = dict(a.acceptance[0])
    colors[root] = even
    colors[sink] = even

    return make_automaton(
        states=a.states | {root, sink},
        initial=[root],
        rank=(a.rank[0], max(k, j)),
        exits=a.exits - {x},
        transitions=transitions,
        finals={(y, q) for (y, q) in a.finals if y != x},
        acceptance=[colors],
    )


def trim_automaton(aut: TreeAutomaton) -> TreeAutomaton:
    """Drop states unreachable from the initial set (language preserved)."""
    reach = set(aut.initial)
    frontier = list(sorted(aut.initial, key=_state_key))
    succ = {}
    for (letter, d, src), targets in aut.transitions.items():
        succ.setdefault(src, set()).update(targets)
    while frontier:
        q = frontier.pop()
        for t in sorted(succ.get(q, ()), key=_state_key):
            if t not in reach:
                reach.add(t)
                frontier.append(t)
    return make_automaton(
        states=reach,
        initial=aut.initial,
        rank=aut.rank,
        exits=aut.exits,
        transitions={key: targets & frozenset(reach)
                     for key, targets in aut.transitions.items()
                     if key[2] in reach and targets & frozenset(reach)},
        finals={(x, q) for (x, q) in aut.finals if q in reach},
        acceptance=[{q: c for q, c in cmap.items() if q in reach}
                    for cmap in aut.acceptance],
    )


def _canonical(aut: TreeAutomaton) -> TreeAutomaton:
    """Rename states to s0..sN in breadth-first order for stable output."""
    order = []
    seen = set()
    queue = list(sorted(aut.initial, key=_state_key))
    succ = {}
    for (letter, d, src) in sorted(aut.transitions, key=lambda k: (_state_key(k[2]), letter_key(k[0]), k[1])):
        succ.setdefault(src, []).extend(sorted(aut.transitions[(letter, d, src)], key=_state_key))
    for q in queue:
        if q not in seen:
            seen.add(q)
            order.append(q)
    idx = 0
    while idx < len(order):
        q = order[idx]
        idx += 1
        for t in succ.get(q, ()):
            if t not in seen:
                seen.add(t)
                order.append(t)
    for q in aut.sorted_states():
        if q not in seen:
            seen.add(q)
            order.append(q)
    mapping = {q: f"s{i}" for i, q in enumerate(order)}
    return _relabel(aut, mapping)


_LEFT = "<L>"
_RIGHT = "<R>"


def compile_expr(e: Expr) -> TreeAutomaton:
    """Compile an expression to an automaton whose language interprets it.

    The automaton's exits are exactly the free variables; closed
    expressions yield exitless automata with empty finals.  Acceptance is
    plain parity.
    """
    aut = _compile(e)
    return _canonical(trim_automaton(aut))


def _compile(e: Expr) -> TreeAutomaton:
    if isinstance(e, Var):
        return proj_automaton(e.name)
    if isinstance(e, Sum):
        shell = connective_automaton("sum", _LEFT, _RIGHT)
        return substitute_language(shell, {_LEFT: _compile(e.left),
                                           _RIGHT: _compile(e.right)})
    if isinstance(e, CartProd):
        shell = connective_automaton("cart", _LEFT, _RIGHT)
        return substitute_language(shell, {_LEFT: _compile(e.left),
                                           _RIGHT: _compile(e.right)})
    if isinstance(e, ParProd):
        shell = connective_automaton("par", _LEFT, _RIGHT)
        return substitute_language(shell, {_LEFT: _compile(e.left),
                                           _RIGHT: _compile(e.right)})
    if isinstance(e, BINDERS):
        body = _compile(e.body)
        if e.name not in body.exits:
            # vacuous binder: declare the exit so the construction applies
            # (no finals mention it, so no restart is ever wired in)
            body = make_automaton(body.states, body.initial, body.rank,
                                  body.exits | {e.name}, body.transitions,
                                  body.finals, body.acceptance)
        if isinstance(e, Mu):
            return trim_automaton(fixpoint_mu(body, e.name))
        kind = "zeta" if isinstance(e, Zeta) else "nu"
        return trim_automaton(fixpoint_gamma(body, e.name, kind))
    raise AutomatonError(f"cannot compile {e!r}")


# ---------------------------------------------------------------------------
# winner automata, products, priority surgery


def winner_automaton(player: str, rank: tuple) -> TreeAutomaton:
    """Accepts exactly the exitless game trees of the given rank in which
    ``player`` has a winning strategy.

    The automaton guesses the strategy: tracking states follow the chosen
    subtree (the state remembers which direction the strategy picks at
    the next node owned by ``player``, which couples the two children of
    a nondeterministic choice), an accept-all sink covers discarded
    children at the player's own nodes, and a bot-only sink covers the
    dead children at opponent nodes.  A tracked branch entering bot kills
    the run.  Tracking states score the priority of the letter just read
    (shifted by one for the odd player, so limsup-odd plays come out
    even), sinks score an even priority dominating everything.
    """
    if player not in ("E", "O"):
        raise AutomatonError(f"bad player {player!r}")
    i, k = rank
    if not (0 <= i <= k):
        raise AutomatonError(f"bad rank {rank}")

    def track(m, e):
        return f"t{m}d{e}"

    sink_any, sink_bot = "sa", "sb"
    states = [track(m, e) for m in range(i, k + 1) for e in (0, 1)]
    states += [sink_any, sink_bot]

    transitions = {}
    for p in ("E", "O"):
        for m in range(i, k + 1):
            letter = game_letter(p, m)
            follow = frozenset({track(m, 0), track(m, 1)})
            for src_m in range(i, k + 1):
                for e in (0, 1):
                    src = track(src_m, e)
                    if p == player:
                        transitions[(letter, e, src)] = follow
                        transitions[(letter, 1 - e, src)] = frozenset({sink_any})
                    else:
                        transitions[(letter, 0, src)] = follow | {sink_bot}
                        transitions[(letter, 1, src)] = follow | {sink_bot}
            for d in (0, 1):
                transitions[(letter, d, sink_any)] = frozenset({sink_any})
    for d in (0, 1):
        transitions[(BOT, d, sink_any)] = frozenset({sink_any})
        transitions[(BOT, d, sink_bot)] = frozenset({sink_bot})

    shift = 0 if player == "E" else 1
    colors = {track(m, e): m + shift for m in range(i, k + 1) for e in (0, 1)}
    sink_color = _least_even_at_least(k + shift)
    colors[sink_any] = sink_color
    colors[sink_bot] = sink_color

    return make_automaton(
        states=states,
        initial=[track(m, e) for m in range(i, k + 1) for e in (0, 1)],
        rank=rank, exits=[],
        transitions=transitions, finals=[],
        acceptance=[colors],
    )


def intersect(a: TreeAutomaton, b: TreeAutomaton) -> TreeAutomaton:
    """Product automaton for the intersection, restricted to reachable
    pairs.  Acceptance lists concatenate, so the result demands every
    condition of both operands on every branch."""
    pair_name = {}
    order = []

    def name(p, q):
        if (p, q) not in pair_name:
            pair_name[(p, q)] = f"p{len(pair_name)}"
            order.append((p, q))
        return pair_name[(p, q)]

    letters = sorted(set(a.letters()) | set(b.letters()), key=letter_key)
    queue = []
    for p in sorted(a.initial, key=_state_key):
        for q in sorted(b.initial, key=_state_key):
            queue.append((p, q))
            name(p, q)
    initial = [name(p, q) for (p, q) in queue]

    transitions = {}
    idx = 0
    while idx < len(order):
        p, q = order[idx]
        idx += 1
        src = name(p, q)
        for letter in letters:
            for d in (0, 1):
                ta = a.delta(letter, d, p)
                tb = b.delta(letter, d, q)
                if not ta or not tb:
                    continue
                targets = frozenset(
                    name(p2, q2)
                    for p2 in sorted(ta, key=_state_key)
                    for q2 in sorted(tb, key=_state_key))
                transitions[(letter, d, src)] = targets

    states = [name(p, q) for (p, q) in order]
    finals = set()
    fa = {}
    for (x, p) in a.finals:
        fa.setdefault(x, set()).add(p)
    fb = {}
    for (x, q) in b.finals:
        fb.setdefault(x, set()).add(q)
    for (p, q) in order:
        for x in fa:
            if p in fa[x] and q in fb.get(x, set()):
                finals.add((x, name(p, q)))

    acceptance = []
    for cmap in a.acceptance:
        acceptance.append({name(p, q): cmap[p] for (p, q) in order})
    for cmap in b.acceptance:
        acceptance.append({name(p, q): cmap[q] for (p, q) in order})

    return make_automaton(
        states=states, initial=initial,
        rank=(min(a.rank[0], b.rank[0]), max(a.rank[1], b.rank[1])),
        exits=a.exits | b.exits,
        transitions=transitions, finals=finals,
        acceptance=acceptance,
    )


def shift_priorities(a: TreeAutomaton, delta: int) -> TreeAutomaton:
    """Add an even ``delta`` to every letter priority and every acceptance
    priority; the language over the shifted alphabet is the relabelling of
    the original."""
    if delta % 2 != 0 or delta < 0:
        raise AutomatonError("priority shift must be an even natural")

    def shift_letter(letter):
        if letter.is_bot():
            return letter
        return game_letter(letter.player, letter.prio + delta)

    return make_automaton(
        states=a.states, initial=a.initial,
        rank=(a.rank[0] + delta, a.rank[1] + delta),
        exits=a.exits,
        transitions={(shift_letter(letter), d, src): targets
                     for (letter, d, src), targets in a.transitions.items()},
        finals=a.finals,
        acceptance=[{q: c + delta for q, c in cmap.items()} for cmap in a.acceptance],
    )


def compress_priorities(a: TreeAutomaton) -> TreeAutomaton:
    """Remap acceptance priorities onto a minimal contiguous range,
    keeping parity and the relative order of distinct parities; winners of
    the induced games are unchanged."""
    _require_plain(a, "compress_priorities")
    used = sorted(set(a.acceptance[0].values()))
    mapping = {}
    current = None
    for c in used:
        if current is None:
            current = c % 2
        elif c % 2 != current % 2:
            current += 1
        mapping[c] = current
    colors = {q: mapping[c] for q, c in a.acceptance[0].items()}
    return make_automaton(
        states=a.states, initial=a.initial, rank=a.rank, exits=a.exits,
        transitions=a.transitions, finals=a.finals, acceptance=[colors],
    )


def shape_automaton(a: TreeAutomaton) -> TreeAutomaton:
    """Collapse every game letter to (Even, 0): the automaton for the
    two-letter shape alphabet image of the language (live = (E,0),
    dead = bot)."""
    live = game_letter("E", 0)
    transitions = {}
    for (letter, d, src), targets in a.transitions.items():
        key = (BOT if letter.is_bot() else live, d, src)
        transitions[key] = transitions.get(key, frozenset()) | targets
    return make_automaton(
        states=a.states, initial=a.initial, rank=(0, 0), exits=a.exits,
        transitions=transitions, finals=a.finals, acceptance=a.acceptance,
    )


# ---------------------------------------------------------------------------
# JSON serialization


def _letter_to_json(letter: Letter):
    if letter.is_bot():
        return "bot"
    return {"player": letter.player, "prio": letter.prio}


def _letter_from_json(obj) -> Letter:
    if obj == "bot":
        return BOT
    if isinstance(obj, dict):
        _check_keys(obj, {"player", "prio"}, "letter")
        return game_letter(obj["player"], obj["prio"])
    raise AutomatonError(f"bad letter {obj!r}")


def _check_keys(obj: dict, allowed: set, what: str):
    unknown = set(obj) - allowed
    if unknown:
        raise AutomatonError(f"unknown field(s) in {what}: {', '.join(sorted(unknown))}")


def automaton_to_json(a: TreeAutomaton) -> dict:
    states = [{"id": q, "colors": list(a.colors(q))} for q in a.sorted_states()]
    transitions = [
        {"letter": _letter_to_json(letter), "dir": d, "from": src,
         "to": sorted(targets, key=_state_key)}
        for (letter, d, src), targets in sorted(
            a.transitions.items(),
            key=lambda kv: (_state_key(kv[0][2]), letter_key(kv[0][0]), kv[0][1]))
    ]
    finals = [{"exit": x, "state": q} for (x, q) in sorted(a.finals)]
    return {
        "rank": {"min": a.rank[0], "max": a.rank[1]},
        "exits": sorted(a.exits),
        "states": states,
        "initial": sorted(a.initial, key=_state_key),
        "transitions": transitions,
        "finals": finals,
    }


def automaton_from_json(obj: dict) -> TreeAutomaton:
    if not isinstance(obj, dict):
        raise AutomatonError("automaton JSON must be an object")
    _check_keys(obj, {"rank", "exits", "states", "initial", "transitions", "finals"},
                "automaton")
    for key in ("rank", "exits", "states", "initial", "transitions", "finals"):
        if key not in obj:
            raise AutomatonError(f"missing field {key!r}")
    _check_keys(obj["rank"], {"min", "max"}, "rank")
    rank = (obj["rank"]["min"], obj["rank"]["max"])
    states, acceptance_cols = [], {}
    arity = None
    for entry in obj["states"]:
        _check_keys(entry, {"id", "colors"}, "state")
        states.append(entry["id"])
        cols = entry["colors"]
        if arity is None:
            arity = len(cols)
        elif len(cols) != arity:
            raise AutomatonError("all states must carry the same number of colors")
        acceptance_cols[entry["id"]] = cols
    if arity in (None, 0):
        raise AutomatonError("states must carry at least one color")
    transitions = {}
    for entry in obj["transitions"]:
        _check_keys(entry, {"letter", "dir", "from", "to"}, "transition")
        key = (_letter_from_json(entry["letter"]), entry["dir"], entry["from"])
        transitions[key] = transitions.get(key, frozenset()) | frozenset(entry["to"])
    finals = []
    for entry in obj["finals"]:
        _check_keys(entry, {"exit", "state"}, "final")
        finals.append((entry["exit"], entry["state"]))
    acceptance = [{q: acceptance_cols[q][j] for q in states} for j in range(arity)]
    return make_automaton(
        states=states, initial=obj["initial"], rank=rank, exits=obj["exits"],
        transitions=transitions, finals=finals, acceptance=acceptance,
    )


def save_automaton(a: TreeAutomaton, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(automaton_to_json(a), fh, indent=1)
        fh.write("\n")


def load_automaton(path) -> TreeAutomaton:
    with open(path, encoding="utf-8") as fh:
        return automaton_from_json(json.load(fh))
