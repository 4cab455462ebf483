import json

import pytest

from zeta_arena.automaton import BOT, game_letter
from zeta_arena.games import EVE
from zeta_arena.regtree import (
    TreeError, TreeStrategy,
    validate, tree_violations, unfold, tree_to_arena,
    solve_tree, enumerate_strategies, check_strategy,
    relabel_shape, random_regular_tree,
    make_tree, minimize, isomorphic, spine_tree,
    tree_to_json, tree_from_json,
)

E0 = game_letter("E", 0)
E1 = game_letter("E", 1)


def test_validate_spine():
    assert validate(spine_tree(0))
    assert validate(spine_tree(1))


def test_validate_rejects_game_child_of_bot():
    t = make_tree("b", {"b": BOT, "g": E0, "bb": BOT},
                  {"b": ("g", "bb"), "g": ("bb", "bb"), "bb": ("bb", "bb")}, (0, 0))
    assert not validate(t)
    assert any("non-bot child" in p for p in tree_violations(t))


def test_validate_rejects_exit_with_children():
    t = make_tree("n0", {"n0": "X", "n1": BOT}, {"n0": ("n1", "n1"), "n1": ("n1", "n1")},
                  (0, 0))
    assert not validate(t)


def test_validate_rejects_letters_outside_rank():
    t = make_tree("n0", {"n0": game_letter("E", 5), "b": BOT},
                  {"n0": ("b", "b"), "b": ("b", "b")}, (0, 1))
    assert not validate(t)


def test_unfold_spine():
    bot = (BOT, None)
    got = unfold(spine_tree(0), 2)
    assert got == (E0, ((E0, ((E0, None), bot)), (BOT, (bot, bot))))
    assert unfold(spine_tree(0), 0) == (E0, None)


def test_unfold_requires_nothing_below_bot():
    t = random_regular_tree((0, 2), size=8, seed=11)

    def scan(node, below_bot):
        label, kids = node
        if below_bot:
            assert isinstance(label, type(BOT)) and label.is_bot()
        here_bot = not isinstance(label, str) and label.is_bot()
        if kids:
            for kid in kids:
                scan(kid, below_bot or here_bot)

    scan(unfold(t, 6), False)


def test_tree_to_arena_spines():
    arena = tree_to_arena(spine_tree(0))
    assert arena.owners == {"n0": EVE}
    assert arena.colors == {"n0": (0,)}
    assert arena.edges == {"n0": ("n0",)}
    arena = tree_to_arena(spine_tree(1))
    assert arena.colors == {"n0": (1,)}


def test_tree_to_arena_dead_end():
    t = make_tree("n0", {"n0": E0, "b": BOT}, {"n0": ("b", "b"), "b": ("b", "b")}, (0, 0))
    arena = tree_to_arena(t)
    assert arena.edges["n0"] == ()


def test_solve_tree_spines():
    winner, strat = solve_tree(spine_tree(0))
    assert winner == "E" and strat.choice == {"n0": 0}
    winner, strat = solve_tree(spine_tree(1))
    assert winner == "O" and strat is None


def test_solve_tree_bot_root_goes_to_odd():
    t = make_tree("b", {"b": BOT}, {"b": ("b", "b")}, (0, 0))
    assert solve_tree(t)[0] == "O"


def test_solve_tree_exit_root_goes_to_even():
    t = make_tree("n0", {"n0": "X"}, {}, (0, 0))
    assert solve_tree(t)[0] == "E"


def test_enumerate_spines():
    assert [s.choice for s in enumerate_strategies(spine_tree(0), 10)] == [{"n0": 0}]
    assert enumerate_strategies(spine_tree(1), 10) == []


def test_enumerate_guard():
    labels = {f"n{i}": E0 for i in range(17)}
    labels["b"] = BOT
    children = {f"n{i}": (f"n{(i + 1) % 17}", "b") for i in range(17)}
    children["b"] = ("b", "b")
    t = make_tree("n0", labels, children, (0, 0))
    with pytest.raises(TreeError):
        enumerate_strategies(t, 10)


def test_enumerate_agrees_with_solver():
    seed = 0
    checked = 0
    while checked < 60:
        seed += 1
        t = random_regular_tree((0, 2), size=1 + seed % 8, seed=seed)
        evens = [n for n, lab in t.labels.items()
                 if not isinstance(lab, str) and not lab.is_bot() and lab.player == "E"]
        if len(evens) > 16:
            continue
        checked += 1
        winner, _ = solve_tree(t)
        strategies = enumerate_strategies(t, 64)
        assert (winner == "E") == bool(strategies), seed
        for s in strategies:
            assert check_strategy(t, s), seed


def test_solver_strategy_passes_check():
    for seed in range(80):
        t = random_regular_tree((0, 3), size=1 + seed % 9, seed=1000 + seed)
        winner, strat = solve_tree(t)
        if winner == "E":
            assert check_strategy(t, strat), seed


def test_check_strategy_rejects_bot_move():
    assert not check_strategy(spine_tree(0), TreeStrategy({"n0": 1}))


def test_check_strategy_rejects_odd_cycle():
    assert not check_strategy(spine_tree(1), TreeStrategy({"n0": 0}))


def test_relabel_shape():
    shaped = relabel_shape(spine_tree(1))
    assert isomorphic(shaped, spine_tree(0))
    assert isomorphic(relabel_shape(spine_tree(0)), relabel_shape(spine_tree(1)))


def test_random_tree_determinism_and_validity():
    for seed in range(200):
        t = random_regular_tree((0, 1), size=1 + seed % 10, seed=seed)
        assert validate(t), seed
    a = random_regular_tree((0, 3), size=9, seed=77)
    b = random_regular_tree((0, 3), size=9, seed=77)
    assert a == b


def test_random_tree_size_one_varieties():
    kinds = set()
    for seed in range(40):
        t = random_regular_tree((0, 1), size=1, exits=("X",), seed=seed)
        label = t.labels[t.root]
        if isinstance(label, str):
            kinds.add("exit")
        elif label.is_bot():
            kinds.add("bot")
        else:
            kinds.add("loop")
    assert kinds == {"exit", "bot", "loop"}


def test_minimize_merges_duplicate_spines():
    t = make_tree("a",
                  {"a": E0, "b": E0, "x": BOT, "y": BOT},
                  {"a": ("b", "x"), "b": ("a", "y"), "x": ("x", "x"), "y": ("y", "y")},
                  (0, 0))
    m = minimize(t)
    assert len(m.labels) == 2
    assert isomorphic(m, spine_tree(0))


def test_isomorphic_distinguishes_priorities():
    assert not isomorphic(spine_tree(0), spine_tree(1))


def test_json_round_trip():
    for seed in range(30):
        t = random_regular_tree((0, 2), size=1 + seed % 7, exits=("X",), seed=seed)
        again = tree_from_json(json.loads(json.dumps(tree_to_json(t))))
        assert isomorphic(again, t), seed


def test_json_rejects_unknown_fields():
    payload = tree_to_json(spine_tree(0))
    payload["extra"] = 1
    with pytest.raises(TreeError):
        tree_from_json(payload)


def test_json_children_exactly_for_letters():
    payload = {"rank": {"min": 0, "max": 0}, "root": "n0",
               "nodes": [{"id": "n0", "label": {"exit": "X"}, "children": ["n0", "n0"]}]}
    with pytest.raises(TreeError):
        tree_from_json(payload)
    payload = {"rank": {"min": 0, "max": 0}, "root": "n0",
               "nodes": [{"id": "n0", "label": "bot"}]}
    with pytest.raises(TreeError):
        tree_from_json(payload)
