import pytest

from zeta_arena.games import (
    EVE, ADAM, Strategy, make_arena,
    solve_parity, solve_conjunction, verify_strategy, strategy_violations,
)
from zeta_arena.oracle import brute_solve_parity, brute_solve_conjunction, random_arena


def loop(color, owner=EVE):
    return make_arena({"p": owner}, {"p": (color,)}, {"p": ("p",)})


def test_self_loop_color_zero_is_eve_win():
    regions, eve, _ = solve_parity(loop(0))
    assert regions[EVE] == {"p"}
    assert verify_strategy(loop(0), eve, starts=["p"])


def test_self_loop_color_one_is_adam_win():
    regions, _, adam = solve_parity(loop(1))
    assert regions[ADAM] == {"p"}
    assert verify_strategy(loop(1), adam, starts=["p"])


def test_forced_two_cycle_colors_one_two():
    arena = make_arena({"a": EVE, "b": ADAM}, {"a": (1,), "b": (2,)},
                       {"a": ("b",), "b": ("a",)})
    regions, eve, _ = solve_parity(arena)
    assert regions[EVE] == {"a", "b"}
    assert verify_strategy(arena, eve)


def test_dead_end_loses_for_owner():
    arena = make_arena({"a": EVE, "b": ADAM}, {"a": (0,), "b": (0,)},
                       {"a": (), "b": ()})
    regions, _, _ = solve_parity(arena)
    assert regions[ADAM] == {"a"}
    assert regions[EVE] == {"b"}


def test_rejects_mixed_color_widths():
    with pytest.raises(ValueError):
        make_arena({"a": EVE, "b": EVE}, {"a": (0,), "b": (0, 1)},
                   {"a": ("b",), "b": ("a",)})


def test_solve_parity_rejects_vectors():
    arena = make_arena({"a": EVE}, {"a": (0, 0)}, {"a": ("a",)})
    with pytest.raises(ValueError):
        solve_parity(arena)


def test_conjunction_single_dimension_delegates():
    arena = make_arena({"a": EVE, "b": ADAM}, {"a": (1,), "b": (2,)},
                       {"a": ("b",), "b": ("a",)})
    assert solve_conjunction(arena)[0] == solve_parity(arena)[0]


def test_conjunction_forced_cycle_zero_one():
    arena = make_arena({"a": EVE, "b": ADAM}, {"a": (0, 1), "b": (0, 1)},
                       {"a": ("b",), "b": ("a",)})
    regions, _, adam = solve_conjunction(arena)
    assert regions[ADAM] == {"a", "b"}
    assert verify_strategy(arena, adam)


def test_conjunction_needs_alternation():
    # each pure cycle is bad in one dimension; alternating both is good
    arena = make_arena(
        {"s": EVE, "u": ADAM, "v": ADAM},
        {"s": (0, 0), "u": (1, 2), "v": (2, 1)},
        {"s": ("u", "v"), "u": ("s",), "v": ("s",)})
    regions, eve, _ = solve_conjunction(arena)
    assert regions[EVE] == {"s", "u", "v"}
    assert regions == brute_solve_conjunction(arena)
    assert verify_strategy(arena, eve)
    # no positional strategy works here, so the memory is doing real work
    for target in ("u", "v"):
        positional = Strategy(EVE, choice={("s", None): target})
        assert not verify_strategy(arena, positional, starts=["s"])


def test_verify_rejects_undefined_moves():
    arena = make_arena({"a": EVE, "b": EVE}, {"a": (0,), "b": (0,)},
                       {"a": ("b",), "b": ("a",)})
    violations = strategy_violations(arena, Strategy(EVE), starts=["a"])
    assert violations and "no move" in violations[0]


def test_verify_rejects_bad_cycle():
    arena = loop(1)
    s = Strategy(EVE, choice={("p", None): "p"})
    assert not verify_strategy(arena, s, starts=["p"])


def test_verify_accepts_dead_end_free_cycle_mix():
    # strategy reaching only an Adam dead end wins vacuously
    arena = make_arena({"a": EVE, "b": ADAM}, {"a": (1,), "b": (1,)},
                       {"a": ("b",), "b": ()})
    s = Strategy(EVE, choice={("a", None): "b"})
    assert verify_strategy(arena, s, starts=["a"])


def test_parity_agrees_with_brute_on_random_arenas():
    for seed in range(150):
        arena = random_arena(size=2 + seed % 7, max_color=seed % 4, seed=seed)
        regions, eve, adam = solve_parity(arena)
        assert regions == brute_solve_parity(arena), seed
        assert verify_strategy(arena, eve, starts=regions[EVE]), seed
        assert verify_strategy(arena, adam, starts=regions[ADAM]), seed


def test_conjunction_agrees_with_brute_on_random_arenas():
    for seed in range(80):
        arena = random_arena(size=2 + seed % 5, max_color=2 + seed % 2,
                             dims=2, seed=900 + seed)
        regions, eve, adam = solve_conjunction(arena)
        assert regions == brute_solve_conjunction(arena), seed
        assert verify_strategy(arena, eve, starts=regions[EVE]), seed
        assert verify_strategy(arena, adam, starts=regions[ADAM]), seed


def test_regions_partition():
    for seed in range(100):
        arena = random_arena(size=1 + seed % 8, max_color=seed % 4, seed=3000 + seed)
        regions, _, _ = solve_parity(arena)
        assert regions[EVE] | regions[ADAM] == set(arena.owners)
        assert not regions[EVE] & regions[ADAM]


def _dualize(arena):
    owners = {p: (ADAM if o == EVE else EVE) for p, o in arena.owners.items()}
    colors = {p: tuple(x + 1 for x in c) for p, c in arena.colors.items()}
    return make_arena(owners, colors, arena.edges)


def test_dualization_swaps_regions():
    # the parity objective is self-dual; a conjunction is not (its dual is
    # a disjunction), so this only makes sense for one dimension
    for seed in range(60):
        arena = random_arena(size=2 + seed % 6, max_color=seed % 3, seed=7000 + seed)
        regions, _, _ = solve_parity(arena)
        swapped, _, _ = solve_parity(_dualize(arena))
        assert regions[EVE] == swapped[ADAM], seed
        assert regions[ADAM] == swapped[EVE], seed


def test_solvers_are_deterministic():
    arena = random_arena(size=7, max_color=3, seed=42)
    first = solve_parity(arena)
    second = solve_parity(arena)
    assert first[0] == second[0]
    assert first[1].choice == second[1].choice
    assert first[2].choice == second[2].choice
