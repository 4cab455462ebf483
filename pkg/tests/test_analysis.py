import pytest

from zeta_arena.analysis import (
    ClassLabel, is_empty, witness, member, answerable_automaton, classify,
)
from zeta_arena.automaton import (
    AutomatonError, compile_expr, proj_automaton, winner_automaton, game_letter, BOT,
)
from zeta_arena.expr import parse, figure_catalog
from zeta_arena.regtree import (
    make_tree, spine_tree, isomorphic, solve_tree, validate,
    random_regular_tree, TreeError,
)


def test_is_empty_goldens():
    assert is_empty(compile_expr(parse("mu X. X")))
    assert not is_empty(compile_expr(parse("zeta X. X")))
    assert not is_empty(proj_automaton("X"))


def test_witness_goldens():
    assert isomorphic(witness(compile_expr(parse("zeta X. X"))), spine_tree(0))
    assert isomorphic(witness(compile_expr(parse("nu X. X"))), spine_tree(1))
    a = compile_expr(parse("zeta X. 1 + X * X"))
    w = witness(a)
    assert validate(w)
    assert member(w, a)


def test_witness_of_empty_language_errors():
    with pytest.raises(AutomatonError):
        witness(compile_expr(parse("mu X. X")))


def test_member_goldens():
    z = compile_expr(parse("zeta X. X"))
    assert member(spine_tree(0), z)
    assert not member(spine_tree(1), z)
    assert member(make_tree("n0", {"n0": "X"}, {}, (0, 0)), proj_automaton("X"))


def test_member_rejects_unknown_exits():
    t = make_tree("n0", {"n0": "Z"}, {}, (0, 0))
    with pytest.raises(TreeError):
        member(t, proj_automaton("X"))


def test_member_enters_bot_children():
    # a bot node is entered like any other; survival depends on the
    # automaton having bot transitions there
    t = make_tree("n0", {"n0": game_letter("E", 0), "b": BOT},
                  {"n0": ("b", "b"), "b": ("b", "b")}, (0, 0))
    z = compile_expr(parse("zeta X. X"))
    assert not member(t, z)


def test_answerable_examples():
    assert not is_empty(answerable_automaton(parse("zeta X. X")))
    assert isomorphic(witness(answerable_automaton(parse("zeta X. X"))), spine_tree(0))
    assert is_empty(answerable_automaton(parse("nu X. X")))
    assert is_empty(answerable_automaton(parse("mu X. X")))


def test_answerable_requires_closed():
    with pytest.raises(ValueError):
        answerable_automaton(parse("zeta X. X + Y"))
    with pytest.raises(ValueError):
        classify(parse("X + Y"))


def test_answerable_coherence_sampled():
    e = parse("zeta X. X + 1")
    ans = answerable_automaton(e)
    a = compile_expr(e)
    for seed in range(40):
        t = random_regular_tree(a.rank, size=1 + seed % 8, seed=seed)
        expected = member(t, a) and solve_tree(t)[0] == "E"
        assert member(t, ans) == expected, seed


def test_classify_goldens():
    assert classify(parse("mu X. X")).kind == "EMPTY"
    pointed = classify(parse("zeta X. X"))
    assert pointed.kind == "POINTED"
    assert pointed.rank_bound == (0, 0)
    assert solve_tree(pointed.in_l)[0] == "E"
    top = classify(parse("nu X. X"))
    assert top.kind == "TOP"
    assert solve_tree(top.in_l_minus_w)[0] == "O"


def test_classify_wkl():
    label = classify(parse("zeta X. 1 + X * X"))
    assert label.kind == "TOP"
    a = compile_expr(parse("zeta X. 1 + X * X"))
    assert member(label.in_l, a)
    assert member(label.in_l_minus_w, a)
    assert solve_tree(label.in_l_minus_w)[0] == "O"


def test_classify_pointed_witness_sampling():
    # all members of the unit language are even-won
    label = classify(parse("zeta X. X"))
    assert solve_tree(label.in_l)[0] == "E"


def test_class_label_invariants():
    with pytest.raises(ValueError):
        ClassLabel("EMPTY", in_l=spine_tree(0))
    with pytest.raises(ValueError):
        ClassLabel("POINTED")
    with pytest.raises(ValueError):
        ClassLabel("TOP", in_l=spine_tree(0))
    with pytest.raises(ValueError):
        ClassLabel("WEIRD")


def test_classify_never_leaves_the_three_labels():
    for name, e in figure_catalog().items():
        assert classify(e).kind in ("EMPTY", "POINTED", "TOP"), name


def test_witnesses_are_members_everywhere():
    for src in ("zeta X. X", "nu X. X", "zeta X. X + 1", "zeta X. nu Y. Y + X"):
        a = compile_expr(parse(src))
        if is_empty(a):
            continue
        w = witness(a)
        assert validate(w), src
        assert member(w, a), src
