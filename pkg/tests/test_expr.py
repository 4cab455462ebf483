import pytest

from zeta_arena.expr import (
    Var, Mu, Zeta, Nu, Sum, CartProd, ParProd,
    ParseError, UnboundVariableError,
    parse, unparse, free_vars, base, dual, substitute,
    alpha_equal, figure_catalog, catalog_sources,
)
from zeta_arena.oracle import random_expr


def test_parse_smallest_binder():
    assert parse("mu X. X") == Mu("X", Var("X"))


def test_parse_rt_row_factor():
    assert parse("zeta X. nu Y. Y + X") == Zeta("X", Nu("Y", Sum(Var("Y"), Var("X"))))


def test_parse_hat_tilde_macro_expansion():
    e = parse("hat(tilde(X))")
    expected = Zeta("F1", ParProd(Nu("F2", CartProd(Var("X"), Var("F2"))), Var("F1")))
    assert e == expected


def test_parse_missing_body_is_an_error():
    with pytest.raises(ParseError):
        parse("mu X")


def test_parse_error_positions():
    with pytest.raises(ParseError) as err:
        parse("mu X. (X")
    assert err.value.position == 8


def test_parse_rejects_trailing_tokens():
    with pytest.raises(ParseError):
        parse("X Y")


def test_closedness_check():
    parse("zeta X. X", free=())
    with pytest.raises(UnboundVariableError):
        parse("zeta X. X + Y", free=())
    parse("zeta X. X + Y", free=("Y",))


def test_macro_table():
    f = parse("0")
    assert isinstance(f, Mu) and f.body == Var(f.name)
    f = parse("T")
    assert isinstance(f, Zeta) and f.body == Var(f.name)
    f = parse("1")
    assert isinstance(f, Nu) and f.body == Var(f.name)


def test_macro_equations_up_to_alpha():
    assert alpha_equal(parse("star(Z)"), parse("mu X. T + Z @ X"))
    assert alpha_equal(parse("hat(Z)"), parse("zeta X. Z @ X"))
    assert alpha_equal(parse("tilde(Z)"), parse("nu X. Z * X"))


def test_alpha_renaming_makes_binders_distinct():
    e = parse("(mu X. X) + (mu X. X)")
    assert isinstance(e, Sum)
    assert e.left.name != e.right.name
    e = parse("mu X. mu X. X")
    assert e.name != e.body.name
    # the inner occurrence binds to the inner binder
    assert e.body.body == Var(e.body.name)


def test_print_precedence():
    assert unparse(Mu("X", Var("X"))) == "mu X. X"
    assert unparse(Sum(Var("X"), CartProd(Var("Y"), Var("Z")))) == "X + Y * Z"
    assert unparse(Zeta("X", ParProd(Var("X"), Var("X")))) == "zeta X. X @ X"
    assert unparse(Sum(Mu("X", Var("X")), Var("Y"))) == "(mu X. X) + Y"
    assert unparse(CartProd(Var("X"), Sum(Var("Y"), Var("Z")))) == "X * (Y + Z)"
    assert unparse(Sum(Var("X"), Sum(Var("Y"), Var("Z")))) == "X + (Y + Z)"
    assert unparse(CartProd(ParProd(Var("X"), Var("Y")), Var("Z"))) == "X @ Y * Z"
    assert unparse(CartProd(Var("X"), ParProd(Var("Y"), Var("Z")))) == "X * (Y @ Z)"


def test_free_vars():
    assert free_vars(Var("X")) == {"X"}
    assert free_vars(parse("mu X. X")) == frozenset()
    assert free_vars(parse("zeta X. X + Y")) == {"Y"}


def test_base_table():
    assert base(Zeta("X", ParProd(Var("X"), Var("X")))) == Nu("X", CartProd(Var("X"), Var("X")))
    assert base(Var("X")) == Var("X")
    e = parse("zeta X. tilde(X + 1)")
    assert base(base(e)) == base(e)


def test_dual_table():
    # zeta X. X + 1 dualizes to nu X. X + T
    assert alpha_equal(dual(parse("zeta X. X + 1")), parse("nu X. X + T"))
    assert dual(ParProd(Var("X"), Var("Y"))) == CartProd(Var("X"), Var("Y"))


def test_dual_base_interaction():
    for seed in range(50):
        e = random_expr(depth=1 + seed % 5, vars=("A", "B"), seed=seed)
        assert base(dual(e)) == base(e)
        assert free_vars(base(e)) == free_vars(e)
        assert free_vars(dual(e)) == free_vars(e)


def test_substitute():
    assert substitute(Var("X"), "X", Mu("Y", Var("Y"))) == Mu("Y", Var("Y"))
    assert substitute(Mu("X", Var("X")), "X", Var("Z")) == Mu("X", Var("X"))
    got = substitute(Zeta("Y", Var("X")), "X", Var("Y"))
    assert isinstance(got, Zeta)
    assert got.name != "Y" and got.body == Var("Y")


def test_substitute_leaves_other_vars():
    e = parse("zeta X. X + Y")
    got = substitute(e, "Y", parse("mu Z. Z"))
    assert free_vars(got) == frozenset()


def test_figure_catalog():
    catalog = figure_catalog()
    assert len(catalog) == 15
    assert alpha_equal(catalog["LPO"], parse("(nu X. X + T) * (zeta X. X + 1)"))
    assert alpha_equal(catalog["WKL"], parse("zeta X. 1 + X * X"))
    assert alpha_equal(catalog["zero"], parse("mu X. X"))
    for name, e in catalog.items():
        assert free_vars(e) == frozenset(), name


def test_catalog_sources_parse_to_catalog():
    catalog = figure_catalog()
    for name, src in catalog_sources().items():
        assert alpha_equal(parse(src), catalog[name])


def test_round_trip_on_random_expressions():
    for seed in range(300):
        e = random_expr(depth=1 + seed % 6, vars=("A", "B"), seed=seed)
        again = parse(unparse(e))
        assert alpha_equal(again, e), unparse(e)


def test_dual_involution_on_random_expressions():
    for seed in range(300):
        e = random_expr(depth=1 + seed % 6, vars=("A",), seed=seed)
        assert dual(dual(e)) == e
