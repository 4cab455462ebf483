"""Fixpoint expressions over +, *, @ with the binders mu, zeta and nu.

Surface grammar (ASCII, whitespace insignificant)::

    expr   := binder | sum
    binder := ("mu" | "nu" | "zeta") IDENT "." expr
    sum    := prod ("+" prod)*
    prod   := atom (("*" | "@") atom)*
    atom   := IDENT | "0" | "T" | "1" | "(" expr ")"
            | ("hat" | "tilde" | "star" | "dual" | "base") "(" expr ")"

``*`` is the cartesian product, ``@`` the parallel product.  The atoms
``0``, ``T`` and ``1`` abbreviate ``mu X. X``, ``zeta X. X`` and
``nu X. X``; ``star(E)``, ``hat(E)`` and ``tilde(E)`` abbreviate
``mu X. T + E @ X``, ``zeta X. E @ X`` and ``nu X. E * X`` with a fresh
``X``.  All six are expanded during parsing, so a parsed expression only
uses the seven core constructors.  ``dual(E)`` and ``base(E)`` apply the
corresponding syntactic transforms at parse time.

Parsing alpha-renames binders so that binder names are pairwise distinct
within one expression; generated names are ``F1``, ``F2``, ...  Binders
bind weakest, then ``+``, then ``*`` and ``@`` (equal precedence,
left-associative).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "Expr", "Var", "Mu", "Zeta", "Nu", "Sum", "CartProd", "ParProd",
    "ParseError", "UnboundVariableError",
    "parse", "unparse", "free_vars", "base", "dual", "substitute",
    "alpha_equal", "figure_catalog", "catalog_sources",
]


@dataclass(frozen=True)
class Expr:
    """Base class for expression nodes."""


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Mu(Expr):
    name: str
    body: Expr


@dataclass(frozen=True)
class Zeta(Expr):
    name: str
    body: Expr


@dataclass(frozen=True)
class Nu(Expr):
    name: str
    body: Expr


@dataclass(frozen=True)
class Sum(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class CartProd(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class ParProd(Expr):
    left: Expr
    right: Expr


BINDERS = (Mu, Zeta, Nu)
BINARY = (Sum, CartProd, ParProd)

_BINDER_KEYWORD = {Mu: "mu", Zeta: "zeta", Nu: "nu"}
_MACRO_KEYWORDS = ("hat", "tilde", "star", "dual", "base")
KEYWORDS = frozenset(_BINDER_KEYWORD.values()) | frozenset(_MACRO_KEYWORDS) | {"T"}


class ParseError(ValueError):
    """Syntax error, carrying the 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnboundVariableError(ValueError):
    """A variable occurs free although the caller declared it bound."""


class _FreshNames:
    """Generator of F1, F2, ... skipping a set of reserved names."""

    def __init__(self, avoid):
        self.avoid = set(avoid)
        self.counter = 0

    def take(self) -> str:
        while True:
            self.counter += 1
            name = f"F{self.counter}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


_TOKEN_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*|[0-9]+|[+*@().]|\S")


def _tokenize(text: str):
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        value = m.group(0)
        if re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", value):
            kind = "kw" if value in KEYWORDS else "ident"
        elif value.isdigit():
            kind = "num"
        elif value in "+*@().":
            kind = "sym"
        else:
            raise ParseError(f"unexpected character {value!r}", m.start())
        tokens.append((kind, value, m.start()))
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, fresh: _FreshNames):
        self.tokens = tokens
        self.pos = 0
        self.fresh = fresh

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value):
        kind, got, at = self.next()
        if got != value:
            raise ParseError(f"expected {value!r}, found {got!r}" if got else f"expected {value!r}", at)

    def parse_expr(self) -> Expr:
        kind, value, _ = self.peek()
        if value in ("mu", "nu", "zeta"):
            self.next()
            ikind, name, iat = self.next()
            if ikind != "ident":
                raise ParseError("expected a variable name after binder", iat)
            self.expect(".")
            body = self.parse_expr()
            cls = {"mu": Mu, "nu": Nu, "zeta": Zeta}[value]
            return cls(name, body)
        return self.parse_sum()

    def parse_sum(self) -> Expr:
        e = self.parse_prod()
        while self.peek()[1] == "+":
            self.next()
            e = Sum(e, self.parse_prod())
        return e

    def parse_prod(self) -> Expr:
        e = self.parse_atom()
        while self.peek()[1] in ("*", "@"):
            _, op, _ = self.next()
            rhs = self.parse_atom()
            e = CartProd(e, rhs) if op == "*" else ParProd(e, rhs)
        return e

    def parse_atom(self) -> Expr:
        kind, value, at = self.next()
        if kind == "ident":
            return Var(value)
        if kind == "num":
            if value == "0":
                f = self.fresh.take()
                return Mu(f, Var(f))
            if value == "1":
                f = self.fresh.take()
                return Nu(f, Var(f))
            raise ParseError(f"unexpected number {value!r}", at)
        if value == "T":
            f = self.fresh.take()
            return Zeta(f, Var(f))
        if value == "(":
            e = self.parse_expr()
            self.expect(")")
            return e
        if value in _MACRO_KEYWORDS:
            # Fresh names are allocated before the argument is parsed, so
            # nested macros number their binders outermost-first.
            if value == "hat":
                f = self.fresh.take()
                inner = self._parse_paren_arg()
                return Zeta(f, ParProd(inner, Var(f)))
            if value == "tilde":
                f = self.fresh.take()
                inner = self._parse_paren_arg()
                return Nu(f, CartProd(inner, Var(f)))
            if value == "star":
                f = self.fresh.take()
                ft = self.fresh.take()
                inner = self._parse_paren_arg()
                return Mu(f, Sum(Zeta(ft, Var(ft)), ParProd(inner, Var(f))))
            if value == "dual":
                return dual(self._parse_paren_arg())
            if value == "base":
                return base(self._parse_paren_arg())
        raise ParseError(f"unexpected token {value!r}" if value else "unexpected end of input", at)

    def _parse_paren_arg(self) -> Expr:
        self.expect("(")
        e = self.parse_expr()
        self.expect(")")
        return e


def _alpha_unique(e: Expr, fresh: _FreshNames) -> Expr:
    """Rename binders so no two binders in the expression share a name."""
    seen: set[str] = set()

    def walk(e: Expr, env: dict) -> Expr:
        if isinstance(e, Var):
            return Var(env.get(e.name, e.name))
        if isinstance(e, BINDERS):
            name = fresh.take() if e.name in seen else e.name
            seen.add(name)
            return type(e)(name, walk(e.body, {**env, e.name: name}))
        return type(e)(walk(e.left, env), walk(e.right, env))

    return walk(e, {})


def parse(text: str, free=None) -> Expr:
    """Parse ``text`` into a normalized expression.

    ``free`` is an optional collection of variable names the caller
    permits to occur free; pass ``()`` to require a closed expression.
    With ``free=None`` (the default) no check is performed.
    """
    tokens = _tokenize(text)
    idents = {v for k, v, _ in tokens if k == "ident"}
    fresh = _FreshNames(idents)
    parser = _Parser(tokens, fresh)
    e = parser.parse_expr()
    kind, value, at = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing token {value!r}", at)
    e = _alpha_unique(e, fresh)
    if free is not None:
        extra = free_vars(e) - set(free)
        if extra:
            raise UnboundVariableError(
                f"unbound variable(s): {', '.join(sorted(extra))}")
    return e


# Precedence levels used by the printer: binder < sum < prod < atom.
_LVL_BINDER, _LVL_SUM, _LVL_PROD, _LVL_ATOM = 0, 1, 2, 3


def unparse(e: Expr) -> str:
    """Render ``e`` in the surface syntax; ``parse(unparse(e))`` is
    alpha-equal to ``e`` (structurally equal when ``e`` came from
    ``parse``)."""
    return _unparse(e, _LVL_BINDER)


def _unparse(e: Expr, context: int) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, BINDERS):
        s = f"{_BINDER_KEYWORD[type(e)]} {e.name}. {_unparse(e.body, _LVL_BINDER)}"
        level = _LVL_BINDER
    elif isinstance(e, Sum):
        s = f"{_unparse(e.left, _LVL_SUM)} + {_unparse(e.right, _LVL_PROD)}"
        level = _LVL_SUM
    else:
        op = "*" if isinstance(e, CartProd) else "@"
        s = f"{_unparse(e.left, _LVL_PROD)} {op} {_unparse(e.right, _LVL_ATOM)}"
        level = _LVL_PROD
    return f"({s})" if level < context else s


def free_vars(e: Expr) -> frozenset:
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, BINDERS):
        return free_vars(e.body) - {e.name}
    return free_vars(e.left) | free_vars(e.right)


def _all_names(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, BINDERS):
        return {e.name} | _all_names(e.body)
    return _all_names(e.left) | _all_names(e.right)


def base(e: Expr) -> Expr:
    """Collapse to the product-only fragment: zeta becomes nu and @
    becomes *; everything else is preserved.  Idempotent."""
    if isinstance(e, Var):
        return e
    if isinstance(e, Zeta):
        return Nu(e.name, base(e.body))
    if isinstance(e, BINDERS):
        return type(e)(e.name, base(e.body))
    if isinstance(e, ParProd):
        return CartProd(base(e.left), base(e.right))
    return type(e)(base(e.left), base(e.right))


def dual(e: Expr) -> Expr:
    """Swap the two products and the two greatest-fixpoint binders:
    * <-> @, zeta <-> nu; mu, + and variables are fixed.  An involution."""
    if isinstance(e, Var):
        return e
    if isinstance(e, Mu):
        return Mu(e.name, dual(e.body))
    if isinstance(e, Zeta):
        return Nu(e.name, dual(e.body))
    if isinstance(e, Nu):
        return Zeta(e.name, dual(e.body))
    if isinstance(e, Sum):
        return Sum(dual(e.left), dual(e.right))
    if isinstance(e, CartProd):
        return ParProd(dual(e.left), dual(e.right))
    return CartProd(dual(e.left), dual(e.right))


def substitute(e: Expr, x: str, f: Expr) -> Expr:
    """Capture-avoiding replacement of the free occurrences of ``x`` in
    ``e`` by ``f``."""
    fv_f = free_vars(f)
    fresh = _FreshNames(_all_names(e) | _all_names(f) | {x})

    def go(e: Expr) -> Expr:
        if isinstance(e, Var):
            return f if e.name == x else e
        if isinstance(e, BINDERS):
            if e.name == x:
                return e
            if e.name in fv_f and x in free_vars(e.body):
                new = fresh.take()
                body = go(_rename_free(e.body, e.name, new))
                return type(e)(new, body)
            return type(e)(e.name, go(e.body))
        return type(e)(go(e.left), go(e.right))

    return go(e)


def _rename_free(e: Expr, old: str, new: str) -> Expr:
    if isinstance(e, Var):
        return Var(new) if e.name == old else e
    if isinstance(e, BINDERS):
        if e.name == old:
            return e
        return type(e)(e.name, _rename_free(e.body, old, new))
    return type(e)(_rename_free(e.left, old, new), _rename_free(e.right, old, new))


def alpha_equal(a: Expr, b: Expr) -> bool:
    """Structural equality up to consistent renaming of bound variables."""

    def go(a, b, env_a, env_b, depth):
        if type(a) is not type(b):
            return False
        if isinstance(a, Var):
            return env_a.get(a.name, a.name) == env_b.get(b.name, b.name)
        if isinstance(a, BINDERS):
            return go(a.body, b.body,
                      {**env_a, a.name: depth}, {**env_b, b.name: depth},
                      depth + 1)
        return (go(a.left, b.left, env_a, env_b, depth)
                and go(a.right, b.right, env_a, env_b, depth))

    return go(a, b, {}, {}, 0)


# The named problem catalog.  Rows parameterized by k are instantiated at
# k = 1 (hence C_1, RT1_1 and WS_Sigma02_2).
_CATALOG_SOURCES = {
    "WS_Sigma02_2": "zeta X2. nu X1. zeta X0. hat(tilde(X0 + X1 + X2))",
    "WS_Delta02": "mu Z. zeta X. hat(tilde(X)) + (nu Y. hat(tilde(Y)) + Z)",
    "sTC_Baire": "(nu X. hat(X + T)) * (zeta X. tilde(X + 1))",
    "C_Baire": "zeta X. tilde(X + 1)",
    "WS_Delta01": "mu X. hat(tilde(X)) + T + 1",
    "KL": "zeta X. (nu Y. X + Y) * (nu Y. X + Y)",
    "lim": "hat((nu X. X + T) * (zeta X. X + 1))",
    "WKL": "zeta X. 1 + X * X",
    "RT1_1": "zeta X. nu Y. Y + X",
    "LPO_prime": "(nu X. zeta Y. X + Y) * (zeta X. nu Y. X + Y)",
    "C_N": "tilde(zeta X. X + 1)",
    "LPO": "(nu X. X + T) * (zeta X. X + 1)",
    "C_1": "zeta X. X + 1",
    "top": "zeta X. X",
    "zero": "mu X. X",
}


def catalog_sources() -> dict:
    """Surface-syntax sources of the named problem catalog."""
    return dict(_CATALOG_SOURCES)


def figure_catalog() -> dict:
    """The 15 named closed expressions of the problem catalog, parsed."""
    return {name: parse(src, free=()) for name, src in _CATALOG_SOURCES.items()}
