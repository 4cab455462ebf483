"""Fixpoint expressions as regular languages of infinite game trees.

The pipeline: ``expr`` parses and transforms expressions, ``automaton``
compiles them to nondeterministic parity tree automata over the gaming
alphabet, ``games`` solves the induced finite parity and
conjunction-of-parity games, ``regtree`` handles regular trees and their
strategies, and ``analysis`` decides emptiness and membership, extracts
witnesses, and classifies every closed expression as EMPTY, POINTED or
TOP.  ``oracle`` holds the brute-force reference implementations the
test suite validates the solvers against.
"""

from .expr import (Expr, Var, Mu, Zeta, Nu, Sum, CartProd, ParProd,
                   ParseError, UnboundVariableError,
                   parse, unparse, free_vars, base, dual, substitute,
                   alpha_equal, figure_catalog, catalog_sources)
from .automaton import (Letter, BOT, game_letter, TreeAutomaton, AutomatonError,
                        proj_automaton, connective_automaton, substitute_language,
                        fixpoint_mu, fixpoint_gamma, compile_expr,
                        winner_automaton, intersect, shift_priorities,
                        compress_priorities, shape_automaton, trim_automaton,
                        automaton_to_json, automaton_from_json,
                        load_automaton, save_automaton)
from .games import (EVE, ADAM, GameArena, Strategy, make_arena,
                    solve_parity, solve_conjunction,
                    verify_strategy, strategy_violations)
from .regtree import (RegularTree, TreeStrategy, TreeError,
                      validate, tree_violations, unfold, tree_to_arena,
                      solve_tree, enumerate_strategies, check_strategy,
                      relabel_shape, random_regular_tree,
                      minimize, isomorphic, spine_tree,
                      tree_to_json, tree_from_json, load_tree, save_tree)
from .analysis import (ClassLabel, is_empty, witness, member,
                       answerable_automaton, classify)

__version__ = "0.1.0"
