"""Exact symbolic algebra of decorated rooted trees."""

from .coeffs import Poly
from .expr import ParseError, parse_coeff, parse_rooted, parse_tree, render
from .lincomb import LinComb
from .rules import RuleError, RuleTable, builtin, load_rules, parse_rules
from .trees import EMPTY_FOREST, Forest, RootedForest, Tree, graft, tree_product

__all__ = [
    "EMPTY_FOREST",
    "Forest",
    "LinComb",
    "ParseError",
    "Poly",
    "RootedForest",
    "RuleError",
    "RuleTable",
    "Tree",
    "builtin",
    "graft",
    "load_rules",
    "parse_coeff",
    "parse_rooted",
    "parse_rules",
    "parse_tree",
    "render",
    "tree_product",
]
