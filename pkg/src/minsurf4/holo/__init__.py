"""Holomorphic expressions, their second-order jets, and parameter grids."""
from .expr import (
    FUNCTIONS,
    BinOp,
    Call,
    Const,
    Expr,
    Jet2,
    Neg,
    Pow,
    Var,
    eval_jet2,
    parse_expr,
    singular_risks,
    to_text,
    validate_on,
)
from .grid import Lattice, ParamDomain, QuadratureGrid, build_grid, build_lattice

__all__ = [
    "FUNCTIONS", "BinOp", "Call", "Const", "Expr", "Jet2", "Neg", "Pow", "Var",
    "eval_jet2", "parse_expr", "singular_risks", "to_text", "validate_on",
    "Lattice", "ParamDomain", "QuadratureGrid", "build_grid", "build_lattice",
]
