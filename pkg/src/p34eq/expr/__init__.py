"""Minimal computer-algebra core: parse, differentiate, normalize, evaluate,
and zero-test expressions in x, y, and named parameters."""

from .ast import (
    Add,
    Const,
    Expr,
    Mul,
    Neg,
    Pow,
    Sym,
    X,
    Y,
    as_expr,
    free_symbols,
    mul,
    add,
    rat,
    to_string,
)
from .engine import (
    Constraint,
    ParamEnv,
    SamplePolicy,
    ZeroStatus,
    ZeroVerdict,
    diff,
    eval_expr,
    is_zero,
    normalize,
    rf_pow,
    rf_to_expr,
    subst,
    to_ratfunc,
    sample_points,
)
from .parser import parse
from .poly import Poly, poly_gcd
from .ratfunc import RatFunc

__all__ = [
    "Add",
    "Const",
    "Constraint",
    "Expr",
    "Mul",
    "Neg",
    "ParamEnv",
    "Poly",
    "Pow",
    "RatFunc",
    "SamplePolicy",
    "Sym",
    "X",
    "Y",
    "ZeroStatus",
    "ZeroVerdict",
    "add",
    "as_expr",
    "diff",
    "eval_expr",
    "free_symbols",
    "is_zero",
    "mul",
    "normalize",
    "parse",
    "poly_gcd",
    "rat",
    "rf_pow",
    "rf_to_expr",
    "sample_points",
    "subst",
    "to_ratfunc",
    "to_string",
]
