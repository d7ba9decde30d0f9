"""Normal form, differentiation, substitution, evaluation, zero-testing.

The workhorse representation is RatFunc (a reduced ratio of polynomials in
atoms); Expr trees are the parse/print surface.  Fractional powers become
atoms: roots of symbols directly, roots of rationals via prime surds, odd
roots of monomials by distribution, everything else as a content-addressed
compound radicand that still evaluates and differentiates exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import EvalDomainError, EvalPole, UndeclaredSymbolError
from . import ast
from .ast import Add, Const, Expr, Mul, Neg, Pow, Sym
from .atoms import (
    KIND_SURD,
    KIND_SYMBOL,
    factor_int,
    lookup_opaque,
    make_name,
    opaque_base_key,
    parse_gen,
    register_opaque,
)
from .poly import Poly
from .ratfunc import RatFunc, _real_root

__all__ = [
    "normalize",
    "diff",
    "subst",
    "eval_expr",
    "is_zero",
    "to_ratfunc",
    "rf_to_expr",
    "rf_pow",
    "Constraint",
    "ParamEnv",
    "SamplePolicy",
    "ZeroStatus",
    "ZeroVerdict",
    "sample_points",
]


# ----- Expr -> RatFunc ------------------------------------------------------


def to_ratfunc(e: Expr) -> RatFunc:
    if isinstance(e, Const):
        return RatFunc.const(e.value)
    if isinstance(e, Sym):
        return RatFunc.from_gen(e.name)
    if isinstance(e, Neg):
        return -to_ratfunc(e.arg)
    if isinstance(e, Add):
        out = RatFunc.const(0)
        for t in e.terms:
            out = out + to_ratfunc(t)
        return out
    if isinstance(e, Mul):
        out = RatFunc.const(1)
        for f in e.factors:
            out = out * to_ratfunc(f)
        return out
    if isinstance(e, Pow):
        return rf_pow(to_ratfunc(e.base), e.exp)
    raise TypeError(f"unknown node {e!r}")


def rf_pow(rf: RatFunc, exponent: Fraction) -> RatFunc:
    """Raise a rational function to a rational power."""
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        return rf ** int(exponent)
    p, q = exponent.numerator, exponent.denominator
    if rf.is_zero:
        if p <= 0:
            raise ZeroDivisionError("zero raised to a non-positive fractional power")
        return RatFunc.const(0)
    if rf.is_const:
        return _rational_power(rf.const_value(), p, q)
    if rf.is_monomial:
        coeff, exps = rf.monomial_parts()
        if q % 2 == 1:
            out = _rational_power(coeff, p, q)
            for g, e in exps.items():
                out = out * _gen_frac_power(g, Fraction(e * p, q))
            return out
        # Even roots do not commute with signs of symbol-valued factors;
        # fall through to an opaque radicand, which evaluates base-first.
    return _opaque_power(rf, p, q)


def _gen_frac_power(gen: str, exponent: Fraction) -> RatFunc:
    """gen ** exponent where gen is an existing atom and exponent rational."""
    info = parse_gen(gen)
    total = Fraction(exponent, info.q)
    p, q = total.numerator, total.denominator
    if info.kind == KIND_SURD:
        return _rational_power(Fraction(int(info.base)), p, q)
    base = info.base if info.kind == KIND_SYMBOL else str(info.base)
    name = make_name(base, q) if q > 1 else str(base)
    return RatFunc.from_gen(name, p)


def _rational_power(c: Fraction, p: int, q: int) -> RatFunc:
    """c ** (p/q) as an exact combination of rational and prime-surd factors."""
    if c == 0:
        if p <= 0:
            raise ZeroDivisionError("zero raised to a non-positive fractional power")
        return RatFunc.const(0)
    sign = 1
    if c < 0:
        if q % 2 == 0:
            # No real value anywhere; keep an opaque radicand so evaluation
            # reports a domain error instead of silently dropping the sign.
            return _opaque_power(RatFunc.const(c), p, q)
        sign = -1 if p % 2 else 1
        c = -c
    out = RatFunc.const(sign)
    for base, e in list(_factored(c.numerator)) + [
        (b, -e) for b, e in _factored(c.denominator)
    ]:
        total = Fraction(e * p, q)
        k, rem = divmod(total.numerator, total.denominator)
        out = out.scale(Fraction(base) ** k)
        if rem:
            frac = Fraction(rem, total.denominator)
            out = out * RatFunc.from_gen(make_name(base, frac.denominator), frac.numerator)
    return out


def _factored(n: int) -> list[tuple[int, int]]:
    if n == 1:
        return []
    f = factor_int(n)
    if f is None:
        return [(n, 1)]
    return list(f)


def _opaque_power(rf: RatFunc, p: int, q: int) -> RatFunc:
    canonical = ast.to_string(rf_to_expr(rf))
    tag = opaque_base_key(canonical)
    register_opaque(tag, rf)
    return RatFunc.from_gen(make_name(tag, q), p)


# ----- RatFunc -> Expr ------------------------------------------------------


def rf_to_expr(rf: RatFunc) -> Expr:
    num = _poly_to_expr(rf.num)
    if rf.den.is_const and rf.den.const_value() == 1:
        return num
    return Mul((num, Pow(_paren_expr(rf.den), Fraction(-1))))


def _paren_expr(p: Poly) -> Expr:
    return _poly_to_expr(p)


def _poly_to_expr(p: Poly) -> Expr:
    if p.is_zero:
        return ast.ZERO
    terms = []
    for mono, c in p.sorted_terms():
        factors: list[Expr] = []
        if c != 1 or all(e == 0 for e in mono):
            factors.append(Const(c))
        for g, e in zip(p.gens, mono):
            if e:
                factors.append(_gen_to_expr(g, e))
        terms.append(ast.mul(factors))
    return ast.add(terms)


def _gen_to_expr(gen: str, e: int) -> Expr:
    info = parse_gen(gen)
    exp = Fraction(e, info.q)
    if info.kind == KIND_SYMBOL:
        base: Expr = Sym(str(info.base))
    elif info.kind == KIND_SURD:
        base = Const(Fraction(int(info.base)))
    else:
        base = rf_to_expr(lookup_opaque(str(info.base)))  # type: ignore[arg-type]
    if exp == 1:
        return base
    return Pow(base, exp)


# ----- public operations ----------------------------------------------------


def normalize(e: Expr) -> Expr:
    """Canonical form: a single reduced ratio of polynomials in atoms."""
    return rf_to_expr(to_ratfunc(e))


def diff(e: Expr, x: int = 0, y: int = 0) -> Expr:
    """Partial derivative d^(x+y) e / dx^x dy^y, exact."""
    rf = to_ratfunc(e)
    for _ in range(x):
        rf = rf.deriv("x")
    for _ in range(y):
        rf = rf.deriv("y")
    return rf_to_expr(rf)


def subst(e: Expr, bindings: Mapping[str, Expr]) -> Expr:
    """Simultaneous substitution of symbols by expressions."""
    if isinstance(e, Sym):
        return bindings.get(e.name, e)
    if isinstance(e, Const):
        return e
    if isinstance(e, Neg):
        return Neg(subst(e.arg, bindings))
    if isinstance(e, Pow):
        return Pow(subst(e.base, bindings), e.exp)
    if isinstance(e, Add):
        return Add(tuple(subst(t, bindings) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(tuple(subst(f, bindings) for f in e.factors))
    raise TypeError(f"unknown node {e!r}")


def eval_expr(e: Expr, assignment: Mapping[str, float]) -> float:
    """Direct tree evaluation, an independent path from the normal form.

    Raises EvalPole on division by (numerically) zero and EvalDomainError
    on an even root of a negative base.
    """
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Sym):
        try:
            return float(assignment[e.name])
        except KeyError:
            raise UndeclaredSymbolError(f"no value for symbol {e.name!r}") from None
    if isinstance(e, Neg):
        return -eval_expr(e.arg, assignment)
    if isinstance(e, Add):
        return sum(eval_expr(t, assignment) for t in e.terms)
    if isinstance(e, Mul):
        out = 1.0
        for f in e.factors:
            out *= eval_expr(f, assignment)
        return out
    if isinstance(e, Pow):
        base = eval_expr(e.base, assignment)
        p, q = e.exp.numerator, e.exp.denominator
        if p < 0 and abs(base) < 1e-300:
            raise EvalPole("negative power of zero")
        root = _real_root(base, q)
        try:
            return root**p
        except OverflowError:
            raise EvalPole("overflow in power evaluation") from None
    raise TypeError(f"unknown node {e!r}")


# ----- parameter environments and sampling ----------------------------------


class Constraint(Enum):
    FREE = "free"
    NONZERO = "nonzero"
    POSITIVE = "positive"


@dataclass(frozen=True)
class SamplePolicy:
    """Deterministic sampling configuration for probabilistic zero tests."""

    seed: int = 2034
    n_samples: int = 16
    abs_tol: float = 1e-9
    nz_tol: float = 1e-6
    lo: float = 0.5
    hi: float = 3.0
    max_redraws: int = 100

    def with_seed(self, seed: int) -> "SamplePolicy":
        return SamplePolicy(
            seed, self.n_samples, self.abs_tol, self.nz_tol, self.lo, self.hi, self.max_redraws
        )


class ParamEnv:
    """Declared parameters with constraints and optional pinned values."""

    def __init__(
        self,
        constraints: Mapping[str, Constraint | str] | None = None,
        values: Mapping[str, Fraction] | None = None,
    ):
        self.constraints: dict[str, Constraint] = {}
        for name, c in (constraints or {}).items():
            self.constraints[name] = Constraint(c) if not isinstance(c, Constraint) else c
        self.values: dict[str, Fraction] = {k: Fraction(v) for k, v in (values or {}).items()}
        for name in self.values:
            self.constraints.setdefault(name, Constraint.FREE)

    def declared(self) -> set[str]:
        return set(self.constraints)

    def check_symbols(self, symbols: set[str]) -> None:
        extra = symbols - {"x", "y"} - self.declared()
        if extra:
            raise UndeclaredSymbolError(
                f"undeclared symbols: {', '.join(sorted(extra))}"
            )

    def merged(self, other: "ParamEnv") -> "ParamEnv":
        c = dict(self.constraints)
        c.update(other.constraints)
        v = dict(self.values)
        v.update(other.values)
        return ParamEnv(c, v)

    def draw(self, name: str, rng: random.Random, lo: float, hi: float) -> float:
        pinned = self.values.get(name)
        if pinned is not None:
            return float(pinned)
        magnitude = rng.uniform(lo, hi)
        constraint = self.constraints.get(name, Constraint.FREE)
        if constraint is Constraint.POSITIVE:
            return magnitude
        return magnitude if rng.random() < 0.5 else -magnitude

    def __repr__(self):
        parts = []
        for name in sorted(self.constraints):
            c = self.constraints[name]
            v = self.values.get(name)
            parts.append(f"{name}:{c.value}" + (f"={v}" if v is not None else ""))
        return f"ParamEnv({', '.join(parts)})"


def sample_points(
    symbols: Sequence[str],
    env: ParamEnv,
    policy: SamplePolicy,
    n: int | None = None,
    signs: tuple[int, int] = (1, 1),
) -> list[dict[str, float]]:
    """Draw assignments for x, y, and parameters; deterministic in the seed.

    ``signs`` selects the quadrant for (x, y); parameter signs follow their
    constraints.  The caller redraws pole-hitting points itself by asking
    for more points than it needs.
    """
    rng = random.Random((policy.seed, signs, tuple(sorted(symbols))).__repr__())
    out = []
    for _ in range(n if n is not None else policy.n_samples):
        a: dict[str, float] = {
            "x": signs[0] * rng.uniform(policy.lo, policy.hi),
            "y": signs[1] * rng.uniform(policy.lo, policy.hi),
        }
        for s in symbols:
            if s not in ("x", "y"):
                a[s] = env.draw(s, rng, policy.lo, policy.hi)
        out.append(a)
    return out


# ----- zero verdicts --------------------------------------------------------


class ZeroStatus(Enum):
    ZERO = "zero"
    NONZERO = "nonzero"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ZeroVerdict:
    status: ZeroStatus
    normal_form: str | None = None  # exact evidence, when available
    residuals: tuple[float, ...] = ()
    detail: str = ""

    @property
    def is_zero(self) -> bool:
        return self.status is ZeroStatus.ZERO

    @property
    def is_nonzero(self) -> bool:
        return self.status is ZeroStatus.NONZERO

    @property
    def is_unknown(self) -> bool:
        return self.status is ZeroStatus.UNKNOWN

    def __str__(self):
        return self.status.value


def is_zero(
    e: Expr | RatFunc,
    env: ParamEnv | None = None,
    policy: SamplePolicy | None = None,
) -> ZeroVerdict:
    """Two-tier zero test: exact normal form first, then random sampling.

    Zero comes from a vanishing normal form or from all samples vanishing
    within tolerance; NonZero always carries at least one sample above the
    nonzero threshold, so the two kinds of evidence can never both appear.
    """
    env = env or ParamEnv()
    policy = policy or SamplePolicy()
    rf = e if isinstance(e, RatFunc) else to_ratfunc(e)
    env.check_symbols(rf.free_symbols())
    if rf.is_zero:
        return ZeroVerdict(ZeroStatus.ZERO, normal_form="0")

    exact = rf.is_exact()
    symbols = sorted(rf.free_symbols() | {"x", "y"})
    points = sample_points(symbols, env, policy, n=policy.n_samples + policy.max_redraws)
    residuals: list[float] = []
    for a in points:
        if len(residuals) >= policy.n_samples:
            break
        try:
            value, scale = rf.eval_with_scale(a)
        except (EvalPole, EvalDomainError):
            continue
        residuals.append(value / scale)
    if len(residuals) < max(4, policy.n_samples // 2):
        return ZeroVerdict(
            ZeroStatus.UNKNOWN,
            residuals=tuple(residuals),
            detail="insufficient pole-free samples",
        )
    top = max(abs(r) for r in residuals)
    if top > policy.nz_tol:
        return ZeroVerdict(ZeroStatus.NONZERO, residuals=tuple(residuals))
    if top < policy.abs_tol:
        if exact:
            # A nonzero exact normal form evaluating to zero everywhere means
            # the samples are deceptive; refuse to certify either way.
            return ZeroVerdict(
                ZeroStatus.UNKNOWN,
                residuals=tuple(residuals),
                detail="nonzero normal form with vanishing samples",
            )
        return ZeroVerdict(ZeroStatus.ZERO, residuals=tuple(residuals))
    return ZeroVerdict(
        ZeroStatus.UNKNOWN, residuals=tuple(residuals), detail="samples in the gray zone"
    )
