"""Degeneration-case decision tree and the two equivalence tests.

Conditions are checked in the theorems' order; the first failure
short-circuits and is named in the result.  Every Equivalent outcome
carries a transform that passed the numeric jet oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import CaseError, EvalDomainError, EvalPole, UnknownVerdictError
from .expr import (
    Expr,
    ParamEnv,
    RatFunc,
    SamplePolicy,
    ZeroVerdict,
    is_zero,
    rf_pow,
    rf_to_expr,
    sample_points,
    to_ratfunc,
    to_string,
)
from .equations import p34_cuberoot, painleve_ii
from .invariants import InvariantTower, TowerOptions
from .ode import OdeCubic, PointTransform
from .oracle import PASS_RESIDUAL, ResidualReport, verify_transform

_I1_PII = Fraction(18, 5)


class CaseTag(Enum):
    MAXIMAL_DEGENERATION = "maximal degeneration"
    GENERAL_CASE = "general case (F != 0)"
    SECOND_CASE = "second case of intermediate degeneration (M = 0)"
    FIRST_CASE = "first case of intermediate degeneration (M != 0)"


@dataclass
class Classification:
    tag: CaseTag
    flags: dict[str, bool] = field(default_factory=dict)
    verdicts: dict[str, ZeroVerdict] = field(default_factory=dict)

    @property
    def case_1_4(self) -> bool:
        return (
            self.tag is CaseTag.FIRST_CASE
            and self.flags.get("i2_zero", False)
            and self.flags.get("i7_zero", False)
        )

    def describe(self) -> str:
        if self.tag is CaseTag.FIRST_CASE:
            bits = [
                f"Omega{'=0' if self.flags.get('omega_zero') else '!=0'}",
                f"I2{'=0' if self.flags.get('i2_zero') else '!=0'}",
                f"I7{'=0' if self.flags.get('i7_zero') else '!=0'}",
            ]
            tail = " [case 1.4]" if self.case_1_4 else ""
            return f"{self.tag.value}: {', '.join(bits)}{tail}"
        return self.tag.value


class Outcome(Enum):
    EQUIVALENT_PII = "equivalent-pii"
    EQUIVALENT_P34 = "equivalent-p34"
    NOT_EQUIVALENT = "not-equivalent"
    OUT_OF_SCOPE = "out-of-scope"
    INCONCLUSIVE = "inconclusive"


@dataclass
class EquivalenceResult:
    outcome: Outcome
    detail: str = ""
    failed_condition: str | None = None
    a_candidates: tuple[Expr, ...] | None = None
    a_values: tuple[float, ...] | None = None
    beta_squared: Expr | None = None
    beta_squared_value: float | None = None
    transform: PointTransform | None = None
    residual: ResidualReport | None = None
    independence_pair: tuple[str, str] | None = None

    @property
    def equivalent(self) -> bool:
        return self.outcome in (Outcome.EQUIVALENT_PII, Outcome.EQUIVALENT_P34)


def classify(
    ode: OdeCubic,
    policy: SamplePolicy | None = None,
    options: TowerOptions | None = None,
    tower: InvariantTower | None = None,
) -> Classification:
    """Walk the degeneration decision tree; raises UnknownVerdictError when
    a predicate cannot be decided at the configured sampling effort."""
    t = tower or InvariantTower(ode, policy, options)
    va = t.require("A", t.A)
    vb = t.require("B", t.B)
    if va.is_zero and vb.is_zero:
        return Classification(CaseTag.MAXIMAL_DEGENERATION, verdicts=t.verdicts)
    vf = t.require("F5", t.F5)
    if vf.is_nonzero:
        return Classification(CaseTag.GENERAL_CASE, verdicts=t.verdicts)
    vm = t.require("M", t.m_pseudo)
    if vm.is_zero:
        return Classification(CaseTag.SECOND_CASE, verdicts=t.verdicts)
    flags = {
        "omega_zero": t.require("Omega", t.omega).is_zero,
        "i2_zero": t.require("I2", t.i2).is_zero,
        "i7_zero": t.require("I7", t.i7).is_zero,
    }
    return Classification(CaseTag.FIRST_CASE, flags=flags, verdicts=t.verdicts)


def functional_independence(
    f: Expr | RatFunc,
    g: Expr | RatFunc,
    env: ParamEnv | None = None,
    policy: SamplePolicy | None = None,
) -> bool:
    """Whether the Jacobian determinant of (f, g) w.r.t. (x, y) is nonzero."""
    rf = f if isinstance(f, RatFunc) else to_ratfunc(f)
    rg = g if isinstance(g, RatFunc) else to_ratfunc(g)
    jac = rf.deriv("x") * rg.deriv("y") - rf.deriv("y") * rg.deriv("x")
    v = is_zero(jac, env, policy)
    if v.is_unknown:
        raise UnknownVerdictError("functional independence Jacobian", v)
    return v.is_nonzero


def _case_gate(t: InvariantTower) -> EquivalenceResult | None:
    """Common conditions 1 and 2 of both theorems; None when they hold."""
    try:
        va = t.require("A", t.A)
        vb = t.require("B", t.B)
        if va.is_zero and vb.is_zero:
            return EquivalenceResult(
                Outcome.OUT_OF_SCOPE, detail=CaseTag.MAXIMAL_DEGENERATION.value
            )
        if not t.require("F5", t.F5).is_zero:
            return EquivalenceResult(
                Outcome.NOT_EQUIVALENT,
                failed_condition="intermediate degeneration (F = 0)",
                detail=CaseTag.GENERAL_CASE.value,
            )
        if not t.require("M", t.m_pseudo).is_nonzero:
            return EquivalenceResult(
                Outcome.OUT_OF_SCOPE, detail=CaseTag.SECOND_CASE.value
            )
    except UnknownVerdictError as exc:
        return EquivalenceResult(Outcome.INCONCLUSIVE, detail=str(exc))
    return None


def test_pii(
    ode: OdeCubic,
    policy: SamplePolicy | None = None,
    options: TowerOptions | None = None,
    tower: InvariantTower | None = None,
    oracle_samples: int = 24,
) -> EquivalenceResult:
    """Equivalence test against y'' = 2y^3 + xy + a (parameter a = +-J)."""
    t = tower or InvariantTower(ode, policy, options)
    gate = _case_gate(t)
    if gate is not None:
        return gate
    try:
        if not t.require("Omega", t.omega).is_zero:
            return EquivalenceResult(
                Outcome.NOT_EQUIVALENT, failed_condition="Omega = 0"
            )
        if not t.require("I1 - 18/5", t.i1 - RatFunc.const(_I1_PII)).is_zero:
            return EquivalenceResult(
                Outcome.NOT_EQUIVALENT, failed_condition="I1 = 18/5"
            )
        if not t.require("I9", t.i9).is_nonzero:
            return EquivalenceResult(Outcome.NOT_EQUIVALENT, failed_condition="I9 != 0")
        j2 = t.j_squared
        if not (
            t.require("dJ2/dx", j2.deriv("x")).is_zero
            and t.require("dJ2/dy", j2.deriv("y")).is_zero
        ):
            return EquivalenceResult(Outcome.NOT_EQUIVALENT, failed_condition="J constant")
        pair = _independent_pair(t)
        if pair is None:
            return EquivalenceResult(
                Outcome.NOT_EQUIVALENT,
                failed_condition="two functionally independent invariants among I3, I6, I9",
            )
    except UnknownVerdictError as exc:
        return EquivalenceResult(Outcome.INCONCLUSIVE, detail=str(exc))
    except CaseError as exc:
        return EquivalenceResult(Outcome.INCONCLUSIVE, detail=str(exc))

    a_rf = rf_pow(j2, Fraction(1, 2))
    zero_j = t.verdict("J_numerator", t.j_numerator).is_zero or j2.is_zero
    if zero_j:
        a_rf = RatFunc.const(0)
    candidates = (a_rf,) if zero_j else (a_rf, -a_rf)
    a_exprs = tuple(rf_to_expr(c) for c in candidates)
    a_values = tuple(_sample_value(c, ode.env, t.policy) for c in candidates)

    result = _build_pii_transform(ode, t, candidates, oracle_samples)
    if result is None:
        return EquivalenceResult(
            Outcome.INCONCLUSIVE,
            detail="all theorem conditions hold but no candidate transform "
            "passed the numeric oracle",
            a_candidates=a_exprs,
            a_values=a_values,
            independence_pair=pair,
        )
    transform, report, verified_a = result
    return EquivalenceResult(
        Outcome.EQUIVALENT_PII,
        a_candidates=a_exprs,
        a_values=a_values,
        transform=transform,
        residual=report,
        independence_pair=pair,
        detail=f"verified against parameter a = {to_string(rf_to_expr(verified_a))}",
    )


def _independent_pair(t: InvariantTower) -> tuple[str, str] | None:
    pairs = (("I3", t.i3, "I6", t.i6), ("I3", t.i3, "I9", t.i9), ("I6", t.i6, "I9", t.i9))
    unknown = False
    for name_f, f, name_g, g in pairs:
        try:
            if functional_independence(f, g, t.env, t.policy):
                return name_f, name_g
        except UnknownVerdictError:
            unknown = True
    if unknown:
        raise UnknownVerdictError("functional independence of I3, I6, I9")
    return None


def _sample_value(rf: RatFunc, env: ParamEnv, policy: SamplePolicy) -> float:
    symbols = sorted(rf.free_symbols() | {"x", "y"})
    for a in sample_points(symbols, env, policy, n=policy.n_samples + policy.max_redraws):
        try:
            return rf.eval(a)
        except (EvalPole, EvalDomainError, OverflowError):
            continue
    return float("nan")


def _build_pii_transform(
    ode: OdeCubic,
    t: InvariantTower,
    a_candidates: tuple[RatFunc, ...],
    oracle_samples: int,
):
    """Try the invariant transform over root-branch choices; oracle gates.

    The working form is x_new = 5 I6 w^-2 sigma - (3/2) J w,  y_new = w^-1
    with w = (2500 sigma I9)^(1/6) on the region where sigma I9 > 0.
    """
    sigma_first = t.i9_sign or 1
    best = None
    for sigma in (sigma_first, -sigma_first):
        w = rf_pow(t.i9.scale(2500 * sigma), Fraction(1, 6))
        w_inv = w ** (-1)
        base_x = t.i6.scale(5 * sigma) * w_inv * w_inv
        for a_rf in a_candidates:
            j_slots: tuple[int, ...] = (1,) if a_rf.is_zero else (1, -1)
            for tau in j_slots:
                x_new = base_x - (a_rf * w).scale(Fraction(3, 2) * tau)
                for eps in (1, -1):
                    y_new = w_inv.scale(eps)
                    transform = PointTransform(rf_to_expr(x_new), rf_to_expr(y_new))
                    target = painleve_ii(rf_to_expr(a_rf))
                    report = verify_transform(
                        ode, target, transform, n=oracle_samples, policy=t.policy,
                        env=ode.env.merged(target.env),
                    )
                    if report.passed:
                        return transform, report, a_rf
                    if best is None or report.max_residual < best[1].max_residual:
                        best = (transform, report, a_rf)
    return None


def test_p34(
    ode: OdeCubic,
    policy: SamplePolicy | None = None,
    options: TowerOptions | None = None,
    tower: InvariantTower | None = None,
    oracle_samples: int = 24,
) -> EquivalenceResult:
    """Equivalence test against the cube-root normal form with beta != 0."""
    t = tower or InvariantTower(ode, policy, options)
    gate = _case_gate(t)
    if gate is not None:
        return gate
    try:
        missing = [
            name
            for name, rf in (("I2 = 0", t.i2), ("I7 = 0", t.i7))
            if not t.require(name, rf).is_zero
        ]
        if missing:
            return EquivalenceResult(
                Outcome.NOT_EQUIVALENT, failed_condition=" and ".join(missing)
            )
        if not t.require("K", t.k_invariant).is_zero:
            return EquivalenceResult(Outcome.NOT_EQUIVALENT, failed_condition="K = 0")
        y_rf = t.recovered_y
        x_rf = t.recovered_x
        jac = x_rf.deriv("x") * y_rf.deriv("y") - x_rf.deriv("y") * y_rf.deriv("x")
        vj = t.require("recovered transform Jacobian", jac)
        if not vj.is_nonzero:
            return EquivalenceResult(
                Outcome.NOT_EQUIVALENT,
                failed_condition="nondegenerate invariant change of variables",
            )
        b2 = t.recovered_beta2
        if not (
            t.require("d(beta^2)/dx", b2.deriv("x")).is_zero
            and t.require("d(beta^2)/dy", b2.deriv("y")).is_zero
        ):
            return EquivalenceResult(
                Outcome.NOT_EQUIVALENT, failed_condition="beta^2 constant"
            )
    except UnknownVerdictError as exc:
        return EquivalenceResult(Outcome.INCONCLUSIVE, detail=str(exc))
    except CaseError as exc:
        return EquivalenceResult(Outcome.INCONCLUSIVE, detail=str(exc))

    transform = PointTransform(rf_to_expr(x_rf), rf_to_expr(y_rf))
    b2_expr = rf_to_expr(b2)
    target = p34_cuberoot(b2_expr)
    report = verify_transform(
        ode, target, transform, n=oracle_samples, policy=t.policy,
        env=ode.env.merged(target.env),
    )
    if not report.passed:
        return EquivalenceResult(
            Outcome.INCONCLUSIVE,
            detail=f"all theorem conditions hold but the recovered transform "
            f"did not pass the oracle ({report!r})",
            beta_squared=b2_expr,
            transform=transform,
            residual=report,
        )
    return EquivalenceResult(
        Outcome.EQUIVALENT_P34,
        beta_squared=b2_expr,
        beta_squared_value=_sample_value(b2, ode.env, t.policy),
        transform=transform,
        residual=report,
    )


test_pii.__test__ = False  # not a pytest case
test_p34.__test__ = False
