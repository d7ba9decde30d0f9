"""Independent numeric verification of transforms and of the weight law.

The transform check propagates second-order jets (y, y', y'') of the source
equation through the map pointwise and solves a small Vandermonde system
for the effective cubic coefficients at the image point, a path disjoint
from the symbolic chain-rule transformer, so the two validate each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EvalDomainError, EvalPole
from .expr import ParamEnv, RatFunc, SamplePolicy, sample_points, to_ratfunc
from .ode import OdeCubic, PointTransform

PASS_RESIDUAL = 1e-7
WARN_RESIDUAL = 1e-4
MIN_SAMPLES = 10

_QUADRANTS = ((1, 1), (-1, 1), (1, -1), (-1, -1))
_SEEDS = (-1.3, -0.45, 0.6, 1.7)


@dataclass
class ResidualReport:
    """Per-sample coefficient residuals of a transform check."""

    samples_used: int = 0
    poles_skipped: int = 0
    max_residual: float = float("inf")
    per_sample: list[tuple[float, float, float, float]] = field(default_factory=list)
    quadrant: tuple[int, int] = (1, 1)
    insufficient: bool = True

    @property
    def passed(self) -> bool:
        return not self.insufficient and self.max_residual < PASS_RESIDUAL

    @property
    def warned(self) -> bool:
        return not self.insufficient and self.max_residual < WARN_RESIDUAL

    def __repr__(self):
        status = "pass" if self.passed else ("warn" if self.warned else "fail")
        if self.insufficient:
            status = "insufficient"
        return (
            f"ResidualReport({status}, max={self.max_residual:.3g}, "
            f"samples={self.samples_used}, poles={self.poles_skipped}, "
            f"quadrant={self.quadrant})"
        )


def _jet_coefficients(
    src_vals: tuple[float, float, float, float],
    t_parts: dict[str, float],
) -> tuple[float, float, float, float] | None:
    """Effective (P, 3Q, 3R, S) at the image point from four jets."""
    P, Q3, R3, S = src_vals
    qs, ws = [], []
    for s in _SEEDS:
        ypp = P + Q3 * s + R3 * s * s + S * s**3
        du = t_parts["ux"] + t_parts["uy"] * s
        dv = t_parts["vx"] + t_parts["vy"] * s
        if abs(du) < 1e-9:
            return None
        d2u = (
            t_parts["uxx"]
            + 2 * t_parts["uxy"] * s
            + t_parts["uyy"] * s * s
            + t_parts["uy"] * ypp
        )
        d2v = (
            t_parts["vxx"]
            + 2 * t_parts["vxy"] * s
            + t_parts["vyy"] * s * s
            + t_parts["vy"] * ypp
        )
        qs.append(dv / du)
        ws.append((d2v * du - dv * d2u) / du**3)
    for i in range(4):
        for j in range(i + 1, 4):
            if abs(qs[i] - qs[j]) < 1e-6:
                return None
    V = np.vander(np.array(qs), 4, increasing=True)
    try:
        c = np.linalg.solve(V, np.array(ws))
    except np.linalg.LinAlgError:
        return None
    return float(c[0]), float(c[1]), float(c[2]), float(c[3])


def _transform_parts(t: PointTransform) -> dict[str, RatFunc]:
    u, v = to_ratfunc(t.x_new), to_ratfunc(t.y_new)
    ux, uy = u.deriv("x"), u.deriv("y")
    vx, vy = v.deriv("x"), v.deriv("y")
    return {
        "u": u,
        "v": v,
        "ux": ux,
        "uy": uy,
        "vx": vx,
        "vy": vy,
        "uxx": ux.deriv("x"),
        "uxy": ux.deriv("y"),
        "uyy": uy.deriv("y"),
        "vxx": vx.deriv("x"),
        "vxy": vx.deriv("y"),
        "vyy": vy.deriv("y"),
    }


def verify_transform(
    src: OdeCubic,
    dst: OdeCubic,
    t: PointTransform,
    n: int = 20,
    policy: SamplePolicy | None = None,
    env: ParamEnv | None = None,
) -> ResidualReport:
    """Check that t maps solutions of src onto solutions of dst.

    Sampling tries the four sign quadrants of the (x, y) box in turn, since
    transforms with radicals are often real on only some of them; the first
    quadrant that yields a passing report wins, otherwise the best report
    (most samples, then smallest residual) is returned.
    """
    policy = policy or SamplePolicy()
    env = env or src.env.merged(dst.env)
    parts = _transform_parts(t)
    src_rfs = src.coeff_rfs()
    dst_rfs = dst.coeff_rfs()
    symbols = sorted(
        src.free_symbols()
        | dst.free_symbols()
        | set().union(*(p.free_symbols() for p in parts.values()))
        | {"x", "y"}
    )

    best: ResidualReport | None = None
    for quadrant in _QUADRANTS:
        report = ResidualReport(quadrant=quadrant)
        points = sample_points(symbols, env, policy, n=n + 4 * policy.max_redraws, signs=quadrant)
        residuals: list[float] = []
        for a in points:
            if report.samples_used >= n:
                break
            try:
                pv = {k: rf.eval(a) for k, rf in parts.items()}
                sv = tuple(rf.eval(a) for rf in src_rfs)
                src_vals = (sv[0], 3 * sv[1], 3 * sv[2], sv[3])
                image = dict(a)
                image["x"], image["y"] = pv["u"], pv["v"]
                dv = tuple(rf.eval(image) for rf in dst_rfs)
                dst_vals = (dv[0], 3 * dv[1], 3 * dv[2], dv[3])
            except (EvalPole, EvalDomainError, OverflowError):
                report.poles_skipped += 1
                continue
            eff = _jet_coefficients(src_vals, pv)
            if eff is None:
                report.poles_skipped += 1
                continue
            row = tuple(
                abs(e - d) / max(1.0, abs(e), abs(d)) for e, d in zip(eff, dst_vals)
            )
            report.per_sample.append(row)  # type: ignore[arg-type]
            residuals.append(max(row))
            report.samples_used += 1
        if report.samples_used >= MIN_SAMPLES:
            report.insufficient = False
            report.max_residual = max(residuals)
        if report.passed:
            return report
        if best is None or (report.samples_used, -report.max_residual) > (
            best.samples_used,
            -best.max_residual,
        ):
            best = report
    return best if best is not None else ResidualReport()


def verify_weight_law(
    src_components: tuple,
    dst_components: tuple,
    t: PointTransform,
    weight: int,
    n: int = 12,
    policy: SamplePolicy | None = None,
    env: ParamEnv | None = None,
    tol: float = 1e-6,
) -> tuple[bool, float]:
    """Numerically check the pseudotensor law at corresponding points.

    For scalars: f_src = det(Jf)^m * f_dst(image).  For two-component
    fields with an upper index: f_src = det(Jf)^m * Jf^(-1) f_dst(image),
    where Jf is the forward Jacobian matrix of t at the source point.
    Returns (law holds within tol at >= MIN_SAMPLES points, max deviation).
    """
    policy = policy or SamplePolicy()
    env = env or ParamEnv()
    parts = _transform_parts(t)
    src_rfs = [to_ratfunc(c) if not isinstance(c, RatFunc) else c for c in src_components]
    dst_rfs = [to_ratfunc(c) if not isinstance(c, RatFunc) else c for c in dst_components]
    symbols = sorted(
        set().union(*(c.free_symbols() for c in src_rfs + dst_rfs))
        | set().union(*(p.free_symbols() for p in parts.values()))
        | {"x", "y"}
    )
    kept = 0
    worst = 0.0
    for a in sample_points(symbols, env, policy, n=n + policy.max_redraws):
        if kept >= n:
            break
        try:
            jf = np.array(
                [
                    [parts["ux"].eval(a), parts["uy"].eval(a)],
                    [parts["vx"].eval(a), parts["vy"].eval(a)],
                ]
            )
            det = float(np.linalg.det(jf))
            if abs(det) < 1e-9:
                continue
            image = dict(a)
            image["x"], image["y"] = parts["u"].eval(a), parts["v"].eval(a)
            src_vals = np.array([c.eval(a) for c in src_rfs])
            dst_vals = np.array([c.eval(image) for c in dst_rfs])
        except (EvalPole, EvalDomainError, OverflowError):
            continue
        if len(src_rfs) == 1:
            predicted = det**weight * dst_vals
        else:
            predicted = det**weight * (np.linalg.inv(jf) @ dst_vals)
        scale = max(1.0, float(np.max(np.abs(src_vals))), float(np.max(np.abs(predicted))))
        worst = max(worst, float(np.max(np.abs(src_vals - predicted))) / scale)
        kept += 1
    return kept >= MIN_SAMPLES and worst < tol, worst
