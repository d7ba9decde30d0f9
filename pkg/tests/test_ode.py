import random
from fractions import Fraction as F

import pytest

from p34eq import equations as eqs
from p34eq.errors import NotCubicError, TransformInversionError
from p34eq.expr import Const, ParamEnv, Sym, is_zero, normalize, parse, to_string
from p34eq.ode import (
    OdeCubic,
    PointTransform,
    apply_transform,
    compose,
    from_rhs,
    invert_point_transform,
    normalize_implicit,
    pullback_coefficients,
)
from p34eq.oracle import verify_transform


def coeffs_equal(e1: OdeCubic, e2: OdeCubic, env=None) -> bool:
    env = env or e1.env.merged(e2.env)
    return all(
        is_zero(normalize(a - b), env).is_zero for a, b in zip(e1.coeffs(), e2.coeffs())
    )


# ----- from_rhs ---------------------------------------------------------------


def test_from_rhs_rational_p34():
    e = from_rhs(parse("p^2/(2*y) - 2*y^2 - x*y - b^2/(2*y)"), ParamEnv({"b": "nonzero"}))
    assert normalize(e.p - parse("-2*y^2 - x*y - b^2/(2*y)")) == Const(0)
    assert normalize(e.q) == Const(0)
    assert normalize(e.r - parse("1/(6*y)")) == Const(0)
    assert normalize(e.s) == Const(0)


def test_from_rhs_cuberoot_form():
    e = from_rhs(parse("5*p^2/(6*y) - b^2*y^(1/3)*(6*y + 3*x*y^(2/3) + 3/2)"),
                 ParamEnv({"b": "nonzero"}))
    assert normalize(e.p + parse("b^2*y^(1/3)*(6*y + 3*x*y^(2/3) + 3/2)")) == Const(0)
    assert normalize(e.r - parse("5/(18*y)")) == Const(0)


def test_from_rhs_zero():
    e = from_rhs(Const(0))
    assert all(normalize(c) == Const(0) for c in e.coeffs())


def test_from_rhs_reconstruction_round_trip():
    rhs = parse("p^3*y - 3*p^2/x + p*(x + y) - 1/y")
    e = from_rhs(rhs)
    assert normalize(e.rhs("p") - rhs) == Const(0)


@pytest.mark.parametrize(
    "bad",
    ["p^4 + y", "p^(1/2) + y", "1/(p + y)", "y/(1 - p^2)"],
)
def test_from_rhs_rejects_noncubic(bad):
    with pytest.raises(NotCubicError):
        from_rhs(parse(bad))


def test_undeclared_parameter_rejected_at_entry():
    from p34eq.errors import UndeclaredSymbolError

    with pytest.raises(UndeclaredSymbolError):
        from_rhs(parse("p^2 + c*y"), ParamEnv())


# ----- normalize_implicit ------------------------------------------------------


def test_normalize_implicit_unit_lead_matches_from_rhs():
    rhs = parse("p^2/(2*y) - 2*y^2")
    a = normalize_implicit(Const(1), rhs)
    b = from_rhs(rhs)
    assert coeffs_equal(a, b)


def test_normalize_implicit_scales():
    rhs = parse("p^2 + y")
    a = normalize_implicit(Const(2), rhs)
    b = from_rhs(parse("(p^2 + y)/2"))
    assert coeffs_equal(a, b)


def test_normalize_implicit_zero_lead_rejected():
    with pytest.raises(NotCubicError):
        normalize_implicit(Const(0), parse("p + y"))


def test_electrodiffusion_3b_coefficients():
    e = eqs.electrodiffusion_3b(1, 1, 1, 0)
    assert normalize(e.p - parse("2*y*(y + x)")) == Const(0)
    assert normalize(e.q - parse("1/(3*(y + x))")) == Const(0)
    assert normalize(e.r - parse("1/(6*(y + x))")) == Const(0)
    assert normalize(e.s) == Const(0)


# ----- apply_transform ----------------------------------------------------------


def identity_transform():
    return PointTransform(Sym("x"), Sym("y"), (Sym("x"), Sym("y")))


def test_identity_transform():
    e = eqs.p34_rational("b")
    assert coeffs_equal(apply_transform(e, identity_transform()), e)


def test_swap_maps_lines_to_lines():
    z = OdeCubic(0, 0, 0, 0)
    sw = PointTransform(Sym("y"), Sym("x"), (Sym("y"), Sym("x")))
    assert all(normalize(c) == Const(0) for c in apply_transform(z, sw).coeffs())


def test_ince_to_cuberoot_form_symbolic():
    # y_new = -2a y^3, x_new = x / (2a)^(2/3) carries Ince XXXIV to the
    # cube-root normal form with beta^2 = 4 a^2.
    e = eqs.ince_xxxiv("a")
    t = PointTransform(
        normalize(parse("x/(2*a)^(2/3)")), normalize(parse("-2*a*y^3"))
    )
    got = apply_transform(e, t)
    want = eqs.p34_cuberoot(parse("4*a^2"))
    assert coeffs_equal(got, want, ParamEnv({"a": "nonzero"}))


def test_composition_of_affine_transforms():
    rng = random.Random(64)
    e = eqs.p34_rational(1)
    for _ in range(3):
        a1, b1 = F(rng.randint(1, 3)), F(rng.randint(-2, 2))
        c2, d2 = F(rng.randint(1, 3)), F(rng.randint(-2, 2))
        t1 = PointTransform(
            normalize(Const(a1) * Sym("x") + Const(b1)), Sym("y"),
            (normalize((Sym("x") - Const(b1)) / Const(a1)), Sym("y")),
        )
        t2 = PointTransform(
            Sym("x"), normalize(Const(c2) * Sym("y") + Const(d2)),
            (Sym("x"), normalize((Sym("y") - Const(d2)) / Const(c2))),
        )
        chained = apply_transform(apply_transform(e, t1), t2)
        direct = apply_transform(e, compose(t2, t1))
        assert coeffs_equal(chained, direct)


def test_affine_round_trip():
    e = eqs.p34_rational(1)
    t = PointTransform(
        normalize(parse("2*x + y + 1")), normalize(parse("x + y")),
    )
    inv_x, inv_y = invert_point_transform(t)
    back = PointTransform(inv_x, inv_y, (t.x_new, t.y_new))
    assert coeffs_equal(apply_transform(apply_transform(e, t), back), e)


def test_separable_power_inversion():
    t = PointTransform(normalize(parse("x/(2*a)^(2/3)")), normalize(parse("-2*a*y^3")))
    ix, iy = invert_point_transform(t)
    # x_old(x_new, y_new) and y_old, written in the new variables
    assert normalize(ix - parse("x*(2*a)^(2/3)")) == Const(0)
    assert is_zero(normalize(iy**3 + parse("y/(2*a)")), ParamEnv({"a": "nonzero"})).is_zero


def test_inversion_failure_reported():
    t = PointTransform(normalize(parse("x + y^2 + y^3")), normalize(parse("y + x^2")))
    with pytest.raises(TransformInversionError):
        invert_point_transform(t)


def test_transform_oracle_cross_validates_symbolic_path():
    # The jet oracle and the chain-rule transformer are independent paths;
    # they must agree on randomized source equations and affine transforms.
    rng = random.Random(12)
    for _ in range(3):
        e = from_rhs(
            parse("p^2/(2*y) - 2*y^2 - x*y")
            if rng.random() < 0.5
            else parse("p*y + x^2 - y^3/(x + 4)")
        )
        t = PointTransform(
            normalize(Const(F(rng.randint(1, 3))) * Sym("x") + Const(F(rng.randint(0, 2)))),
            normalize(Const(F(rng.randint(1, 3))) * Sym("y") + Const(F(rng.randint(0, 2)))),
        )
        dst = apply_transform(e, t)
        report = verify_transform(e, dst, t, n=14)
        assert report.passed, report


def test_pullback_is_cubic():
    e = eqs.p34_rational(1)
    t = PointTransform(normalize(parse("x + y^2/7")), normalize(parse("y - x^3/9")))
    pb = pullback_coefficients(e, t)  # no inverse needed for pullbacks
    assert len(pb) == 4
