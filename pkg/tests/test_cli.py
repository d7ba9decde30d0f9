import json

import pytest

from p34eq.cli import RunConfig, build_arg_parser, main, run
from p34eq.expr import parse as parse_expr

P34_RHS = "p^2/(2*y) - 2*y^2 - x*y - b^2/(2*y)"
PIV_RHS = "p^2/(2*y) + 3*y^3/2 + 4*x*y^2 + 2*(x^2 - 2)*y - 27/(2*y)"


def test_rational_form_exits_zero(capsys):
    code = main(["--rhs", P34_RHS, "--param", "b!=0"])
    out = capsys.readouterr().out
    assert code == 0
    assert "P34: equivalent" in out
    assert "beta^2 = b^2" in out


def test_zero_coeffs_exit_one(capsys):
    code = main(["--coeffs", "0", "0", "0", "0"])
    out = capsys.readouterr().out
    assert code == 1
    assert "maximal degeneration" in out


def test_piv_fails_on_i7(capsys):
    code = main(["--rhs", PIV_RHS])
    out = capsys.readouterr().out
    assert code == 1
    assert "I7" in out


def test_input_error_exit_three(capsys):
    assert main(["--rhs", "p^2 +"]) == 3
    assert main(["--rhs", "p^2 + c*y"]) == 3  # undeclared parameter


def test_param_declarations():
    code, report, _ = run(RunConfig(rhs="k*y + p^2", params=["k!=0"]))
    assert report["params"] == {"k": "nonzero"}
    code, report, _ = run(RunConfig(rhs="k*y + p^2", params=["k>0"]))
    assert report["params"] == {"k": "positive"}


def test_json_schema_keys():
    code, report, _ = run(RunConfig(rhs=P34_RHS, params=["b!=0"]))
    assert code == 0
    assert list(report) == [
        "input", "params", "invariants", "classification", "pii", "p34", "seed",
    ]
    assert list(report["invariants"]) == [
        "A", "B", "F5", "Omega", "N", "M",
        "I1", "I2", "I3", "I4", "I6", "I7", "I9", "J", "K",
    ]
    assert set(report["pii"]) >= {"outcome", "a_candidates", "transform", "residual"}
    assert set(report["p34"]) >= {"outcome", "beta_squared", "transform", "residual"}
    assert report["p34"]["outcome"] == "equivalent-p34"
    assert report["p34"]["residual"] < 1e-7
    assert report["seed"] == 2034


def test_json_byte_identical_for_same_seed():
    cfg = RunConfig(rhs=P34_RHS, params=["b!=0"], seed=7)
    _, r1, _ = run(cfg)
    _, r2, _ = run(cfg)
    assert json.dumps(r1) == json.dumps(r2)


def test_text_and_json_carry_same_verdicts():
    code, report, text = run(RunConfig(rhs=P34_RHS, params=["b!=0"]))
    assert ("P34: equivalent" in text) == (report["p34"]["outcome"] == "equivalent-p34")
    assert ("not equivalent" in text) == (report["pii"]["outcome"] == "not-equivalent")


def test_report_expressions_reparse():
    _, report, _ = run(RunConfig(rhs=P34_RHS, params=["b!=0"]))
    for key, text in report["invariants"].items():
        if text is not None:
            parse_expr(text)
    t = report["p34"]["transform"]
    parse_expr(t["x_new"])
    parse_expr(t["y_new"])


def test_implicit_mode():
    code, report, _ = run(
        RunConfig(implicit=("y + x", "p^2/2 + p + 2*y^3 + 4*x*y^2 + 2*x^2*y"))
    )
    assert code == 0
    assert report["p34"]["beta_squared"] == "1/4"


def test_verify_flag_adds_block():
    code, report, _ = run(RunConfig(rhs="2*y^3 + x*y", verify=True))
    assert code == 0
    assert report["verification"]["pii"]["passed"]


def test_arg_parser_requires_one_mode():
    ap = build_arg_parser()
    with pytest.raises(SystemExit):
        ap.parse_args(["--json"])
