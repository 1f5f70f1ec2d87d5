import io
import json
from fractions import Fraction

import pytest

from app.cli.commands import EXIT_ERROR, EXIT_OK, EXIT_VERDICT, run
from app.cli.parser import parse_poly
from app.core.errors import PolySyntaxError
from app.core.exact_algebra import FracPoly, X, Y


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, json.loads(out.getvalue())


# ---- 表达式解析 ----

@pytest.mark.parametrize("text, expected", [
    ("x + y^2", X + Y ** 2),
    ("3/2*x^2*y", FracPoly.monomial(Fraction(3, 2), x=2, y=1)),
    ("(x + y)^2", X ** 2 + 2 * X * Y + Y ** 2),
    ("x^(-1)*y", FracPoly.monomial(1, x=-1, y=1)),
    ("x^(1/2)", FracPoly.monomial(1, x=Fraction(1, 2))),
    ("-y", -Y),
])
def test_parse_poly(text, expected):
    assert parse_poly(text) == expected


@pytest.mark.parametrize("text", ["x + y^2", "3/2*x^2*y", "x^(1/2) - x*y^(-1)", "G^2 - F^3 - 2*F^2 - F"])
def test_printed_form_parses_back(text):
    p = parse_poly(text)
    assert parse_poly(str(p)) == p


@pytest.mark.parametrize("text, message, offset", [
    ("", "empty expression", 0),
    ("x + z", "unknown variable 'z'", 4),
    ("y^2 +* x", "unexpected '*'", 5),
    ("x )", "unexpected ')'", 2),
    ("1/0", "zero denominator", 2),
])
def test_parse_errors_carry_offsets(text, message, offset):
    with pytest.raises(PolySyntaxError) as info:
        parse_poly(text)
    assert message in info.value.message
    assert info.value.offset == offset
    assert info.value.stage == "parse"


def test_fractional_power_of_sum_rejected():
    with pytest.raises(PolySyntaxError, match="non-integral power of a non-monomial"):
        parse_poly("(x + y)^(1/2)")


# ---- 各命令 ----

def test_depend_command():
    code, document = invoke("depend", "--f", "y^2", "--g", "y^3+y")
    assert code == EXIT_OK
    assert document["P"] == "G^2 - F^3 - 2*F^2 - F"
    assert document["verified"] is True
    assert document["monic"]["ok"] is True
    assert document["edge"] == [[3, 0, 0], [0, 2, 0]]


def test_puiseux_command():
    code, document = invoke("puiseux", "--f", "y^2-x", "--dir", "dec", "--order", "5")
    assert code == EXIT_OK
    assert document["direction"] == "decreasing"
    assert document["deg_y"] == 2
    assert [b["terms"][0]["coeff"] for b in document["branches"]] == ["-1", "1"]
    assert all(b["terms"][0]["exp"] == "1/2" for b in document["branches"])


def test_expand_command():
    code, document = invoke("expand", "--f", "x+y^2", "--g", "y")
    assert code == EXIT_OK
    assert document["lambdas"] == ["1/2"]
    assert document["kappa"] == 1
    assert document["remainder"] == {"coeff": "-1/2*x", "yexp": -1}
    assert document["status"] == "terminated-unimodular"
    assert (document["m"], document["n"]) == ("0", 2)


def test_expand_without_jacobian_check():
    code, document = invoke("expand", "--f", "y^2", "--g", "y^3", "--no-jacobian-check")
    assert code == EXIT_OK
    assert document["status"] == "terminated-zero"
    assert document["lambdas"] == ["3/2"]
    assert document["kappa"] == 1


def test_complete_expand_command():
    code, document = invoke("expand", "--f", "x+y^2", "--g", "y", "--floor=-4", "--complete")
    assert code == EXIT_OK
    assert document["lambdas"] == ["1/2", "-1/2", "-3/2"]
    assert document["status"] == "truncated-at-floor"


def test_polygon_command():
    code, document = invoke("polygon", "--f", "x^2*y^3 + x*y + 1")
    assert code == EXIT_OK
    assert document["trapezoid"]["passed"] is True
    assert (document["trapezoid"]["m"], document["trapezoid"]["n"]) == ("2", "3")
    assert document["polygon"]["dim"] == 2


def test_polytope_of_tetrahedron():
    code, document = invoke("polytope", "--f", "F^3 + G^2 + x + 1")
    assert code == EXIT_OK
    assert document["shape"]["passed"] is True
    assert document["edge"] == [["3", "0", "0"], ["0", "2", "0"]]
    assert (document["phi_a"]["rho"], document["phi_a"]["sigma"]) == ("1/3", "1/2")
    assert all("class" in face for face in document["polytope"]["faces"])


def test_degenerate_polytope_is_a_verdict():
    code, document = invoke("polytope", "--f", "y^2", "--g", "y^3+y")
    assert code == EXIT_VERDICT
    assert document["shape_error"]["stage"] == "polytope"
    assert document["P"] == "G^2 - F^3 - 2*F^2 - F"


def test_audit_command_reports_failed_checks():
    code, document = invoke("audit", "--f", "x+y^2", "--g", "y")
    assert code == EXIT_VERDICT
    assert document["passed"] is False
    assert document["checks"][0]["name"] == "jacobian_unimodular"
    assert document["checks"][0]["status"] == "pass"
    assert {e["stage"] for e in document["errors"]} == {"polytope", "bounds"}
    assert document["record_id"] is None


def test_audit_command_with_shift():
    code, document = invoke("audit", "--f", "x+y^2", "--g", "y", "--shift", "1,1")
    assert code == EXIT_VERDICT
    assert document["shift"] == ["1", "1"]
    assert document["dependence"]["P"] == "G^2 + 2*G - F + x"


def test_bounds_command():
    code, document = invoke("bounds", "--params", "1,8,2,3")
    assert code == EXIT_OK
    assert document["rho_upper"] == "7/19"
    assert document["zhang_bound"] == 9


def test_charpair_command():
    code, document = invoke("charpair", "--params", "1,2,2,3")
    assert code == EXIT_OK
    assert document["contradiction"] is True
    assert document["rho_lower"] == document["rho_upper"] == "2/9"


def test_file_bindings(tmp_path):
    path = tmp_path / "pair.txt"
    path.write_text("# parabola\nf = x + y^2\n\ng = y\n", encoding="utf-8")
    code, document = invoke("depend", "--file", str(path), "--f", "f", "--g", "g")
    assert code == EXIT_OK
    assert document["P"] == "G^2 - F + x"


def test_file_binding_errors(tmp_path):
    path = tmp_path / "broken.txt"
    path.write_text("f = x +\n", encoding="utf-8")
    code, document = invoke("depend", "--file", str(path), "--f", "f", "--g", "y")
    assert code == EXIT_ERROR
    assert document["error"]["stage"] == "parse"
    assert "broken.txt:1" in document["error"]["message"]


# ---- 错误 ----

@pytest.mark.parametrize("argv, stage, message", [
    ([], "cli", "command"),
    (["bounds", "--params", "1,2,3"], "cli", "four integers"),
    (["bounds", "--params", "1,a,2,3"], "cli", "four integers"),
    (["bounds", "--params", "3,3,2,3"], "bounds", "n > m violated"),
    (["charpair", "--params", "1,2,2,4"], "charpair", "gcd"),
    (["depend", "--f", "x + z", "--g", "y"], "parse", "unknown variable 'z' (offset 4)"),
    (["expand", "--f", "y^2", "--g", "y^3"], "expand", "jacobian precondition violated"),
    (["audit", "--f", "x+y^2", "--g", "y", "--shift", "1"], "cli", "shift"),
    (["audit", "--f", "x+y^2", "--g", "y", "--shift", "1,a"], "cli", "shift must be rational"),
    (["puiseux", "--f", "y^2-x", "--dir", "sideways"], "cli", "invalid choice"),
    (["depend", "--f", "y", "--file", "/nonexistent/bindings.txt", "--g", "y"], "input", "/nonexistent"),
])
def test_errors_exit_with_two(argv, stage, message):
    code, document = invoke(*argv)
    assert code == EXIT_ERROR
    assert set(document) == {"error"}
    assert document["error"]["stage"] == stage
    assert message in document["error"]["message"]
