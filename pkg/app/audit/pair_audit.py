"""
候选 Jacobian 对的约束审计
每项检查独立给出 pass / fail 与见证，不因单项失败而中断
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List

from app.audit.bounds import EXTENSION_DEGREE_LOWER_BOUND
from app.core.checks import CheckResult, FAIL, check
from app.core.errors import ToolkitError
from app.core.exact_algebra import FracMonomial, FracPoly, as_rational, jacobian
from app.core.newton_geometry import leading_vertex, newton_polygon, trapezoid_membership

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


@dataclass
class PairProfile:
    f: FracPoly
    g: FracPoly
    m: int
    n: int
    ny_g: int
    jacobian_value: FracPoly


@dataclass
class AuditReport:
    profile: PairProfile
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def get(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _validate(p: FracPoly, name: str) -> None:
    if p.is_zero():
        raise ToolkitError(f"{name} is zero", stage="audit")
    if set(p.variables()) - {"x", "y"}:
        raise ToolkitError(f"{name} 只能含 x, y: {p}", stage="audit")
    if not (p.has_integer_exponents("x", nonnegative=True) and p.has_integer_exponents("y", nonnegative=True)):
        raise ToolkitError(f"{name} 必须是 x, y 的多项式", stage="audit")


def _restricted_check(f: FracPoly, g: FracPoly) -> CheckResult:
    """f(x,0), g(x,0) 的依赖多边形不应退化为一条边"""
    name = "restricted_dependence_not_edge"
    f0, g0 = f.coefficient("y", 0), g.coefficient("y", 0)
    if f0.is_zero() or g0.is_zero():
        return CheckResult(name, FAIL, "f(x,0) or g(x,0) vanishes")
    df, dg = int(f0.degree("x")), int(g0.degree("x"))
    if df == 0 or dg == 0:
        return CheckResult(name, FAIL, f"constant restriction: f(x,0) = {f0}, g(x,0) = {g0}")
    common = gcd(df, dg)
    a, b = dg // common, df // common
    lhs = g0 ** b
    rhs = f0 ** a
    c = Fraction(lhs.leading_coefficient_in("x").constant_value()) / Fraction(rhs.leading_coefficient_in("x").constant_value())
    proportional = lhs == rhs.scale(as_rational(c))
    witness = f"g(x,0)^{b} {'=' if proportional else '!='} c*f(x,0)^{a}"
    return check(name, not proportional, witness)


def audit_pair(f: FracPoly, g: FracPoly) -> AuditReport:
    """
    对 (f, g) 逐项检查反例需要满足的约束

    参数:
        f, g: x, y 的非零多项式

    返回:
        AuditReport，检查顺序固定
    """
    _validate(f, "f")
    _validate(g, "g")
    value = jacobian(f, g)
    m, n = leading_vertex(f)
    mg, ny_g = leading_vertex(g)
    ny_f = int(f.degree("y"))
    profile = PairProfile(f, g, int(m), int(n), int(ny_g), value)
    checks: List[CheckResult] = []

    checks.append(check("jacobian_unimodular", value == 1, f"J = {value}"))

    trapezoid = trapezoid_membership(f)
    checks.append(check("trapezoid", trapezoid.passed,
                        "; ".join(trapezoid.violations) or f"(m,n) = ({m},{n})"))
    checks.append(check("no_bisectrix_edge", not trapezoid.bisectrix_edges,
                        ", ".join(f"{u}-{v}" for u, v in trapezoid.bisectrix_edges)))

    polygon_f, polygon_g = newton_polygon(f), newton_polygon(g)
    origin_f = polygon_f.vertex_index((0, 0)) is not None
    origin_g = polygon_g.vertex_index((0, 0)) is not None
    checks.append(check("origin_vertex", origin_f and origin_g, f"N(f): {origin_f}, N(g): {origin_g}"))

    ratio = Fraction(int(ny_g), ny_f)
    scaled = {tuple(as_rational(ratio * c) for c in v) for v in polygon_f.vertices}
    checks.append(check("similar_polygons", scaled == set(polygon_g.vertices), f"scale = {ratio}"))

    lc_f = f.coefficient_of(FracMonomial(x=m, y=n))
    lc_g = g.coefficient_of(FracMonomial(x=mg, y=ny_g))
    checks.append(check("leading_coefficients_one", lc_f == 1 and lc_g == 1, f"lc(f) = {lc_f}, lc(g) = {lc_g}"))

    checks.append(check("degree_non_divisibility", ny_g % ny_f != 0, f"deg_y f = {ny_f}, deg_y g = {ny_g}"))
    checks.append(check("g_degree_exceeds_f", ny_g > ny_f, f"deg_y f = {ny_f}, deg_y g = {ny_g}"))

    difference = g ** ny_f - f ** int(ny_g)
    bound = ny_f * int(ny_g)
    cancel_degree = None if difference.is_zero() else int(difference.degree("y"))
    checks.append(check("leading_powers_cancel", cancel_degree is None or cancel_degree < bound,
                        f"deg_y(g^{ny_f} - f^{ny_g}) = {cancel_degree}, bound {bound}"))

    gap = int(n - m)
    checks.append(check("nm_gap", gap > EXTENSION_DEGREE_LOWER_BOUND,
                        f"n - m = {gap}; [C(x,y):C(f,g)] >= {EXTENSION_DEGREE_LOWER_BOUND} when J(f,g) = 1"))

    checks.append(_restricted_check(f, g))

    report = AuditReport(profile, checks)
    logger.info(f"审计完成: {sum(c.passed for c in checks)}/{len(checks)} 项通过")
    return report
