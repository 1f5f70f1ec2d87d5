"""
渐近级数代数与 g 关于 f 的展开

AsymSeries 是按 y 降幂排列的截断级数，系数为 x 的 Laurent 多项式（允许分数指数）。
每个级数都带截断下界 floor：y 指数 ≤ floor 的部分未知，运算会正确地传递 floor。
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, List, Optional, Union

import sympy

from app import config
from app.core.errors import ToolkitError
from app.core.exact_algebra import (
    FracMonomial,
    FracPoly,
    Number,
    as_rational,
    format_rational,
    jacobian,
)

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

TERMINATED_UNIMODULAR = "terminated-unimodular"
TERMINATED_ZERO = "terminated-zero"
BUDGET_EXHAUSTED = "budget-exhausted"
TRUNCATED_AT_FLOOR = "truncated-at-floor"


def _max_floor(*floors: Optional[int]) -> Optional[int]:
    known = [f for f in floors if f is not None]
    return max(known) if known else None


@dataclass(frozen=True)
class LeadingTerm:
    """|a| = coeff · y^y_exponent"""
    coeff: FracPoly
    y_exponent: int

    def as_poly(self) -> FracPoly:
        return self.coeff.mul_monomial(1, FracMonomial(y=self.y_exponent))

    def __str__(self) -> str:
        return str(self.as_poly())


class AsymSeries:
    """截断渐近级数 Σ_{k ≤ top, k > floor} c_k(x) y^k；floor 为 None 表示精确（有限和）"""

    __slots__ = ("terms", "floor")

    def __init__(self, terms: Optional[Dict[int, FracPoly]] = None, floor: Optional[int] = None):
        clean: Dict[int, FracPoly] = {}
        for k, coeff in (terms or {}).items():
            if not isinstance(k, int):
                raise ToolkitError(f"y 的指数必须是整数: {k}")
            coeff = FracPoly.coerce(coeff)
            if set(coeff.variables()) - {"x"}:
                raise ToolkitError(f"级数系数只能含 x: {coeff}")
            if coeff.is_zero() or (floor is not None and k <= floor):
                continue
            clean[k] = coeff
        self.terms = clean
        self.floor = floor

    @classmethod
    def from_poly(cls, p: FracPoly, floor: Optional[int] = None) -> "AsymSeries":
        if set(p.variables()) - {"x", "y"}:
            raise ToolkitError(f"只能把 x, y 的多项式看作级数: {p}")
        if not p.has_integer_exponents("y"):
            raise ToolkitError("y 的指数必须是整数")
        return cls({int(k): c for k, c in p.coefficients_in("y").items()}, floor)

    @classmethod
    def one(cls) -> "AsymSeries":
        return cls({0: FracPoly.constant(1)})

    # ---- 属性 ----

    @property
    def top(self) -> Optional[int]:
        return max(self.terms) if self.terms else None

    @property
    def n(self) -> int:
        """x 指数分母的最小公倍数"""
        dens = [Fraction(m.x).denominator for c in self.terms.values() for m in c.support()]
        return reduce(lambda a, b: a * b // gcd(a, b), dens, 1)

    def is_zero(self) -> bool:
        return not self.terms

    def _effective_top(self) -> Optional[int]:
        return self.top if self.terms else self.floor

    def truncate(self, floor: Optional[int]) -> "AsymSeries":
        return AsymSeries(self.terms, _max_floor(self.floor, floor))

    def to_poly(self) -> FracPoly:
        result = FracPoly.zero()
        for k, coeff in self.terms.items():
            result = result + coeff.mul_monomial(1, FracMonomial(y=k))
        return result

    def leading_term(self) -> LeadingTerm:
        if self.is_zero():
            raise ToolkitError("leading term of zero series")
        return LeadingTerm(self.terms[self.top], self.top)

    def coefficient(self, k: int) -> FracPoly:
        return self.terms.get(k, FracPoly.zero())

    # ---- 运算 ----

    def __neg__(self) -> "AsymSeries":
        return AsymSeries({k: -c for k, c in self.terms.items()}, self.floor)

    def __add__(self, other: "AsymSeries") -> "AsymSeries":
        floor = _max_floor(self.floor, other.floor)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return AsymSeries(terms, floor)

    def __sub__(self, other: "AsymSeries") -> "AsymSeries":
        return self + (-other)

    def scale(self, factor: Union[FracPoly, Number]) -> "AsymSeries":
        """乘以只含 x 的系数"""
        factor = FracPoly.coerce(factor)
        return AsymSeries({k: c * factor for k, c in self.terms.items()}, self.floor)

    def __mul__(self, other: "AsymSeries") -> "AsymSeries":
        if (self.is_zero() and self.floor is None) or (other.is_zero() and other.floor is None):
            return AsymSeries()
        candidates = []
        if self.floor is not None and other._effective_top() is not None:
            candidates.append(self.floor + other._effective_top())
        if other.floor is not None and self._effective_top() is not None:
            candidates.append(other.floor + self._effective_top())
        floor = max(candidates) if candidates else None
        terms: Dict[int, FracPoly] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                if floor is not None and k <= floor:
                    continue
                product = c1 * c2
                terms[k] = terms[k] + product if k in terms else product
        return AsymSeries(terms, floor)

    def __pow__(self, k: int) -> "AsymSeries":
        if not isinstance(k, int) or k < 0:
            raise ToolkitError(f"级数只支持非负整数幂: {k}")
        result = AsymSeries.one()
        for _ in range(k):
            result = result * self
        return result

    def derivative(self, var: str) -> "AsymSeries":
        if var == "x":
            return AsymSeries({k: c.derivative("x") for k, c in self.terms.items()}, self.floor)
        if var == "y":
            floor = None if self.floor is None else self.floor - 1
            return AsymSeries({k - 1: c.scale(k) for k, c in self.terms.items()}, floor)
        raise ToolkitError(f"未知变量: {var}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, AsymSeries):
            return NotImplemented
        return self.terms == other.terms and self.floor == other.floor

    def __str__(self) -> str:
        body = str(self.to_poly())
        return body if self.floor is None else f"{body} + O(y^{self.floor})"

    def __repr__(self) -> str:
        return f"AsymSeries('{self}')"


# ---- 有理幂 ----

def rational_power(c: Number, r: Number) -> Number:
    """c^r，要求结果为有理数"""
    c, r = Fraction(as_rational(c)), Fraction(as_rational(r))
    if c == 0:
        raise ToolkitError("zero leading coefficient")
    base = c ** r.numerator
    q = r.denominator
    if q == 1:
        return as_rational(base)
    if base < 0 and q % 2 == 0:
        raise ToolkitError(f"leading coefficient power {format_rational(c)}^{format_rational(r)} is not rational")
    sign = -1 if base < 0 else 1
    num, num_exact = sympy.integer_nthroot(abs(base.numerator), q)
    den, den_exact = sympy.integer_nthroot(base.denominator, q)
    if not (num_exact and den_exact):
        raise ToolkitError(f"leading coefficient power {format_rational(c)}^{format_rational(r)} is not rational")
    return as_rational(Fraction(sign * int(num), int(den)))


def leading_term(a: AsymSeries) -> LeadingTerm:
    return a.leading_term()


def binomial_power(a: AsymSeries, r: Number, floor: int) -> AsymSeries:
    """
    a^r = |a|^r Σ_j C(r, j) u^j，u = (a − |a|)/|a|，截断到 y 指数 > floor

    参数:
        a: 首项为单项式 c x^l y^k 的级数
        r: 有理指数，要求 r·k 为整数且 c^r 有理
        floor: 结果的截断下界

    返回:
        截断后的 a^r
    """
    r = as_rational(r)
    lead = a.leading_term()
    if not lead.coeff.is_monomial():
        raise ToolkitError("radical of non-monomial leading term")
    mono, c = lead.coeff.sole_term()
    k = lead.y_exponent
    ry = Fraction(r) * k
    if ry.denominator != 1:
        raise ToolkitError(f"y-exponent {format_rational(as_rational(ry))} of |a|^r is not integral")
    ry = int(ry)
    if r == 1:
        return a.truncate(floor)

    head = AsymSeries({ry: FracPoly.monomial(rational_power(c, r), x=as_rational(mono.x * r))})
    inverse = FracPoly.monomial(Fraction(1) / Fraction(c), x=as_rational(-mono.x))
    u_floor = None if a.floor is None else a.floor - k
    rest = {j - k: coeff * inverse for j, coeff in a.terms.items() if j != k}
    s_floor = floor - ry
    u = AsymSeries(rest, _max_floor(u_floor, s_floor))

    total = AsymSeries.one().truncate(s_floor)
    power = AsymSeries.one()
    binom = Fraction(1)
    j = 0
    while True:
        j += 1
        power = (power * u).truncate(s_floor)
        if power.is_zero():
            total = AsymSeries(total.terms, _max_floor(total.floor, power.floor))
            break
        binom = binom * (Fraction(r) - j + 1) / j
        total = total + power.scale(as_rational(binom))
    return (head * total).truncate(floor)


def jac_series(a: AsymSeries, b: AsymSeries) -> AsymSeries:
    """J(a, b) = a_x b_y − a_y b_x，逐项精确计算"""
    return a.derivative("x") * b.derivative("y") - a.derivative("y") * b.derivative("x")


# ---- g 关于 f 的展开 ----

@dataclass
class ExpansionResult:
    lambdas: List[Number]
    coeffs: List[FracPoly]
    kappa: int
    remainder_leading: Optional[LeadingTerm]
    status: str
    m: Number
    n: int
    floor: int
    c_kappa: Optional[FracPoly] = None
    formula_ok: Optional[bool] = None
    steps: List[str] = field(default_factory=list)


def _leading_monomial_of_f(F: AsymSeries):
    lead = F.leading_term()
    if not lead.coeff.is_monomial():
        raise ToolkitError(f"|f| must be a monomial, got {lead}")
    mono, c_f = lead.coeff.sole_term()
    if lead.y_exponent < 1:
        raise ToolkitError("deg_y(f) must be at least 1")
    return lead, mono.x, lead.y_exponent, c_f


def expand_g_in_f(f: FracPoly, g: FracPoly, floor: int = -8, check_jacobian: bool = True,
                  max_steps: Optional[int] = None) -> ExpansionResult:
    """
    展开 g = Σ c_i f^{λ_i} + g_κ，c_i 为常数

    J(|f|, |g_i|) = 0 时减去 c_i f^{λ_i} 继续；等于 1 时停止（terminated-unimodular）；
    余项在 floor 以上为零时为 terminated-zero；步数用尽为 budget-exhausted
    """
    if check_jacobian:
        value = jacobian(f, g)
        if value != 1:
            raise ToolkitError(f"jacobian precondition violated: J(f, g) = {value}")
    max_steps = max_steps or config.EXPANSION_MAX_STEPS
    F = AsymSeries.from_poly(f, floor)
    G = AsymSeries.from_poly(g, floor)
    lead_f, m, n, c_f = _leading_monomial_of_f(F)
    lead_f_poly = lead_f.as_poly()

    lambdas: List[Number] = []
    coeffs: List[FracPoly] = []
    steps: List[str] = []
    remainder = G

    def result(status, leading=None, c_kappa=None, formula_ok=None):
        return ExpansionResult(lambdas, coeffs, len(lambdas), leading, status, m, n, floor,
                               c_kappa, formula_ok, steps)

    for _ in range(max_steps):
        if remainder.is_zero():
            logger.info(f"展开终止: 余项在 y^{floor} 以上为零, κ = {len(lambdas)}")
            return result(TERMINATED_ZERO)
        lead = remainder.leading_term()
        value = jacobian(lead_f_poly, lead.as_poly())
        if value.is_zero():
            if not lead.coeff.is_monomial():
                raise ToolkitError(f"non-unimodular obstruction: |g_{len(lambdas)}| = {lead}")
            _, c = lead.coeff.sole_term()
            lam = as_rational(Fraction(lead.y_exponent, n))
            c_i = as_rational(Fraction(c) / Fraction(rational_power(c_f, lam)))
            power = binomial_power(F, lam, floor)
            lambdas.append(lam)
            coeffs.append(FracPoly.constant(c_i))
            steps.append(f"subtract {format_rational(c_i)}*f^({format_rational(lam)})")
            remainder = remainder - power.scale(c_i)
            if not remainder.is_zero() and remainder.top >= lead.y_exponent:
                raise ToolkitError("expansion made no progress")
            continue
        if value == 1:
            expected = (FracPoly.monomial(Fraction(1) / (Fraction(c_f) * (m - n)), x=as_rational(1 - m))
                        if m != n else FracPoly.zero())
            c_kappa = lead.coeff - expected
            formula_ok = c_kappa.is_zero() and lead.y_exponent == 1 - n
            if m > 0 and not c_kappa.is_zero():
                raise ToolkitError(f"c_kappa = {c_kappa} must vanish when m > 0")
            logger.info(f"展开终止: J(|f|, |g_κ|) = 1, κ = {len(lambdas)}, |g_κ| = {lead}")
            return result(TERMINATED_UNIMODULAR, lead, c_kappa, formula_ok)
        raise ToolkitError(f"non-unimodular obstruction: J(|f|, |g_{len(lambdas)}|) = {value}")

    logger.warning(f"展开达到步数上限 {max_steps}")
    return result(BUDGET_EXHAUSTED, remainder.leading_term() if not remainder.is_zero() else None)


def expand_g_complete(f: FracPoly, g: FracPoly, floor: int = -8,
                      max_steps: Optional[int] = None) -> ExpansionResult:
    """完整展开 g = Σ c_i f^{λ_i}，c_i 为 x^{1/n} 的 Laurent 多项式，截断到 floor"""
    max_steps = max_steps or config.EXPANSION_MAX_STEPS
    F = AsymSeries.from_poly(f, floor)
    remainder = AsymSeries.from_poly(g, floor)
    _, m, n, c_f = _leading_monomial_of_f(F)
    lambdas: List[Number] = []
    coeffs: List[FracPoly] = []
    for _ in range(max_steps):
        if remainder.is_zero():
            return ExpansionResult(lambdas, coeffs, len(lambdas), None, TRUNCATED_AT_FLOOR, m, n, floor)
        lead = remainder.leading_term()
        lam = as_rational(Fraction(lead.y_exponent, n))
        scale = Fraction(rational_power(c_f, lam))
        c_i = lead.coeff.mul_monomial(1 / scale, FracMonomial(x=as_rational(-m * lam)))
        lambdas.append(lam)
        coeffs.append(c_i)
        remainder = remainder - binomial_power(F, lam, floor).scale(c_i)
    return ExpansionResult(lambdas, coeffs, len(lambdas),
                           None if remainder.is_zero() else remainder.leading_term(),
                           BUDGET_EXHAUSTED, m, n, floor)


# ---- ε 共轭 ----

@dataclass(frozen=True)
class ConjugateTerm:
    exponent: Number
    coeff: FracPoly
    phase: int
    sign: Optional[int]


@dataclass(frozen=True)
class ConjugateRoot:
    """F^{1/n} -> ε^j F^{1/n} 之后的展开，phase 是 ε 的指数（模 n）"""
    j: int
    terms: List[ConjugateTerm]


def conjugate_roots(e: ExpansionResult, n: int) -> List[ConjugateRoot]:
    if n < 1:
        raise ToolkitError(f"n must be positive: {n}")
    numerators = []
    for lam in e.lambdas:
        scaled = Fraction(lam) * n
        if scaled.denominator != 1:
            raise ToolkitError(f"exponent {format_rational(lam)} is not on the lattice (1/{n})Z")
        numerators.append(int(scaled))
    roots = []
    for j in range(n):
        terms = []
        for lam, coeff, n_i in zip(e.lambdas, e.coeffs, numerators):
            phase = (j * n_i) % n
            sign = 1 if phase == 0 else (-1 if 2 * phase == n else None)
            terms.append(ConjugateTerm(lam, coeff, phase, sign))
        roots.append(ConjugateRoot(j, terms))
    return roots


def expansion_to_dict(e: ExpansionResult) -> dict:
    remainder = None
    if e.remainder_leading is not None:
        remainder = {"coeff": str(e.remainder_leading.coeff), "yexp": e.remainder_leading.y_exponent}
    return {
        "lambdas": [format_rational(lam) for lam in e.lambdas],
        "coeffs": [str(c) for c in e.coeffs],
        "kappa": e.kappa,
        "remainder": remainder,
        "status": e.status,
        "c_kappa": None if e.c_kappa is None else str(e.c_kappa),
        "formula_ok": e.formula_ok,
    }
