"""
面 Φ_a 的界、顶点给出的 ρ 下界，以及两个特征对情形的矛盾
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from app.core.errors import ToolkitError
from app.core.exact_algebra import Number, as_rational, format_rational

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# [C(x, y) : C(f, g)] 对 Jacobian 反例的已知下界
EXTENSION_DEGREE_LOWER_BOUND = 6


@dataclass
class BoundSet:
    m: int
    n: int
    a0: int
    b0: int
    rho_upper: Number
    sigma_upper: Number
    degx_upper: Number
    zhang_bound: int
    nm_gap_ok: bool
    sharper_than_zhang: bool

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "a0": self.a0,
            "b0": self.b0,
            "rho_upper": format_rational(self.rho_upper),
            "sigma_upper": format_rational(self.sigma_upper),
            "degx_upper": format_rational(self.degx_upper),
            "zhang_bound": self.zhang_bound,
            "nm_gap_ok": self.nm_gap_ok,
            "sharper_than_zhang": self.sharper_than_zhang,
        }


@dataclass
class CharPairVerdict:
    a: int
    b: int
    a0: int
    b0: int
    rho_lower: Number
    rho_upper: Number
    contradiction: bool
    i: int
    j: int

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "a0": self.a0,
            "b0": self.b0,
            "rho_lower": format_rational(self.rho_lower),
            "rho_upper": format_rational(self.rho_upper),
            "contradiction": self.contradiction,
            "i": self.i,
            "j": self.j,
        }


def bounds_from_data(m: int, n: int, a0: int, b0: int) -> BoundSet:
    """
    Φ_a 的权重界
    ρ < (n−m)a0/(n(a0+b0)−a0)，σ = (b0/a0)ρ，deg_x 界 (n−m)·n·b0/(n(a0+b0)−a0)，与 m + n 比较

    参数:
        m, n: f 的首顶点
        a0, b0: 首边 (G^{a0} − F^{b0})^ν 的指数

    返回:
        BoundSet
    """
    if not n > m:
        raise ToolkitError("n > m violated", stage="bounds")
    if not m > 0:
        raise ToolkitError("m > 0 violated", stage="bounds")
    if a0 < 1 or b0 < 1 or gcd(a0, b0) != 1:
        raise ToolkitError("gcd(a0, b0) = 1 violated", stage="bounds")
    if not a0 < b0:
        raise ToolkitError("a0 < b0 violated", stage="bounds")
    denominator = n * (a0 + b0) - a0
    rho = as_rational(Fraction((n - m) * a0, denominator))
    sigma = as_rational(Fraction((n - m) * b0, denominator))
    degx = as_rational(Fraction((n - m) * n * b0, denominator))
    zhang = m + n
    return BoundSet(m, n, a0, b0, rho, sigma, degx, zhang, n - m > EXTENSION_DEGREE_LOWER_BOUND, degx < zhang)


def vertex_rho_bound(i: int, j: int, k: int, lambda0: Number, n: int) -> Number:
    """N(P) 的顶点 (i, j, k) 给出的下界 ρ ≥ k/(λ0(n − j) − i)"""
    if k < 0:
        raise ToolkitError(f"k must be nonnegative, got {k}")
    denominator = Fraction(as_rational(lambda0)) * (n - j) - i
    if denominator <= 0:
        raise ToolkitError("vertex outside the supporting cone")
    return as_rational(Fraction(k) / denominator)


def char_pair_contradiction(a: int, b: int, a0: int, b0: int) -> CharPairVerdict:
    """两个特征对（κ = 1）情形：ρ 的下界与上界重合，从而矛盾"""
    if not 0 < a < b:
        raise ToolkitError("0 < a < b violated", stage="charpair")
    if a0 < 1:
        raise ToolkitError("a0 >= 1 violated", stage="charpair")
    if not b0 > a0:
        raise ToolkitError("b0 > a0 violated", stage="charpair")
    if gcd(a0, b0) != 1:
        raise ToolkitError("gcd(a0, b0) = 1 violated", stage="charpair")

    # a0·i + b0·j = R，取 0 ≤ j < a0
    rhs = 1 - a0 * b + b0 * (a0 - 1) * b
    j = (rhs * pow(b0, -1, a0)) % a0 if a0 > 1 else 0
    i = (rhs - b0 * j) // a0

    rho_lower = as_rational(Fraction((b - a) * a0, b * a0 + b * b0 - 1))
    rho_upper = as_rational(Fraction((b - a) * a0, b * (a0 + b0) - 1))
    from_vertex = vertex_rho_bound(i, j, b - a, Fraction(b0, a0), b * a0)
    if from_vertex != rho_lower:
        logger.error(f"顶点下界 {from_vertex} 与闭式 {rho_lower} 不一致: a={a}, b={b}, a0={a0}, b0={b0}")
        raise ToolkitError("vertex bound disagrees with closed form", stage="charpair")
    return CharPairVerdict(a, b, a0, b0, rho_lower, rho_upper, rho_lower >= rho_upper, i, j)
