"""
Newton-Puiseux 求解
求出 p(x, y) = 0 的全部分数幂级数根 y(x)，截断到给定阶数；
increasing 方向为 x = 0 处按 x 升幂的根，decreasing 方向为 x = ∞ 处按 x 降幂的根
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import comb, gcd
from typing import Dict, List, Optional, Tuple, Union

import mpmath
from mpmath.libmp import NoConvergence
import sympy

from app import config
from app.core.errors import ToolkitError
from app.core.exact_algebra import FracMonomial, FracPoly, Number, as_rational, format_rational, substitute
from app.core.newton_geometry import lower_hull_2d

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

INCREASING = "increasing"
DECREASING = "decreasing"
DIRECTIONS = (INCREASING, DECREASING)

Coefficient = Union[int, Fraction, mpmath.mpc]
# 内部二元表示：(x 指数, y 指数) -> 系数，坐标总是 increasing 方向
Bivariate = Dict[Tuple[Number, int], Coefficient]


@dataclass(frozen=True)
class CoeffValue:
    """系数：精确有理数，或高精度近似值及其误差半径"""
    exact: Optional[Number] = None
    approx: Optional[mpmath.mpc] = None
    radius: Optional[mpmath.mpf] = None

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @property
    def value(self) -> Coefficient:
        return self.exact if self.is_exact else self.approx

    def negated(self) -> "CoeffValue":
        if self.is_exact:
            return CoeffValue(exact=-self.exact)
        return CoeffValue(approx=-self.approx, radius=self.radius)

    def sort_key(self) -> tuple:
        if self.is_exact:
            return (0, Fraction(self.exact), 0.0)
        return (1, float(self.approx.real), float(self.approx.imag))

    def __str__(self) -> str:
        if self.is_exact:
            return format_rational(self.exact)
        re_part = mpmath.nstr(self.approx.real, 15)
        im_part = mpmath.nstr(abs(self.approx.imag), 15)
        sign = "-" if self.approx.imag < 0 else "+"
        return f"~({re_part} {sign} {im_part}i)"


@dataclass(frozen=True)
class PuiseuxTerm:
    coeff: CoeffValue
    exponent: Number


@dataclass
class PuiseuxBranch:
    """截断的分数幂级数根，terms 按方向排序"""
    terms: List[PuiseuxTerm]
    multiplicity: int
    direction: str = INCREASING
    terminated: bool = False

    @property
    def ramification(self) -> int:
        dens = [Fraction(t.exponent).denominator for t in self.terms]
        return reduce(lambda a, b: a * b // gcd(a, b), dens, 1)

    @property
    def exact(self) -> bool:
        return all(t.coeff.is_exact for t in self.terms)

    def truncated_poly(self) -> FracPoly:
        """截断根 Σ c x^e（只对精确分支）"""
        if not self.exact:
            raise ToolkitError("inexact branch has no exact truncation")
        return FracPoly({FracMonomial(x=t.exponent): t.coeff.exact for t in self.terms})

    def sort_key(self) -> tuple:
        return tuple((Fraction(t.exponent), t.coeff.sort_key()) for t in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{t.coeff}*x^({format_rational(t.exponent)})" for t in self.terms)


# ---- 内部表示 ----

def _check_direction(direction: str) -> str:
    aliases = {"inc": INCREASING, "dec": DECREASING}
    direction = aliases.get(direction, direction)
    if direction not in DIRECTIONS:
        raise ToolkitError(f"未知方向: {direction}")
    return direction


def _to_bivariate(p: FracPoly, direction: str) -> Bivariate:
    if p.is_zero():
        raise ToolkitError("no branches: zero polynomial")
    extra = set(p.variables()) - {"x", "y"}
    if extra:
        raise ToolkitError(f"Puiseux 求解只接受 x, y 的多项式，出现了 {sorted(extra)}")
    if not p.has_integer_exponents("y", nonnegative=True):
        raise ToolkitError("y 的指数必须是非负整数")
    sign = 1 if direction == INCREASING else -1
    return {(as_rational(sign * mono.x), int(mono.y)): coeff for mono, coeff in p.items()}


class _Arithmetic:
    """精确 / 近似两种系数运算的公共入口"""

    def __init__(self, digits: int, scale: mpmath.mpf):
        self.digits = digits
        self.tol = scale * mpmath.mpf(10) ** (-(digits // 2))

    @staticmethod
    def is_numeric(value) -> bool:
        return isinstance(value, (mpmath.mpc, mpmath.mpf))

    @staticmethod
    def to_mp(value) -> mpmath.mpc:
        if isinstance(value, (mpmath.mpc, mpmath.mpf)):
            return mpmath.mpc(value)
        frac = Fraction(value)
        return mpmath.mpc(mpmath.mpf(frac.numerator) / frac.denominator)

    def is_zero(self, value) -> bool:
        if self.is_numeric(value):
            return abs(value) <= self.tol
        return value == 0

    def shift(self, work: Bivariate, c: Coefficient, e: Number) -> Bivariate:
        """p(x, y) -> p(x, c x^e + y)"""
        numeric = self.is_numeric(c) or any(self.is_numeric(v) for v in work.values())
        if numeric:
            c = self.to_mp(c)
        powers = [1]
        result: Dict[Tuple[Number, int], Coefficient] = {}
        for (i, j), a in work.items():
            if numeric:
                a = self.to_mp(a)
            while len(powers) <= j:
                powers.append(powers[-1] * c)
            for k in range(j + 1):
                key = (as_rational(i + e * (j - k)), k)
                result[key] = result.get(key, 0) + a * comb(j, k) * powers[j - k]
        return {key: v for key, v in result.items() if not self.is_zero(v)}

    def edge_roots(self, coeffs: List[Coefficient]) -> List[Tuple[CoeffValue, int]]:
        """边多项式 Σ coeffs[k] t^k 的非零根及重数"""
        if any(self.is_numeric(c) for c in coeffs):
            return self._numeric_roots([self.to_mp(c) for c in coeffs])
        t = sympy.Symbol("t")
        poly = sympy.Poly(
            [sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) for c in reversed(coeffs)],
            t, domain=sympy.QQ,
        )
        roots = []
        _, factors = poly.factor_list()
        for factor, multiplicity in factors:
            if factor.degree() == 1:
                a, b = factor.all_coeffs()
                roots.append((CoeffValue(exact=as_rational(-b / a)), int(multiplicity)))
                continue
            irrational = [
                self.to_mp(Fraction(int(q.p), int(q.q))) for q in factor.all_coeffs()
            ]
            for value, _ in self._numeric_roots(list(reversed(irrational))):
                roots.append((value, int(multiplicity)))
        return roots

    def _numeric_roots(self, coeffs: List[mpmath.mpc]) -> List[Tuple[CoeffValue, int]]:
        degree = len(coeffs) - 1
        with mpmath.workdps(self.digits):
            if degree == 1:
                found, err = [-coeffs[0] / coeffs[1]], mpmath.mpf(0)
            else:
                try:
                    found, err = mpmath.polyroots(
                        list(reversed(coeffs)), maxsteps=200, extraprec=2 * self.digits, error=True
                    )
                except NoConvergence:
                    raise ToolkitError("precision exhausted: root finder did not converge")
            if err > self.tol:
                raise ToolkitError(f"precision exhausted: root error {mpmath.nstr(err, 5)}")
            cluster = mpmath.mpf(10) ** (-(self.digits // (2 * max(degree, 1))))
            groups: List[List[mpmath.mpc]] = []
            for root in found:
                root = mpmath.mpc(root)
                for group in groups:
                    if abs(group[0] - root) <= cluster:
                        group.append(root)
                        break
                else:
                    groups.append([root])
            radius = mpmath.mpf(err) + self.tol
            return [
                (CoeffValue(approx=mpmath.fsum(g) / len(g), radius=radius), len(g))
                for g in groups
            ]


def _edges(work: Bivariate, after: Optional[Number]) -> List[Tuple[Number, List[Coefficient]]]:
    """下凸包在 (y 指数, x 指数) 平面上的各条边：(指数 e, 边多项式系数)

    只保留 e > after 的边；e = -Δi/Δj
    """
    chain = lower_hull_2d([(j, i) for (i, j) in work])
    edges = []
    for (j1, i1), (j2, i2) in zip(chain, chain[1:]):
        e = as_rational(Fraction(-(i2 - i1)) / (j2 - j1))
        if after is not None and e <= after:
            continue
        coeffs = []
        for j in range(int(j1), int(j2) + 1):
            coeffs.append(work.get((as_rational(i1 - e * (j - j1)), j), 0))
        edges.append((e, coeffs))
    return edges


def _y_order(work: Bivariate) -> int:
    return min(j for (_, j) in work)


def _scale(p: FracPoly) -> mpmath.mpf:
    largest = max(abs(Fraction(c)) for _, c in p.items())
    return max(mpmath.mpf(1), mpmath.mpf(largest.numerator) / largest.denominator)


def _external(exponent: Number, direction: str) -> Number:
    return exponent if direction == INCREASING else as_rational(-exponent)


# ---- 分支求解 ----

def edge_roots(p: FracPoly, direction: str = INCREASING,
               digits: Optional[int] = None) -> List[Tuple[PuiseuxTerm, int]]:
    """
    第一步的边根：下凸包每条边给出首项 c x^e 及其重数

    参数:
        p: x, y 的多项式，deg_y(p) ≥ 1
        direction: increasing / decreasing（也接受 inc / dec）

    返回:
        [(首项, 重数)]，按 (指数, 系数) 排序
    """
    direction = _check_direction(direction)
    if p.is_zero() or not p.has_integer_exponents("y") or p.degree("y") < 1:
        raise ToolkitError("no branches: polynomial independent of y")
    work = _to_bivariate(p, direction)
    arithmetic = _Arithmetic(digits or config.PUISEUX_DIGITS, _scale(p))
    found = []
    for e, coeffs in _edges(work, None):
        for value, multiplicity in arithmetic.edge_roots(coeffs):
            found.append((PuiseuxTerm(value, _external(e, direction)), multiplicity))
    found.sort(key=lambda item: (Fraction(item[0].exponent), item[0].coeff.sort_key()))
    return found


def _refine(work: Bivariate, terms: List[PuiseuxTerm], multiplicity: int, order: Number,
            direction: str, arithmetic: _Arithmetic, max_steps: int) -> List[PuiseuxBranch]:
    """深度优先地细化一个（子）分支，terms 中的指数为内部 increasing 坐标"""
    results = []
    stack = [(work, terms, multiplicity, 0)]
    while stack:
        current, prefix, mult, steps = stack.pop()
        base = [i for (i, j) in current if j == 0]
        if prefix:
            if base and min(base) > order:
                results.append((prefix, mult, False))
                continue
            if steps >= max_steps:
                logger.warning(f"分支扩展达到步数上限 {max_steps}，按当前截断返回")
                results.append((prefix, mult, False))
                continue
        last = prefix[-1].exponent if prefix else None
        zero_mult = 0 if base else _y_order(current)
        if zero_mult:
            results.append((prefix, zero_mult, True))
        children = []
        for e, coeffs in _edges(current, last):
            for value, r in arithmetic.edge_roots(coeffs):
                child = arithmetic.shift(current, value.value, e)
                children.append((child, prefix + [PuiseuxTerm(value, e)], r, steps + 1))
        if zero_mult + sum(c[2] for c in children) != mult:
            logger.warning(f"分支重数不守恒: {mult} -> {zero_mult} + {[c[2] for c in children]}")
        stack.extend(reversed(children))

    branches = []
    for prefix, mult, terminated in results:
        external = [PuiseuxTerm(t.coeff, _external(t.exponent, direction)) for t in prefix]
        branches.append(PuiseuxBranch(external, mult, direction, terminated))
    return branches


def _prepare(p: FracPoly, direction: str, digits: Optional[int]):
    if p.is_zero() or not p.has_integer_exponents("y") or p.degree("y") < 1:
        raise ToolkitError("no branches: polynomial independent of y")
    return _to_bivariate(p, direction), _Arithmetic(digits or config.PUISEUX_DIGITS, _scale(p))


def all_branches(p: FracPoly, direction: str = INCREASING, order: Number = 8,
                 digits: Optional[int] = None, max_steps: Optional[int] = None) -> List[PuiseuxBranch]:
    """全部 deg_y(p) 个根（按重数计），每个截断到 order"""
    direction = _check_direction(direction)
    order = as_rational(order)
    work, arithmetic = _prepare(p, direction, digits)
    with mpmath.workdps(arithmetic.digits):
        branches = _refine(work, [], int(p.degree("y")), order, direction, arithmetic,
                           max_steps or config.PUISEUX_MAX_STEPS)
    branches.sort(key=PuiseuxBranch.sort_key)
    logger.info(f"Puiseux 求解完成: {len(branches)} 个分支, 方向 {direction}, 阶数 {format_rational(order)}")
    return branches


def _replay(p: FracPoly, branch: PuiseuxBranch, arithmetic: _Arithmetic) -> Tuple[Bivariate, List[PuiseuxTerm]]:
    """按分支已有的各项依次平移 p，得到内部坐标下的当前多项式"""
    work = _to_bivariate(p, branch.direction)
    internal = []
    for term in branch.terms:
        e = _external(term.exponent, branch.direction)
        work = arithmetic.shift(work, term.coeff.value, e)
        internal.append(PuiseuxTerm(term.coeff, e))
    return work, internal


def refine_branch(p: FracPoly, branch: PuiseuxBranch, order: Number,
                  digits: Optional[int] = None, max_steps: Optional[int] = None) -> List[PuiseuxBranch]:
    """把一个分支扩展到 order，返回它分裂出的全部子分支"""
    order = as_rational(order)
    if branch.terminated:
        return [branch]
    _, arithmetic = _prepare(p, branch.direction, digits)
    with mpmath.workdps(arithmetic.digits):
        work, internal = _replay(p, branch, arithmetic)
        if not work:
            return [PuiseuxBranch(list(branch.terms), branch.multiplicity, branch.direction, True)]
        refined = _refine(work, internal, branch.multiplicity, order, branch.direction, arithmetic,
                          max_steps or config.PUISEUX_MAX_STEPS)
    refined.sort(key=PuiseuxBranch.sort_key)
    return refined


def extend_branch(p: FracPoly, branch: PuiseuxBranch, order: Number,
                  digits: Optional[int] = None, max_steps: Optional[int] = None) -> PuiseuxBranch:
    """扩展分支；分支分裂时返回排序后的第一个子分支"""
    return refine_branch(p, branch, order, digits, max_steps)[0]


def branch_residual(p: FracPoly, branch: PuiseuxBranch) -> FracPoly:
    """p(x, 截断分支)，精确"""
    return substitute(p, {"y": branch.truncated_poly()})


def residual_reaches(p: FracPoly, branch: PuiseuxBranch, order: Number) -> bool:
    """残差是否超出截断阶：increasing 看 x 的最低次，decreasing 看最高次"""
    residual = branch_residual(p, branch)
    if residual.is_zero():
        return True
    if branch.direction == INCREASING:
        return residual.order("x") > order
    return residual.degree("x") < -as_rational(order)


def conjugate_branch(branch: PuiseuxBranch, j: int = 1) -> PuiseuxBranch:
    """x^{1/N} -> ε^j x^{1/N} 的共轭分支，仅支持精确相位（N ≤ 2）"""
    ramification = branch.ramification
    if ramification == 1 or j % ramification == 0:
        return PuiseuxBranch(list(branch.terms), branch.multiplicity, branch.direction, branch.terminated)
    if ramification != 2:
        raise ToolkitError(f"exact phases need ramification <= 2, got {ramification}")
    terms = []
    for term in branch.terms:
        if Fraction(term.exponent).denominator == 2:
            terms.append(PuiseuxTerm(term.coeff.negated(), term.exponent))
        else:
            terms.append(term)
    return PuiseuxBranch(terms, branch.multiplicity, branch.direction, branch.terminated)


def branch_to_dict(branch: PuiseuxBranch) -> dict:
    return {
        "terms": [
            {
                "coeff": str(t.coeff),
                "exp": format_rational(t.exponent),
                "radius": None if t.coeff.is_exact else mpmath.nstr(t.coeff.radius, 5),
            }
            for t in branch.terms
        ],
        "mult": branch.multiplicity,
        "ram": branch.ramification,
        "exact": branch.exact,
        "terminated": branch.terminated,
    }
