"""
f, g 在 C(x) 上的不可约依赖关系 P(x, F, G)
用标准单项式约化算法求出 P，并提供首一化、首边数据与校验
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import List, Optional, Tuple, Union

from app import config
from app.core.errors import ToolkitError
from app.core.exact_algebra import (
    FracMonomial,
    FracPoly,
    F as VAR_F,
    G as VAR_G,
    WeightVector,
    divide_by_x_poly,
    format_rational,
    leading_form,
    primitive_part,
    substitute,
    x_content,
)
from app.core.newton_geometry import LatticePolytope, Point, newton_polytope

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


@dataclass
class _Pair:
    """约化过程中的表达式：value ∈ Q[x][y]，symbolic ∈ Q[x][F, G]，且 value = symbolic(f, g)"""
    value: FracPoly
    symbolic: FracPoly

    def __mul__(self, other: "_Pair") -> "_Pair":
        return _Pair(self.value * other.value, self.symbolic * other.symbolic)

    def __pow__(self, k: int) -> "_Pair":
        return _Pair(self.value ** k, self.symbolic ** k)

    def scale(self, c: FracPoly) -> "_Pair":
        return _Pair(self.value * c, self.symbolic * c)

    def __sub__(self, other: "_Pair") -> "_Pair":
        return _Pair(self.value - other.value, self.symbolic - other.symbolic)


@dataclass(frozen=True)
class StandardMonomial:
    """f^i · g̃_0^{j_0} ⋯ g̃_s^{j_s}"""
    i: int
    js: Tuple[int, ...]

    def __str__(self) -> str:
        parts = [f"f^{self.i}"] + [f"g{k}^{j}" for k, j in enumerate(self.js)]
        return "*".join(parts)


@dataclass
class ReductionState:
    f: FracPoly
    n: int
    generators: List[_Pair] = field(default_factory=list)
    degrees: List[int] = field(default_factory=list)
    gcds: List[int] = field(default_factory=list)
    multipliers: List[int] = field(default_factory=list)

    @classmethod
    def from_degrees(cls, n: int, degrees: List[int]) -> "ReductionState":
        """只有次数信息的状态（用于查找标准单项式的次数组合）"""
        state = cls(FracPoly.zero(), n)
        for m in degrees:
            state.add_generator(None, m)
        return state

    def add_generator(self, pair: Optional[_Pair], degree: int) -> None:
        previous = self.gcds[-1] if self.gcds else self.n
        d = gcd(previous, degree)
        self.generators.append(pair)
        self.degrees.append(degree)
        self.gcds.append(d)
        self.multipliers.append(previous // d)


@dataclass(frozen=True)
class TranscriptStep:
    kind: str
    generator: int
    degree: int
    monomial: Optional[str] = None


@dataclass
class EdgeData:
    ok: bool
    a0: int
    b0: int
    nu: Optional[int]
    edge: Optional[Tuple[Point, Point]]
    leading_form: FracPoly
    coefficient: Optional[FracPoly] = None
    reason: str = ""


@dataclass
class MonicResult:
    ok: bool
    P: FracPoly
    p0: FracPoly
    c0: Optional[Fraction] = None
    d: Optional[int] = None
    reason: str = ""


@dataclass
class DependencePoly:
    P: FracPoly
    f: FracPoly
    g: FracPoly
    transcript: List[TranscriptStep]
    degrees: List[int]
    gcds: List[int]
    multipliers: List[int]
    a0: Optional[int] = None
    b0: Optional[int] = None
    nu: Optional[int] = None
    edge: Optional[Tuple[Point, Point]] = None
    leading_form: Optional[FracPoly] = None
    edge_verdict: str = ""
    polytope: Optional[LatticePolytope] = field(default=None, repr=False)


def _leading_coefficient(p: FracPoly) -> FracPoly:
    return p.leading_coefficient_in("y")


def _ydeg(p: FracPoly) -> int:
    return int(p.degree("y"))


def find_standard_monomial(state: ReductionState, target_ydeg: int, s: int) -> Tuple[StandardMonomial, FracPoly]:
    """
    查找 y 次数恰为 target_ydeg 的 s-标准单项式

    参数:
        state: 约化状态（f 的次数 n、各生成元的次数与乘数 a_k）
        target_ydeg: 目标 y 次数
        s: 可用生成元 g̃_0..g̃_s（head 步骤传 s-1）

    返回:
        (标准单项式, 其 y 首项系数)；按 (j_s, …, j_0, i) 字典序取最小者
    """
    if target_ydeg < 0:
        raise ToolkitError(f"reduction stuck: negative target degree {target_ydeg}")
    ranges = [range(state.multipliers[k]) for k in range(s, -1, -1)]
    for reversed_js in itertools.product(*ranges):
        js = tuple(reversed(reversed_js))
        rest = target_ydeg - sum(j * m for j, m in zip(js, state.degrees))
        if rest < 0 or rest % state.n:
            continue
        monomial = StandardMonomial(rest // state.n, js)
        return monomial, _monomial_leading_coefficient(state, monomial)
    raise ToolkitError(f"reduction stuck: no {s}-standard monomial of y-degree {target_ydeg}")


def _monomial_leading_coefficient(state: ReductionState, monomial: StandardMonomial) -> FracPoly:
    if state.f.is_zero():
        return FracPoly.constant(1)
    result = _leading_coefficient(state.f) ** monomial.i
    for pair, j in zip(state.generators, monomial.js):
        if j:
            result = result * _leading_coefficient(pair.value) ** j
    return result


def _monomial_pair(state: ReductionState, monomial: StandardMonomial) -> _Pair:
    result = _Pair(state.f ** monomial.i, VAR_F ** monomial.i)
    for pair, j in zip(state.generators, monomial.js):
        if j:
            result = result * pair ** j
    return result


def _subtract(state: ReductionState, expr: _Pair, monomial: StandardMonomial, lead: FracPoly) -> _Pair:
    """消去 expr 的 y 首项，然后除去 symbolic 的 Q[x] 公因式"""
    mono = _monomial_pair(state, monomial)
    top = _leading_coefficient(expr.value)
    if lead.is_constant():
        expr = expr - mono.scale(top / lead.constant_value())
    else:
        expr = expr.scale(lead) - mono.scale(top)
    content = x_content(expr.symbolic)
    if content != 1:
        expr = _Pair(divide_by_x_poly(expr.value, content), divide_by_x_poly(expr.symbolic, content))
    return expr


def _check_input(p: FracPoly, name: str) -> None:
    if set(p.variables()) - {"x", "y"}:
        raise ToolkitError(f"{name} 只能含 x, y: {p}")
    if not (p.has_integer_exponents("x", nonnegative=True) and p.has_integer_exponents("y", nonnegative=True)):
        raise ToolkitError(f"{name} 必须是 x, y 的多项式")
    if p.is_zero() or p.degree("y") < 1:
        raise ToolkitError(f"deg_y({name}) must be at least 1")


def reduce_pair(f: FracPoly, g: FracPoly, max_steps: Optional[int] = None) -> Tuple[FracPoly, ReductionState, List[TranscriptStep]]:
    """运行约化算法，返回未规范化的关系、最终状态与步骤记录"""
    _check_input(f, "f")
    _check_input(g, "g")
    n = _ydeg(f)
    state = ReductionState(f, n)
    state.add_generator(_Pair(g, VAR_G), _ydeg(g))
    cap = max_steps or config.DEPENDENCE_STEP_FACTOR * n * state.degrees[0]
    transcript: List[TranscriptStep] = [TranscriptStep("new-generator", 0, state.degrees[0], "g")]
    steps = 0
    s = 0
    while True:
        a_s, m_s = state.multipliers[s], state.degrees[s]
        expr = state.generators[s] ** a_s
        monomial, lead = find_standard_monomial(state, a_s * m_s, s - 1)
        expr = _subtract(state, expr, monomial, lead)
        transcript.append(TranscriptStep("head", s, a_s * m_s, str(monomial)))
        while True:
            steps += 1
            if steps > cap:
                raise ToolkitError(f"step budget {cap} exceeded")
            if expr.value.is_zero():
                transcript.append(TranscriptStep("zero", s, -1))
                logger.info(f"约化完成: {len(state.generators)} 个生成元, {steps} 步")
                return expr.symbolic, state, transcript
            t = _ydeg(expr.value)
            if t % state.gcds[s]:
                state.add_generator(expr, t)
                s += 1
                transcript.append(TranscriptStep("new-generator", s, t))
                break
            monomial, lead = find_standard_monomial(state, t, s)
            expr = _subtract(state, expr, monomial, lead)
            transcript.append(TranscriptStep("reduce", s, t, str(monomial)))


def build_dependence(f: FracPoly, g: FracPoly, max_steps: Optional[int] = None) -> DependencePoly:
    """
    求 f, g 的不可约依赖 P(x, F, G)：P(x, f, g) = 0，系数为 x 的互素多项式

    同时给出首边数据（w(x)=0, w(F)=deg_y f, w(G)=deg_y g）与 N(P)
    """
    relation, state, transcript = reduce_pair(f, g, max_steps)
    P = primitive_part(relation)
    dependence = DependencePoly(P, f, g, transcript, state.degrees, state.gcds, state.multipliers)
    edge = leading_edge_data(P, _ydeg(f), _ydeg(g))
    dependence.a0, dependence.b0 = edge.a0, edge.b0
    dependence.leading_form = edge.leading_form
    dependence.edge_verdict = edge.reason
    if edge.ok:
        dependence.nu, dependence.edge = edge.nu, edge.edge
    dependence.polytope = newton_polytope(P)
    logger.info(f"依赖关系: P = {P}")
    return dependence


def _as_poly(P: Union[DependencePoly, FracPoly]) -> FracPoly:
    return P.P if isinstance(P, DependencePoly) else P


def verify_dependence(P: Union[DependencePoly, FracPoly], f: FracPoly, g: FracPoly) -> bool:
    return substitute(_as_poly(P), {"F": f, "G": g}).is_zero()


def normalize_monic(P: Union[DependencePoly, FracPoly]) -> MonicResult:
    """p_0(x) 为单项式 c_0 x^d 时返回 P / (c_0 x^d)，否则给出判定"""
    poly = _as_poly(P)
    if poly.is_zero():
        raise ToolkitError("normalize_monic of zero")
    p0 = poly.leading_coefficient_in("G")
    if not p0.is_monomial() or p0.variables() not in ([], ["x"]):
        return MonicResult(False, poly, p0, reason="p_0 not a monomial")
    mono, c0 = p0.sole_term()
    return MonicResult(True, poly.div_monomial(c0, mono), p0, Fraction(c0), int(mono.x))


def leading_edge_data(P: Union[DependencePoly, FracPoly], ny_f: int, ny_g: int) -> EdgeData:
    """
    w(x)=0, w(F)=ny_f, w(G)=ny_g 下的首项形式，检查它是否为 c(x)·(G^{a0} − F^{b0})^ν
    """
    poly = _as_poly(P)
    if poly.is_zero():
        raise ToolkitError("leading edge of zero")
    common = gcd(ny_f, ny_g)
    a0, b0 = ny_f // common, ny_g // common
    form = leading_form(poly, WeightVector.of(x=0, F=ny_f, G=ny_g))
    g_degree = form.degree("G")
    if g_degree % a0 or g_degree == 0:
        return EdgeData(False, a0, b0, None, None, form, reason="not a pure binomial power")
    nu = int(g_degree) // a0
    coefficient = form.coefficient("F", 0).coefficient("G", g_degree)
    binomial = (VAR_G ** a0 - VAR_F ** b0) ** nu
    if coefficient.is_zero() or form != binomial * coefficient:
        return EdgeData(False, a0, b0, nu, None, form, coefficient, "not a pure binomial power")
    edge = ((b0 * nu, 0, 0), (0, a0 * nu, 0))
    return EdgeData(True, a0, b0, nu, edge, form, coefficient)


def extension_degree(P: Union[DependencePoly, FracPoly]) -> int:
    """deg_x(P)"""
    poly = _as_poly(P)
    return int(poly.degree("x")) if "x" in poly.variables() else 0


def dependence_to_dict(dep: DependencePoly) -> dict:
    terms = []
    for mono, coeff in sorted(dep.P.items(), key=lambda item: (item[0].F, item[0].G, item[0].x)):
        terms.append([int(mono.F), int(mono.G), int(mono.x), format_rational(coeff)])
    return {
        "P": str(dep.P),
        "terms": terms,
        "a0": dep.a0,
        "b0": dep.b0,
        "nu": dep.nu,
        "edge": [list(p) for p in dep.edge] if dep.edge else None,
        "leading_form": str(dep.leading_form) if dep.leading_form is not None else None,
        "edge_verdict": dep.edge_verdict or None,
        "degrees": dep.degrees,
        "gcds": dep.gcds,
        "multipliers": dep.multipliers,
        "transcript": [
            {"kind": t.kind, "generator": t.generator, "degree": t.degree, "monomial": t.monomial}
            for t in dep.transcript
        ],
    }
