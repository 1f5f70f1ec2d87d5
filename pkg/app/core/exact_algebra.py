"""
精确代数模块
变量集合 {x, y, F, G} 上、有理指数、有理系数多项式的精确运算，
包括 Jacobian、代入、权重次数与首项形式
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple, Union

import sympy

from app.core.errors import ToolkitError

# 配置日志
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

Number = Union[int, Fraction]

# 固定的变量顺序，也是单项式字典序的比较顺序
VARIABLES = ("x", "y", "F", "G")
_INDEX = {name: i for i, name in enumerate(VARIABLES)}

_SYMPY_X = sympy.Symbol("x")


def as_rational(value) -> Number:
    """把 int / Fraction / "num/den" 字符串规范成有理数

    整数值一律以 int 保存，其余以 Fraction 保存，保证哈希与比较一致
    """
    if isinstance(value, bool):
        raise ToolkitError(f"无法解释为有理数: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        try:
            return as_rational(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            raise ToolkitError(f"无法解释为有理数: {value!r}")
    if isinstance(value, sympy.Rational):
        return as_rational(Fraction(int(value.p), int(value.q)))
    raise ToolkitError(f"无法解释为有理数: {value!r}")


def format_rational(value: Number) -> str:
    """有理数的 "num/den" 文本（整数不带分母）"""
    return str(as_rational(value))


def _norm(value: Number) -> Number:
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def _check_variable(name: str) -> str:
    if name not in _INDEX:
        raise ToolkitError(f"未知变量: {name}")
    return name


class FracMonomial(NamedTuple):
    """单项式的指数向量，按 (x, y, F, G) 顺序保存，缺省指数为 0"""
    x: Number = 0
    y: Number = 0
    F: Number = 0
    G: Number = 0

    @classmethod
    def of(cls, **exponents) -> "FracMonomial":
        values = [0, 0, 0, 0]
        for name, exp in exponents.items():
            values[_INDEX[_check_variable(name)]] = as_rational(exp)
        return cls(*values)

    def exponent(self, var: str) -> Number:
        return self[_INDEX[var]]

    def as_dict(self) -> Dict[str, Number]:
        """只含非零指数的映射"""
        return {name: exp for name, exp in zip(VARIABLES, self) if exp != 0}

    def times(self, other: "FracMonomial") -> "FracMonomial":
        return FracMonomial(*(_norm(a + b) for a, b in zip(self, other)))

    def power(self, k: Number) -> "FracMonomial":
        return FracMonomial(*(_norm(a * k) for a in self))

    def without(self, var: str) -> "FracMonomial":
        values = list(self)
        values[_INDEX[var]] = 0
        return FracMonomial(*values)

    def with_exponent(self, var: str, exp: Number) -> "FracMonomial":
        values = list(self)
        values[_INDEX[var]] = _norm(as_rational(exp))
        return FracMonomial(*values)


ONE_MONOMIAL = FracMonomial()


def _display_key(mono: FracMonomial):
    # 打印顺序：先比较 G、F，再比较 y、x
    return (mono.G, mono.F, mono.y, mono.x)


def _format_power(var: str, exp: Number) -> str:
    if exp == 1:
        return var
    if isinstance(exp, int) and exp > 1:
        return f"{var}^{exp}"
    return f"{var}^({format_rational(exp)})"


class FracPoly:
    """有理指数、有理系数多项式；构造后不可变，不保存零系数"""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping] = None):
        clean: Dict[FracMonomial, Number] = {}
        if terms:
            for mono, coeff in terms.items():
                if not isinstance(mono, FracMonomial):
                    mono = FracMonomial(*(as_rational(e) for e in mono))
                value = as_rational(coeff)
                if value != 0:
                    clean[mono] = value
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[FracMonomial, Number]) -> "FracPoly":
        poly = cls.__new__(cls)
        poly._terms = {m: _norm(c) for m, c in terms.items() if c != 0}
        poly._hash = None
        return poly

    # ---- 构造 ----

    @classmethod
    def zero(cls) -> "FracPoly":
        return cls._raw({})

    @classmethod
    def constant(cls, value) -> "FracPoly":
        return cls._raw({ONE_MONOMIAL: as_rational(value)})

    @classmethod
    def variable(cls, name: str) -> "FracPoly":
        return cls._raw({FracMonomial.of(**{name: 1}): 1})

    @classmethod
    def monomial(cls, coeff=1, **exponents) -> "FracPoly":
        return cls._raw({FracMonomial.of(**exponents): as_rational(coeff)})

    @classmethod
    def coerce(cls, value) -> "FracPoly":
        if isinstance(value, FracPoly):
            return value
        return cls.constant(value)

    # ---- 基本访问 ----

    def items(self) -> List[Tuple[FracMonomial, Number]]:
        """按单项式字典序 (x, y, F, G) 升序排列的 (单项式, 系数) 列表"""
        return sorted(self._terms.items())

    @property
    def terms(self) -> Dict[FracMonomial, Number]:
        return dict(self.items())

    def support(self) -> List[FracMonomial]:
        return sorted(self._terms)

    def coefficient_of(self, mono: FracMonomial) -> Number:
        return self._terms.get(mono, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def variables(self) -> List[str]:
        return [v for v in VARIABLES if any(m.exponent(v) != 0 for m in self._terms)]

    def is_constant(self) -> bool:
        return all(m == ONE_MONOMIAL for m in self._terms)

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise ToolkitError(f"不是常数: {self}")
        return self._terms.get(ONE_MONOMIAL, 0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def sole_term(self) -> Tuple[FracMonomial, Number]:
        if len(self._terms) != 1:
            raise ToolkitError(f"不是单项式: {self}")
        return next(iter(self._terms.items()))

    # ---- 比较 ----

    def __eq__(self, other) -> bool:
        if isinstance(other, FracPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == FracPoly.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # ---- 环运算 ----

    def __neg__(self) -> "FracPoly":
        return FracPoly._raw({m: -c for m, c in self._terms.items()})

    def __add__(self, other) -> "FracPoly":
        other = _coerce_operand(other)
        if other is None:
            return NotImplemented
        result = dict(self._terms)
        for mono, coeff in other._terms.items():
            result[mono] = result.get(mono, 0) + coeff
        return FracPoly._raw(result)

    __radd__ = __add__

    def __sub__(self, other) -> "FracPoly":
        other = _coerce_operand(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "FracPoly":
        other = _coerce_operand(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "FracPoly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, FracPoly):
            return NotImplemented
        result: Dict[FracMonomial, Number] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = m1.times(m2)
                result[mono] = result.get(mono, 0) + c1 * c2
        return FracPoly._raw(result)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "FracPoly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ToolkitError("除以零")
            return self.scale(Fraction(1) / other)
        if isinstance(other, FracPoly) and other.is_monomial():
            mono, coeff = other.sole_term()
            return self.div_monomial(coeff, mono)
        raise ToolkitError("只支持除以常数或单项式")

    def __pow__(self, k: int) -> "FracPoly":
        if not isinstance(k, int) or isinstance(k, bool):
            raise ToolkitError(f"幂指数必须是整数: {k!r}")
        if k < 0:
            if not self.is_monomial():
                raise ToolkitError("非单项式不能取负整数幂")
            mono, coeff = self.sole_term()
            return FracPoly._raw({mono.power(k): Fraction(coeff) ** k})
        result = FracPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, factor) -> "FracPoly":
        factor = as_rational(factor)
        if factor == 0:
            return FracPoly.zero()
        return FracPoly._raw({m: c * factor for m, c in self._terms.items()})

    def mul_monomial(self, coeff, mono: FracMonomial) -> "FracPoly":
        coeff = as_rational(coeff)
        return FracPoly._raw({m.times(mono): c * coeff for m, c in self._terms.items()})

    def div_monomial(self, coeff, mono: FracMonomial) -> "FracPoly":
        coeff = as_rational(coeff)
        if coeff == 0:
            raise ToolkitError("除以零")
        return self.mul_monomial(Fraction(1) / coeff, mono.power(-1))

    # ---- 按变量的结构 ----

    def degree(self, var: str) -> Number:
        if self.is_zero():
            raise ToolkitError("degree of zero")
        return max(m.exponent(var) for m in self._terms)

    def order(self, var: str) -> Number:
        if self.is_zero():
            raise ToolkitError("degree of zero")
        return min(m.exponent(var) for m in self._terms)

    def coefficients_in(self, var: str) -> Dict[Number, "FracPoly"]:
        """把多项式看作 var 的多项式，返回 指数 -> 系数（不含 var）"""
        groups: Dict[Number, Dict[FracMonomial, Number]] = {}
        for mono, coeff in self._terms.items():
            groups.setdefault(mono.exponent(var), {})[mono.without(var)] = coeff
        return {exp: FracPoly._raw(terms) for exp, terms in sorted(groups.items())}

    def coefficient(self, var: str, exp) -> "FracPoly":
        exp = as_rational(exp)
        return FracPoly._raw({
            mono.without(var): coeff
            for mono, coeff in self._terms.items()
            if mono.exponent(var) == exp
        })

    def leading_coefficient_in(self, var: str) -> "FracPoly":
        return self.coefficient(var, self.degree(var))

    def has_integer_exponents(self, var: str, nonnegative: bool = False) -> bool:
        for mono in self._terms:
            exp = mono.exponent(var)
            if not isinstance(exp, int) or (nonnegative and exp < 0):
                return False
        return True

    def derivative(self, var: str) -> "FracPoly":
        """形式导数，有理指数按 ∂(t^r) = r t^(r-1) 处理"""
        _check_variable(var)
        result: Dict[FracMonomial, Number] = {}
        for mono, coeff in self._terms.items():
            exp = mono.exponent(var)
            if exp == 0:
                continue
            shifted = mono.with_exponent(var, exp - 1)
            result[shifted] = result.get(shifted, 0) + coeff * exp
        return FracPoly._raw(result)

    def invert_variable(self, var: str) -> "FracPoly":
        """var -> var^(-1)"""
        return FracPoly._raw({
            mono.with_exponent(var, -mono.exponent(var)): coeff
            for mono, coeff in self._terms.items()
        })

    def evaluate(self, point: Mapping[str, Number]) -> "FracPoly":
        """在有理点上求值（只替换 point 中给出的变量，要求对应指数为整数）"""
        result: Dict[FracMonomial, Number] = {}
        values = {_check_variable(v): Fraction(as_rational(val)) for v, val in point.items()}
        for mono, coeff in self._terms.items():
            value = Fraction(coeff)
            rest = mono
            for var, val in values.items():
                exp = mono.exponent(var)
                if exp == 0:
                    continue
                if not isinstance(exp, int):
                    raise ToolkitError(f"求值需要整数指数: {var}^{exp}")
                if val == 0 and exp < 0:
                    raise ToolkitError(f"在 {var}=0 处求值遇到负指数")
                value *= val ** exp
                rest = rest.without(var)
            result[rest] = result.get(rest, 0) + value
        return FracPoly._raw(result)

    # ---- 文本 ----

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        ordered = sorted(self._terms.items(), key=lambda item: _display_key(item[0]), reverse=True)
        for index, (mono, coeff) in enumerate(ordered):
            factors = [_format_power(v, e) for v, e in zip(VARIABLES, mono) if e != 0]
            magnitude = abs(coeff)
            if not factors:
                body = format_rational(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = f"{format_rational(magnitude)}*" + "*".join(factors)
            if index == 0:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"FracPoly('{self}')"


def _coerce_operand(value) -> Optional[FracPoly]:
    if isinstance(value, FracPoly):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return FracPoly.constant(value)
    return None


X = FracPoly.variable("x")
Y = FracPoly.variable("y")
F = FracPoly.variable("F")
G = FracPoly.variable("G")


@dataclass(frozen=True)
class WeightVector:
    """权重次数函数 w(v)，未给出的变量权重为 0"""
    weights: Dict[str, Number] = field(default_factory=dict)

    @classmethod
    def of(cls, **weights) -> "WeightVector":
        return cls({_check_variable(v): as_rational(w) for v, w in weights.items()})

    def get(self, var: str) -> Number:
        return self.weights.get(var, 0)

    def is_zero(self) -> bool:
        return all(w == 0 for w in self.weights.values())

    def weight_of(self, mono: FracMonomial) -> Number:
        return _norm(sum((self.get(v) * e for v, e in zip(VARIABLES, mono) if e != 0), 0))

    def along(self, axes: Iterable[str]) -> Tuple[Number, ...]:
        return tuple(self.get(axis) for axis in axes)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.weights.items())))


# ---- 环运算、代换与 Jacobian ----

def arith(p: FracPoly, q, kind: str) -> FracPoly:
    """精确环运算，kind ∈ {add, sub, mul, int_pow}；int_pow 时 q 为非负整数指数"""
    if kind == "add":
        return p + q
    if kind == "sub":
        return p - q
    if kind == "mul":
        return p * q
    if kind == "int_pow":
        exponent = q.constant_value() if isinstance(q, FracPoly) else q
        if not isinstance(exponent, int) or exponent < 0:
            raise ToolkitError(f"int_pow 需要非负整数指数: {exponent}")
        return p ** exponent
    raise ToolkitError(f"未知运算: {kind}")


def jacobian(p: FracPoly, q: FracPoly, u: str = "x", v: str = "y") -> FracPoly:
    """J(p, q) = ∂p/∂u ∂q/∂v − ∂p/∂v ∂q/∂u"""
    return p.derivative(u) * q.derivative(v) - p.derivative(v) * q.derivative(u)


def substitute(p: FracPoly, bindings: Mapping[str, FracPoly]) -> FracPoly:
    """同时代入 bindings 中的变量

    被代入的变量在 p 中必须只以非负整数指数出现；按 Horner 格式逐变量展开
    """
    for var in bindings:
        _check_variable(var)
    bound = [v for v in VARIABLES if v in bindings]
    values = {v: FracPoly.coerce(bindings[v]) for v in bound}
    return _substitute(p, bound, values)


def _substitute(p: FracPoly, bound: List[str], values: Dict[str, FracPoly]) -> FracPoly:
    if not bound or p.is_zero():
        return p
    var, rest = bound[0], bound[1:]
    groups = p.coefficients_in(var)
    for exp in groups:
        if not isinstance(exp, int) or exp < 0:
            raise ToolkitError(f"non-integral composition: {var}^{format_rational(exp)}")
    result = FracPoly.zero()
    for k in range(max(groups), -1, -1):
        result = result * values[var]
        if k in groups:
            result = result + _substitute(groups[k], rest, values)
    return result


def weight_degree(p: FracPoly, w: WeightVector) -> Number:
    """deg_w(p) = max(w(μ) | μ ∈ supp(p))"""
    if p.is_zero():
        raise ToolkitError("degree of zero")
    return max(w.weight_of(mono) for mono in p.support())


def leading_form(p: FracPoly, w: WeightVector) -> FracPoly:
    """权重恰为 deg_w(p) 的各项之和"""
    if w.is_zero():
        raise ToolkitError("zero weight vector")
    top = weight_degree(p, w)
    return FracPoly._raw({m: c for m, c in p.items() if w.weight_of(m) == top})


# ---- Q[x] 上的内容（content）与本原部分 ----

def _to_sympy_x(p: FracPoly) -> sympy.Poly:
    terms = {}
    for mono, coeff in p.items():
        c = Fraction(coeff)
        terms[(int(mono.x),)] = sympy.Rational(c.numerator, c.denominator)
    return sympy.Poly.from_dict(terms, _SYMPY_X, domain=sympy.QQ)


def _from_sympy_x(poly: sympy.Poly) -> FracPoly:
    return FracPoly({FracMonomial(x=e[0]): as_rational(c) for e, c in poly.terms()})


def x_content(p: FracPoly, var: str = "x") -> FracPoly:
    """把 p 看作其他变量的多项式、系数在 Q[x] 中，返回系数的首一最大公因式

    x 指数不是非负整数时返回 1
    """
    if p.is_zero() or not p.has_integer_exponents(var, nonnegative=True):
        return FracPoly.constant(1)
    groups: Dict[FracMonomial, Dict[FracMonomial, Number]] = {}
    for mono, coeff in p.items():
        groups.setdefault(mono.without(var), {})[FracMonomial(x=mono.exponent(var))] = coeff
    polys = [_to_sympy_x(FracPoly._raw(terms)) for terms in groups.values()]
    common = reduce(lambda a, b: a.gcd(b), polys)
    return _from_sympy_x(common.monic())


def divide_by_x_poly(p: FracPoly, divisor: FracPoly) -> FracPoly:
    """p 的每个 Q[x] 系数精确除以 divisor（divisor 只含 x）"""
    if divisor == 1:
        return p
    if divisor.is_monomial():
        mono, coeff = divisor.sole_term()
        return p.div_monomial(coeff, mono)
    target = _to_sympy_x(divisor)
    groups: Dict[FracMonomial, Dict[FracMonomial, Number]] = {}
    for mono, coeff in p.items():
        groups.setdefault(mono.without("x"), {})[FracMonomial(x=mono.exponent("x"))] = coeff
    result = FracPoly.zero()
    for rest, terms in groups.items():
        quotient = _from_sympy_x(_to_sympy_x(FracPoly._raw(terms)).exquo(target))
        result = result + quotient.mul_monomial(1, rest)
    return result


def integral_primitive(p: FracPoly) -> FracPoly:
    """按有理数缩放 p，使系数为互素整数且打印顺序中的首项系数为正"""
    if p.is_zero():
        return p
    lcm_den = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(c).denominator for _, c in p.items()), 1)
    scaled = p.scale(lcm_den)
    content = reduce(gcd, (abs(int(c)) for _, c in scaled.items()), 0)
    first = max(scaled.support(), key=_display_key)
    sign = -1 if scaled.coefficient_of(first) < 0 else 1
    return scaled.scale(Fraction(sign, content))


def primitive_part(p: FracPoly) -> FracPoly:
    """去掉 Q[x] 系数的公因式并整数化"""
    return integral_primitive(divide_by_x_poly(p, x_content(p)))
