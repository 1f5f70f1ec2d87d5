"""
多项式表达式解析

语法（空白无关）:
    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' exponent)*
    atom     := rational | var | '(' expr ')'
    exponent := ['-'] integer | '(' ['-'] rational ')'
    var      ∈ {x, y, F, G}
    rational := integer ['/' positive-integer]

分数指数只能作用在系数为 1 的单项式上；负整数指数只能作用在单项式上
"""
from fractions import Fraction
from typing import Optional

from app.core.errors import PolySyntaxError
from app.core.exact_algebra import VARIABLES, FracPoly, as_rational


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: Optional[int] = None) -> PolySyntaxError:
        at = self.pos if pos is None else pos
        return PolySyntaxError(message, len(self.text[:at].encode("utf-8")))

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str) -> None:
        if self.peek() != char:
            found = self.peek() or "end of input"
            raise self.error(f"expected '{char}', found {found!r}")
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            found = self.text[start] if start < len(self.text) else "end of input"
            raise self.error(f"expected integer, found {found!r}", start)
        return int(self.text[start:self.pos])

    def rational(self) -> Fraction:
        numerator = self.integer()
        if self.peek() == "/":
            self.pos += 1
            start = self.pos
            denominator = self.integer()
            if denominator == 0:
                raise self.error("zero denominator", start)
            return Fraction(numerator, denominator)
        return Fraction(numerator)

    # ---- 语法规则 ----

    def expr(self) -> FracPoly:
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        result = self.term().scale(sign)
        while self.peek() and self.peek() in "+-":
            op = self.peek()
            self.pos += 1
            value = self.term()
            result = result + value if op == "+" else result - value
        return result

    def term(self) -> FracPoly:
        result = self.factor()
        while self.peek() == "*":
            self.pos += 1
            result = result * self.factor()
        return result

    def factor(self) -> FracPoly:
        base = self.atom()
        while self.peek() == "^":
            self.pos += 1
            start = self.pos
            base = self.power(base, self.exponent(), start)
        return base

    def atom(self) -> FracPoly:
        char = self.peek()
        if char == "(":
            self.pos += 1
            inner = self.expr()
            self.expect(")")
            return inner
        if char.isdigit():
            return FracPoly.constant(as_rational(self.rational()))
        if char.isalpha():
            if char not in VARIABLES:
                raise self.error(f"unknown variable '{char}'")
            self.pos += 1
            return FracPoly.variable(char)
        raise self.error(f"unexpected {char!r}" if char else "unexpected end of input")

    def exponent(self) -> Fraction:
        if self.peek() == "(":
            self.pos += 1
            negative = self.peek() == "-"
            if negative:
                self.pos += 1
            value = self.rational()
            self.expect(")")
            return -value if negative else value
        negative = self.peek() == "-"
        if negative:
            self.pos += 1
        value = Fraction(self.integer())
        return -value if negative else value

    def power(self, base: FracPoly, exponent: Fraction, start: int) -> FracPoly:
        if exponent.denominator == 1 and exponent >= 0:
            return base ** int(exponent)
        if not base.is_monomial():
            raise self.error("non-integral power of a non-monomial", start)
        mono, coeff = base.sole_term()
        if exponent.denominator == 1:
            return FracPoly({mono.power(int(exponent)): Fraction(coeff) ** int(exponent)})
        if coeff != 1:
            raise self.error("fractional power needs a unit coefficient", start)
        return FracPoly({mono.power(as_rational(exponent)): 1})


def parse_poly(text: str) -> FracPoly:
    """
    解析多项式表达式

    参数:
        text: 表达式文本，例如 "3/2*x^2*y - y^3 + 1"

    返回:
        FracPoly；语法错误抛出 PolySyntaxError（带字节偏移）
    """
    parser = _Parser(text)
    if not parser.peek():
        raise parser.error("empty expression")
    result = parser.expr()
    if parser.peek():
        raise parser.error(f"unexpected {parser.peek()!r}")
    return result
