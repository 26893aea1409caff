"""Closed-form expression language for user-supplied profiles k(t), r(t).

Grammar (recursive descent, standard precedence, left associative):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' exponent)?
    base   := number | 't' | ident '(' expr ')' | ident | '(' expr ')'
    exponent := '-'? number | '(' '-'? number ('/' number)? ')'

Exponents are rational literals only, so differentiation stays total.  Bare
identifiers are the named constants pi and e; function identifiers are
exp, ln, sin, cos, sinh, cosh, tanh, sqrt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class ParseError(Exception):
    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected {', '.join(expected)})"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


class DomainError(Exception):
    """Evaluation left the expression's domain (log/sqrt/division)."""


FUNCTIONS = ("exp", "ln", "sin", "cos", "sinh", "cosh", "tanh", "sqrt")
CONSTANTS = {"pi": math.pi, "e": math.e}


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction


@dataclass(frozen=True)
class TVar(Expr):
    pass


@dataclass(frozen=True)
class Const(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Fraction


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr


# -- tokenizer ----------------------------------------------------------------

_OPS = "+-*/^()"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append(("OP", ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            tokens.append(("NUM", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("IDENT", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("END", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        if not text or not text.strip():
            raise ParseError("empty expression", 0)
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, value, offset = self.peek()
        if kind == "OP" and value == op:
            return self.advance()
        raise ParseError(f"unexpected {value or 'end of input'!r}", offset, (repr(op),))

    def parse(self) -> Expr:
        e = self.expr()
        kind, value, offset = self.peek()
        if kind != "END":
            raise ParseError(f"trailing input {value!r}", offset)
        return e

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "OP" and value in "+-":
                self.advance()
                rhs = self.term()
                node = Add(node, rhs) if value == "+" else Sub(node, rhs)
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "OP" and value in "*/":
                self.advance()
                rhs = self.factor()
                node = Mul(node, rhs) if value == "*" else Div(node, rhs)
            else:
                return node

    def factor(self) -> Expr:
        kind, value, _ = self.peek()
        if kind == "OP" and value == "-":
            self.advance()
            return Neg(self.factor())
        node = self.base()
        kind, value, _ = self.peek()
        if kind == "OP" and value == "^":
            self.advance()
            node = Pow(node, self.exponent())
        return node

    def base(self) -> Expr:
        kind, value, offset = self.peek()
        if kind == "NUM":
            self.advance()
            return Num(Fraction(value))
        if kind == "IDENT":
            self.advance()
            if value == "t":
                return TVar()
            nkind, nvalue, _ = self.peek()
            if nkind == "OP" and nvalue == "(":
                if value not in FUNCTIONS:
                    raise ParseError(f"unknown function {value!r}", offset, FUNCTIONS)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(value, arg)
            if value in CONSTANTS:
                return Const(value)
            raise ParseError(f"unknown name {value!r}", offset, ("t",) + tuple(CONSTANTS))
        if kind == "OP" and value == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(
            f"unexpected {value or 'end of input'!r}", offset,
            ("number", "'t'", "function", "'('", "'-'"),
        )

    def _number(self) -> Fraction:
        kind, value, offset = self.peek()
        if kind != "NUM":
            raise ParseError(f"unexpected {value or 'end of input'!r}", offset, ("number",))
        self.advance()
        return Fraction(value)

    def exponent(self) -> Fraction:
        kind, value, offset = self.peek()
        if kind == "OP" and value == "(":
            self.advance()
            negative = False
            kind, value, _ = self.peek()
            if kind == "OP" and value == "-":
                self.advance()
                negative = True
            result = self._number()
            kind, value, _ = self.peek()
            if kind == "OP" and value == "/":
                self.advance()
                denom = self._number()
                if denom == 0:
                    raise ParseError("zero denominator in exponent", offset)
                result /= denom
            self.expect_op(")")
            return -result if negative else result
        negative = False
        if kind == "OP" and value == "-":
            self.advance()
            negative = True
        result = self._number()
        return -result if negative else result


def parse(text: str) -> Expr:
    return _Parser(text).parse()


# -- folding constructors (constant folding only, no deeper simplification) ----

_ZERO = Num(Fraction(0))
_ONE = Num(Fraction(1))


def _add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    if a == _ZERO:
        return b
    if b == _ZERO:
        return a
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    if b == _ZERO:
        return a
    if a == _ZERO:
        return _neg(b)
    return Sub(a, b)


def _neg(a: Expr) -> Expr:
    if isinstance(a, Num):
        return Num(-a.value)
    return Neg(a)


def _mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    if a == _ZERO or b == _ZERO:
        return _ZERO
    if a == _ONE:
        return b
    if b == _ONE:
        return a
    return Mul(a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if a == _ZERO:
        return _ZERO
    if b == _ONE:
        return a
    if isinstance(a, Num) and isinstance(b, Num) and b.value != 0:
        return Num(a.value / b.value)
    return Div(a, b)


def _pow(base: Expr, q: Fraction) -> Expr:
    if q == 0:
        return _ONE
    if q == 1:
        return base
    return Pow(base, q)


def differentiate(e: Expr) -> Expr:
    """Exact d/dt with chain and quotient rules; constant folding only."""
    if isinstance(e, (Num, Const)):
        return _ZERO
    if isinstance(e, TVar):
        return _ONE
    if isinstance(e, Neg):
        return _neg(differentiate(e.arg))
    if isinstance(e, Add):
        return _add(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Sub):
        return _sub(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Mul):
        return _add(
            _mul(differentiate(e.left), e.right),
            _mul(e.left, differentiate(e.right)),
        )
    if isinstance(e, Div):
        num = _sub(
            _mul(differentiate(e.left), e.right),
            _mul(e.left, differentiate(e.right)),
        )
        return _div(num, _pow(e.right, Fraction(2)))
    if isinstance(e, Pow):
        if e.exponent == 0:
            return _ZERO
        outer = _mul(Num(e.exponent), _pow(e.base, e.exponent - 1))
        return _mul(outer, differentiate(e.base))
    if isinstance(e, Call):
        du = differentiate(e.arg)
        u = e.arg
        if e.fn == "exp":
            outer: Expr = Call("exp", u)
        elif e.fn == "ln":
            return _div(du, u)
        elif e.fn == "sin":
            outer = Call("cos", u)
        elif e.fn == "cos":
            outer = _neg(Call("sin", u))
        elif e.fn == "sinh":
            outer = Call("cosh", u)
        elif e.fn == "cosh":
            outer = Call("sinh", u)
        elif e.fn == "tanh":
            outer = _sub(_ONE, _pow(Call("tanh", u), Fraction(2)))
        elif e.fn == "sqrt":
            return _div(du, _mul(Num(Fraction(2)), Call("sqrt", u)))
        else:  # pragma: no cover - parser rejects unknown functions
            raise ValueError(f"unknown function {e.fn}")
        return _mul(outer, du)
    raise TypeError(f"not an Expr: {e!r}")


_MATH_FN = {
    "exp": math.exp,
    "sin": math.sin,
    "cos": math.cos,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "tanh": math.tanh,
}


def evaluate(e: Expr, t: float) -> float:
    if isinstance(e, Num):
        return float(e.value)
    if isinstance(e, TVar):
        return float(t)
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Neg):
        return -evaluate(e.arg, t)
    if isinstance(e, Add):
        return evaluate(e.left, t) + evaluate(e.right, t)
    if isinstance(e, Sub):
        return evaluate(e.left, t) - evaluate(e.right, t)
    if isinstance(e, Mul):
        return evaluate(e.left, t) * evaluate(e.right, t)
    if isinstance(e, Div):
        denom = evaluate(e.right, t)
        if denom == 0:
            raise DomainError("division by zero")
        return evaluate(e.left, t) / denom
    if isinstance(e, Pow):
        base = evaluate(e.base, t)
        q = e.exponent
        if q.denominator == 1:
            if base == 0 and q < 0:
                raise DomainError("zero base with negative exponent")
            return base ** int(q)
        if base < 0:
            raise DomainError("negative base with fractional exponent")
        if base == 0 and q < 0:
            raise DomainError("zero base with negative exponent")
        return base ** float(q)
    if isinstance(e, Call):
        x = evaluate(e.arg, t)
        if e.fn == "ln":
            if x <= 0:
                raise DomainError(f"ln of nonpositive value {x}")
            return math.log(x)
        if e.fn == "sqrt":
            if x < 0:
                raise DomainError(f"sqrt of negative value {x}")
            return math.sqrt(x)
        return _MATH_FN[e.fn](x)
    raise TypeError(f"not an Expr: {e!r}")


# -- printing -------------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 2, 3, 4


def _prec(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _PREC_ADD
    if isinstance(e, (Mul, Div)):
        return _PREC_MUL
    if isinstance(e, Neg):
        return _PREC_NEG
    if isinstance(e, Pow):
        return _PREC_POW
    return _PREC_ATOM


def _num_text(q: Fraction) -> str:
    if q < 0:
        # parenthesize synthesized negative literals so -2^2 cannot appear
        return f"(-{_num_text(-q)})"
    if q.denominator == 1:
        return str(q.numerator)
    # exact decimal when the denominator is 10-smooth; never reachable from
    # parse otherwise (synthesized fractions print as a parenthesized quotient)
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den == 1:
        shift = max(twos, fives)
        scaled = q.numerator * 10 ** shift // q.denominator
        digits = str(scaled).rjust(shift + 1, "0")
        return digits[:-shift] + "." + digits[-shift:]
    return f"({q.numerator}/{q.denominator})"


def _exp_text(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator) if q >= 0 else f"({q.numerator})"
    return f"({q.numerator}/{q.denominator})"


def _wrap(e: Expr, minimum: int) -> str:
    text = pretty(e)
    return f"({text})" if _prec(e) < minimum else text


def pretty(e: Expr) -> str:
    """Render so that parse(pretty(parse(s))) == parse(s)."""
    if isinstance(e, Num):
        return _num_text(e.value)
    if isinstance(e, TVar):
        return "t"
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}({pretty(e.arg)})"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _PREC_POW)
    if isinstance(e, Add):
        return f"{_wrap(e.left, _PREC_ADD)} + {_wrap(e.right, _PREC_MUL)}"
    if isinstance(e, Sub):
        return f"{_wrap(e.left, _PREC_ADD)} - {_wrap(e.right, _PREC_MUL)}"
    if isinstance(e, Mul):
        return f"{_wrap(e.left, _PREC_MUL)}*{_wrap(e.right, _PREC_POW)}"
    if isinstance(e, Div):
        return f"{_wrap(e.left, _PREC_MUL)}/{_wrap(e.right, _PREC_ATOM)}"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _PREC_ATOM)}^{_exp_text(e.exponent)}"
    raise TypeError(f"not an Expr: {e!r}")


@dataclass(frozen=True)
class ProfileFunctions:
    """k(t), r(t) with symbolic first and second derivatives."""

    k: Expr
    k1: Expr
    k2: Expr
    r: Expr
    r1: Expr
    r2: Expr

    @classmethod
    def from_exprs(cls, k: Expr, r: Expr) -> "ProfileFunctions":
        k1 = differentiate(k)
        r1 = differentiate(r)
        return cls(k=k, k1=k1, k2=differentiate(k1), r=r, r1=r1, r2=differentiate(r1))

    @classmethod
    def from_strings(cls, k_text: str, r_text: str) -> "ProfileFunctions":
        return cls.from_exprs(parse(k_text), parse(r_text))

    def k_value(self, t: float) -> float:
        return evaluate(self.k, t)

    def r_value(self, t: float) -> float:
        return evaluate(self.r, t)

    def jet_values(self, t: float) -> tuple[float, float, float, float, float, float]:
        return (
            evaluate(self.k, t),
            evaluate(self.k1, t),
            evaluate(self.k2, t),
            evaluate(self.r, t),
            evaluate(self.r1, t),
            evaluate(self.r2, t),
        )
