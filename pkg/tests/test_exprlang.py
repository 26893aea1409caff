"""Profile expression language: parsing, exact derivatives, evaluation."""

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
import hypothesis.strategies as st

from folicurve.exprlang import (
    Add,
    Call,
    Const,
    Div,
    DomainError,
    FUNCTIONS,
    Mul,
    Neg,
    Num,
    ParseError,
    Pow,
    ProfileFunctions,
    Sub,
    TVar,
    differentiate,
    evaluate,
    parse,
    pretty,
)


class TestParse:
    def test_function_call(self):
        assert parse("cosh(t)") == Call("cosh", TVar())

    def test_precedence(self):
        assert parse("2 + 3*t^2") == Add(
            Num(Fraction(2)), Mul(Num(Fraction(3)), Pow(TVar(), Fraction(2)))
        )

    def test_left_associativity(self):
        assert parse("1 - 2 - 3") == Sub(Sub(Num(Fraction(1)), Num(Fraction(2))), Num(Fraction(3)))
        assert parse("8 / 2 / 2") == Div(Div(Num(Fraction(8)), Num(Fraction(2))), Num(Fraction(2)))

    def test_unary_minus_binds_below_power(self):
        assert parse("-t^2") == Neg(Pow(TVar(), Fraction(2)))

    def test_parenthesized_rational_exponent(self):
        assert parse("t^(1/2)") == Pow(TVar(), Fraction(1, 2))
        assert parse("t^-2") == Pow(TVar(), Fraction(-2))

    def test_decimal_literals_are_exact(self):
        assert parse("0.3") == Num(Fraction(3, 10))

    def test_named_constants(self):
        assert parse("pi") == Const("pi")
        assert evaluate(parse("e"), 0.0) == math.e

    def test_unterminated_call(self):
        with pytest.raises(ParseError) as info:
            parse("cosh(")
        assert info.value.offset == 5

    def test_unknown_name(self):
        with pytest.raises(ParseError) as info:
            parse("2 + bogus")
        assert info.value.offset == 4

    def test_trailing_input(self):
        with pytest.raises(ParseError):
            parse("1 + 2 )")

    def test_empty(self):
        with pytest.raises(ParseError):
            parse("   ")


class TestDifferentiate:
    def test_cosh(self):
        assert differentiate(parse("cosh(t)")) == Call("sinh", TVar())

    def test_sqrt_chain_rule(self):
        d = differentiate(parse("sqrt(1 + t^2)"))
        assert evaluate(d, 1.0) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-14)

    def test_constant(self):
        assert differentiate(parse("cosh(1)")) == Num(Fraction(0))

    def test_rational_power(self):
        d = differentiate(parse("t^(3/2)"))
        assert evaluate(d, 4.0) == pytest.approx(1.5 * 2.0, rel=1e-14)

    def test_second_derivative_is_stable(self):
        e = parse("sinh(2*t) / (1 + t^2)")
        assert differentiate(differentiate(e)) == differentiate(differentiate(e))


class TestEvaluate:
    def test_cosh_value(self):
        assert evaluate(parse("cosh(t)"), 1.0) == pytest.approx(1.5430806348152437, rel=1e-15)

    def test_division_by_zero(self):
        with pytest.raises(DomainError):
            evaluate(parse("1/t"), 0.0)

    def test_ln_domain(self):
        with pytest.raises(DomainError):
            evaluate(parse("ln(t)"), -1.0)

    def test_sqrt_domain(self):
        with pytest.raises(DomainError):
            evaluate(parse("sqrt(t)"), -4.0)

    def test_fractional_power_of_negative(self):
        with pytest.raises(DomainError):
            evaluate(parse("t^(1/2)"), -1.0)


# -- randomized properties ------------------------------------------------------

numbers = st.fractions(min_value=0, max_value=4, max_denominator=10).map(Num)
leaves = st.one_of(numbers, st.just(TVar()), st.sampled_from([Const("pi"), Const("e")]))
exponents_st = st.fractions(min_value=-2, max_value=3, max_denominator=2)


def _extend(children):
    return st.one_of(
        st.builds(Add, children, children),
        st.builds(Sub, children, children),
        st.builds(Mul, children, children),
        st.builds(Div, children, children),
        st.builds(Neg, children),
        st.builds(Pow, children, exponents_st),
        st.builds(Call, st.sampled_from(FUNCTIONS), children),
    )


expressions = st.recursive(leaves, _extend, max_leaves=8)


def _safe_eval(e, t):
    try:
        value = evaluate(e, t)
    except (DomainError, OverflowError):
        return None
    if not math.isfinite(value):
        return None
    return value


class TestProperties:
    @given(expressions, st.floats(min_value=0.1, max_value=0.9))
    @settings(max_examples=150, deadline=None)
    def test_finite_difference_matches_symbolic(self, e, t):
        h = 1e-5
        samples = [_safe_eval(e, t + dt) for dt in (-h, 0.0, h)]
        assume(all(s is not None and abs(s) < 1e3 for s in samples))
        d_sym = _safe_eval(differentiate(e), t)
        assume(d_sym is not None and abs(d_sym) < 1e3)
        d_fd = (samples[2] - samples[0]) / (2 * h)
        assert abs(d_fd - d_sym) <= 1e-3 * (1.0 + abs(d_sym))

    @given(expressions)
    @settings(max_examples=150, deadline=None)
    def test_pretty_parse_fixpoint(self, e):
        first = parse(pretty(e))
        assert parse(pretty(first)) == first

    @given(expressions)
    @settings(max_examples=80, deadline=None)
    def test_derivative_printable(self, e):
        d = differentiate(e)
        assert parse(pretty(parse(pretty(d)))) == parse(pretty(d))


class TestConcreteFixpoints:
    @pytest.mark.parametrize(
        "text",
        [
            "cosh(t)",
            "2 + 3*t^2",
            "-t^2 + 4*t - 1",
            "sqrt(1 + t^2) / (2 - t)",
            "sinh(t)*cosh(t) - tanh(t/2)",
            "exp(-t) * sin(2*t)",
            "1.5 + 0.25*t",
            "t^(1/2) + t^(-1)",
        ],
    )
    def test_roundtrip(self, text):
        ast = parse(text)
        assert parse(pretty(ast)) == ast


class TestProfileFunctions:
    def test_derivatives_by_construction(self):
        prof = ProfileFunctions.from_strings("cosh(t)", "sinh(t)")
        k, k1, k2, r, r1, r2 = prof.jet_values(0.7)
        assert k == pytest.approx(math.cosh(0.7), rel=1e-15)
        assert k1 == pytest.approx(math.sinh(0.7), rel=1e-15)
        assert k2 == pytest.approx(math.cosh(0.7), rel=1e-15)
        assert r2 == pytest.approx(math.sinh(0.7), rel=1e-15)
        assert prof.k_value(0.7) == k and prof.r_value(0.7) == r

    def test_constant_profile(self):
        prof = ProfileFunctions.from_strings("cosh(1)", "sinh(1)")
        assert prof.jet_values(3.0)[1:3] == (0.0, 0.0)
