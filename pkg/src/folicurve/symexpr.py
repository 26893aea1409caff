"""Exact multivariate Laurent-polynomial arithmetic over arbitrary-precision rationals.

Polynomials live in Q[nu][X^{-1}, X, KAP, KAP1, KAP2, RHO, RHO1, RHO2, SIG]:
the vertical coordinate X may carry negative exponents, every other
indeterminate is an ordinary polynomial variable.  KAP/RHO and their primed
companions model the 2-jet of a center/radius profile, SIG is the tangential
radius-squared, NU the (symbolic) ambient dimension.  Identities verified over
this ring hold for every integer dimension at once.

All values are immutable; operations are pure and safe to share.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterator, Mapping


class JetOrderExceeded(Exception):
    """A formal t-derivative would require a third-order jet symbol."""


class MissingBinding(Exception):
    """eval_numeric was called without a value for a present indeterminate."""


class Indeterminate(enum.IntEnum):
    X = 0      # vertical half-space coordinate x_n; Laurent exponents allowed
    KAP = 1    # center height k(t)
    KAP1 = 2   # k'(t)
    KAP2 = 3   # k''(t)
    RHO = 4    # radius r(t)
    RHO1 = 5   # r'(t)
    RHO2 = 6   # r''(t)
    SIG = 7    # sum of the squared tangential coordinates
    NU = 8     # ambient dimension, kept symbolic


_N = len(Indeterminate)
_ZERO_EXPS = (0,) * _N

# t-derivative chain; KAP2/RHO2 have no successor (JetOrderExceeded).
_T_CHAIN = {
    Indeterminate.KAP: Indeterminate.KAP1,
    Indeterminate.KAP1: Indeterminate.KAP2,
    Indeterminate.RHO: Indeterminate.RHO1,
    Indeterminate.RHO1: Indeterminate.RHO2,
}
_T_BLOCKED = (Indeterminate.KAP2, Indeterminate.RHO2)


def _coerce(value) -> "SymExpr":
    if isinstance(value, SymExpr):
        return value
    if isinstance(value, (int, Fraction)):
        return SymExpr._make({_ZERO_EXPS: Fraction(value)})
    return NotImplemented


class SymExpr:
    """A finite map from exponent vectors to nonzero rational coefficients.

    Structural equality of the canonical term map is mathematical equality;
    zero is the empty map.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple, Fraction] | None = None):
        pruned = {}
        if terms:
            for exps, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff:
                    pruned[tuple(exps)] = coeff
        self._terms = pruned

    @classmethod
    def _make(cls, terms: dict) -> "SymExpr":
        # internal: terms already pruned and canonical
        obj = object.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def monomial(cls, coeff, exps: Mapping[Indeterminate, int]) -> "SymExpr":
        coeff = Fraction(coeff)
        if not coeff:
            return ZERO
        vec = [0] * _N
        for ind, e in exps.items():
            if e < 0 and ind is not Indeterminate.X:
                raise ValueError(f"negative exponent only allowed for X, got {ind.name}^{e}")
            vec[ind] = e
        return cls._make({tuple(vec): coeff})

    # -- ring structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other) -> "SymExpr":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for exps, coeff in other._terms.items():
            acc = out.get(exps, 0) + coeff
            if acc:
                out[exps] = acc
            else:
                out.pop(exps, None)
        return SymExpr._make(out)

    __radd__ = __add__

    def __neg__(self) -> "SymExpr":
        return SymExpr._make({exps: -c for exps, c in self._terms.items()})

    def __sub__(self, other) -> "SymExpr":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "SymExpr":
        return (-self) + other

    def __mul__(self, other) -> "SymExpr":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                exps = tuple(x + y for x, y in zip(ea, eb))
                acc = out.get(exps, 0) + ca * cb
                if acc:
                    out[exps] = acc
                else:
                    out.pop(exps, None)
        return SymExpr._make(out)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "SymExpr":
        if not isinstance(power, int) or power < 0:
            raise ValueError("SymExpr powers must be nonnegative integers")
        result = ONE
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    # -- calculus ----------------------------------------------------------

    def d_dX(self) -> "SymExpr":
        """Formal partial derivative in X; every other indeterminate is constant."""
        out: dict = {}
        for exps, coeff in self._terms.items():
            e = exps[Indeterminate.X]
            if e == 0:
                continue
            new = list(exps)
            new[Indeterminate.X] = e - 1
            key = tuple(new)
            acc = out.get(key, 0) + coeff * e
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return SymExpr._make(out)

    def d_dt(self) -> "SymExpr":
        """Formal t-derivative with the jet chain KAP->KAP1->KAP2, RHO->RHO1->RHO2.

        X and SIG are t-independent.  Raises JetOrderExceeded if the input
        contains KAP2 or RHO2 (their derivatives are third-order jets).
        """
        out = ZERO
        for exps, coeff in self._terms.items():
            for blocked in _T_BLOCKED:
                if exps[blocked]:
                    raise JetOrderExceeded(
                        f"d_dt would need the derivative of {blocked.name}"
                    )
            for ind, succ in _T_CHAIN.items():
                e = exps[ind]
                if not e:
                    continue
                new = list(exps)
                new[ind] = e - 1
                new[succ] += 1
                out = out + SymExpr._make({tuple(new): coeff * e})
        return out

    # -- substitution and extraction ----------------------------------------

    def substitute(self, ind: Indeterminate, replacement: "SymExpr") -> "SymExpr":
        """Replace every power of `ind` by the corresponding power of `replacement`."""
        replacement = _coerce(replacement)
        powers: dict[int, SymExpr] = {0: ONE}
        out = ZERO
        for exps, coeff in self._terms.items():
            e = exps[ind]
            if e < 0:
                raise ValueError(f"cannot substitute into negative power of {ind.name}")
            if e not in powers:
                powers[e] = replacement ** e
            rest = list(exps)
            rest[ind] = 0
            out = out + SymExpr._make({tuple(rest): coeff}) * powers[e]
        return out

    def reduce_level_set(self) -> "SymExpr":
        """Eliminate SIG via the leaf relation SIG = RHO^2 - (X - KAP)^2; idempotent."""
        return self.substitute(Indeterminate.SIG, _SIG_RULE)

    def coeff_of(self, ind: Indeterminate, degree: int) -> "SymExpr":
        out: dict = {}
        for exps, coeff in self._terms.items():
            if exps[ind] != degree:
                continue
            new = list(exps)
            new[ind] = 0
            out[tuple(new)] = coeff
        return SymExpr._make(out)

    def coeff_of_X(self, degree: int) -> "SymExpr":
        """The coefficient of X^degree, free of X."""
        return self.coeff_of(Indeterminate.X, degree)

    def degrees_of(self, ind: Indeterminate) -> list[int]:
        return sorted({exps[ind] for exps in self._terms})

    def indeterminates(self) -> set[Indeterminate]:
        used = set()
        for exps in self._terms:
            for ind in Indeterminate:
                if exps[ind]:
                    used.add(ind)
        return used

    def terms(self) -> Iterator[tuple[tuple, Fraction]]:
        return iter(self._terms.items())

    def constant_value(self) -> Fraction:
        """The rational value of a constant polynomial."""
        if not self._terms:
            return Fraction(0)
        if set(self._terms) != {_ZERO_EXPS}:
            raise ValueError(f"not a constant: {self}")
        return self._terms[_ZERO_EXPS]

    # -- numeric evaluation --------------------------------------------------

    def eval_numeric(self, bindings: Mapping[Indeterminate, float]) -> float:
        """IEEE-double evaluation; rational coefficients convert at the last step."""
        used = self.indeterminates()
        missing = [ind.name for ind in used if ind not in bindings]
        if missing:
            raise MissingBinding(f"no value for {', '.join(sorted(missing))}")
        if Indeterminate.X in used:
            x = bindings[Indeterminate.X]
            if any(exps[Indeterminate.X] < 0 for exps in self._terms) and x <= 0:
                raise ValueError("X binding must be positive for Laurent terms")
        total = 0.0
        for exps, coeff in self._terms.items():
            value = 1.0
            for ind in used:
                e = exps[ind]
                if e:
                    value *= bindings[ind] ** e
            total += float(coeff) * value
        return total

    # -- text form -----------------------------------------------------------

    def to_text(self) -> str:
        """Deterministic, sorted plain-text polynomial (graded-lex, descending)."""
        if not self._terms:
            return "0"
        def key(exps):
            return (sum(exps), exps)
        parts = []
        for exps in sorted(self._terms, key=key, reverse=True):
            coeff = self._terms[exps]
            factors = []
            for ind in Indeterminate:
                e = exps[ind]
                if e == 1:
                    factors.append(ind.name)
                elif e:
                    factors.append(f"{ind.name}^{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            parts.append(("-" if coeff < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"SymExpr({self.to_text()})"


def rational(numerator: int, denominator: int = 1) -> SymExpr:
    return SymExpr._make({_ZERO_EXPS: Fraction(numerator, denominator)}) if numerator else ZERO


def x_pow(exponent: int) -> SymExpr:
    """X^exponent for any integer exponent (the one Laurent direction)."""
    vec = [0] * _N
    vec[Indeterminate.X] = exponent
    return SymExpr._make({tuple(vec): Fraction(1)})


def _gen(ind: Indeterminate) -> SymExpr:
    vec = [0] * _N
    vec[ind] = 1
    return SymExpr._make({tuple(vec): Fraction(1)})


ZERO = SymExpr._make({})
ONE = SymExpr._make({_ZERO_EXPS: Fraction(1)})

X = _gen(Indeterminate.X)
KAP = _gen(Indeterminate.KAP)
KAP1 = _gen(Indeterminate.KAP1)
KAP2 = _gen(Indeterminate.KAP2)
RHO = _gen(Indeterminate.RHO)
RHO1 = _gen(Indeterminate.RHO1)
RHO2 = _gen(Indeterminate.RHO2)
SIG = _gen(Indeterminate.SIG)
NU = _gen(Indeterminate.NU)

# level-set relation: SIG -> RHO^2 - (X - KAP)^2
_SIG_RULE = RHO * RHO - (X - KAP) * (X - KAP)
