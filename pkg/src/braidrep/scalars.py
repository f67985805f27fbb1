"""Exact coefficient rings.

``RatFunc`` is an element of Q(s) (or Q(k), Q(u): the variable name only
affects printing and guards against mixing fields).  ``Jet`` is a truncated
power series c_0 + c_1 h + ... + c_{d-1} h^{d-1} with coefficients in Q(k).

Both types are immutable and hashable.  Zero tests go through ``bool``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from numbers import Rational

import flint

_P = flint.fmpz_poly
_ONE = _P([1])
_ZERO = _P([])


class PoleError(ZeroDivisionError):
    """Evaluation of a rational function at one of its poles."""


def _poly_eval(p: flint.fmpz_poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p.coeffs()):
        acc = acc * x + int(c)
    return acc


def _poly_str(p: flint.fmpz_poly, var: str) -> str:
    coeffs = p.coeffs()
    terms = [f"{int(c)}*{var}^{e}" for e, c in reversed(list(enumerate(coeffs))) if c != 0]
    return "+".join(terms) if terms else "0"


_TERM = re.compile(r"^(-?\d+)\*([a-zA-Z]+)\^(\d+)$")


def _poly_parse(text: str, var: str) -> flint.fmpz_poly:
    text = text.strip()
    if text == "0":
        return _ZERO
    coeffs: dict[int, int] = {}
    for term in text.split("+"):
        m = _TERM.match(term.strip())
        if m is None or m.group(2) != var:
            raise ValueError(f"bad polynomial term {term!r}")
        e = int(m.group(3))
        coeffs[e] = coeffs.get(e, 0) + int(m.group(1))
    out = [0] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c
    return _P(out)


class RatFunc:
    """A rational function num/den in one variable with integer coefficients.

    Canonical form: gcd(num, den) = 1 in Z[var] (content included) and the
    leading coefficient of den is positive.  Zero is 0/1.  Canonical forms
    are unique, so ``==`` is structural.
    """

    __slots__ = ("num", "den", "var", "_hash")

    def __init__(self, num, den=None, var: str = "s", *, _canonical: bool = False):
        if not isinstance(num, flint.fmpz_poly):
            num = _P(num) if isinstance(num, list) else _P([int(num)])
        if den is None:
            den = _ONE
        elif not isinstance(den, flint.fmpz_poly):
            den = _P(den) if isinstance(den, list) else _P([int(den)])
        if not _canonical:
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            if num == 0:
                den = _ONE
            else:
                g = num.gcd(den)
                if g != 1:
                    num, den = num // g, den // g
                if den.coeffs()[-1] < 0:
                    num, den = -num, -den
        self.num = num
        self.den = den
        self.var = var
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, value, var: str = "s") -> "RatFunc":
        value = Fraction(value)
        return cls(_P([value.numerator]), _P([value.denominator]), var)

    @classmethod
    def gen(cls, var: str = "s") -> "RatFunc":
        return cls(_P([0, 1]), _ONE, var, _canonical=True)

    @classmethod
    def monomial(cls, exponent: int, coeff=1, var: str = "s") -> "RatFunc":
        """coeff * var**exponent, exponent of either sign."""
        coeff = Fraction(coeff)
        if exponent >= 0:
            num = [0] * exponent + [coeff.numerator]
            return cls(_P(num), _P([coeff.denominator]), var)
        return cls(_P([coeff.numerator]), _P([0] * (-exponent) + [coeff.denominator]), var)

    # -- coercion -----------------------------------------------------
    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.var != self.var:
                raise ValueError(f"cannot mix Q({self.var}) and Q({other.var})")
            return other
        if isinstance(other, (int, Rational)):
            return RatFunc.const(other, self.var)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den, self.var)
        if other.den == 1:
            return RatFunc(self.num + other.num * self.den, self.den, self.var, _canonical=True)
        if self.den == 1:
            return RatFunc(self.num * other.den + other.num, other.den, self.var, _canonical=True)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den, self.var)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, self.var, _canonical=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return RatFunc(_ZERO, _ONE, self.var, _canonical=True)
        if self.den == 1 and other.den == 1:
            return RatFunc(self.num * other.num, _ONE, self.var, _canonical=True)
        # cross-cancel to keep intermediate sizes small
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        num = (self.num // g1) * (other.num // g2)
        den = (self.den // g2) * (other.den // g1)
        if den.coeffs()[-1] < 0:
            num, den = -num, -den
        return RatFunc(num, den, self.var, _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        num, den = self.den, self.num
        if den.coeffs()[-1] < 0:
            num, den = -num, -den
        return RatFunc(num, den, self.var, _canonical=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if self.den == 1:
            return RatFunc(self.num ** e, _ONE, self.var, _canonical=True)
        return RatFunc(self.num ** e, self.den ** e, self.var, _canonical=True)

    # -- comparison ---------------------------------------------------
    def __bool__(self):
        return self.num != 0

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.var == other.var and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Rational)):
            other = Fraction(other)
            return self.den == other.denominator and self.num == other.numerator
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.var, tuple(self.num.coeffs()), tuple(self.den.coeffs())))
        return self._hash

    # -- inspection ---------------------------------------------------
    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Fraction(int(self.num.coeffs()[0]) if self.num else 0, int(self.den.coeffs()[0]))

    def degree_bound(self) -> int:
        return max(self.num.degree(), self.den.degree(), 0)

    def eval(self, point) -> Fraction:
        """Exact value at a rational point; PoleError if den vanishes there."""
        point = Fraction(point)
        d = _poly_eval(self.den, point)
        if d == 0:
            raise PoleError(f"{self} has a pole at {self.var}={point}")
        return _poly_eval(self.num, point) / d

    # -- text form ----------------------------------------------------
    def __str__(self):
        if self.den == 1:
            return _poly_str(self.num, self.var)
        return f"{_poly_str(self.num, self.var)} / {_poly_str(self.den, self.var)}"

    def __repr__(self):
        return f"RatFunc({self})"

    @classmethod
    def parse(cls, text: str, var: str = "s") -> "RatFunc":
        if " / " in text:
            n, d = text.split(" / ")
            return cls(_poly_parse(n, var), _poly_parse(d, var), var)
        return cls(_poly_parse(text, var), _ONE, var)


def ratfunc_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def ratfunc_eval(a: RatFunc, point) -> Fraction:
    return a.eval(point)


def qint(n: int, var: str = "s") -> RatFunc:
    """Quantum integer [n]_q with q = s^2, i.e. (s^{2n} - s^{-2n})/(s^2 - s^{-2})."""
    if n == 0:
        return RatFunc.const(0, var)
    sign = 1 if n > 0 else -1
    n = abs(n)
    # [n] = s^{-2(n-1)} (1 + s^4 + ... + s^{4(n-1)})
    coeffs = [0] * (4 * (n - 1) + 1)
    for j in range(n):
        coeffs[4 * j] = sign
    return RatFunc(_P(coeffs), _P([0] * (2 * (n - 1)) + [1]), var)


# ---------------------------------------------------------------------------
# Jets


class Jet:
    """Truncated power series in h modulo h^order, coefficients in Q(k)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(c if isinstance(c, RatFunc) else RatFunc.const(c, "k") for c in coeffs)
        if not coeffs:
            raise ValueError("jet order must be positive")
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @classmethod
    def const(cls, value, order: int) -> "Jet":
        value = value if isinstance(value, RatFunc) else RatFunc.const(value, "k")
        zero = RatFunc.const(0, "k")
        return cls((value,) + (zero,) * (order - 1))

    @classmethod
    def h(cls, order: int, coeff=1) -> "Jet":
        """coeff * h (coeff may be a RatFunc in k)."""
        zero = RatFunc.const(0, "k")
        coeff = coeff if isinstance(coeff, RatFunc) else RatFunc.const(coeff, "k")
        return cls(tuple(coeff if i == 1 else zero for i in range(order)))

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.order != self.order:
                raise ValueError(f"jet orders differ: {self.order} vs {other.order}")
            return other
        if isinstance(other, (int, Rational, RatFunc)):
            return Jet.const(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Jet(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self.order
        out = []
        for n in range(d):
            acc = RatFunc.const(0, "k")
            for i in range(n + 1):
                a, b = self.coeffs[i], other.coeffs[n - i]
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return Jet(out)

    __rmul__ = __mul__

    def inverse(self) -> "Jet":
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("jet with zero constant term is not invertible")
        inv0 = c0.inverse()
        out = [inv0]
        for n in range(1, self.order):
            acc = RatFunc.const(0, "k")
            for i in range(1, n + 1):
                acc = acc + self.coeffs[i] * out[n - i]
            out.append(-acc * inv0)
        return Jet(out)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = Jet.const(1, self.order)
        for _ in range(e):
            out = out * self
        return out

    def __bool__(self):
        return any(bool(c) for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Jet):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Rational, RatFunc)):
            return self == Jet.const(other, self.order)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def shift_down(self) -> "Jet":
        """Divide by h; requires zero constant term.  The top coefficient becomes unknown and is dropped,
        so the result has order one less."""
        if self.coeffs[0]:
            raise ValueError("jet not divisible by h")
        return Jet(self.coeffs[1:])

    def truncate(self, order: int) -> "Jet":
        return Jet(self.coeffs[:order])

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.coeffs) + f"] mod h^{self.order}"

    def __repr__(self):
        return f"Jet({self})"

    @classmethod
    def parse(cls, text: str) -> "Jet":
        m = re.match(r"^\[(.*)\] mod h\^(\d+)$", text.strip())
        if m is None:
            raise ValueError(f"bad jet {text!r}")
        coeffs = [RatFunc.parse(c, "k") for c in m.group(1).split(", ")]
        if len(coeffs) != int(m.group(2)):
            raise ValueError("jet order does not match coefficient count")
        return cls(coeffs)


def _series(x: Jet, coeff) -> Jet:
    """sum_j coeff(j) x^j for x with zero constant term (the sum is finite mod h^d)."""
    if x.coeffs[0]:
        raise ValueError("series argument must have zero constant term")
    out = Jet.const(coeff(0), x.order)
    power = Jet.const(1, x.order)
    for j in range(1, x.order):
        power = power * x
        c = coeff(j)
        if c:
            out = out + power * RatFunc.const(c, "k")
    return out


def jet_exp(x: Jet) -> Jet:
    if x.coeffs[0]:
        raise ValueError("jet_exp needs zero constant term (exp of a nonzero rational is irrational)")
    return _series(x, lambda j: Fraction(1, factorial(j)))


def jet_log(x: Jet) -> Jet:
    if x.coeffs[0] != 1:
        raise ValueError(f"jet_log needs constant term 1, got {x.coeffs[0]}")
    z = x - 1
    return _series(z, lambda j: Fraction((-1) ** (j + 1), j) if j else Fraction(0))


def jet_sinh(x: Jet) -> Jet:
    return (jet_exp(x) - jet_exp(-x)) * Fraction(1, 2)


def jet_cosh(x: Jet) -> Jet:
    return (jet_exp(x) + jet_exp(-x)) * Fraction(1, 2)
