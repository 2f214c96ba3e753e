"""Exact rational scalars and dense univariate polynomials in ``t``.

Scalars are :class:`fractions.Fraction` throughout (aliased as ``Rational``).
:class:`Polynomial` stores coefficients lowest degree first and is immutable.

    >>> p = Polynomial([0, 1]) + Polynomial.monomial(Rational(1, 3), 3)
    >>> str(p * p)
    't^2 + 2/3*t^4 + 1/9*t^6'
    >>> str(p.derivative())
    '1 + t^2'
"""

from __future__ import annotations

import math
import operator
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction

#: Degree of the zero polynomial.
NEG_INF = float("-inf")

Number = Union[int, Fraction]


def to_rational(value) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a rational string to a ``Fraction``.

    Floats are refused: they would silently smuggle binary rounding into
    exact arithmetic.  Use :func:`parse_rational` on a decimal string instead.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"n"``, ``"n/d"`` or a decimal such as ``"-1.2"`` exactly."""
    s = text.strip().replace("−", "-")
    if not s:
        raise ValueError("empty rational string")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid rational {text!r}") from exc


def format_rational(r: Fraction) -> str:
    """Canonical string: ``"n"`` when the denominator is 1, else ``"n/d"``."""
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def rational_arith(a: Number, b: Number, op: str):
    """Exact binary operation on rationals.

    ``op`` is one of ``add, sub, mul, div, cmp``.  ``cmp`` returns -1, 0 or 1.
    Division by zero raises :class:`ZeroDivisionError`.
    """
    a, b = to_rational(a), to_rational(b)
    if op == "cmp":
        return (a > b) - (a < b)
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    if op == "div" and b == 0:
        raise ZeroDivisionError("rational division by zero")
    return fn(a, b)


def _lcm_denominator(coeffs: Sequence[Fraction]) -> int:
    d = 1
    for c in coeffs:
        d = math.lcm(d, c.denominator)
    return d


def _int_convolve(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


class Polynomial:
    """Immutable dense polynomial in ``t`` with exact rational coefficients."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        c = [to_rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c: tuple[Fraction, ...] = tuple(c)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: list[Fraction]) -> "Polynomial":
        # trusted path: entries already Fractions
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        obj = cls.__new__(cls)
        obj._c = tuple(coeffs)
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def constant(cls, value) -> "Polynomial":
        return cls([value])

    @classmethod
    def monomial(cls, coeff, exp: int) -> "Polynomial":
        if exp < 0:
            raise ValueError("negative exponent")
        return cls([0] * exp + [coeff])

    @classmethod
    def t(cls) -> "Polynomial":
        return cls([0, 1])

    # -- basic structure ---------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self):
        """Integer degree, or ``NEG_INF`` for the zero polynomial."""
        return len(self._c) - 1 if self._c else NEG_INF

    def is_zero(self) -> bool:
        return not self._c

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self._c):
            return self._c[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == Polynomial.constant(other)._c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._c)
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial([{', '.join(format_rational(c) for c in self._c)}])"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k, c in enumerate(self._c):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if k == 0:
                body = format_rational(a)
            else:
                mono = "t" if k == 1 else f"t^{k}"
                body = mono if a == 1 else f"{format_rational(a)}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, bi in enumerate(b):
            out[i] += bi
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw([-c for c in self._c])

    def __sub__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, s) -> "Polynomial":
        s = to_rational(s)
        if s == 0:
            return Polynomial()
        return Polynomial._raw([c * s for c in self._c])

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self._c or not other._c:
            return Polynomial()
        # Cauchy product on integer numerators over a shared denominator
        da, db = _lcm_denominator(self._c), _lcm_denominator(other._c)
        ia = [c.numerator * (da // c.denominator) for c in self._c]
        ib = [c.numerator * (db // c.denominator) for c in other._c]
        den = da * db
        return Polynomial._raw([Fraction(n, den) for n in _int_convolve(ia, ib)])

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift_degree(self, k: int) -> "Polynomial":
        """Multiply by ``t**k``."""
        if not self._c or k == 0:
            return self
        return Polynomial._raw([Fraction(0)] * k + list(self._c))

    # -- calculus ----------------------------------------------------------

    def derivative(self) -> "Polynomial":
        return Polynomial._raw([k * c for k, c in enumerate(self._c)][1:])

    def antiderivative(self) -> "Polynomial":
        """Antiderivative with zero constant term."""
        if not self._c:
            return self
        return Polynomial._raw([Fraction(0)] + [c / (k + 1) for k, c in enumerate(self._c)])

    def integrate_from(self, t0=0) -> "Polynomial":
        """``P(t) = integral of self from t0 to t``; ``P(t0) == 0``."""
        P = self.antiderivative()
        t0 = to_rational(t0)
        if t0 == 0 or not P._c:
            return P
        return P - P(t0)

    def definite_integral(self, a, b) -> Fraction:
        P = self.antiderivative()
        return P(to_rational(b)) - P(to_rational(a))

    # -- evaluation and truncation -------------------------------------------

    def __call__(self, t):
        """Horner evaluation; exact for rational ``t``, double for float ``t``."""
        if isinstance(t, float):
            acc = 0.0
            for c in reversed(self._c):
                acc = acc * t + float(c)
            return acc
        t = to_rational(t)
        acc = Fraction(0)
        for c in reversed(self._c):
            acc = acc * t + c
        return acc

    def truncate(self, max_degree: int) -> "Polynomial":
        if max_degree < 0:
            raise ValueError("max_degree must be nonnegative")
        return Polynomial._raw(list(self._c[: max_degree + 1]))

    def taylor_shift(self, a) -> "Polynomial":
        """Return ``q`` with ``q(s) = self(s + a)``."""
        a = to_rational(a)
        if a == 0 or len(self._c) < 2:
            return self
        # repeated synthetic division
        c = list(self._c)
        n = len(c)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        return Polynomial._raw(c)

    # -- serialization -------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [
            {"exp": k, "coeff": format_rational(c)}
            for k, c in enumerate(self._c)
            if c != 0
        ]

    @classmethod
    def from_json(cls, items: Sequence[dict]) -> "Polynomial":
        """Inverse of :meth:`to_json`; exponents must be strictly increasing."""
        coeffs: dict[int, Fraction] = {}
        last = -1
        for item in items:
            exp = item["exp"]
            if not isinstance(exp, int) or isinstance(exp, bool) or exp < 0:
                raise ValueError(f"exponent must be a nonnegative integer, got {exp!r}")
            if exp <= last:
                raise ValueError("exponents must be strictly increasing")
            last = exp
            coeffs[exp] = parse_rational(str(item["coeff"]))
        out = [Fraction(0)] * (last + 1)
        for k, c in coeffs.items():
            out[k] = c
        return cls._raw(out)


# Module-level spellings of the polynomial operations.

def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def poly_derivative(p: Polynomial) -> Polynomial:
    return p.derivative()


def poly_integrate_from(p: Polynomial, t0=0) -> Polynomial:
    return p.integrate_from(t0)


def poly_definite_integral(p: Polynomial, a, b) -> Fraction:
    return p.definite_integral(a, b)


def poly_eval(p: Polynomial, t):
    return p(t)


def poly_truncate(p: Polynomial, max_degree: int) -> Polynomial:
    return p.truncate(max_degree)
