"""First-order polynomial initial value problems ``x' = f(t, x), x(t0) = x0``.

The right-hand side is a :class:`BivariatePolynomial` with rational
coefficients, which keeps every iterate of every solver an exact polynomial.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .exactmath import Polynomial, format_rational, parse_rational, to_rational


class ProblemError(ValueError):
    """Malformed or inconsistent problem definition."""


class BivariatePolynomial:
    """Sparse ``f(t, x) = sum c * t**i * x**j`` keyed by ``(i, j)``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else (
            ((i, j), c) for i, j, c in terms
        )
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise ProblemError(f"negative exponent in term ({i}, {j})")
            if (i, j) in out:
                raise ProblemError(f"duplicate term (t_exp={i}, x_exp={j})")
            c = to_rational(c)
            out[(i, j)] = c
        self._terms = {k: v for k, v in sorted(out.items()) if v != 0}

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    @property
    def x_degree(self) -> int:
        return max((j for _, j in self._terms), default=0)

    @property
    def t_degree(self) -> int:
        return max((i for i, _ in self._terms), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"({i}, {j}, {format_rational(c)})" for (i, j), c in self._terms.items())
        return f"BivariatePolynomial([{body}])"

    def to_json(self) -> list[dict]:
        return [
            {"t_exp": i, "x_exp": j, "coeff": format_rational(c)}
            for (i, j), c in self._terms.items()
        ]

    def __call__(self, t, x):
        return sum((c * t**i * x**j for (i, j), c in self._terms.items()), Fraction(0))

    def _by_x_power(self) -> dict[int, Polynomial]:
        # f = sum_j a_j(t) x**j
        groups: dict[int, dict[int, Fraction]] = {}
        for (i, j), c in self._terms.items():
            groups.setdefault(j, {})[i] = c
        out = {}
        for j, row in groups.items():
            coeffs = [Fraction(0)] * (max(row) + 1)
            for i, c in row.items():
                coeffs[i] = c
            out[j] = Polynomial(coeffs)
        return out


@dataclass(frozen=True)
class IVP:
    f: BivariatePolynomial
    t0: Fraction = Fraction(0)
    x0: Fraction = Fraction(0)
    initial_guess: Optional[Polynomial] = None

    def __post_init__(self):
        object.__setattr__(self, "t0", to_rational(self.t0))
        object.__setattr__(self, "x0", to_rational(self.x0))
        g = self.initial_guess
        if g is not None and g(self.t0) != self.x0:
            raise ProblemError(
                f"initial guess takes value {format_rational(g(self.t0))} at "
                f"t0={format_rational(self.t0)}, expected x0={format_rational(self.x0)}"
            )

    @property
    def guess(self) -> Polynomial:
        """The starting iterate; constant ``x0`` unless one was supplied."""
        if self.initial_guess is None:
            return Polynomial.constant(self.x0)
        return self.initial_guess

    def with_guess(self, guess: Optional[Polynomial]) -> "IVP":
        return IVP(self.f, self.t0, self.x0, guess)

    def to_json(self) -> dict:
        d = {
            "t0": format_rational(self.t0),
            "x0": format_rational(self.x0),
            "f": self.f.to_json(),
        }
        if self.initial_guess is not None:
            d["initial_guess"] = self.initial_guess.to_json()
        return d


def _check_int(value, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ProblemError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise ProblemError(f"{name} must be nonnegative, got {value}")
    return value


def _rational_field(obj: Mapping, key: str) -> Fraction:
    if key not in obj:
        raise ProblemError(f"missing field {key!r}")
    try:
        return parse_rational(str(obj[key]))
    except ValueError as exc:
        raise ProblemError(f"field {key!r}: {exc}") from None


def problem_from_dict(doc: Mapping) -> IVP:
    if not isinstance(doc, Mapping):
        raise ProblemError("problem document must be a JSON object")
    t0 = _rational_field(doc, "t0")
    x0 = _rational_field(doc, "x0")
    raw_f = doc.get("f")
    if not isinstance(raw_f, list):
        raise ProblemError("field 'f' must be a list of terms")
    terms = []
    for item in raw_f:
        if not isinstance(item, Mapping):
            raise ProblemError("each term of 'f' must be an object")
        terms.append((
            _check_int(item.get("t_exp"), "t_exp"),
            _check_int(item.get("x_exp"), "x_exp"),
            _rational_field(item, "coeff"),
        ))
    f = BivariatePolynomial(terms)
    guess = None
    if doc.get("initial_guess") is not None:
        raw_g = doc["initial_guess"]
        if not isinstance(raw_g, list):
            raise ProblemError("field 'initial_guess' must be a list of terms")
        for item in raw_g:
            if not isinstance(item, Mapping):
                raise ProblemError("each term of 'initial_guess' must be an object")
            _check_int(item.get("exp"), "exp")
            _rational_field(item, "coeff")
        try:
            guess = Polynomial.from_json(raw_g)
        except ValueError as exc:
            raise ProblemError(f"initial_guess: {exc}") from None
    return IVP(f, t0, x0, guess)


def parse_problem(text: str) -> IVP:
    """Build an :class:`IVP` from a JSON problem document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(
            f"malformed JSON at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}"
        ) from None
    return problem_from_dict(doc)


def load_problem(path) -> IVP:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


def tan_problem(guess: Optional[Polynomial] = None) -> IVP:
    """``x' = 1 + x**2, x(0) = 0`` whose solution is ``tan t``; guess defaults to ``t``."""
    f = BivariatePolynomial({(0, 0): 1, (0, 2): 1})
    return IVP(f, 0, 0, Polynomial.t() if guess is None else guess)


# -- substitution -------------------------------------------------------------

def substitute_poly(f: BivariatePolynomial, p: Polynomial) -> Polynomial:
    """Exact composition ``f(t, p(t))``."""
    groups = f._by_x_power()
    if not groups:
        return Polynomial()
    powers = [Polynomial.constant(1)]
    for _ in range(max(groups)):
        powers.append(powers[-1] * p)
    acc = Polynomial()
    for j, a in groups.items():
        acc = acc + a * powers[j]
    return acc


def apply_N(ivp: IVP, x: Polynomial) -> Polynomial:
    """Residual operator ``x' - f(t, x)``."""
    return x.derivative() - substitute_poly(ivp.f, x)


def _q_mul(a: Sequence[Polynomial], b: Sequence[Polynomial], order: int) -> list[Polynomial]:
    out = []
    for k in range(order + 1):
        acc = Polynomial()
        for i in range(k + 1):
            if a[i] and b[k - i]:
                acc = acc + a[i] * b[k - i]
        out.append(acc)
    return out


def substitute_q_series(f: BivariatePolynomial, u: Sequence[Polynomial], q_order: int) -> list[Polynomial]:
    """Coefficients of ``q**0 .. q**q_order`` in ``f(t, sum_k u[k] q**k)``.

    Missing ``u[k]`` count as zero.  Powers of the series are formed by
    truncated convolution in ``q``, never by full expansion.
    """
    if q_order < 0:
        raise ValueError("q_order must be nonnegative")
    phi = [u[k] if k < len(u) else Polynomial() for k in range(q_order + 1)]
    groups = f._by_x_power()
    one = [Polynomial.constant(1)] + [Polynomial()] * q_order
    powers = [one]
    for _ in range(max(groups, default=0)):
        powers.append(_q_mul(powers[-1], phi, q_order))
    out = [Polynomial() for _ in range(q_order + 1)]
    for j, a in groups.items():
        for k in range(q_order + 1):
            if powers[j][k]:
                out[k] = out[k] + a * powers[j][k]
    return out
