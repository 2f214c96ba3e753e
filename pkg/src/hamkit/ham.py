"""Homotopy analysis method with ``L = d/dt`` and ``L^-1 = integral from t0``.

Terms obey the high-order deformation recursion

    u_n = chi_n * u_{n-1} + c0 * L^-1[ D_{n-1} N[phi] ]

with ``chi_1 = 0`` and ``chi_n = 1`` otherwise, where ``D_k`` extracts the
coefficient of ``q**k`` from ``N[sum_k u_k q**k]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .exactmath import Polynomial, format_rational, parse_rational, to_rational
from .problem import IVP, problem_from_dict, substitute_q_series


class Method(str, enum.Enum):
    HAM = "ham"
    IFOHAM = "ifoham"
    PICARD = "picard"


def check_c0(c0) -> Fraction:
    c0 = to_rational(c0)
    if c0 == 0:
        raise ValueError("c0 must be nonzero")
    return c0


@dataclass(frozen=True)
class SolutionSeries:
    """Terms ``u_0..u_m`` of a series solution and their partial sums."""

    method: Method
    c0: Optional[Fraction]
    terms: tuple[Polynomial, ...]
    ivp: IVP
    partial_sums: tuple[Polynomial, ...] = field(default=())

    def __post_init__(self):
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        if not self.partial_sums:
            sums, acc = [], Polynomial()
            for u in terms:
                acc = acc + u
                sums.append(acc)
            object.__setattr__(self, "partial_sums", tuple(sums))
        if self.c0 is not None and self.c0 == 0:
            raise ValueError("c0 must be nonzero")
        if self.method is Method.PICARD and self.c0 is not None:
            raise ValueError("Picard series carry no c0")
        t0 = self.ivp.t0
        for k, u in enumerate(terms[1:], start=1):
            if u(t0) != 0:
                raise AssertionError(f"term u_{k} does not vanish at t0")

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    @property
    def solution(self) -> Polynomial:
        return self.partial_sums[-1]

    def to_json(self) -> dict:
        return {
            "method": self.method.value,
            "c0": None if self.c0 is None else format_rational(self.c0),
            "order": self.order,
            "problem": self.ivp.to_json(),
            "terms": [u.to_json() for u in self.terms],
            "partial_sums": [x.to_json() for x in self.partial_sums],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SolutionSeries":
        c0 = doc.get("c0")
        series = cls(
            Method(doc["method"]),
            None if c0 is None else parse_rational(c0),
            tuple(Polynomial.from_json(u) for u in doc["terms"]),
            problem_from_dict(doc["problem"]),
        )
        stored = tuple(Polynomial.from_json(x) for x in doc.get("partial_sums", ()))
        if stored and stored != series.partial_sums:
            raise ValueError("partial_sums inconsistent with terms")
        return series


def ham_rhs_term(ivp: IVP, u: Sequence[Polynomial], n: int) -> Polynomial:
    """``D_{n-1} N[phi]`` given ``u_0..u_{n-1}``."""
    if n < 1:
        raise ValueError("n must be positive")
    if len(u) < n:
        raise ValueError(f"need u_0..u_{n - 1}, got {len(u)} terms")
    f_coeff = substitute_q_series(ivp.f, u[:n], n - 1)[n - 1]
    return u[n - 1].derivative() - f_coeff


def iter_ham(ivp: IVP, c0) -> Iterator[Polynomial]:
    """Yield ``u_0, u_1, ...`` indefinitely."""
    c0 = check_c0(c0)
    u = [ivp.guess]
    yield u[0]
    n = 1
    while True:
        step = ham_rhs_term(ivp, u, n).integrate_from(ivp.t0).scale(c0)
        un = step if n == 1 else u[n - 1] + step
        u.append(un)
        yield un
        n += 1


def ham_solve(ivp: IVP, c0, order: int) -> SolutionSeries:
    if order < 0:
        raise ValueError("order must be nonnegative")
    c0 = check_c0(c0)
    gen = iter_ham(ivp, c0)
    terms = [next(gen) for _ in range(order + 1)]
    return SolutionSeries(Method.HAM, c0, tuple(terms), ivp)
