"""Iterated first-order HAM, Picard iteration, and the weighted-average map.

Each IFOHAM step solves only the first-order deformation equation on the
accumulated partial sum::

    u_{m+1} = c0 * integral_{t0}^{t} N[x_m]        x_m = u_0 + ... + u_m

At ``c0 = -1`` this is exactly Picard's successive approximation; for other
``c0`` the new partial sum is the blend ``(1 + c0) x_m - c0 P[x_m]`` of the
old iterate and its Picard image ``P[x_m]``.
"""

from __future__ import annotations

from typing import Iterator, Optional

from .exactmath import Polynomial, format_rational
from .ham import Method, SolutionSeries, check_c0, ham_solve, iter_ham
from .problem import IVP, apply_N, substitute_poly


def _check_initial_value(ivp: IVP, x: Polynomial) -> None:
    v = x(ivp.t0)
    if v != ivp.x0:
        raise ValueError(
            f"iterate takes value {format_rational(v)} at t0, expected x0={format_rational(ivp.x0)}"
        )


def ifoham_step(ivp: IVP, x_m: Polynomial, c0) -> Polynomial:
    """Correction ``u_{m+1}``; it vanishes at ``t0``."""
    c0 = check_c0(c0)
    _check_initial_value(ivp, x_m)
    return apply_N(ivp, x_m).integrate_from(ivp.t0).scale(c0)


def picard_map(ivp: IVP, x: Polynomial) -> Polynomial:
    """``x0 + integral_{t0}^{t} f(s, x(s)) ds``."""
    return substitute_poly(ivp.f, x).integrate_from(ivp.t0) + ivp.x0


def weighted_average(alpha, beta, c0):
    """``(1 + c0) * alpha - c0 * beta``.

    For ``c0`` in ``[-1, 0]`` this is a convex combination, so it never
    exceeds ``max(|alpha|, |beta|)`` in magnitude.
    """
    return alpha * (1 + c0) - beta * c0


def weighted_step(ivp: IVP, x_m: Polynomial, c0) -> Polynomial:
    """Next partial sum as a blend of ``x_m`` and its Picard image."""
    c0 = check_c0(c0)
    _check_initial_value(ivp, x_m)
    return weighted_average(x_m, picard_map(ivp, x_m), c0)


def _truncate_about(x: Polynomial, t0, max_degree: int) -> Polynomial:
    # drop powers of (t - t0) so x(t0) is preserved
    return x.taylor_shift(t0).truncate(max_degree).taylor_shift(-t0)


def iter_ifoham(ivp: IVP, c0, truncate_degree: Optional[int] = None) -> Iterator[Polynomial]:
    """Yield terms ``u_0, u_1, ...`` indefinitely.

    With ``truncate_degree`` each partial sum is cut to that degree in
    ``t - t0`` before the next step; this is an approximation and the yielded
    terms are the differences of the truncated partial sums.
    """
    c0 = check_c0(c0)
    if truncate_degree is not None and truncate_degree < 0:
        raise ValueError("truncate_degree must be nonnegative")
    x = ivp.guess
    if truncate_degree is not None:
        x = _truncate_about(x, ivp.t0, truncate_degree)
    yield x
    while True:
        u = ifoham_step(ivp, x, c0)
        nxt = x + u
        if truncate_degree is not None:
            nxt = _truncate_about(nxt, ivp.t0, truncate_degree)
            u = nxt - x
        x = nxt
        yield u


def ifoham_solve(ivp: IVP, c0, order: int, truncate_degree: Optional[int] = None) -> SolutionSeries:
    if order < 0:
        raise ValueError("order must be nonnegative")
    c0 = check_c0(c0)
    gen = iter_ifoham(ivp, c0, truncate_degree)
    terms = [next(gen) for _ in range(order + 1)]
    return SolutionSeries(Method.IFOHAM, c0, tuple(terms), ivp)


def iter_picard(ivp: IVP) -> Iterator[Polynomial]:
    """Yield terms ``x_0, x_1 - x_0, x_2 - x_1, ...``."""
    x = ivp.guess
    yield x
    while True:
        nxt = picard_map(ivp, x)
        yield nxt - x
        x = nxt


def picard_solve(ivp: IVP, order: int) -> SolutionSeries:
    if order < 0:
        raise ValueError("order must be nonnegative")
    gen = iter_picard(ivp)
    terms = [next(gen) for _ in range(order + 1)]
    return SolutionSeries(Method.PICARD, None, tuple(terms), ivp)


def iter_terms(ivp: IVP, method, c0=None, truncate_degree: Optional[int] = None) -> Iterator[Polynomial]:
    """Term generator for any of the three methods."""
    method = Method(method)
    if method is Method.HAM:
        return iter_ham(ivp, c0)
    if method is Method.IFOHAM:
        return iter_ifoham(ivp, c0, truncate_degree)
    return iter_picard(ivp)


def solve(ivp: IVP, method, c0=None, order: int = 0, truncate_degree: Optional[int] = None) -> SolutionSeries:
    method = Method(method)
    if method is Method.HAM:
        return ham_solve(ivp, c0, order)
    if method is Method.IFOHAM:
        return ifoham_solve(ivp, c0, order, truncate_degree)
    return picard_solve(ivp, order)
