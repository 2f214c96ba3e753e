"""Residual diagnostics, c0 sweeps and contraction bounds."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, TextIO

from .exactmath import Polynomial, to_rational
from .ham import Method, SolutionSeries, check_c0
from .ifoham import iter_terms
from .problem import IVP, apply_N

DEFAULT_OMEGA = (Fraction(-1), Fraction(1))


def format_sci(value: float) -> str:
    """Three significant digits in scientific notation, e.g. ``4.00e-01``."""
    return f"{value:.2e}"


@dataclass(frozen=True)
class ResidualReport:
    order: int
    E_exact: Fraction
    E_float: float
    cpu_seconds: float = 0.0

    @property
    def rendered(self) -> str:
        return format_sci(self.E_float)


def _omega(omega) -> tuple[Fraction, Fraction]:
    a, b = (to_rational(v) for v in omega)
    if not a < b:
        raise ValueError(f"degenerate residual interval [{a}, {b}]")
    return a, b


def squared_residual_exact(ivp: IVP, x: Polynomial, omega=DEFAULT_OMEGA) -> Fraction:
    a, b = _omega(omega)
    r = apply_N(ivp, x)
    return (r * r).definite_integral(a, b)


def squared_residual(ivp: IVP, x: Polynomial, omega=DEFAULT_OMEGA, order: int = 0) -> ResidualReport:
    """Integral of ``N[x]**2`` over ``omega``, exactly."""
    e = squared_residual_exact(ivp, x, omega)
    return ResidualReport(order, e, float(e))


def residual_table(ivp: IVP, method, c0=None, max_order: int = 4, omega=DEFAULT_OMEGA,
                   truncate_degree: Optional[int] = None) -> list[ResidualReport]:
    """One report per partial sum ``x_0..x_max_order``.

    ``cpu_seconds`` is the cumulative wall time spent by the solver to reach
    each order; residual evaluation is not included.
    """
    method = Method(method)
    if method is not Method.PICARD:
        c0 = check_c0(c0)
    omega = _omega(omega)
    gen = iter_terms(ivp, method, c0, truncate_degree)
    reports = []
    x = Polynomial()
    elapsed = 0.0
    for m in range(max_order + 1):
        start = time.perf_counter()
        x = x + next(gen)
        elapsed += time.perf_counter() - start
        e = squared_residual_exact(ivp, x, omega)
        reports.append(ResidualReport(m, e, float(e), elapsed))
    return reports


# -- c0 sweeps ------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    c0: Fraction
    order: int
    E_exact: Fraction

    @property
    def E(self) -> float:
        return float(self.E_exact)


def _sweep_one(args) -> list[SweepRow]:
    ivp, method, c0, orders, omega = args
    top = max(orders)
    gen = iter_terms(ivp, method, c0)
    x = Polynomial()
    rows = []
    for m in range(top + 1):
        x = x + next(gen)
        if m in orders:
            rows.append(SweepRow(c0, m, squared_residual_exact(ivp, x, omega)))
    return rows


def c0_sweep(ivp: IVP, method, grid: Iterable, orders: Iterable[int], omega=DEFAULT_OMEGA,
             jobs: int = 1) -> list[SweepRow]:
    """Residual ``E_m`` for every ``(c0, m)`` pair, sorted by ``(c0, m)``.

    Grid points are independent and are farmed out to ``jobs`` processes when
    ``jobs > 1``.
    """
    method = Method(method)
    if method is Method.PICARD:
        raise ValueError("c0 sweeps need a method with a convergence-control parameter")
    grid = sorted({to_rational(c) for c in grid})
    if not grid:
        raise ValueError("empty c0 grid")
    if any(c == 0 for c in grid):
        raise ValueError("c0 must be nonzero; grid contains 0")
    orders = sorted(set(orders))
    if not orders or orders[0] < 0:
        raise ValueError("orders must be a nonempty set of nonnegative integers")
    omega = _omega(omega)
    tasks = [(ivp, method, c0, orders, omega) for c0 in grid]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_sweep_one, tasks))
    else:
        chunks = [_sweep_one(t) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r.c0, r.order))
    return rows


def sweep_argmin(rows: Sequence[SweepRow], order: int) -> list[SweepRow]:
    """All rows of the given order attaining the minimal residual."""
    sel = [r for r in rows if r.order == order]
    if not sel:
        return []
    best = min(r.E_exact for r in sel)
    return [r for r in sel if r.E_exact == best]


def write_sweep_csv(rows: Iterable[SweepRow], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["c0", "order", "E"])
    for r in rows:
        w.writerow([repr(float(r.c0)), r.order, format(r.E, ".17g")])


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    return buf.getvalue()


def rational_grid(start, stop, step) -> list[Fraction]:
    """Exact arithmetic progression from ``start`` to ``stop`` inclusive."""
    start, stop, step = (to_rational(v) for v in (start, stop, step))
    if step <= 0:
        raise ValueError("grid step must be positive")
    if stop < start:
        raise ValueError("grid stop must not precede start")
    n = int((stop - start) // step)
    return [start + i * step for i in range(n + 1)]


# -- existence radius and contraction constant --------------------------------

def existence_radius(a: float, b: float, M: float) -> float:
    """``min(a, b / M)``: half-width of the guaranteed existence interval."""
    for name, v in (("a", a), ("b", b), ("M", M)):
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v}")
    return min(a, b / M)


@dataclass(frozen=True)
class ContractionParams:
    L: float
    L_tilde: float
    A: float
    c0: float
    a: Optional[float] = None
    b: Optional[float] = None
    M: Optional[float] = None

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("L must be positive")
        if not self.L_tilde > self.L:
            raise ValueError("L_tilde must exceed L")
        if not self.A > 0:
            raise ValueError("A must be positive")

    @classmethod
    def from_box(cls, a: float, b: float, M: float, L: float, L_tilde: float, c0: float) -> "ContractionParams":
        return cls(L, L_tilde, existence_radius(a, b, M), c0, a, b, M)


@dataclass(frozen=True)
class ContractionBound:
    k: float

    @property
    def contracts(self) -> bool:
        return 0 < self.k < 1


def contraction_constant(p: ContractionParams) -> ContractionBound:
    """Lipschitz factor of the weighted-average map in the exponentially
    weighted sup norm: ``k = 1 + (1 - (L / L~) (1 - exp(-L~ A))) c0``.

    It lies strictly between 0 and 1 whenever ``-1 <= c0 < 0``.
    """
    ratio = (p.L / p.L_tilde) * -math.expm1(-p.L_tilde * p.A)
    return ContractionBound(1.0 + (1.0 - ratio) * p.c0)


# -- reference comparison -------------------------------------------------------

def compare_reference(series: SolutionSeries, grid: Sequence[float],
                      reference: Sequence[float] | Callable[[float], float]) -> list[float]:
    """Max absolute error of each partial sum against reference samples.

    ``reference`` is either the sampled values on ``grid`` or a callable.
    """
    grid = [float(t) for t in grid]
    if callable(reference):
        values = [float(reference(t)) for t in grid]
    else:
        values = [float(v) for v in reference]
        if len(values) != len(grid):
            raise ValueError("reference samples must match the grid length")
    return [
        max((abs(x(t) - v) for t, v in zip(grid, values)), default=0.0)
        for x in series.partial_sums
    ]
