import math
import random
from fractions import Fraction as F

import mpmath
import pytest

from hamkit.diagnostics import (
    ContractionParams,
    c0_sweep,
    compare_reference,
    contraction_constant,
    existence_radius,
    rational_grid,
    residual_table,
    squared_residual,
    sweep_argmin,
    sweep_csv,
)
from hamkit.exactmath import Polynomial
from hamkit.ham import ham_solve
from hamkit.problem import IVP, BivariatePolynomial, apply_N, tan_problem

from oracle import random_ivp

t = Polynomial.t()
TAN = tan_problem()


def test_squared_residual_examples():
    r = squared_residual(TAN, t)
    assert r.E_exact == F(2, 5) and r.rendered == "4.00e-01"
    x1 = Polynomial([0, 1, 0, F(1, 3)])
    r1 = squared_residual(TAN, x1)
    assert r1.E_exact == 2 * (F(4, 81) + F(4, 297) + F(1, 1053))
    assert r1.rendered == "1.28e-01"
    lin = IVP(BivariatePolynomial({(0, 0): 3, (1, 0): -2}), 0, 0)
    assert squared_residual(lin, Polynomial([0, 3, -1])).E_exact == 0


def test_squared_residual_rejects_degenerate_interval():
    with pytest.raises(ValueError):
        squared_residual(TAN, t, (1, 1))
    with pytest.raises(ValueError):
        squared_residual(TAN, t, (1, -1))


def test_float_is_nearest_double():
    r = residual_table(TAN, "ifoham", F(-6, 5), 4)[-1]
    assert r.E_float == float(r.E_exact)
    assert r.E_exact > 0


@pytest.mark.parametrize("method, c0, expected", [
    ("ham", F(-1), ["4.00e-01", "1.28e-01", "3.38e-02", "7.88e-03", "1.70e-03"]),
    ("ifoham", F(-1), ["4.00e-01", "1.28e-01", "2.42e-02", "2.69e-03", "1.87e-04"]),
    ("ifoham", F(-6, 5), ["4.00e-01", "1.03e-01", "5.73e-03", "3.54e-05", "5.45e-06"]),
])
def test_residual_tables(method, c0, expected):
    reports = residual_table(TAN, method, c0, 4)
    assert [r.rendered for r in reports] == expected
    assert [r.order for r in reports] == list(range(5))
    secs = [r.cpu_seconds for r in reports]
    assert secs == sorted(secs)


def test_ham_and_ifoham_share_first_two_residuals():
    a = residual_table(TAN, "ham", -1, 2)
    b = residual_table(TAN, "ifoham", -1, 2)
    assert [r.E_exact for r in a[:2]] == [r.E_exact for r in b[:2]]


@pytest.mark.parametrize("seed", range(5))
def test_zero_residual_iff_exact(seed):
    rng = random.Random(seed)
    ivp = random_ivp(rng)
    for x in ham_solve(ivp, F(-1), 2).partial_sums:
        r = squared_residual(ivp, x)
        assert r.E_exact >= 0
        assert (r.E_exact == 0) == apply_N(ivp, x).is_zero()


# -- sweeps -------------------------------------------------------------------------

def test_sweep_ham_prefers_minus_one():
    rows = c0_sweep(TAN, "ham", [F(-1), F(-1, 2)], range(5))
    assert [(r.c0, r.order) for r in rows] == sorted((c, m) for c in (F(-1), F(-1, 2)) for m in range(5))
    by = {(r.c0, r.order): r.E_exact for r in rows}
    for m in range(1, 5):
        assert by[(F(-1), m)] < by[(F(-1, 2), m)]


def test_sweep_ifoham_argmin():
    grid = rational_grid(F(-13, 10), F(-1, 20), F(1, 20))
    assert len(grid) == 26
    rows = c0_sweep(TAN, "ifoham", grid, [4])
    best = sweep_argmin(rows, 4)
    assert best and all(F(-13, 10) <= r.c0 <= F(-11, 10) for r in best)


@pytest.mark.parametrize("method", ["ham", "ifoham"])
def test_sweep_positive_c0_diverges(method):
    rows = c0_sweep(TAN, method, [F(1, 10)], range(4))
    E = [r.E_exact for r in rows]
    assert all(a < b for a, b in zip(E, E[1:]))


def test_sweep_rejects_zero_and_empty():
    with pytest.raises(ValueError):
        c0_sweep(TAN, "ifoham", [F(-1), 0], [1])
    with pytest.raises(ValueError):
        c0_sweep(TAN, "ifoham", [], [1])


def test_sweep_parallel_matches_serial():
    grid = [F(-1), F(-1, 2), F(-3, 2)]
    assert c0_sweep(TAN, "ifoham", grid, [0, 3], jobs=2) == c0_sweep(TAN, "ifoham", grid, [0, 3])


def test_sweep_csv_format():
    rows = c0_sweep(TAN, "ham", [F(-1)], [4])
    text = sweep_csv(rows)
    assert text == f"c0,order,E\n-1.0,4,{rows[0].E:.17g}\n"
    assert "\r" not in text
    assert float(text.splitlines()[1].split(",")[2]) == rows[0].E


def test_rational_grid():
    assert rational_grid(F(-1), F(-1), F(1)) == [F(-1)]
    assert rational_grid(0, 1, F(1, 4)) == [0, F(1, 4), F(1, 2), F(3, 4), 1]
    with pytest.raises(ValueError):
        rational_grid(0, 1, 0)


# -- bounds --------------------------------------------------------------------------

@pytest.mark.parametrize("a, b, M, A", [(2, 1, 4, 0.25), (1, 10, 1, 1), (1, 2, 2, 1)])
def test_existence_radius(a, b, M, A):
    assert existence_radius(a, b, M) == A


@pytest.mark.parametrize("args", [(0, 1, 1), (1, -1, 1), (1, 1, 0)])
def test_existence_radius_rejects(args):
    with pytest.raises(ValueError):
        existence_radius(*args)


def test_contraction_example_high_precision():
    mpmath.mp.dps = 40
    expect = mpmath.mpf(1) / 2 * (1 - mpmath.e ** -2)
    k = contraction_constant(ContractionParams(1, 2, 1, -1)).k
    assert k == pytest.approx(float(expect), rel=1e-14)
    assert round(k, 6) == 0.432332


def test_contraction_limits_and_monotonicity():
    ks = [contraction_constant(ContractionParams(1.5, 3.0, 0.7, c)).k for c in (-1, -0.75, -0.5, -0.25, -1e-9)]
    assert ks == sorted(ks)
    assert ks[-1] == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("L, Lt, A", [(2, 1, 1), (1, 1, 1), (0, 1, 1), (1, 2, 0)])
def test_contraction_param_validation(L, Lt, A):
    with pytest.raises(ValueError):
        ContractionParams(L, Lt, A, -1)


def test_contraction_from_box():
    p = ContractionParams.from_box(2, 1, 4, 1, 2, -1)
    assert p.A == 0.25


def test_contraction_verdict():
    assert contraction_constant(ContractionParams(1, 2, 1, -0.5)).contracts
    assert not contraction_constant(ContractionParams(1, 2, 1, 0.5)).contracts


# -- reference comparison -----------------------------------------------------------

def test_compare_reference_tan():
    mpmath.mp.dps = 30
    s = ham_solve(TAN, -1, 4)
    grid = [-0.5, 0.0, 0.5]
    ref = [float(mpmath.tan(mpmath.mpf(g))) for g in grid]
    errs = compare_reference(s, grid, ref)
    # oracle: exact rational partial sum vs high-precision tangent
    x4 = s.partial_sums[4]
    expect = float(abs(mpmath.tan(mpmath.mpf(1) / 2) - mpmath.mpf(x4(F(1, 2)).numerator) / x4(F(1, 2)).denominator))
    assert errs[4] == pytest.approx(expect, rel=1e-6)
    assert errs[4] == pytest.approx(4.8e-6, rel=0.02)
    assert compare_reference(ham_solve(TAN, -1, 0), [0.0], [0.0]) == [0.0]


def test_compare_reference_nonincreasing():
    grid = [i / 20 - 0.5 for i in range(21)]
    errs = compare_reference(ham_solve(TAN, -1, 4), grid, math.tan)
    assert all(a >= b for a, b in zip(errs, errs[1:]))


def test_compare_reference_length_mismatch():
    with pytest.raises(ValueError):
        compare_reference(ham_solve(TAN, -1, 1), [0.0, 0.1], [0.0])
