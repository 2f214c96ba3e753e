import random
from fractions import Fraction as F

import pytest

from hamkit.exactmath import Polynomial
from hamkit.ham import Method, SolutionSeries, ham_rhs_term, ham_solve
from hamkit.problem import IVP, BivariatePolynomial, tan_problem

from oracle import ham_terms, random_ivp

t = Polynomial.t()
M = Polynomial.monomial

TAN_TERMS = [t, M(F(1, 3), 3), M(F(2, 15), 5), M(F(17, 315), 7), M(F(62, 2835), 9)]
TAN_MACLAURIN = [F(1), F(1, 3), F(2, 15), F(17, 315), F(62, 2835),
                 F(1382, 155925), F(21844, 6081075), F(929569, 638512875)]


def test_rhs_term_examples():
    ivp = tan_problem()
    assert ham_rhs_term(ivp, [t], 1) == Polynomial([0, 0, -1])
    # u1' - 2 u0 u1
    assert ham_rhs_term(ivp, [t, M(F(1, 3), 3)], 2) == Polynomial([0, 0, 1, 0, F(-2, 3)])
    exact = IVP(BivariatePolynomial({(0, 0): 2}), 0, 1, Polynomial([1, 2]))
    assert ham_rhs_term(exact, [exact.guess], 1).is_zero()


def test_rhs_term_needs_prefix():
    with pytest.raises(ValueError):
        ham_rhs_term(tan_problem(), [t], 2)


def test_table1_terms():
    s = ham_solve(tan_problem(), -1, 4)
    assert list(s.terms) == TAN_TERMS
    assert s.method is Method.HAM and s.c0 == -1
    assert s.partial_sums[4] == sum(TAN_TERMS, Polynomial())


def test_order_zero():
    s = ham_solve(tan_problem(), F(-1, 2), 0)
    assert s.terms == (t,) and s.partial_sums == (t,)


def test_c0_zero_rejected():
    with pytest.raises(ValueError, match="nonzero"):
        ham_solve(tan_problem(), 0, 3)


def test_maclaurin_prefix_of_tan():
    s = ham_solve(tan_problem(), -1, 7)
    for m, x in enumerate(s.partial_sums):
        expect = Polynomial.zero()
        for k in range(m + 1):
            expect = expect + M(TAN_MACLAURIN[k], 2 * k + 1)
        assert x == expect
    # each term is a single monomial
    assert all(len([c for c in u.coeffs if c]) == 1 for u in s.terms)


def test_simplified_tan_recursion_agrees():
    # du_m/dt = (chi_m - 1)(u_{m-1}' - 1) + sum_k u_k u_{m-1-k}
    u = [t]
    for m in range(1, 8):
        chi = 0 if m == 1 else 1
        rhs = (u[m - 1].derivative() - 1) * (chi - 1)
        for k in range(m):
            rhs = rhs + u[k] * u[m - 1 - k]
        u.append(rhs.integrate_from(0))
    assert list(ham_solve(tan_problem(), -1, 7).terms) == u


@pytest.mark.parametrize("c0", [F(-1), F(-1, 2), F(-6, 5), F(1, 10)])
def test_tan_against_sympy_oracle(c0):
    assert list(ham_solve(tan_problem(), c0, 4).terms) == ham_terms(tan_problem(), c0, 4)


@pytest.mark.parametrize("seed", range(8))
def test_random_against_sympy_oracle(seed):
    rng = random.Random(seed)
    ivp = random_ivp(rng)
    c0 = F(rng.choice([-3, -2, -1, 1]), rng.choice([1, 2, 3]))
    s = ham_solve(ivp, c0, 3)
    assert list(s.terms) == ham_terms(ivp, c0, 3)
    for k, u in enumerate(s.terms[1:], 1):
        assert u(ivp.t0) == 0
    assert all(x(ivp.t0) == ivp.x0 for x in s.partial_sums)


def test_series_invariants_enforced():
    ivp = tan_problem()
    with pytest.raises(AssertionError):
        SolutionSeries(Method.HAM, F(-1), (t, Polynomial([1])), ivp)
    with pytest.raises(ValueError):
        SolutionSeries(Method.HAM, F(0), (t,), ivp)


def test_series_json_roundtrip():
    s = ham_solve(tan_problem(), F(-6, 5), 3)
    again = SolutionSeries.from_json(s.to_json())
    assert again == s
    assert again.to_json() == s.to_json()
