"""Independent reference computations via sympy full expansion.

Nothing here calls the truncated-convolution paths under test.
"""

from __future__ import annotations

import random
from fractions import Fraction

import sympy as sp

from hamkit.exactmath import Polynomial
from hamkit.problem import IVP, BivariatePolynomial

t, q, X = sp.symbols("t q X")


def to_sym(p: Polynomial) -> sp.Expr:
    return sp.Add(*[sp.Rational(c.numerator, c.denominator) * t**k for k, c in enumerate(p.coeffs)])


def from_sym(expr) -> Polynomial:
    poly = sp.Poly(sp.expand(expr), t)
    if poly.is_zero:
        return Polynomial()
    coeffs = [Fraction(0)] * (poly.degree() + 1)
    for (k,), c in poly.terms():
        c = sp.Rational(c)
        coeffs[k] = Fraction(int(c.p), int(c.q))
    return Polynomial(coeffs)


def f_sym(f: BivariatePolynomial, x) -> sp.Expr:
    return sp.Add(*[sp.Rational(c.numerator, c.denominator) * t**i * x**j for (i, j), c in f.terms.items()])


def q_coeffs(f: BivariatePolynomial, u, K: int) -> list[Polynomial]:
    """Coefficients of q^0..q^K in f(t, sum u_k q^k) by full expansion."""
    phi = sp.Add(*[to_sym(uk) * q**k for k, uk in enumerate(u)])
    expr = sp.expand(f_sym(f, phi))
    return [from_sym(expr.coeff(q, k)) for k in range(K + 1)]


def ham_terms(ivp: IVP, c0, order: int) -> list[Polynomial]:
    """HAM terms from the deformation equations with sympy integration."""
    c0 = sp.Rational(Fraction(c0).numerator, Fraction(c0).denominator)
    t0 = sp.Rational(ivp.t0.numerator, ivp.t0.denominator)
    xi = sp.Symbol("xi")
    u = [to_sym(ivp.guess)]
    for n in range(1, order + 1):
        phi = sp.Add(*[uk * q**k for k, uk in enumerate(u)])
        N = sp.diff(phi, t) - f_sym(ivp.f, phi)
        D = sp.expand(N).coeff(q, n - 1)
        step = c0 * sp.integrate(D.subs(t, xi), (xi, t0, t))
        u.append(sp.expand(step + (u[n - 1] if n >= 2 else 0)))
    return [from_sym(e) for e in u]


def rand_fraction(rng: random.Random, num: int = 3, den: int = 3) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_ivp(rng: random.Random, t_deg: int = 2, x_deg: int = 2) -> IVP:
    """Random polynomial IVP with small rational data and a consistent guess."""
    terms = {}
    while not terms:
        for i in range(t_deg + 1):
            for j in range(x_deg + 1):
                if rng.random() < 0.45:
                    c = rand_fraction(rng)
                    if c:
                        terms[(i, j)] = c
    f = BivariatePolynomial(terms)
    t0 = Fraction(rng.randint(-2, 2), rng.randint(1, 2))
    x0 = rand_fraction(rng)
    if rng.random() < 0.5:
        guess = None
    else:
        slope = rand_fraction(rng)
        guess = Polynomial([x0 - slope * t0, slope])
    return IVP(f, t0, x0, guess)
