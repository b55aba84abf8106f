"""Independent oracles used only by the test suite.

Polynomial identities are cross-checked through sympy (a separate code
base with its own expansion, substitution, gcd, and factorization), and
Lie-superalgebra structure constants through a from-scratch supermatrix
commutator that shares no code with the package.
"""

from fractions import Fraction

import sympy

from uhfree.poly import Poly


def to_sympy(p: Poly, symbols):
    expr = sympy.Integer(0)
    for exps, coeff in p.terms.items():
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        for s, e in zip(symbols, exps):
            if e:
                term *= s**e
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, symbols) -> Poly:
    expr = sympy.expand(expr)
    poly = sympy.Poly(expr, *symbols) if symbols else None
    nvars = len(symbols)
    if poly is None:
        return Poly.const(0, Fraction(int(expr)))
    terms = {}
    for exps, coeff in poly.terms():
        q = sympy.Rational(coeff)
        terms[tuple(int(e) for e in exps)] = Fraction(int(q.p), int(q.q))
    return Poly(nvars, terms)


def shift_oracle(p: Poly, shifts, symbols) -> Poly:
    """Substitution h_i -> h_i - s_i performed entirely inside sympy."""
    expr = to_sympy(p, symbols)
    subs = {s: s - k for s, k in zip(symbols, shifts)}
    return from_sympy(expr.subs(subs, simultaneous=True), symbols)


def gcd_oracle(p: Poly, q: Poly, symbols) -> Poly:
    g = sympy.gcd(to_sympy(p, symbols), to_sympy(q, symbols))
    return from_sympy(g, symbols)


def common_divisors_oracle(p: Poly, symbols):
    """Non-unit irreducible factors from sympy's factorization."""
    _, factors = sympy.factor_list(to_sympy(p, symbols))
    return [from_sympy(f, symbols) for f, _ in factors]


# -- independent supermatrix bracket ------------------------------------------------


def elementary(dim, i, j):
    return [[1 if (r, c) == (i, j) else 0 for c in range(dim)] for r in range(dim)]


def matmul(a, b):
    dim = len(a)
    return [
        [sum(a[r][k] * b[k][c] for k in range(dim)) for c in range(dim)]
        for r in range(dim)
    ]


def matsub(a, b, sign=1):
    dim = len(a)
    return [[a[r][c] - sign * b[r][c] for c in range(dim)] for r in range(dim)]


def supercommutator(x, y, parity_x, parity_y):
    sign = -1 if parity_x and parity_y else 1
    return matsub(matmul(x, y), matmul(y, x), sign)
