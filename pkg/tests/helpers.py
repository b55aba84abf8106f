"""Shared random generators for the test suite."""

from fractions import Fraction

from uhfree.poly import Poly
from uhfree.presentation import Mat2


def random_poly(rng, nvars, max_deg, max_terms=4, coeff_range=3, allow_zero=True):
    terms = {}
    for _ in range(rng.randint(0 if allow_zero else 1, max_terms)):
        exps = [0] * nvars
        for _ in range(rng.randint(0, max_deg)):
            exps[rng.randrange(nvars)] += 1
        c = Fraction(rng.randint(-coeff_range, coeff_range))
        terms[tuple(exps)] = terms.get(tuple(exps), Fraction(0)) + c
    return Poly(nvars, terms)


def random_unimodular(rng, nvars, factor_deg=1):
    """L * D * U with constant nonzero determinant; entries of degree <= 2*factor_deg."""
    lower = Mat2.of(nvars, ((1, 0), (random_poly(rng, nvars, factor_deg), 1)))
    upper = Mat2.of(nvars, ((1, random_poly(rng, nvars, factor_deg)), (0, 1)))
    units = [Fraction(c) for c in (1, -1, 2, -2, 3, Fraction(1, 2))]
    diag = Mat2.of(nvars, ((rng.choice(units), 0), (0, rng.choice(units))))
    return lower * diag * upper


def random_nonzero_fraction(rng, lim=4):
    num = rng.choice([k for k in range(-lim, lim + 1) if k])
    den = rng.randint(1, lim)
    return Fraction(num, den)
