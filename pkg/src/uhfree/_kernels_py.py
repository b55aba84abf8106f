"""Pure-Python term-map kernels.

A polynomial is stored as a dict mapping exponent tuples to nonzero
Fraction coefficients.  These functions are the hot inner loops of the
whole package; `_kernels_cy.pyx` is a compiled twin with the same
signatures, selected at import time by `_backend`.
"""

from fractions import Fraction
from math import comb

BACKEND = "python"


def add_terms(a, b):
    out = dict(a)
    for exps, coeff in b.items():
        acc = out.get(exps)
        if acc is None:
            out[exps] = coeff
        else:
            acc = acc + coeff
            if acc:
                out[exps] = acc
            else:
                del out[exps]
    return out


def neg_terms(a):
    return {exps: -coeff for exps, coeff in a.items()}


def scale_terms(a, c):
    if not c:
        return {}
    return {exps: coeff * c for exps, coeff in a.items()}


def mul_terms(a, b):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            c = ca * cb
            acc = out.get(key)
            if acc is None:
                out[key] = c
            else:
                acc = acc + c
                if acc:
                    out[key] = acc
                else:
                    del out[key]
    return out


def shift_terms(terms, shifts):
    """Substitute h_i -> h_i - shifts[i] into a term map."""
    if not any(shifts):
        return dict(terms)
    out = {}
    for exps, coeff in terms.items():
        # Seed with the unshifted part of the monomial, then expand each
        # shifted factor (h_i - s)^e by the binomial theorem.
        base = tuple(0 if shifts[i] else e for i, e in enumerate(exps))
        partial = {base: coeff}
        for i, s in enumerate(shifts):
            e = exps[i]
            if s == 0 or e == 0:
                continue
            nxt = {}
            for k in range(e + 1):
                c = Fraction(comb(e, k) * (-s) ** (e - k))
                for ex2, c2 in partial.items():
                    key = ex2[:i] + (ex2[i] + k,) + ex2[i + 1 :]
                    cc = c * c2
                    acc = nxt.get(key)
                    if acc is None:
                        nxt[key] = cc
                    else:
                        nxt[key] = acc + cc
            partial = nxt
        for exps2, c2 in partial.items():
            acc = out.get(exps2)
            if acc is None:
                out[exps2] = c2
            else:
                acc = acc + c2
                if acc:
                    out[exps2] = acc
                else:
                    del out[exps2]
    return {e: c for e, c in out.items() if c}
