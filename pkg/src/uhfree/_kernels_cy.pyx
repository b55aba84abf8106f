# cython: language_level=3, boundscheck=False, wraparound=False
"""Cython twin of the pure-Python term-map kernels.

Same contracts as `_kernels_py`: dicts mapping exponent tuples to
nonzero Fraction coefficients.  Coefficients stay Python objects
(exact rationals); exponent-tuple handling runs at the C level.
"""

from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM, PyTuple_GET_ITEM

from fractions import Fraction
from math import comb

BACKEND = "cython"


cdef inline tuple _add_exps(tuple ea, tuple eb, Py_ssize_t n):
    cdef tuple out = PyTuple_New(n)
    cdef Py_ssize_t i
    cdef long x
    cdef object v
    for i in range(n):
        x = <long> <object> PyTuple_GET_ITEM(ea, i)
        x += <long> <object> PyTuple_GET_ITEM(eb, i)
        v = x
        Py_INCREF(v)
        PyTuple_SET_ITEM(out, i, v)
    return out


def add_terms(dict a, dict b):
    cdef dict out = dict(a)
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


def neg_terms(dict a):
    cdef dict out = {}
    for exps, coeff in a.items():
        out[exps] = -coeff
    return out


def scale_terms(dict a, c):
    cdef dict out = {}
    if not c:
        return out
    for exps, coeff in a.items():
        out[exps] = coeff * c
    return out


def mul_terms(dict a, dict b):
    cdef dict out = {}
    cdef tuple ea, eb, key
    cdef Py_ssize_t n
    if len(a) > len(b):
        a, b = b, a
    for ea, ca in a.items():
        n = len(ea)
        for eb, cb in b.items():
            key = _add_exps(ea, eb, n)
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


cdef inline void _accumulate(dict out, tuple key, object c):
    acc = out.get(key)
    if acc is None:
        out[key] = c
    else:
        acc = acc + c
        if acc:
            out[key] = acc
        else:
            del out[key]


def shift_terms(dict terms, tuple shifts):
    cdef dict out = {}
    cdef dict partial, nxt
    cdef tuple exps, base, ex2, key
    cdef Py_ssize_t nv = len(shifts)
    cdef Py_ssize_t i, j
    cdef long s, old
    cdef int e, k
    cdef bint any_shift = False
    cdef object v
    for i in range(nv):
        if shifts[i]:
            any_shift = True
            break
    if not any_shift:
        return dict(terms)
    for exps, coeff in terms.items():
        base = PyTuple_New(nv)
        for i in range(nv):
            v = 0 if shifts[i] else <object> PyTuple_GET_ITEM(exps, i)
            Py_INCREF(v)
            PyTuple_SET_ITEM(base, i, v)
        partial = {base: coeff}
        for i in range(nv):
            s = shifts[i]
            e = exps[i]
            if s == 0 or e == 0:
                continue
            nxt = {}
            for k in range(e + 1):
                c = Fraction(comb(e, k) * (-s) ** (e - k))
                for ex2, c2 in partial.items():
                    key = PyTuple_New(nv)
                    for j in range(nv):
                        old = <long> <object> PyTuple_GET_ITEM(ex2, j)
                        if j == i:
                            old += k
                        v = old
                        Py_INCREF(v)
                        PyTuple_SET_ITEM(key, j, v)
                    _accumulate(nxt, key, c * c2)
            partial = nxt
        for key, c2 in partial.items():
            _accumulate(out, key, c2)
    cdef dict clean = {}
    for key, c2 in out.items():
        if c2:
            clean[key] = c2
    return clean
