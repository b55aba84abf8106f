"""Rank-2 module presentations and their twisted matrix calculus.

A rank-2 U(h)-free module over sl(m|n) is identified with the column
space Q[h]^2: a Cartan element h_v acts by multiplication, and a root
vector e_IJ acts as

    e_IJ . f  =  E_IJ * (tau_IJ f),

where E_IJ is a 2x2 polynomial matrix and tau_IJ the root's weight
shift.  A presentation stores only the odd matrices; even ones are
reconstructed as twisted products because the odd root vectors generate
the superalgebra.  `verify_relations` checks every supercommutation
relation among basis elements as an exact polynomial matrix identity,
which is equivalent to the module axioms.

Gradings: "ungraded" presentations carry no parity bookkeeping, while
"g11" / "g11bar" mark the two Z2-graded conventions (odd generators
strictly upper-right / strictly lower-left respectively, with the free
generators of the two parities in fixed positions).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .poly import (
    Poly,
    PolyError,
    ShiftMap,
    apply_shift,
    default_names,
    format_poly,
    parse_poly,
)
from .superlie import BasisElement, Cartan, Root, SuperAlgebra, algebra

GRADINGS = ("ungraded", "g11", "g11bar")

FORMAT_PRESENTATION = "uhfree-presentation/1"


class PresentationError(ValueError):
    """Malformed presentation data or invalid operation on one."""


class InvariantBreach(RuntimeError):
    """An identity the theory guarantees failed; indicates an internal bug."""


# -- 2x2 polynomial matrices -----------------------------------------------------


class Mat2:
    """Immutable 2x2 matrix of polynomials sharing one variable count."""

    __slots__ = ("rows", "nvars")

    def __init__(self, rows: Sequence[Sequence[Poly]]):
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise PresentationError("Mat2 needs a 2x2 array")
        entries = tuple(tuple(r) for r in rows)
        nv = entries[0][0].nvars
        for r in entries:
            for p in r:
                if not isinstance(p, Poly) or p.nvars != nv:
                    raise PresentationError("Mat2 entries must be Poly with equal nvars")
        object.__setattr__(self, "rows", entries)
        object.__setattr__(self, "nvars", nv)

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    @classmethod
    def zero(cls, nvars: int) -> "Mat2":
        z = Poly.zero(nvars)
        return cls(((z, z), (z, z)))

    @classmethod
    def identity(cls, nvars: int) -> "Mat2":
        one = Poly.one(nvars)
        z = Poly.zero(nvars)
        return cls(((one, z), (z, one)))

    @classmethod
    def scalar(cls, p: Poly) -> "Mat2":
        z = Poly.zero(p.nvars)
        return cls(((p, z), (z, p)))

    @classmethod
    def of(cls, nvars: int, entries) -> "Mat2":
        """Build from scalars/Polys given row-major."""

        def lift(x):
            if isinstance(x, Poly):
                return x
            return Poly.const(nvars, x)

        (a, b), (c, d) = entries
        return cls(((lift(a), lift(b)), (lift(c), lift(d))))

    def __getitem__(self, rc: tuple[int, int]) -> Poly:
        return self.rows[rc[0]][rc[1]]

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __neg__(self) -> "Mat2":
        return Mat2(tuple(tuple(-a for a in r) for r in self.rows))

    def __mul__(self, other):
        if isinstance(other, Mat2):
            a, b = self.rows
            c, d = other.rows
            return Mat2(
                (
                    (a[0] * c[0] + a[1] * d[0], a[0] * c[1] + a[1] * d[1]),
                    (b[0] * c[0] + b[1] * d[0], b[0] * c[1] + b[1] * d[1]),
                )
            )
        if isinstance(other, (int, Fraction, Poly)):
            return Mat2(tuple(tuple(a * other for a in r) for r in self.rows))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return Mat2(tuple(tuple(other * a for a in r) for r in self.rows))
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        names = default_names(self.nvars)
        rows = [[format_poly(p, names) for p in r] for r in self.rows]
        return f"Mat2({rows})"

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero for r in self.rows for p in r)

    def shifted(self, s: ShiftMap) -> "Mat2":
        return Mat2(tuple(tuple(apply_shift(s, p) for p in r) for r in self.rows))

    def det(self) -> Poly:
        (a, b), (c, d) = self.rows
        return a * d - b * c

    def is_unimodular(self) -> bool:
        v = self.det().constant_value()
        return v is not None and v != 0

    def inverse_unimodular(self) -> "Mat2":
        """Inverse of a matrix whose determinant is a nonzero constant."""
        v = self.det().constant_value()
        if v is None or v == 0:
            raise PresentationError("matrix determinant is not a nonzero constant")
        (a, b), (c, d) = self.rows
        inv = Fraction(1) / v
        return Mat2(((d * inv, -b * inv), (-c * inv, a * inv)))

    def transpose(self) -> "Mat2":
        (a, b), (c, d) = self.rows
        return Mat2(((a, c), (b, d)))

    def apply(self, v: "Vec2") -> "Vec2":
        (a, b), (c, d) = self.rows
        return Vec2(a * v.f1 + b * v.f2, c * v.f1 + d * v.f2)

    def is_strict_upper(self) -> bool:
        return self[0, 0].is_zero and self[1, 0].is_zero and self[1, 1].is_zero

    def is_strict_lower(self) -> bool:
        return self[0, 0].is_zero and self[0, 1].is_zero and self[1, 1].is_zero

    def is_diagonal(self) -> bool:
        return self[0, 1].is_zero and self[1, 0].is_zero

    def is_antidiagonal(self) -> bool:
        return self[0, 0].is_zero and self[1, 1].is_zero


@dataclass(frozen=True)
class Vec2:
    """Element of the free module Q[h]^2."""

    f1: Poly
    f2: Poly

    def __post_init__(self):
        if self.f1.nvars != self.f2.nvars:
            raise PresentationError("vector components disagree on variables")

    @property
    def nvars(self) -> int:
        return self.f1.nvars

    def shifted(self, s: ShiftMap) -> "Vec2":
        return Vec2(apply_shift(s, self.f1), apply_shift(s, self.f2))

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.f1 + other.f1, self.f2 + other.f2)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.f1 - other.f1, self.f2 - other.f2)

    def __rmul__(self, c) -> "Vec2":
        return Vec2(c * self.f1, c * self.f2)


# -- presentations ---------------------------------------------------------------


def odd_positions(m: int, n: int) -> list[tuple[int, int]]:
    """Canonical order of the odd generator positions e[i,bj], e[bj,i]."""
    out = []
    for i in range(m):
        for j in range(n):
            out.append((i, m + j))
            out.append((m + j, i))
    return out


@dataclass(frozen=True)
class Presentation:
    """Action data of a rank-2 presentation: the odd generators' matrices."""

    m: int
    n: int
    grading: str
    odd: tuple[tuple[tuple[int, int], Mat2], ...]
    _lookup: dict = field(init=False, repr=False, compare=False, hash=False)
    _even_cache: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.grading not in GRADINGS:
            raise PresentationError(f"unknown grading {self.grading!r}")
        alg = self.algebra
        expected = odd_positions(self.m, self.n)
        got = {pos: mat for pos, mat in self.odd}
        if sorted(got) != sorted(expected):
            raise PresentationError("odd generator set must be exactly e[i,bj], e[bj,i]")
        for pos, mat in self.odd:
            if mat.nvars != alg.nvars:
                raise PresentationError("matrix variable count does not match (m, n)")
        ordered = tuple((pos, got[pos]) for pos in expected)
        object.__setattr__(self, "odd", ordered)
        object.__setattr__(self, "_lookup", dict(ordered))
        object.__setattr__(self, "_even_cache", {})

    @property
    def algebra(self) -> SuperAlgebra:
        return algebra(self.m, self.n)

    @property
    def nvars(self) -> int:
        return self.m + self.n - 1

    def E(self, row: int, col: int) -> Mat2:
        """Action matrix of the root vector e at (row, col), deriving evens."""
        mat = self._lookup.get((row, col))
        if mat is not None:
            return mat
        return derive_even(self, row, col)

    def is_graded(self) -> bool:
        return self.grading != "ungraded"


def make_presentation(
    m: int,
    n: int,
    matrices: Mapping[tuple[int, int], Mat2],
    grading: str = "ungraded",
) -> Presentation:
    return Presentation(m, n, grading, tuple(matrices.items()))


def act(p: Presentation, b: BasisElement, v: Vec2) -> Vec2:
    """Action of a basis element on a module vector."""
    alg = p.algebra
    if isinstance(b, Cartan):
        h = Poly.var(alg.nvars, b.var)
        return Vec2(h * v.f1, h * v.f2)
    E = p.E(b.row, b.col)
    tau = alg.weight_shift(b)
    return E.apply(v.shifted(tau))


def act_combo(p: Presentation, combo: Mapping[BasisElement, Fraction], v: Vec2) -> Vec2:
    out = Vec2(Poly.zero(p.nvars), Poly.zero(p.nvars))
    for b, c in combo.items():
        out = out + c * act(p, b, v)
    return out


def derive_even(p: Presentation, row: int, col: int, via: Optional[int] = None) -> Mat2:
    """Even action matrix as the twisted product through an odd intermediate.

    For an unbarred pair (i, k) the route runs through a barred index
    (default b1); for a barred pair through an unbarred one (default 1).
    The result is cached per presentation for the default route.
    """
    alg = p.algebra
    if row == col:
        raise PresentationError("no root vector with equal indices")
    if alg.is_barred(row) != alg.is_barred(col):
        raise PresentationError("odd matrices are stored, not derived")
    default_via = alg.m if alg.is_barred(row) is False else 0
    key = (row, col, via)
    cached = p._even_cache.get(key)
    if cached is not None:
        return cached
    mid = default_via if via is None else via
    if alg.is_barred(mid) == alg.is_barred(row):
        raise PresentationError("intermediate index must have opposite parity")
    first = p._lookup[(row, mid)]
    second = p._lookup[(mid, col)]
    tau_first = alg.weight_shift(Root(row, mid))
    tau_second = alg.weight_shift(Root(mid, col))
    result = first * second.shifted(tau_first) + second * first.shifted(tau_second)
    p._even_cache[key] = result
    return result


# -- relation verification ----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    left: BasisElement
    right: BasisElement
    lhs: Mat2
    rhs: Mat2

    def describe(self, alg: SuperAlgebra, names: Sequence[str]) -> str:
        def show(mat):
            return [[format_poly(q, names) for q in r] for r in mat.rows]

        return (
            f"[{alg.show(self.left)}, {alg.show(self.right)}]: "
            f"lhs {show(self.lhs)} != rhs {show(self.rhs)}"
        )


@dataclass(frozen=True)
class RelationReport:
    ok: bool
    violations: tuple[Violation, ...]
    checked: int

    def describe(self, m: int, n: int) -> list[str]:
        alg = algebra(m, n)
        names = default_names(alg.nvars, m)
        return [v.describe(alg, names) for v in self.violations]


def _bracket_matrix(p: Presentation, combo: Mapping[BasisElement, Fraction]) -> Mat2:
    """Representing matrix of a bracket value (Cartans act by multiplication)."""
    out = Mat2.zero(p.nvars)
    for b, c in combo.items():
        if isinstance(b, Cartan):
            out = out + Mat2.scalar(Poly.var(p.nvars, b.var) * c)
        else:
            out = out + p.E(b.row, b.col) * c
    return out


def verify_relations(p: Presentation, max_violations: Optional[int] = None) -> RelationReport:
    """Check every supercommutation relation as a twisted matrix identity.

    For root vectors x, y with weight shifts tau_x, tau_y the module
    axiom for the pair is

        E_x tau_x(E_y) - (-1)^{|x||y|} E_y tau_y(E_x) = E_{[x,y]},

    where the right side expands brackets in the fixed basis and evens
    are the derived matrices.  Relations involving a Cartan element hold
    by construction of the weight shifts and are not re-checked.
    """
    alg = p.algebra
    roots = alg.root_vectors()
    violations: list[Violation] = []
    checked = 0
    for a in range(len(roots)):
        for b in range(a, len(roots)):
            x, y = roots[a], roots[b]
            Ex, Ey = p.E(x.row, x.col), p.E(y.row, y.col)
            tx, ty = alg.weight_shift(x), alg.weight_shift(y)
            sign = -1 if alg.parity(x) and alg.parity(y) else 1
            lhs = Ex * Ey.shifted(tx) - sign * (Ey * Ex.shifted(ty))
            rhs = _bracket_matrix(p, alg.super_bracket(x, y))
            checked += 1
            if lhs != rhs:
                violations.append(Violation(x, y, lhs, rhs))
                if max_violations is not None and len(violations) >= max_violations:
                    return RelationReport(False, tuple(violations), checked)
    return RelationReport(not violations, tuple(violations), checked)


def pointwise_check(p: Presentation, max_deg: int = 2) -> RelationReport:
    """Cross-check of verify_relations by sampling vectors.

    Applies every pair of basis elements to every monomial vector of
    total degree <= max_deg and compares the supercommutator of the two
    actions against the action of the bracket.  Slower than the matrix
    identities but independent of them.
    """
    alg = p.algebra
    nv = alg.nvars
    vectors = []
    for exps in itertools.product(range(max_deg + 1), repeat=nv):
        if sum(exps) > max_deg:
            continue
        mono = Poly(nv, {tuple(exps): Fraction(1)})
        vectors.append(Vec2(mono, Poly.zero(nv)))
        vectors.append(Vec2(Poly.zero(nv), mono))
    basis = alg.basis()
    violations = []
    checked = 0
    for x in basis:
        for y in basis:
            sign = -1 if alg.parity(x) and alg.parity(y) else 1
            combo = alg.super_bracket(x, y)
            for v in vectors:
                lhs = act(p, x, act(p, y, v)) - sign * act(p, y, act(p, x, v))
                rhs = act_combo(p, combo, v)
                checked += 1
                if lhs != rhs:
                    z = Poly.zero(nv)
                    violations.append(
                        Violation(
                            x,
                            y,
                            Mat2(((lhs.f1, z), (lhs.f2, z))),
                            Mat2(((rhs.f1, z), (rhs.f2, z))),
                        )
                    )
    return RelationReport(not violations, tuple(violations), checked)


# -- the classified family M(a, S) ------------------------------------------------


def _check_family_params(m: int, a: Sequence[Fraction], s: Iterable[int]):
    a = [Fraction(x) for x in a]
    s = frozenset(int(i) for i in s)
    if len(a) != m:
        raise PresentationError(f"need {m} parameters, got {len(a)}")
    if any(x == 0 for x in a):
        raise PresentationError("family parameters must be nonzero")
    if not all(1 <= i <= m for i in s):
        raise PresentationError("subset entries must lie in 1..m")
    return a, s


def build_mas(m: int, a: Sequence[Fraction], s: Iterable[int]) -> Presentation:
    """The graded presentation M(a, S) over sl(m|1).

    For i in S the pair is ([0, a_i h_i; 0, 0], [0, 0; 1/a_i, 0]);
    otherwise the h_i factor moves to the lower generator.
    """
    a, s = _check_family_params(m, a, s)
    nv = m
    mats: dict[tuple[int, int], Mat2] = {}
    for i in range(1, m + 1):
        hi = Poly.var(nv, i - 1)
        ai = a[i - 1]
        if i in s:
            upper, lower = ai * hi, Poly.const(nv, 1 / ai)
        else:
            upper, lower = Poly.const(nv, ai), (1 / ai) * hi
        mats[(i - 1, m)] = Mat2.of(nv, ((0, upper), (0, 0)))
        mats[(m, i - 1)] = Mat2.of(nv, ((0, 0), (lower, 0)))
    return make_presentation(m, 1, mats, grading="g11")


def build_mas_bar(m: int, a: Sequence[Fraction], s: Iterable[int]) -> Presentation:
    """The parity-swapped family: same data on the opposite corners."""
    a, s = _check_family_params(m, a, s)
    nv = m
    mats: dict[tuple[int, int], Mat2] = {}
    for i in range(1, m + 1):
        hi = Poly.var(nv, i - 1)
        ai = a[i - 1]
        if i in s:
            lower, upper = ai * hi, Poly.const(nv, 1 / ai)
        else:
            lower, upper = Poly.const(nv, ai), (1 / ai) * hi
        mats[(i - 1, m)] = Mat2.of(nv, ((0, 0), (lower, 0)))
        mats[(m, i - 1)] = Mat2.of(nv, ((0, upper), (0, 0)))
    return make_presentation(m, 1, mats, grading="g11bar")


# -- grading bookkeeping -------------------------------------------------------------


@dataclass(frozen=True)
class ParityReport:
    ok: bool
    failures: tuple[str, ...]


def parity_check(p: Presentation) -> ParityReport:
    """Validate the grading flag against the matrix shapes.

    g11 requires every e[i,bj] strictly upper-right and e[bj,i] strictly
    lower-left (swapped for g11bar); derived even matrices must then be
    diagonal.  Calling this on an ungraded presentation is an error.
    """
    if not p.is_graded():
        raise PresentationError("parity_check requires a graded presentation")
    alg = p.algebra
    bar = p.grading == "g11bar"
    failures = []
    for (row, col), mat in p.odd:
        raising = not alg.is_barred(row)
        want_upper = raising ^ bar
        ok = mat.is_strict_upper() if want_upper else mat.is_strict_lower()
        if not ok:
            failures.append(
                f"{alg.show(Root(row, col))} is not strictly "
                f"{'upper-right' if want_upper else 'lower-left'}"
            )
    for x in alg.even_roots():
        if not p.E(x.row, x.col).is_diagonal():
            failures.append(f"derived {alg.show(x)} is not diagonal")
    return ParityReport(not failures, tuple(failures))


def conjugate(p: Presentation, w: Mat2) -> Presentation:
    """Twisted conjugation of the whole tuple: E -> W^-1 E tau(W).

    The grading flag follows the parity of W: diagonal keeps it,
    antidiagonal swaps g11 and g11bar, anything else drops to ungraded.
    """
    if not w.is_unimodular():
        raise PresentationError("conjugating matrix must have constant nonzero determinant")
    alg = p.algebra
    winv = w.inverse_unimodular()
    mats = {}
    for (row, col), mat in p.odd:
        tau = alg.weight_shift(Root(row, col))
        mats[(row, col)] = winv * mat * w.shifted(tau)
    if not p.is_graded():
        grading = "ungraded"
    elif w.is_diagonal():
        grading = p.grading
    elif w.is_antidiagonal():
        grading = "g11bar" if p.grading == "g11" else "g11"
    else:
        grading = "ungraded"
    return make_presentation(p.m, p.n, mats, grading=grading)


# -- interchange format ----------------------------------------------------------------


def _gen_label(alg: SuperAlgebra, row: int, col: int) -> str:
    return alg.show(Root(row, col))


def presentation_to_dict(p: Presentation) -> dict:
    alg = p.algebra
    names = default_names(alg.nvars, p.m)
    E = {}
    for (row, col), mat in p.odd:
        E[_gen_label(alg, row, col)] = [
            [format_poly(q, names) for q in r] for r in mat.rows
        ]
    return {
        "format": FORMAT_PRESENTATION,
        "m": p.m,
        "n": p.n,
        "grading": p.grading,
        "E": E,
    }


def presentation_to_json(p: Presentation) -> str:
    return json.dumps(presentation_to_dict(p), indent=2, sort_keys=True) + "\n"


def presentation_from_dict(data: Mapping) -> Presentation:
    if not isinstance(data, Mapping):
        raise PresentationError("presentation file must hold a JSON object")
    allowed = {"format", "m", "n", "grading", "E"}
    unknown = set(data) - allowed
    if unknown:
        raise PresentationError(f"unknown keys in presentation: {sorted(unknown)}")
    fmt = data.get("format", FORMAT_PRESENTATION)
    if fmt != FORMAT_PRESENTATION:
        raise PresentationError(
            f"format-version mismatch: expected {FORMAT_PRESENTATION}, got {fmt!r}"
        )
    try:
        m, n = int(data["m"]), int(data["n"])
        grading = data["grading"]
        raw_e = data["E"]
    except KeyError as exc:
        raise PresentationError(f"missing key {exc.args[0]!r}") from None
    if grading not in GRADINGS:
        raise PresentationError(f"unknown grading {grading!r}")
    alg = algebra(m, n)
    names = default_names(alg.nvars, m)
    expected = {
        _gen_label(alg, row, col): (row, col) for row, col in odd_positions(m, n)
    }
    unknown = set(raw_e) - set(expected)
    if unknown:
        raise PresentationError(f"unknown generator keys: {sorted(unknown)}")
    missing = set(expected) - set(raw_e)
    if missing:
        raise PresentationError(f"missing generator keys: {sorted(missing)}")
    mats = {}
    for label, pos in expected.items():
        rows = raw_e[label]
        if (
            not isinstance(rows, list)
            or len(rows) != 2
            or any(not isinstance(r, list) or len(r) != 2 for r in rows)
        ):
            raise PresentationError(f"{label}: matrix must be a 2x2 array of strings")
        mats[pos] = Mat2(
            tuple(tuple(parse_poly(entry, names) for entry in r) for r in rows)
        )
    return make_presentation(m, n, mats, grading=grading)


def presentation_from_json(text: str) -> Presentation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PresentationError(f"invalid JSON: {exc}") from None
    return presentation_from_dict(data)
