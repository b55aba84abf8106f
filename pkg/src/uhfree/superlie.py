"""Basis, parity, weights, and brackets of sl(m|n).

The fixed basis consists of the root vectors e_IJ (I != J) together
with the Cartan elements

    h_i    = e_ii + e_{bn,bn}        for i = 1..m,
    h_bj   = e_{bj,bj} + e_mm        for j = 1..n-1,

where barred indices bj label the odd block.  Positions are encoded
0-based: unbarred i -> i-1, barred bj -> m + j - 1.  The Cartan
position space coincides with the variable space of the polynomial
ring, so weights are ShiftMap vectors directly.

Structure constants are not hard-coded: every basis element is realized
as an (m+n) x (m+n) supermatrix and brackets are computed there, then
re-expressed in the fixed basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .poly import ShiftMap


class SuperLieError(ValueError):
    """Invalid basis index or decomposition failure."""


@dataclass(frozen=True)
class Cartan:
    """Cartan basis element h_iota; var is the 0-based variable index."""

    var: int


@dataclass(frozen=True)
class Root:
    """Root vector e_IJ; row/col are 0-based supermatrix positions."""

    row: int
    col: int


BasisElement = Union[Cartan, Root]
Combo = dict  # BasisElement -> Fraction


class SuperAlgebra:
    """Indexing and bracket structure of sl(m|n) in the fixed basis."""

    def __init__(self, m: int, n: int):
        if m < 1 or n < 1:
            raise SuperLieError("m and n must be at least 1")
        self.m = m
        self.n = n
        self.dim = m + n
        self.nvars = m + n - 1

    # -- index helpers -------------------------------------------------------

    def is_barred(self, pos: int) -> bool:
        if not 0 <= pos < self.dim:
            raise SuperLieError(f"position {pos} out of range")
        return pos >= self.m

    def position_name(self, pos: int) -> str:
        return f"b{pos - self.m + 1}" if self.is_barred(pos) else str(pos + 1)

    def parity(self, b: BasisElement) -> int:
        """0 for even, 1 for odd."""
        if isinstance(b, Cartan):
            return 0
        return int(self.is_barred(b.row) != self.is_barred(b.col))

    def basis(self) -> list[BasisElement]:
        return [Cartan(v) for v in range(self.nvars)] + self.root_vectors()

    def root_vectors(self) -> list[Root]:
        return [
            Root(i, j)
            for i in range(self.dim)
            for j in range(self.dim)
            if i != j
        ]

    def odd_roots(self) -> list[Root]:
        return [b for b in self.root_vectors() if self.parity(b)]

    def even_roots(self) -> list[Root]:
        return [b for b in self.root_vectors() if not self.parity(b)]

    def show(self, b: BasisElement) -> str:
        if isinstance(b, Cartan):
            return f"h[{self.position_name(b.var)}]"
        return f"e[{self.position_name(b.row)},{self.position_name(b.col)}]"

    # -- Cartan realization ----------------------------------------------------

    def cartan_diag_pair(self, pos: int) -> tuple[int, int]:
        """The two diagonal positions whose elementary matrices sum to h_pos.

        Valid for every Cartan position (all unbarred, barred except bn).
        """
        if not 0 <= pos < self.dim:
            raise SuperLieError(f"position {pos} out of range")
        if pos == self.dim - 1:
            raise SuperLieError("the last barred index does not label a Cartan element")
        if pos < self.m:
            return (pos, self.dim - 1)
        return (pos, self.m - 1)

    def cartan_diag(self, var: int) -> tuple[int, ...]:
        """Diagonal of the supermatrix of h_var (0/1 entries)."""
        p1, p2 = self.cartan_diag_pair(var)
        return tuple(1 if k in (p1, p2) else 0 for k in range(self.dim))

    # -- weights ----------------------------------------------------------------

    def weight_shift(self, b: Root) -> ShiftMap:
        """The shift applied to the argument when the root vector acts.

        The entry at variable v is the h_v-eigenvalue of ad on e_IJ, so
        the induced substitution is h_v -> h_v - eigenvalue.
        """
        if not isinstance(b, Root):
            raise SuperLieError("weight shifts are defined for root vectors only")
        shifts = []
        for v in range(self.nvars):
            diag = self.cartan_diag(v)
            shifts.append(diag[b.row] - diag[b.col])
        return ShiftMap(shifts)

    # -- matrix realization and brackets -----------------------------------------

    def matrix(self, b: BasisElement) -> tuple[tuple[int, ...], ...]:
        if isinstance(b, Cartan):
            diag = self.cartan_diag(b.var)
            return tuple(
                tuple(diag[i] if i == j else 0 for j in range(self.dim))
                for i in range(self.dim)
            )
        if b.row == b.col or not (0 <= b.row < self.dim and 0 <= b.col < self.dim):
            raise SuperLieError(f"bad root indices ({b.row}, {b.col})")
        return tuple(
            tuple(1 if (i, j) == (b.row, b.col) else 0 for j in range(self.dim))
            for i in range(self.dim)
        )

    def decompose(self, mat) -> Combo:
        """Express a supertraceless matrix in the fixed basis."""
        combo: Combo = {}
        for i in range(self.dim):
            for j in range(self.dim):
                if i != j and mat[i][j]:
                    combo[Root(i, j)] = Fraction(mat[i][j])
        diag = [Fraction(mat[k][k]) for k in range(self.dim)]
        coeffs = [Fraction(0)] * self.nvars
        for v in range(self.nvars):
            if v != self.m - 1:
                coeffs[v] = diag[v if v < self.m else v + 0]
        # position m-1 collects h_m plus every barred Cartan element
        coeffs[self.m - 1] = diag[self.m - 1] - sum(
            coeffs[v] for v in range(self.m, self.nvars)
        )
        implied_last = sum(coeffs[v] for v in range(self.m))
        if implied_last != diag[self.dim - 1]:
            raise SuperLieError("matrix is not in the span of the fixed basis")
        for v, c in enumerate(coeffs):
            if c:
                combo[Cartan(v)] = c
        return combo

    def super_bracket(self, b1: BasisElement, b2: BasisElement) -> Combo:
        """Supercommutator [b1, b2] expanded in the fixed basis."""
        x = self.matrix(b1)
        y = self.matrix(b2)
        sign = -1 if self.parity(b1) and self.parity(b2) else 1
        xy = _matmul(x, y)
        yx = _matmul(y, x)
        bracket = tuple(
            tuple(xy[i][j] - sign * yx[i][j] for j in range(self.dim))
            for i in range(self.dim)
        )
        return self.decompose(bracket)


def _matmul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


@lru_cache(maxsize=None)
def algebra(m: int, n: int) -> SuperAlgebra:
    return SuperAlgebra(m, n)


def parse_basis_label(label: str, m: int, n: int) -> BasisElement:
    """Parse "e[i,j]" / "e[bj,i]" / "h[i]" / "h[bj]" labels."""
    alg = algebra(m, n)
    label = label.strip().replace(" ", "")

    def parse_pos(token: str) -> int:
        barred = token.startswith("b")
        try:
            k = int(token[1:] if barred else token)
        except ValueError:
            raise SuperLieError(f"bad index {token!r} in {label!r}") from None
        if barred:
            if not 1 <= k <= n:
                raise SuperLieError(f"barred index out of range in {label!r}")
            return m + k - 1
        if not 1 <= k <= m:
            raise SuperLieError(f"index out of range in {label!r}")
        return k - 1

    if label.startswith("h[") and label.endswith("]"):
        pos = parse_pos(label[2:-1])
        if pos == alg.dim - 1:
            raise SuperLieError(f"{label!r} is not a Cartan basis element")
        return Cartan(pos)
    if label.startswith("e[") and label.endswith("]"):
        inner = label[2:-1]
        parts = inner.split(",")
        if len(parts) != 2:
            raise SuperLieError(f"bad basis label {label!r}")
        row, col = parse_pos(parts[0]), parse_pos(parts[1])
        if row == col:
            raise SuperLieError(f"equal indices in {label!r}")
        return Root(row, col)
    raise SuperLieError(f"bad basis label {label!r}")
