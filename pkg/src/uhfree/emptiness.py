"""Machine-checkable emptiness certificates for rank 2 over sl(m|n), m, n >= 2.

A hypothetical rank-2 module would pin four generator pairs, up to
twisted conjugation and a free nonzero scalar each, to one of two
anti-triangular branches:

    (e_{i,b1}, e_{b1,i})   scalar a1,  pair polynomial h_i + hb_1 - h_m
    (e_{m,b1}, e_{b1,m})   scalar a2,  pair polynomial hb_1
    (e_{i,bn}, e_{bn,i})   scalar a3,  pair polynomial h_i
    (e_{m,bn}, e_{bn,m})   scalar a4,  pair polynomial h_m

(here i = 1; the branch decides which side of the pair carries the
polynomial).  The even matrices E_{im} and E_{mi} can each be computed
through the intermediate b1 or bn, and the two computations must agree.
The certificate enumerates all 2^4 branch combinations, treats the four
scalars as formal invertible variables, and records for every
combination a failed polynomial identity: either the two E_{im} routes
cannot be reconciled by any scalar choice, or the two E_{mi} routes are
non-proportional outright.  Non-proportionality is witnessed twice
over, by a monomial-support mismatch and by a rational evaluation
point, and the surviving combination's routes are re-derivable through
the presentation module's independent twisted-product path.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .poly import Poly, ShiftMap, default_names, divides_exactly, format_poly, parse_poly
from .presentation import (
    InvariantBreach,
    Mat2,
    derive_even,
    make_presentation,
    odd_positions,
)
from .superlie import Root, algebra

FORMAT_CERT = "uhfree-emptiness-cert/1"

UNIT_NAMES = ("a1", "a2", "a3", "a4")
PAIR_KEYS = ("i1", "m1", "in", "mn")
BRANCHES = ("S", "O")


class EmptinessError(ValueError):
    """Out-of-scope sizes or an invalid certificate."""


# -- the extended ring --------------------------------------------------------------


@dataclass(frozen=True)
class CertRing:
    m: int
    n: int

    @property
    def base_nvars(self) -> int:
        return self.m + self.n - 1

    @property
    def nvars(self) -> int:
        return self.base_nvars + 4

    @property
    def names(self) -> tuple[str, ...]:
        return default_names(self.base_nvars, self.m) + UNIT_NAMES

    def hvar(self, i: int) -> Poly:
        return Poly.var(self.nvars, i)

    def unit(self, k: int) -> Poly:
        return Poly.var(self.nvars, self.base_nvars + k)

    def extend_shift(self, s: ShiftMap) -> ShiftMap:
        return ShiftMap(tuple(s.shifts) + (0, 0, 0, 0))

    def pair_positions(self, key: str) -> tuple[int, int]:
        """Positions (row of the raising generator, barred column)."""
        m, n = self.m, self.n
        row = 0 if key[0] == "i" else m - 1
        col = m if key[1] == "1" else m + n - 1
        return row, col

    def pair_scalar(self, key: str) -> Poly:
        m = self.m
        if key == "i1":
            return self.hvar(0) + self.hvar(m) - self.hvar(m - 1)
        if key == "m1":
            return self.hvar(m)
        if key == "in":
            return self.hvar(0)
        if key == "mn":
            return self.hvar(m - 1)
        raise EmptinessError(f"unknown pair {key!r}")


@dataclass(frozen=True)
class ScaledMat:
    """A 2x2 matrix num / (a1^d1 a2^d2 a3^d3 a4^d4) over the extended ring."""

    num: Mat2
    den: tuple[int, int, int, int]

    def normalized(self, ring: CertRing) -> "ScaledMat":
        base = ring.base_nvars
        mins = list(self.den)
        for k in range(4):
            if mins[k] == 0:
                continue
            content = None
            for r in range(2):
                for c in range(2):
                    for exps in self.num[r, c].terms:
                        e = exps[base + k]
                        content = e if content is None else min(content, e)
            if content:
                mins[k] = min(mins[k], content)
            elif content == 0 or content is None:
                mins[k] = 0
        if not any(mins):
            return self
        divisor = Poly(
            ring.nvars,
            {
                tuple(
                    [0] * base + [mins[k] for k in range(4)]
                ): Fraction(1)
            },
        )
        rows = []
        for r in range(2):
            row = []
            for c in range(2):
                q = divides_exactly(divisor, self.num[r, c])
                if q is None:
                    raise InvariantBreach("unit content extraction failed")
                row.append(q)
            rows.append(tuple(row))
        den = tuple(d - m0 for d, m0 in zip(self.den, mins))
        return ScaledMat(Mat2(tuple(rows)), den)


def _pair_matrices(ring: CertRing, key: str, branch: str) -> tuple[ScaledMat, ScaledMat]:
    """Action matrices (raising, lowering) of a pair in the chosen branch."""
    k = PAIR_KEYS.index(key)
    alpha = ring.unit(k)
    phi = ring.pair_scalar(key)
    nv = ring.nvars
    zero = Poly.zero(nv)
    one = Poly.one(nv)
    unit_den = tuple(1 if j == k else 0 for j in range(4))
    if branch == "S":
        upper = ScaledMat(Mat2(((zero, alpha * phi), (zero, zero))), (0, 0, 0, 0))
        lower = ScaledMat(Mat2(((zero, zero), (one, zero))), unit_den)
    elif branch == "O":
        upper = ScaledMat(Mat2(((zero, alpha), (zero, zero))), (0, 0, 0, 0))
        lower = ScaledMat(Mat2(((zero, zero), (phi, zero))), unit_den)
    else:
        raise EmptinessError(f"unknown branch {branch!r}")
    return upper, lower


def _route(
    ring: CertRing,
    first: ScaledMat,
    first_pos: tuple[int, int],
    second: ScaledMat,
    second_pos: tuple[int, int],
) -> ScaledMat:
    """Twisted product E_first tau_first(E_second) + E_second tau_second(E_first)."""
    alg = algebra(ring.m, ring.n)
    tau1 = ring.extend_shift(alg.weight_shift(Root(*first_pos)))
    tau2 = ring.extend_shift(alg.weight_shift(Root(*second_pos)))
    num = first.num * second.num.shifted(tau1) + second.num * first.num.shifted(tau2)
    den = tuple(a + b for a, b in zip(first.den, second.den))
    return ScaledMat(num, den).normalized(ring)


# -- proportionality analysis -----------------------------------------------------------


def _unit_content(ring: CertRing, mat: Mat2) -> tuple[tuple[int, ...], Mat2]:
    """Split num = alpha^gamma * (h-part); the alpha part must be uniform."""
    base = ring.base_nvars
    gammas = {
        exps[base:]
        for r in range(2)
        for c in range(2)
        for exps in mat[r, c].terms
    }
    if len(gammas) > 1:
        raise InvariantBreach("route matrix mixes unit monomials")
    if not gammas:
        return (0, 0, 0, 0), mat
    gamma = next(iter(gammas))
    rows = []
    for r in range(2):
        row = []
        for c in range(2):
            terms = {
                exps[:base] + (0, 0, 0, 0): coeff
                for exps, coeff in mat[r, c].terms.items()
            }
            row.append(Poly(ring.nvars, terms))
        rows.append(tuple(row))
    return gamma, Mat2(tuple(rows))


@dataclass(frozen=True)
class RouteView:
    """A route split as alpha^delta * mat (delta may have negative entries)."""

    delta: tuple[int, ...]
    mat: Mat2


def _route_view(ring: CertRing, sm: ScaledMat) -> RouteView:
    gamma, mat = _unit_content(ring, sm.num)
    delta = tuple(g - d for g, d in zip(gamma, sm.den))
    return RouteView(delta, mat)


@dataclass(frozen=True)
class MismatchWitness:
    """A cross-product identity that fails, recorded for re-verification."""

    entry_a: tuple[int, int]
    entry_b: tuple[int, int]
    lhs: Poly
    rhs: Poly

    def to_dict(self, names) -> dict:
        return {
            "entries": [list(self.entry_a), list(self.entry_b)],
            "lhs": format_poly(self.lhs, names),
            "rhs": format_poly(self.rhs, names),
        }


def _proportionality(
    a: RouteView, b: RouteView
) -> tuple[bool, Optional[Fraction], Optional[MismatchWitness]]:
    """Is mat_a = lambda * mat_b for some rational lambda != 0?"""
    cells = [(r, c) for r in range(2) for c in range(2)]
    for k1 in range(len(cells)):
        for k2 in range(k1 + 1, len(cells)):
            r1, c1 = cells[k1]
            r2, c2 = cells[k2]
            lhs = a.mat[r1, c1] * b.mat[r2, c2]
            rhs = a.mat[r2, c2] * b.mat[r1, c1]
            if lhs != rhs:
                return False, None, MismatchWitness((r1, c1), (r2, c2), lhs, rhs)
    for r, c in cells:
        if a.mat[r, c].is_zero != b.mat[r, c].is_zero:
            other = a.mat[r, c] if b.mat[r, c].is_zero else b.mat[r, c]
            return False, None, MismatchWitness((r, c), (r, c), a.mat[r, c], b.mat[r, c])
    lam = None
    for r, c in cells:
        if not b.mat[r, c].is_zero:
            la, ca = a.mat[r, c].leading()
            lb, cb = b.mat[r, c].leading()
            lam = ca / cb
            break
    return True, lam, None


def _routes_reconcilable(
    a: RouteView, b: RouteView
) -> tuple[bool, Optional[MismatchWitness], Optional[str]]:
    """Can scalars make the two routes literally equal?

    Requires mat_a = lambda mat_b; when the unit exponents coincide the
    ratio must be exactly 1, otherwise any ratio is realizable.
    """
    ok, lam, witness = _proportionality(a, b)
    if not ok:
        return False, witness, None
    if a.delta == b.delta and lam != 1:
        return False, None, f"forced ratio {lam} with no free scalar"
    constraint = None
    if a.delta != b.delta:
        constraint = _ratio_text(a.delta, b.delta, lam)
    return True, None, constraint


def _ratio_text(da, db, lam) -> str:
    parts = []
    for k in range(4):
        e = da[k] - db[k]
        if e:
            parts.append(f"{UNIT_NAMES[k]}^{e}" if e != 1 else UNIT_NAMES[k])
    mono = "*".join(parts) if parts else "1"
    return f"{mono} = {lam}"


# -- certificates ------------------------------------------------------------------------


@dataclass(frozen=True)
class BranchOutcome:
    choices: dict
    stage1_equal: bool
    stage1_detail: Optional[dict]
    stage2_proportional: Optional[bool]
    stage2_detail: Optional[dict]


@dataclass(frozen=True)
class EmptinessCertificate:
    m: int
    n: int
    i: int
    graded: bool
    branch_log: tuple[BranchOutcome, ...]
    surviving_choices: dict
    route_a: ScaledMat
    route_b: ScaledMat
    support_witness: dict
    eval_witness: dict

    def ring(self) -> CertRing:
        return CertRing(self.m, self.n)

    def to_dict(self) -> dict:
        ring = self.ring()
        names = ring.names

        def sm_dict(sm: ScaledMat) -> dict:
            return {
                "den": list(sm.den),
                "mat": [[format_poly(q, names) for q in r] for r in sm.num.rows],
            }

        return {
            "format": FORMAT_CERT,
            "m": self.m,
            "n": self.n,
            "i": self.i,
            "graded": self.graded,
            "unit_names": list(UNIT_NAMES),
            "branch_log": [
                {
                    "choices": o.choices,
                    "stage1": {"equal": o.stage1_equal, "detail": o.stage1_detail},
                    "stage2": (
                        None
                        if o.stage2_proportional is None
                        else {
                            "proportional": o.stage2_proportional,
                            "detail": o.stage2_detail,
                        }
                    ),
                }
                for o in self.branch_log
            ],
            "surviving": {
                "choices": self.surviving_choices,
                "routeA": sm_dict(self.route_a),
                "routeB": sm_dict(self.route_b),
                "support_witness": self.support_witness,
                "eval_witness": self.eval_witness,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _routes_for(
    ring: CertRing, mats: Mapping[tuple[str, str], ScaledMat], target: str
) -> tuple[ScaledMat, ScaledMat]:
    """The two computations of E_{im} ("up") or E_{mi} ("down")."""
    m, n = ring.m, ring.n
    b1, bn = m, m + n - 1
    i, mm = 0, m - 1
    if target == "up":
        via1 = _route(
            ring, mats[("i1", "raise")], (i, b1), mats[("m1", "lower")], (b1, mm)
        )
        vian = _route(
            ring, mats[("in", "raise")], (i, bn), mats[("mn", "lower")], (bn, mm)
        )
    else:
        via1 = _route(
            ring, mats[("m1", "raise")], (mm, b1), mats[("i1", "lower")], (b1, i)
        )
        vian = _route(
            ring, mats[("mn", "raise")], (mm, bn), mats[("in", "lower")], (bn, i)
        )
    return via1, vian


def _support_witness(ring: CertRing, a: RouteView, b: RouteView) -> Optional[dict]:
    """A variable present in a route entry and absent from the other route's."""
    names = ring.names
    for r in range(2):
        for c in range(2):
            pa, pb = a.mat[r, c], b.mat[r, c]
            for v in sorted(pa.variables()):
                if pb.degree_in(v) <= 0 and not pb.is_zero:
                    exps = next(e for e in pa.terms if e[v])
                    mono = format_poly(Poly(ring.nvars, {exps: Fraction(1)}), names)
                    return {
                        "entry": [r, c],
                        "variable": names[v],
                        "monomial": mono,
                        "route": "A",
                    }
            for v in sorted(pb.variables()):
                if pa.degree_in(v) <= 0 and not pa.is_zero:
                    exps = next(e for e in pb.terms if e[v])
                    mono = format_poly(Poly(ring.nvars, {exps: Fraction(1)}), names)
                    return {
                        "entry": [r, c],
                        "variable": names[v],
                        "monomial": mono,
                        "route": "B",
                    }
    return None


def _eval_witness(ring: CertRing, a: RouteView, b: RouteView) -> Optional[dict]:
    """A rational point at which no scalar matches the two routes."""
    nb = ring.base_nvars
    names = ring.names
    cells = [(r, c) for r in range(2) for c in range(2)]
    for point in itertools.product((0, 1, 2, 3), repeat=nb):
        full = list(point) + [1, 1, 1, 1]
        vals = {}
        for r, c in cells:
            vals[(r, c, "a")] = a.mat[r, c].evaluate(full)
            vals[(r, c, "b")] = b.mat[r, c].evaluate(full)
        for k1 in range(len(cells)):
            for k2 in range(len(cells)):
                if k1 == k2:
                    continue
                e1, e2 = cells[k1], cells[k2]
                lhs = vals[(*e1, "a")] * vals[(*e2, "b")]
                rhs = vals[(*e2, "a")] * vals[(*e1, "b")]
                if lhs != rhs:
                    return {
                        "point": {
                            names[v]: str(point[v]) for v in range(nb)
                        },
                        "entries": [list(e1), list(e2)],
                        "lhs": str(lhs),
                        "rhs": str(rhs),
                    }
    return None


def emptiness_certificate(m: int, n: int, graded: bool = False) -> EmptinessCertificate:
    """Replay the two-route contradiction and certify emptiness for (m, n).

    Enumerates all 16 branch combinations of the four pinned pairs; each
    must die, either because the two computations of E_{im} cannot be
    made equal by any choice of the free scalars, or because the two
    computations of E_{mi} are non-proportional.  Exactly one
    combination reaches the second stage; its routes and both
    non-proportionality witnesses go into the certificate.
    """
    if m < 2 or n < 2:
        raise EmptinessError("the emptiness theorem applies to m, n >= 2")
    ring = CertRing(m, n)
    log: list[BranchOutcome] = []
    survivors = []
    names = ring.names
    for combo in itertools.product(BRANCHES, repeat=4):
        choices = dict(zip(PAIR_KEYS, combo))
        mats: dict[tuple[str, str], ScaledMat] = {}
        for key in PAIR_KEYS:
            up, lo = _pair_matrices(ring, key, choices[key])
            mats[(key, "raise")] = up
            mats[(key, "lower")] = lo
        up1, upn = _routes_for(ring, mats, "up")
        va, vb = _route_view(ring, up1), _route_view(ring, upn)
        equal, witness, constraint = _routes_reconcilable(va, vb)
        if not equal:
            detail = (
                witness.to_dict(names)
                if witness is not None
                else {"reason": constraint}
            )
            log.append(BranchOutcome(choices, False, detail, None, None))
            continue
        down1, downn = _routes_for(ring, mats, "down")
        da, db = _route_view(ring, down1), _route_view(ring, downn)
        ok, _, w2 = _proportionality(da, db)
        detail2 = None if ok else w2.to_dict(names)
        log.append(
            BranchOutcome(
                choices,
                True,
                {"scalar_constraint": constraint},
                ok,
                detail2,
            )
        )
        if ok:
            raise InvariantBreach(
                f"branch {choices} admits a consistent module; emptiness fails"
            )
        survivors.append((choices, down1, downn, da, db))
    if len(survivors) != 1:
        raise InvariantBreach(
            f"expected exactly one branch to reach the second stage, got {len(survivors)}"
        )
    choices, route_a, route_b, da, db = survivors[0]
    support = _support_witness(ring, da, db)
    point = _eval_witness(ring, da, db)
    if support is None or point is None:
        raise InvariantBreach("non-proportionality witnesses not found")
    return EmptinessCertificate(
        m=m,
        n=n,
        i=1,
        graded=graded,
        branch_log=tuple(log),
        surviving_choices=choices,
        route_a=route_a,
        route_b=route_b,
        support_witness=support,
        eval_witness=point,
    )


def graded_emptiness(m: int, n: int) -> EmptinessCertificate:
    """Emptiness of the graded categories, derived from the ungraded one.

    A graded rank-(1|1) module is in particular an ungraded rank-2
    module, so the same certificate applies; it is returned with the
    graded annotation set.
    """
    if m < 2 or n < 2:
        raise EmptinessError("out of theorem scope: need m, n >= 2")
    return emptiness_certificate(m, n, graded=True)


# -- re-verification -----------------------------------------------------------------------


def certificate_from_dict(data: Mapping) -> EmptinessCertificate:
    if data.get("format") != FORMAT_CERT:
        raise EmptinessError(
            f"format-version mismatch: expected {FORMAT_CERT}, got {data.get('format')!r}"
        )
    m, n = int(data["m"]), int(data["n"])
    ring = CertRing(m, n)
    names = ring.names

    def parse_sm(d) -> ScaledMat:
        mat = Mat2(
            tuple(tuple(parse_poly(s, names) for s in row) for row in d["mat"])
        )
        return ScaledMat(mat, tuple(int(x) for x in d["den"]))

    log = []
    for entry in data["branch_log"]:
        stage2 = entry.get("stage2")
        log.append(
            BranchOutcome(
                dict(entry["choices"]),
                bool(entry["stage1"]["equal"]),
                entry["stage1"].get("detail"),
                None if stage2 is None else bool(stage2["proportional"]),
                None if stage2 is None else stage2.get("detail"),
            )
        )
    surv = data["surviving"]
    return EmptinessCertificate(
        m=m,
        n=n,
        i=int(data["i"]),
        graded=bool(data["graded"]),
        branch_log=tuple(log),
        surviving_choices=dict(surv["choices"]),
        route_a=parse_sm(surv["routeA"]),
        route_b=parse_sm(surv["routeB"]),
        support_witness=dict(surv["support_witness"]),
        eval_witness=dict(surv["eval_witness"]),
    )


def _eval_scaled(ring: CertRing, sm: ScaledMat, units: Sequence[Fraction]) -> Mat2:
    """Specialize the unit variables to concrete scalars, over the base ring."""
    nb = ring.base_nvars
    den = Fraction(1)
    for k in range(4):
        den *= Fraction(units[k]) ** sm.den[k]
    rows = []
    for r in range(2):
        row = []
        for c in range(2):
            terms: dict[tuple[int, ...], Fraction] = {}
            for exps, coeff in sm.num[r, c].terms.items():
                scale = coeff
                for k in range(4):
                    scale *= Fraction(units[k]) ** exps[nb + k]
                key = exps[:nb]
                terms[key] = terms.get(key, Fraction(0)) + scale
            row.append(Poly(nb, terms) * (1 / den))
        rows.append(tuple(row))
    return Mat2(tuple(rows))


def _presentation_at_units(
    ring: CertRing, choices: Mapping[str, str], units: Sequence[Fraction]
):
    """A plain presentation carrying the branch matrices at concrete scalars.

    Generators outside the four pinned pairs are filled with zeros; only
    the derived products along the pinned routes are meaningful.
    """
    m, n = ring.m, ring.n
    nb = ring.base_nvars
    mats = {pos: Mat2.zero(nb) for pos in odd_positions(m, n)}
    for key in PAIR_KEYS:
        up, lo = _pair_matrices(ring, key, choices[key])
        row, col = ring.pair_positions(key)
        mats[(row, col)] = _eval_scaled(ring, up, units)
        mats[(col, row)] = _eval_scaled(ring, lo, units)
    return make_presentation(m, n, mats)


def verify_certificate(cert: EmptinessCertificate) -> list[str]:
    """Independently re-check a certificate; returns a report, raises on failure.

    Checks: a fresh replay produces the same branch outcomes and routes;
    every recorded failing identity still fails; the surviving routes
    agree with the presentation module's derive_even along both
    intermediates at two scalar specializations; and both
    non-proportionality witnesses hold.
    """
    report = []
    fresh = emptiness_certificate(cert.m, cert.n, graded=cert.graded)
    if fresh.to_dict() != cert.to_dict():
        raise EmptinessError("certificate does not match a fresh replay")
    report.append(f"replayed all {len(cert.branch_log)} branch combinations")

    ring = cert.ring()
    names = ring.names
    for outcome in cert.branch_log:
        for detail in (outcome.stage1_detail, outcome.stage2_detail):
            if detail and "lhs" in detail:
                lhs = parse_poly(detail["lhs"], names)
                rhs = parse_poly(detail["rhs"], names)
                if lhs == rhs:
                    raise EmptinessError(
                        f"recorded failing identity holds for {outcome.choices}"
                    )
    report.append("all recorded branch-killing identities re-fail")

    m, n = cert.m, cert.n
    b1, bn = m, m + n - 1
    for units in ((1, 1, 1, 1), (2, 3, 5, 7)):
        units = tuple(Fraction(u) for u in units)
        pres = _presentation_at_units(ring, cert.surviving_choices, units)
        via1 = derive_even(pres, m - 1, 0, via=b1)
        vian = derive_even(pres, m - 1, 0, via=bn)
        for recorded, recomputed in ((cert.route_a, via1), (cert.route_b, vian)):
            if _eval_scaled(ring, recorded, units) != recomputed:
                raise EmptinessError(
                    "recorded route disagrees with the independent derivation"
                )
    report.append("routes re-derived independently at two scalar specializations")

    da = _route_view(ring, cert.route_a)
    db = _route_view(ring, cert.route_b)
    sw = cert.support_witness
    v = names.index(sw["variable"])
    r, c = sw["entry"]
    pa = da.mat[r, c] if sw["route"] == "A" else db.mat[r, c]
    pb = db.mat[r, c] if sw["route"] == "A" else da.mat[r, c]
    if pa.degree_in(v) <= 0 or pb.degree_in(v) > 0 or pb.is_zero:
        raise EmptinessError("support witness does not hold")
    report.append(
        f"support witness holds: {sw['monomial']} in route {sw['route']} "
        f"entry {tuple(sw['entry'])}, variable {sw['variable']} absent opposite"
    )

    ew = cert.eval_witness
    nb = ring.base_nvars
    point = [Fraction(ew["point"][names[k]]) for k in range(nb)] + [Fraction(1)] * 4
    (r1, c1), (r2, c2) = ew["entries"]
    lhs = da.mat[r1, c1].evaluate(point) * db.mat[r2, c2].evaluate(point)
    rhs = da.mat[r2, c2].evaluate(point) * db.mat[r1, c1].evaluate(point)
    if lhs == rhs or str(lhs) != ew["lhs"] or str(rhs) != ew["rhs"]:
        raise EmptinessError("evaluation witness does not hold")
    report.append("evaluation witness holds: routes are non-proportional at a point")
    if cert.graded:
        report.append(
            "graded annotation: a graded rank-(1|1) object would be an "
            "ungraded rank-2 object, so the graded categories are empty too"
        )
    return report
