"""Command-line interface.

Subcommands: verify, classify, iso, endo, submodules, string-check,
empty-check, canon-sl11.  Human-readable reports go to stdout; machine
output (deterministic JSON, no timestamps) goes to --out.  Exit codes:
0 for pass/success verdicts, 1 for fail verdicts, 2 for usage, file, or
grammar errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .poly import Poly, PolyError, default_names, format_poly, parse_poly
from .presentation import (
    Mat2,
    Presentation,
    PresentationError,
    Vec2,
    parity_check,
    pointwise_check,
    presentation_from_json,
    presentation_to_json,
    verify_relations,
)
from .normalform import ClassificationError, classify_sl11, classify_sl_m1
from .morphisms import (
    MorphismError,
    endo_ring_basis,
    filtration,
    filtration_separators,
    idempotent_scan,
    iso_test,
    resolve_category,
    sl11_submodule_shape,
    solve_hom,
)
from .stringbridge import StringBridgeError, StringModule, check_intertwining
from .emptiness import (
    EmptinessError,
    certificate_from_dict,
    emptiness_certificate,
    graded_emptiness,
    verify_certificate,
)

FIELD_NOTE = "field: exact rationals (complex parameters are taken as rational witnesses)"


class _Failure(Exception):
    """Fail verdict (exit 1) carrying report lines."""

    def __init__(self, lines):
        super().__init__("\n".join(lines))
        self.lines = lines


def _load_presentation(path: str) -> Presentation:
    text = Path(path).read_text()
    return presentation_from_json(text)


def _mat_strings(mat: Mat2, names) -> list[list[str]]:
    return [[format_poly(q, names) for q in r] for r in mat.rows]


def _write_out(path: Optional[str], payload) -> None:
    if path:
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _names(p: Presentation):
    return default_names(p.nvars, p.m)


def _require_verified(p: Presentation, lines: list[str]) -> None:
    report = verify_relations(p)
    if not report.ok:
        lines.append(f"FAIL: {len(report.violations)} relation(s) violated")
        lines.extend("  " + t for t in report.describe(p.m, p.n))
        raise _Failure(lines)


# -- subcommands ------------------------------------------------------------------


def cmd_verify(args) -> int:
    p = _load_presentation(args.file)
    lines = [f"presentation over sl({p.m}|{p.n}), grading {p.grading}"]
    report = verify_relations(p)
    payload = {
        "ok": report.ok,
        "checked": report.checked,
        "violations": report.describe(p.m, p.n),
    }
    if p.is_graded():
        parity = parity_check(p)
        payload["parity_ok"] = parity.ok
        payload["parity_failures"] = list(parity.failures)
    _write_out(args.out, payload)
    if not report.ok:
        lines.append(f"FAIL: {len(report.violations)} of {report.checked} relations violated")
        lines.extend("  " + t for t in report.describe(p.m, p.n))
        print("\n".join(_stamped(lines, args)))
        return 1
    lines.append(f"PASS: all {report.checked} generator relations hold")
    if p.is_graded():
        parity = parity_check(p)
        if parity.ok:
            lines.append("PASS: grading flag consistent with matrix shapes")
        else:
            lines.append("FAIL: grading flag inconsistent")
            lines.extend("  " + t for t in parity.failures)
            print("\n".join(_stamped(lines, args)))
            return 1
    if args.pointwise is not None:
        sampled = pointwise_check(p, args.pointwise)
        verdict = "PASS" if sampled.ok else "FAIL"
        lines.append(
            f"{verdict}: pointwise cross-check on {sampled.checked} sampled identities"
        )
        if not sampled.ok:
            print("\n".join(_stamped(lines, args)))
            return 1
    print("\n".join(_stamped(lines, args)))
    return 0


def cmd_classify(args) -> int:
    p = _load_presentation(args.file)
    lines = [f"presentation over sl({p.m}|{p.n}), grading {p.grading}", FIELD_NOTE]
    if p.n != 1:
        raise PresentationError(
            "classification applies to sl(m|1); see empty-check for m, n >= 2"
        )
    _require_verified(p, lines)
    names = _names(p)
    if p.m == 1:
        cls = classify_sl11(p)
        payload = {
            "class": f"class-{cls.label}",
            "witness": _mat_strings(cls.witness, names),
        }
        lines.append(f"class: class-{cls.label}")
    else:
        params, witness = classify_sl_m1(p)
        payload = params.to_dict()
        payload["normalized_a"] = [str(x) for x in params.normalized().a]
        payload["witness"] = _mat_strings(witness, names)
        lines.append(f"family parameters: {json.dumps(params.to_dict(), sort_keys=True)}")
        lines.append(
            "normalized (first parameter 1): "
            + json.dumps(payload["normalized_a"])
        )
    _write_out(args.out, payload)
    print("\n".join(_stamped(lines, args)))
    return 0


def cmd_iso(args) -> int:
    src = _load_presentation(args.src)
    dst = _load_presentation(args.dst)
    lines = [FIELD_NOTE]
    for tag, p in (("left", src), ("right", dst)):
        rep = verify_relations(p)
        if not rep.ok:
            lines.append(f"FAIL: {tag} presentation violates relations")
            raise _Failure(lines)
    category = resolve_category(src, dst, args.category)
    witness = iso_test(src, dst, category=category)
    if witness is None:
        lines.append(f"not isomorphic (category {category})")
        _write_out(args.out, {"isomorphic": False, "category": category})
        print("\n".join(_stamped(lines, args)))
        return 1 if args.expect_iso else 0
    names = _names(src)
    payload = {
        "isomorphic": True,
        "category": category,
        "gamma": str(witness.gamma),
        "parity": witness.parity,
        "witness": _mat_strings(witness.w, names),
    }
    _write_out(args.out, payload)
    lines.append(
        f"isomorphic in {category} with gamma = {witness.gamma} ({witness.parity} witness)"
    )
    print("\n".join(_stamped(lines, args)))
    return 0


def cmd_endo(args) -> int:
    p = _load_presentation(args.file)
    lines = [f"endomorphisms up to entry degree {args.bound}"]
    _require_verified(p, lines)
    names = _names(p)
    sols = solve_hom(p, p, args.bound)
    basis = endo_ring_basis(p, args.bound)
    idems = idempotent_scan(p, args.bound)
    payload = {
        "solutions": [
            {"parity": s.parity, "matrix": _mat_strings(s.w, names)} for s in sols
        ],
        "predicted_basis": [_mat_strings(b, names) for b in basis],
        "idempotents": [_mat_strings(w, names) for w in idems],
    }
    _write_out(args.out, payload)
    lines.append(f"solution space dimension: {len(sols)}")
    for s in sols:
        lines.append(f"  {s.parity}: {_mat_strings(s.w, names)}")
    lines.append(f"idempotents found: {len(idems)} (zero and identity expected)")
    print("\n".join(_stamped(lines, args)))
    return 0


def cmd_submodules(args) -> int:
    p = _load_presentation(args.file)
    lines = []
    _require_verified(p, lines)
    names = _names(p)
    if p.m == 1 and p.n == 1:
        cls = classify_sl11(p)
        gen = parse_poly(args.gen, ("h1",))
        shapes = sl11_submodule_shape(cls.label, gen)
        payload = {
            "class": f"class-{cls.label}",
            "ideal_generator": format_poly(gen, ("h1",)),
            "shapes": [
                {
                    "label": s.label,
                    "generators": [
                        format_poly(s.g1, ("h1",)),
                        format_poly(s.g2, ("h1",)),
                    ],
                }
                for s in shapes
            ],
        }
        lines.append(f"class-{cls.label}; admissible submodule shapes for J = ({args.gen}):")
        for s in shapes:
            lines.append(
                f"  {s.label}: {format_poly(s.g1, ('h1',))} Q[h] (+) {format_poly(s.g2, ('h1',))} Q[h]"
            )
    else:
        lambdas = [Fraction(t) for t in args.lambdas.split(",")] if args.lambdas else [
            Fraction(k) for k in range(args.length)
        ]
        chain = filtration(p, lambdas, args.length)
        seps = filtration_separators(p, chain)
        payload = {
            # ascending coefficient vectors of the F_k
            "filtration": [
                [str(s.f.coeff((k,))) for k in range(max(s.f.total_degree(), 0) + 1)]
                for s in chain
            ],
            "separators": [
                [format_poly(v.f1, names), format_poly(v.f2, names)] for v in seps
            ],
        }
        lines.append(f"strict filtration of length {args.length}:")
        for k, s in enumerate(chain):
            lines.append(f"  F_{k} = {format_poly(s.f, ('X',))}")
        lines.append("each step separated by the recorded vector outside the next layer")
    _write_out(args.out, payload)
    print("\n".join(_stamped(lines, args)))
    return 0


def cmd_string_check(args) -> int:
    variants = (1, 2) if args.variant == "both" else (int(args.variant),)
    lines = []
    payload = {}
    ok = True
    for v in variants:
        report = check_intertwining(v, args.n, args.max_deg)
        payload[f"variant{v}"] = {
            "ok": report.ok,
            "checked": report.checked,
            "failures": list(report.failures),
        }
        lines.append(
            f"variant {v}: {'PASS' if report.ok else 'FAIL'} "
            f"({report.checked} identities at N={args.n}, max degree {args.max_deg})"
        )
        ok = ok and report.ok
        if args.adjacency:
            module = StringModule(v, args.n)
            payload[f"variant{v}"]["adjacency"] = [
                list(t) for t in module.adjacency()
            ]
            for i, g, j in module.adjacency():
                lines.append(f"  u{i} -{g}-> u{j}")
    _write_out(args.out, payload)
    print("\n".join(_stamped(lines, args)))
    return 0 if ok else 1


def cmd_empty_check(args) -> int:
    if args.verify:
        data = json.loads(Path(args.verify).read_text())
        cert = certificate_from_dict(data)
        try:
            report = verify_certificate(cert)
        except EmptinessError as exc:
            print(f"FAIL: {exc}")
            return 1
        lines = [f"certificate for sl({cert.m}|{cert.n}) re-verified:"]
        lines.extend("  " + t for t in report)
        print("\n".join(_stamped(lines, args)))
        return 0
    if args.m is None or args.n is None:
        raise PolyError("empty-check needs --m and --n (or --verify FILE)")
    cert = graded_emptiness(args.m, args.n) if args.graded else emptiness_certificate(
        args.m, args.n
    )
    _write_out(args.out, cert.to_dict())
    ring = cert.ring()
    names = ring.names
    lines = [
        f"category of rank-2 modules over sl({cert.m}|{cert.n}) is empty",
        f"branch combinations examined: {len(cert.branch_log)}; "
        f"surviving to the final contradiction: 1",
        f"surviving branch: {json.dumps(cert.surviving_choices, sort_keys=True)}",
        "route through b1:",
    ]
    for r in cert.route_a.num.rows:
        lines.append("    " + str([format_poly(q, names) for q in r]))
    lines.append(f"  divided by unit monomial exponents {list(cert.route_a.den)}")
    lines.append("route through bn:")
    for r in cert.route_b.num.rows:
        lines.append("    " + str([format_poly(q, names) for q in r]))
    lines.append(f"  divided by unit monomial exponents {list(cert.route_b.den)}")
    lines.append(
        f"support witness: {cert.support_witness['monomial']} "
        f"(variable {cert.support_witness['variable']})"
    )
    lines.append("branch log:")
    for outcome in cert.branch_log:
        choices = json.dumps(outcome.choices, sort_keys=True)
        if not outcome.stage1_equal:
            lines.append(f"  {choices}: routes for the raising even matrix differ")
        else:
            lines.append(
                f"  {choices}: survives to the lowering even matrix, "
                "whose two routes are non-proportional"
            )
    if cert.graded:
        lines.append("graded categories annotated empty as well")
    print("\n".join(_stamped(lines, args)))
    return 0


def cmd_canon_sl11(args) -> int:
    p = _load_presentation(args.file)
    lines = [FIELD_NOTE]
    if (p.m, p.n) != (1, 1):
        raise PresentationError("canon-sl11 expects a presentation with m = n = 1")
    _require_verified(p, lines)
    cls = classify_sl11(p)
    names = ("h1",)
    payload = {
        "class": f"class-{cls.label}",
        "canonical": [
            _mat_strings(cls.canonical[0], names),
            _mat_strings(cls.canonical[1], names),
        ],
        "witness": _mat_strings(cls.witness, names),
    }
    _write_out(args.out, payload)
    lines.append(f"class: class-{cls.label}")
    lines.append(f"canonical pair: {payload['canonical']}")
    lines.append(f"witness: {payload['witness']}")
    print("\n".join(_stamped(lines, args)))
    return 0


# -- driver -----------------------------------------------------------------------------


def _stamped(lines, args):
    if getattr(args, "stamp", False):
        return lines + [f"generated: {datetime.now(timezone.utc).isoformat()}"]
    return lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uhfree",
        description="Exact computations with rank-2 U(h)-free modules over sl(m|n).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write machine-readable JSON here")
        sp.add_argument(
            "--stamp",
            action="store_true",
            help="append a timestamp to the human report",
        )

    sp = sub.add_parser("verify", help="check the module relations of a presentation")
    sp.add_argument("file")
    sp.add_argument(
        "--pointwise",
        type=int,
        metavar="DEG",
        help="also sample the relations on monomial vectors up to this degree",
    )
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("classify", help="classify a verified sl(m|1) presentation")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("iso", help="decide isomorphism of two presentations")
    sp.add_argument("src")
    sp.add_argument("dst")
    sp.add_argument(
        "--category",
        default="auto",
        choices=["auto", "M2", "M11", "M11even"],
        help="morphism category (default: graded-even for graded inputs)",
    )
    sp.add_argument("--expect-iso", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_iso)

    sp = sub.add_parser("endo", help="endomorphism space and idempotents")
    sp.add_argument("file")
    sp.add_argument("--bound", type=int, default=4, help="entry degree bound")
    common(sp)
    sp.set_defaults(func=cmd_endo)

    sp = sub.add_parser("submodules", help="filtrations / submodule shapes")
    sp.add_argument("file")
    sp.add_argument("--length", type=int, default=10)
    sp.add_argument("--lambdas", help="comma-separated rational roots")
    sp.add_argument("--gen", default="h1", help="ideal generator for rank-2 sl(1|1)")
    common(sp)
    sp.set_defaults(func=cmd_submodules)

    sp = sub.add_parser("string-check", help="string-module intertwining check")
    sp.add_argument("--variant", default="both", choices=["1", "2", "both"])
    sp.add_argument("--N", dest="n", type=int, default=25)
    sp.add_argument("--max-deg", type=int, default=10)
    sp.add_argument("--adjacency", action="store_true", help="emit the arrow diagram")
    common(sp)
    sp.set_defaults(func=cmd_string_check)

    sp = sub.add_parser("empty-check", help="emptiness certificates for m, n >= 2")
    sp.add_argument("--m", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--graded", action="store_true")
    sp.add_argument("--verify", help="re-verify a stored certificate")
    common(sp)
    sp.set_defaults(func=cmd_empty_check)

    sp = sub.add_parser("canon-sl11", help="canonical form of an sl(1|1) presentation")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_canon_sl11)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Failure as exc:
        print("\n".join(exc.lines))
        return 1
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return 2
    except (
        PolyError,
        PresentationError,
        ClassificationError,
        MorphismError,
        StringBridgeError,
        EmptinessError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
