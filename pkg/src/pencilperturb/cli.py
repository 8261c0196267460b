"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 refused (provably
impossible or not covered by a sufficiency result), 3 search backend gave
up, 4 bad input, 5 a complete search contradicted an existence result.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import jsonio
from .algebra import Poly
from .jsonio import InputError
from .oracle import compare
from .pencilcore import NotRegularError, homogeneous_det, weierstrass_structure
from .placement import place
from .structure import applicability, const_rank_bound, interlace, min_rank, sufficiency_applies
from .synth import BackendExhausted, Refusal, TheoremContradiction, certificate_problems, synthesize

EXIT_OK, EXIT_FAILED, EXIT_REFUSED, EXIT_EXHAUSTED, EXIT_INPUT, EXIT_CONTRADICTION = 0, 1, 2, 3, 4, 5


def _emit(obj, out: str | None) -> None:
    text = jsonio.dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _applicability_json(F, rep) -> dict:
    return {
        "joint_spectrum_covers_field": rep.joint_spectrum_covers_field,
        "witness_c": None if rep.witness_c is None else jsonio.point_to_json(F, rep.witness_c),
        "shared_multiplicity_lambda0": (None if rep.shared_multiplicity_lambda0 is None
                                        else jsonio.point_to_json(F, rep.shared_multiplicity_lambda0)),
        "scalar_exception": rep.scalar_exception,
    }


def analyze_report(A) -> dict:
    F = A.F
    rank = A.normal_rank()
    out = {"field": F.name, "m": A.m, "n": A.n, "normal_rank": rank,
           "regular": A.is_square and rank == A.n}
    if not out["regular"]:
        return out
    S = weierstrass_structure(A)
    out["invariant_factors"] = [jsonio.poly_to_json(f) for f in S.finite]
    out["structure"] = jsonio.structure_to_json(S)
    out["spectrum"] = [jsonio.point_to_json(F, lam) for lam in S.eigenvalues()]
    out["algebraic_multiplicity"] = {str(jsonio.point_to_json(F, lam)): S.algebraic_multiplicity(lam)
                                     for lam in S.eigenvalues()}
    return out


def cmd_analyze(args) -> int:
    A = jsonio.pencil_from_json(jsonio.load_file(args.input))
    _emit(analyze_report(A), args.out)
    return EXIT_OK


def _pair_structures(path):
    A, target = jsonio.pair_from_json(jsonio.load_file(path))
    if not A.is_regular():
        raise InputError("$.A: pencil is not regular")
    if hasattr(target, "G0"):
        if not target.is_regular():
            raise InputError("$.B: pencil is not regular")
        psi = weierstrass_structure(target)
    else:
        psi = target
    if psi.n != A.n:
        raise InputError(f"target has size {psi.n}, A has {A.n}")
    return A, target, weierstrass_structure(A), psi


def cmd_check(args) -> int:
    A, target, phi, psi = _pair_structures(args.input)
    if not 0 <= args.rank <= A.n:
        raise InputError(f"--rank must lie in 0..{A.n}")
    rep = interlace(phi, psi, args.rank)
    out = {
        "rank": args.rank,
        "interlacing": rep.holds,
        "first_violation": None if rep.first_violation is None else list(rep.first_violation),
        "min_rank": min_rank(phi, psi),
        "applicability": _applicability_json(A.F, applicability(phi, psi)),
        "sufficiency_applies": sufficiency_applies(phi, psi, args.rank),
    }
    # only meaningful for sI + A0 pencils, and only searched over the base field
    if hasattr(target, "G0"):
        try:
            out["const_rank_bound"] = {"value": const_rank_bound(A, target), "informational": True}
        except ValueError:
            pass
    _emit(out, args.out)
    return EXIT_OK


def cmd_min_rank(args) -> int:
    _, _, phi, psi = _pair_structures(args.input)
    _emit({"min_rank": min_rank(phi, psi)}, args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    A, target, _, _ = _pair_structures(args.input)
    cert = synthesize(A, target, args.rank, random.Random(args.seed))
    _emit(jsonio.certificate_to_json(cert), args.out)
    return EXIT_OK


def _parse_det(text: str, F) -> Poly:
    try:
        coeffs = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--det: {exc.msg}") from exc
    q = jsonio.poly_from_json(F, coeffs, "--det")
    if q.is_zero():
        raise InputError("--det: zero polynomial")
    return q


def cmd_place(args) -> int:
    A = jsonio.pencil_from_json(jsonio.load_file(args.input))
    if not A.is_regular():
        raise InputError("$: pencil is not regular")
    q = _parse_det(args.det, A.F)
    if q.degree > A.n:
        raise InputError(f"--det: degree {q.degree} exceeds n = {A.n}")
    cert = place(A, args.rank, q, random.Random(args.seed))
    _emit(jsonio.certificate_to_json(cert), args.out)
    return EXIT_OK


def verify_certificate(A, doc: dict) -> list[str]:
    """Everything a certificate claims, recomputed from A and P."""
    F = A.F
    P = jsonio.pencil_from_json(jsonio.need(doc, "P", "$"), "$.P", F)
    if (P.m, P.n) != (A.m, A.n):
        return [f"P has shape {P.m}x{P.n}, A has {A.m}x{A.n}"]
    rank = jsonio.need(doc, "rank", "$")
    target = jsonio.structure_from_json(jsonio.need(doc, "target", "$"), "$.target", F)
    problems = certificate_problems(A, P, target, rank)
    if "achieved" in doc:
        achieved = jsonio.structure_from_json(doc["achieved"], "$.achieved", F)
        if achieved != target:
            problems.append("claimed achieved structure differs from the target")
    if "det" in doc:
        k, got = homogeneous_det(A + P)
        want = jsonio.homog_from_json(F, jsonio.need(doc["det"], "target", "$.det"), "$.det.target")
        claimed_k = jsonio.entry(F, jsonio.need(doc["det"], "scalar", "$.det"), "$.det.scalar")
        if got != want:
            problems.append(f"homogeneous determinant {got} differs from the target {want}")
        elif k != claimed_k:
            problems.append(f"determinant scalar is {F.dump(k)}, claimed {F.dump(claimed_k)}")
    return problems


def cmd_verify(args) -> int:
    A = jsonio.pencil_from_json(jsonio.load_file(args.pencil))
    if not A.is_regular():
        raise InputError("$: pencil is not regular")
    problems = verify_certificate(A, jsonio.load_file(args.cert))
    _emit({"pass": not problems, "problems": problems}, args.out)
    return EXIT_OK if not problems else EXIT_FAILED


def cmd_oracle(args) -> int:
    doc = jsonio.load_file(args.pencil)
    A = jsonio.pencil_from_json(doc)
    F = jsonio.parse_field({"field": args.field}, "--field")
    if A.F != F:
        raise InputError(f"pencil is over {A.F}, --field says {F}")
    if not getattr(F, "size", None):
        raise InputError("--field must be a prime field")
    if A.n != args.n:
        raise InputError(f"pencil has size {A.n}, --n says {args.n}")
    if not A.is_regular():
        raise InputError("$: pencil is not regular")
    try:
        sl = compare(A, args.rank, chunks=args.chunks)
    except ValueError as exc:
        raise InputError(str(exc)) from exc

    def sjson(S):
        return jsonio.structure_to_json(S)

    def skey(S):
        return jsonio.dumps(sjson(S))

    out = {
        "field": F.name,
        "n": A.n,
        "rank": args.rank,
        "reachable": [sjson(S) for S in sorted(sl.reachable, key=skey)],
        "predicate_set": [sjson(S) for S in sorted(sl.predicate_set, key=skey)],
        "extra": [sjson(S) for S in sorted(sl.extra, key=skey)],
        "missing": [
            {"structure": sjson(S),
             "sufficiency_applies": sl.diagnostics[S]["sufficiency_applies"],
             "applicability": _applicability_json(F, sl.diagnostics[S]["applicability"])}
            for S in sorted(sl.missing, key=skey)
        ],
    }
    _emit(out, args.report)
    return EXIT_OK if not sl.extra else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pencilperturb", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="structure report for one pencil")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    for name, func, helptext in (("check", cmd_check, "interlacing and applicability at a rank"),
                                 ("min-rank", cmd_min_rank, "minimal perturbation rank")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--input", required=True, help="pair file")
        if name == "check":
            p.add_argument("--rank", type=int, required=True)
        p.add_argument("--out")
        p.set_defaults(func=func)

    p = sub.add_parser("synth", help="construct a rank-r perturbation")
    p.add_argument("--input", required=True, help="pair file")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("place", help="prescribe det(A + P) with rank P = r")
    p.add_argument("--input", required=True, help="pencil file")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--det", required=True, help="coefficients of q, lowest degree first, as JSON")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_place)

    p = sub.add_parser("verify", help="re-check a certificate against A")
    p.add_argument("--pencil", required=True)
    p.add_argument("--cert", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exhaustive reachability over GF(p)")
    p.add_argument("--field", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--pencil", required=True)
    p.add_argument("--report")
    p.add_argument("--chunks", type=int, default=4)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, NotRegularError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Refusal as exc:
        out = {"refused": exc.reason, "message": str(exc)}
        if "r0" in exc.details:
            out["min_rank"] = exc.details["r0"]
        _emit(out, None)
        return EXIT_REFUSED
    except BackendExhausted as exc:
        print(f"backend exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except TheoremContradiction as exc:
        print(f"theorem contradiction: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION


if __name__ == "__main__":
    sys.exit(main())
