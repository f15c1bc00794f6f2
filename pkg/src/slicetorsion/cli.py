"""
Command line interface.  Every subcommand prints a JSON report (schema 1).

Exit status: 0 when the computation ran (whatever the verdict), 2 for input
or validation errors, 3 when a search/closure/factorization budget is
exceeded, 4 for internal consistency failures.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import errors
from .monomial_rep import (DEFAULT_CLOSURE_BUDGET, FreeWord, MonomialRep, bing_fig8_rep, det_group,
                           eigenvalues, evaluate_word, verify_p_group)
from .normtest import rational_norm_class
from .report import ReportCheckFailed, dumps, make_report, verify_report
from .satellite import (AlexanderPoly, alexander_from_seifert, bing_double_obstruction, builtin_knot,
                        satellite_factor)
from .torsion import (BoundarySeifertMatrix, PsiMap, boundary_torsion,
                      rank_of_link, slice_consequence_check, unlink_torsion)

BUILTIN_REPS = {"bing_fig8": bing_fig8_rep}


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise errors.InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise errors.InputError(f"{path} is not valid JSON: {exc}") from exc


def resolve_rep(name, m):
    """``trivialK`` (K-dimensional trivial rep on m generators), ``bing_fig8``, or a JSON path."""
    match = re.fullmatch(r"trivial(\d+)", name)
    if match:
        return MonomialRep.trivial(m, int(match.group(1)))
    if name in BUILTIN_REPS:
        return BUILTIN_REPS[name]()
    return MonomialRep.from_json(_read_json(name))


def resolve_psi(name, m):
    """``idM`` (identity on Z^M), ``total`` (every meridian to t), or a JSON path."""
    match = re.fullmatch(r"id(\d+)", name)
    if match:
        if int(match.group(1)) != m:
            raise errors.DimensionMismatch(f"{name} does not match m = {m}")
        return PsiMap.identity(m)
    if name == "total":
        return PsiMap.total(m)
    return PsiMap.from_json(_read_json(name))


def resolve_seifert(args):
    if getattr(args, "seifert", None):
        return BoundarySeifertMatrix.from_json(_read_json(args.seifert))
    if getattr(args, "knot", None):
        B, _ = _knot(args.knot)
        return BoundarySeifertMatrix.knot(B)
    raise errors.InputError("give --seifert FILE or --knot NAME")


def _knot(name):
    try:
        return builtin_knot(name)
    except KeyError as exc:
        raise errors.InputError(str(exc.args[0])) from exc


def resolve_companion(args):
    if getattr(args, "companion", None):
        data = _read_json(args.companion)
        if "alexander" in data:
            return AlexanderPoly(data["alexander"]), {"alexander": data["alexander"]}
        if "seifert" in data:
            delta = alexander_from_seifert(data["seifert"])
            return delta, {"seifert": data["seifert"]}
        raise errors.InputError("companion file needs 'alexander' or 'seifert'")
    if getattr(args, "knot", None):
        B, delta = _knot(args.knot)
        return delta, {"knot": args.knot, "seifert": B}
    raise errors.InputError("give --knot NAME or --companion FILE")


# subcommands

def cmd_rep_verify(args):
    rep = resolve_rep(args.rep, args.m)
    cert = verify_p_group(rep, args.p, args.closure_budget)
    dg = det_group(rep)
    result = {"is_p_group": cert.is_p_group, "certificate": cert.to_json(), "det_group": dg.to_json(),
              "determinants": [g.det().to_json() for g in rep.generators]}
    return make_report("rep verify", {"rep": rep.to_json(), "p": args.p}, result)


def cmd_rep_eigenvalues(args):
    rep = resolve_rep(args.rep, args.m)
    word = FreeWord.parse(args.word)
    M = evaluate_word(rep, word)
    zs = eigenvalues(M)
    result = {"matrix": M.to_json(), "eigenvalues": [z.to_json() for z in zs],
              "eigenvalue_turns": [str(z.turn) for z in zs]}
    return make_report("rep eigenvalues", {"rep": rep.to_json(), "word": str(word)}, result)


def _torsion_inputs(args):
    A = resolve_seifert(args)
    rep = resolve_rep(args.rep, A.m)
    psi = resolve_psi(args.psi, A.m)
    return A, rep, psi


def _torsion_result(A, rep, psi):
    rank = rank_of_link(A, rep, psi)
    t = boundary_torsion(A, rep, psi)
    return t, {"determinant": t.determinant.to_json(), "rank": rank, "expected_rank": rep.k * (A.m - 1),
               **t.to_json()}


def cmd_torsion_boundary(args):
    A, rep, psi = _torsion_inputs(args)
    _, result = _torsion_result(A, rep, psi)
    inputs = {"seifert": A.to_json(), "rep": rep.to_json(), "psi": psi.to_json()}
    return make_report("torsion boundary", inputs, result)


def cmd_torsion_unlink(args):
    rep = resolve_rep(args.rep, args.m)
    psi = resolve_psi(args.psi, args.m)
    t = unlink_torsion(args.m, rep, psi)
    inputs = {"m": args.m, "rep": rep.to_json(), "psi": psi.to_json()}
    return make_report("torsion unlink", inputs, t.to_json())


def cmd_torsion_slice_check(args):
    A, rep, psi = _torsion_inputs(args)
    t, result = _torsion_result(A, rep, psi)
    result["check"] = slice_consequence_check(t, rep, psi, A.m).to_json()
    inputs = {"seifert": A.to_json(), "rep": rep.to_json(), "psi": psi.to_json()}
    return make_report("torsion slice-check", inputs, result)


def cmd_alexander(args):
    if args.seifert_file:
        data = _read_json(args.seifert_file)
        B = data["seifert"] if isinstance(data, dict) else data
        inputs = {"seifert": B}
    else:
        B, _ = _knot(args.knot)
        inputs = {"knot": args.knot, "seifert": B}
    delta = alexander_from_seifert(B)
    result = {"coefficients": list(delta.coeffs), "display": str(delta)}
    return make_report("alexander from-seifert", inputs, result)


def cmd_satellite_factor(args):
    rep = resolve_rep(args.rep, 2)
    delta, companion = resolve_companion(args)
    psi = resolve_psi(args.psi, rep.m) if args.psi else None
    f = satellite_factor(rep, args.word, delta, psi)
    inputs = {"rep": rep.to_json(), "alexander": list(delta.coeffs), "axis": str(f.axis),
              "companion": companion}
    return make_report("satellite factor", inputs, f.to_json())


def cmd_satellite_bing(args):
    rep = resolve_rep(args.rep, 2)
    delta, companion = resolve_companion(args)
    v = bing_double_obstruction(delta, rep, args.p)
    inputs = {"rep": rep.to_json(), "alexander": list(delta.coeffs), "axis": "[x1,x2]", "p": args.p,
              "companion": companion}
    return make_report("satellite bing", inputs, v.to_json())


def cmd_norm_test(args):
    try:
        x = Fraction(args.value)
    except (ValueError, ZeroDivisionError) as exc:
        raise errors.InputError(f"not a rational number: {args.value}") from exc
    if x == 0:
        raise errors.InputError("value must be nonzero")
    units = (1, -1) if args.real_units == "pm1" else (1,)
    v = rational_norm_class(x, units)
    return make_report("norm test", {"value": str(x), "real_units": list(units)}, v.to_json())


def cmd_report_verify(args):
    report = _read_json(args.file)
    try:
        checks = verify_report(report)
    except ReportCheckFailed as exc:
        raise errors.CertificateRejected(f"certificate check failed: {exc}") from exc
    return make_report("report verify", {"file": str(Path(args.file).name)}, {"ok": True, "checks": checks})


def build_parser():
    parser = argparse.ArgumentParser(prog="slicetorsion", description=__doc__.strip().splitlines()[0])
    parser.add_argument("-o", "--output", help="also write the report to this file")
    top = parser.add_subparsers(dest="group", required=True)

    rep = top.add_parser("rep", help="monomial representations").add_subparsers(dest="action", required=True)
    p = rep.add_parser("verify", help="check that a rep factors through a p-group")
    p.add_argument("--rep", required=True)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--m", type=int, default=2, help="generator count for built-in trivial reps")
    p.add_argument("--closure-budget", type=int, default=DEFAULT_CLOSURE_BUDGET)
    p.set_defaults(func=cmd_rep_verify)
    p = rep.add_parser("eigenvalues", help="eigenvalues of the image of a word")
    p.add_argument("--rep", required=True)
    p.add_argument("--word", default="[x1,x2]")
    p.add_argument("--m", type=int, default=2)
    p.set_defaults(func=cmd_rep_eigenvalues)

    tor = top.add_parser("torsion", help="boundary link torsion").add_subparsers(dest="action", required=True)
    for name, func in (("boundary", cmd_torsion_boundary), ("slice-check", cmd_torsion_slice_check)):
        p = tor.add_parser(name)
        p.add_argument("--seifert", help="boundary Seifert matrix JSON")
        p.add_argument("--knot", help="built-in knot (unknot, trefoil, fig8)")
        p.add_argument("--rep", default="trivial1")
        p.add_argument("--psi", required=True)
        p.set_defaults(func=func)
    p = tor.add_parser("unlink")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rep", default="trivial1")
    p.add_argument("--psi", required=True)
    p.set_defaults(func=cmd_torsion_unlink)

    alex = top.add_parser("alexander").add_subparsers(dest="action", required=True)
    p = alex.add_parser("from-seifert")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--knot")
    g.add_argument("--seifert", dest="seifert_file", help='JSON {"seifert": [[...]]}')
    p.set_defaults(func=cmd_alexander)

    sat = top.add_parser("satellite").add_subparsers(dest="action", required=True)
    for name, func in (("factor", cmd_satellite_factor), ("bing", cmd_satellite_bing)):
        p = sat.add_parser(name)
        p.add_argument("--rep", required=True)
        p.add_argument("--knot")
        p.add_argument("--companion", help='JSON {"alexander": [...]} or {"seifert": [[...]]}')
        if name == "factor":
            p.add_argument("--word", default="[x1,x2]")
            p.add_argument("--psi")
        else:
            p.add_argument("--p", type=int, default=2)
        p.set_defaults(func=func)

    norm = top.add_parser("norm").add_subparsers(dest="action", required=True)
    p = norm.add_parser("test", help="is x = +-q*conj(q) with q in Q(zeta_8)?")
    p.add_argument("value")
    p.add_argument("--real-units", choices=["pm1", "1"], default="pm1")
    p.set_defaults(func=cmd_norm_test)

    rpt = top.add_parser("report").add_subparsers(dest="action", required=True)
    p = rpt.add_parser("verify", help="re-verify the certificates in a saved report")
    p.add_argument("file")
    p.set_defaults(func=cmd_report_verify)
    return parser


_EXIT = {
    errors.SearchBudgetExceeded: 3,
    errors.ClosureBudgetExceeded: 3,
    errors.FactorizationBudgetExceeded: 3,
    errors.CrossCheckMismatch: 4,
    errors.InternalDivisibilityFailure: 4,
}


def _fail(code, message, status):
    sys.stdout.write(dumps({"schema": 1, "error": {"code": code, "message": message}}))
    return status


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except errors.TorsionError as exc:
        code = next((c for cls, c in _EXIT.items() if isinstance(exc, cls)), 2)
        return _fail(exc.code, str(exc), code)
    except (KeyError, TypeError, ValueError) as exc:
        return _fail(errors.InputError.code, f"{type(exc).__name__}: {exc}", 2)
    text = dumps(report)
    sys.stdout.write(text)
    if args.output:
        Path(args.output).write_text(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
