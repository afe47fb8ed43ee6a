"""Command-line interface.

Every verb prints one JSON report ``{"verb", "status", "data", "witness"}``.
Exit status: 0 computed and the property holds, 1 computed and it fails,
2 malformed input or a computation that cannot be carried out.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import gallery
from .deformation import (
    CochainSpace, DeformedFamily, MultiDerivation, Slice, cocycle_check, coboundary_check, cohomology_dims, deform, delta,
    family_cocycle, is_lie_family, nijenhuis_cochain, nijenhuis_torsion, triviality_check,
)
from .errors import AlgebroidError, WireFormatError
from .jet import jet_evaluate, mc_check
from .model import LieAlgebroid, bracket, validate
from .multivector import schouten
from .wire import (
    algebroid_from_wire, algebroid_to_wire, cochain_from_wire, cochain_to_wire, detect_kind, dumps,
    endomorphism_from_wire, endomorphism_to_wire, jet_section_from_wire, jet_section_to_wire,
    multivector_from_wire, multivector_to_wire, section_from_wire, section_to_wire, slice_from_wire,
    vector_field_to_wire,
)

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise WireFormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _algebroid(args) -> LieAlgebroid:
    if args.example and args.input:
        raise UsageError("give either --example or --input, not both")
    if args.example:
        try:
            A, _ = gallery.load_example(args.example)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        return A
    if args.input:
        return algebroid_from_wire(_load_json(args.input))
    raise UsageError("an algebroid is required (--example NAME or --input PATH)")


def _slice(args, A: LieAlgebroid) -> Slice | None:
    if args.slice_degree is None:
        if A.base_dim:
            raise UsageError("--slice-degree is required over a positive-dimensional base")
        return None
    return Slice(args.slice_degree)


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _cochain(args, A: LieAlgebroid) -> MultiDerivation:
    return cochain_from_wire(_load_json(_need(args.cochain, "--cochain")), A)


def _report(verb: str, ok: bool | None, data: Any, witness: Any = None) -> tuple[dict, int]:
    status = "ok" if ok or ok is None else "fail"
    return {"verb": verb, "status": status, "data": data, "witness": witness}, EXIT_OK if status == "ok" else EXIT_FAIL


def _sections_table(table) -> list:
    return [{"idx": list(i), "value": section_to_wire(v)} for i, v in sorted(table.items())]


def _fields_table(table) -> list:
    return [{"idx": list(i) if isinstance(i, tuple) else [i], "value": vector_field_to_wire(v)}
            for i, v in sorted(table.items())]


# -- verbs -----------------------------------------------------------------

def cmd_validate(args):
    A = _algebroid(args)
    rep = validate(A)
    failing = {c.axiom: [w.to_dict() for w in c.witnesses] for c in rep.checks if not c.passed}
    return _report("validate", rep.ok, rep.to_dict(), failing or None)


def cmd_bracket(args):
    A = _algebroid(args)
    X = section_from_wire(_load_json(_need(args.left, "--left")), A)
    Y = section_from_wire(_load_json(_need(args.right, "--right")), A)
    return _report("bracket", None, {"bracket": section_to_wire(bracket(A, X, Y))})


def cmd_cohomology(args):
    A = _algebroid(args)
    dims = cohomology_dims(A, args.kmax, _slice(args, A), jobs=args.jobs)
    return _report("cohomology", None, {"dims": [d.dim_H for d in dims], "table": [d.to_dict() for d in dims]})


def cmd_check_cocycle(args):
    A = _algebroid(args)
    D = _cochain(args, A)
    dD = delta(A, D)
    return _report("check-cocycle", dD.is_zero, {"cocycle": dD.is_zero}, None if dD.is_zero else cochain_to_wire(dD))


def cmd_find_primitive(args):
    A = _algebroid(args)
    D = _cochain(args, A)
    slc = _slice(args, A)
    _, esc = CochainSpace(A, D.k, slc).coordinates(D)
    if esc is not None:
        kind, idx, comp, e, c = esc
        raise UsageError(f"cochain is outside the slice: {kind}{list(idx)}[{comp}] {c}*x^{list(e)}")
    T = coboundary_check(A, D, slc)
    if T is None:
        witness = None if cocycle_check(A, D) else {"delta": cochain_to_wire(delta(A, D))}
        return _report("find-primitive", False, {"exact": False}, witness)
    return _report("find-primitive", True, {"exact": True, "primitive": cochain_to_wire(T)})


def _family_report(F: DeformedFamily) -> dict:
    rep = is_lie_family(F)
    powers = sorted(set(rep.jacobi) | set(rep.anchor))
    return {
        "ok": rep.ok,
        "skew_ok": rep.skew_ok,
        "residuals": [{"power": p, "jacobi": _sections_table(rep.jacobi.get(p, {})),
                       "anchor": _fields_table(rep.anchor.get(p, {}))} for p in powers],
    }


def cmd_deform(args):
    A = _algebroid(args)
    F = deform(A, _cochain(args, A))
    return _report("deform", None, {"family": algebroid_to_wire(F.algebroid)})


def cmd_family_check(args):
    A = _algebroid(args)
    if args.family:
        fam = algebroid_from_wire(_load_json(args.family))
        if not fam.ring.has_t or (fam.base_dim, fam.rank) != (A.base_dim, A.rank):
            raise WireFormatError("family must be t_extended with the base algebroid's shape")
        F = DeformedFamily(fam, A)
    else:
        F = deform(A, _cochain(args, A))
    data = _family_report(F)
    data["cocycle"] = cochain_to_wire(family_cocycle(F))
    return _report("family-check", data["ok"], data, None if data["ok"] else data["residuals"])


def cmd_nijenhuis(args):
    A = _algebroid(args)
    N = endomorphism_from_wire(_load_json(_need(args.endomorphism, "--endomorphism")), A)
    T = nijenhuis_torsion(A, N)
    triv = triviality_check(A, N)
    data = {
        "cochain": cochain_to_wire(nijenhuis_cochain(A, N)),
        "torsion_free": triv.torsion_free,
        "triviality_identity": triv.identity_holds,
    }
    ok = triv.torsion_free and triv.identity_holds
    witness = None if ok else {"torsion": _sections_table(T),
                               "bracket_residual": _sections_table(triv.bracket_residual),
                               "anchor_residual": _fields_table(triv.anchor_residual)}
    return _report("nijenhuis", ok, data, witness)


def cmd_mc_check(args):
    from .jet import JetCochain
    A = _algebroid(args)
    rep = mc_check(A, JetCochain(_cochain(args, A)))
    data = {"cocycle_residual_zero": rep.cocycle_ok, "quadratic_residual_zero": rep.quadratic_ok}
    witness = None
    if not rep.ok:
        witness = {"cocycle": cochain_to_wire(rep.cocycle),
                   "quadratic": {"triples": _sections_table(rep.quadratic.triples),
                                 "anchor": _fields_table(rep.quadratic.anchor)}}
    return _report("mc-check", rep.ok, data, witness)


def cmd_schouten(args):
    P = multivector_from_wire(_load_json(_need(args.p, "--p")))
    Q = multivector_from_wire(_load_json(_need(args.q, "--q")))
    if P.n != Q.n:
        raise WireFormatError("multivectors live on different bases")
    R = schouten(P, Q)
    return _report("schouten", None, {"bracket": multivector_to_wire(R), "zero": R.is_zero()})


def cmd_jet_eval(args):
    from .jet import JetCochain
    A = _algebroid(args)
    d = JetCochain(_cochain(args, A))
    doc = _load_json(_need(args.jets, "--jets"))
    if not isinstance(doc, list):
        raise WireFormatError("--jets must hold a list of jet sections")
    mus = [jet_section_from_wire(m, A) for m in doc]
    return _report("jet-eval", None, {"value": section_to_wire(jet_evaluate(A, d, *mus))})


def cmd_example(args):
    action = args.action
    if action == "list":
        data = [{"name": n, "description": gallery.get_entry(n).description} for n in gallery.list_examples()]
        return _report("example", None, {"examples": data})
    name = _need(args.name, "example NAME")
    try:
        entry = gallery.get_entry(name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    if action == "show":
        A = entry.build()
        exps = [{"name": e.name, "expected": e.expected, "provenance": e.provenance} for e in entry.expectations]
        return _report("example", None, {"name": name, "description": entry.description,
                                         "algebroid": algebroid_to_wire(A), "expectations": exps})
    alt = algebroid_from_wire(_load_json(args.input)) if args.input else None
    rep = gallery.run_expectations(name, alt)
    failing = [r.to_dict() for r in rep.results if not r.passed]
    return _report("example", rep.ok, rep.to_dict(), failing or None)


def _canonical(doc: Any, args) -> Any:
    kind = detect_kind(doc)
    if kind == "algebroid":
        return algebroid_to_wire(algebroid_from_wire(doc))
    if kind == "multivector":
        return multivector_to_wire(multivector_from_wire(doc))
    if kind == "slice":
        return slice_from_wire(doc).to_wire()
    A = _algebroid(args)
    if kind in ("cochain", "jet"):
        return cochain_to_wire(cochain_from_wire(doc, A), jet=kind == "jet")
    if kind == "jet_section":
        return jet_section_to_wire(jet_section_from_wire(doc, A))
    return endomorphism_to_wire(endomorphism_from_wire(doc, A))


def cmd_convert(args):
    path = _need(args.file, "convert FILE")
    doc = _load_json(path)
    kind = detect_kind(doc)
    if kind not in ("algebroid", "multivector", "slice") and not (args.example or args.input):
        raise UsageError(f"converting a {kind} needs its algebroid (--example or --input)")
    return _report("convert", None, {"kind": kind, "document": _canonical(doc, args)})


# -- parser ----------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--example", metavar="NAME", help="gallery algebroid")
    p.add_argument("--input", metavar="PATH", help="algebroid in the canonical wire form")
    p.add_argument("--slice-degree", type=int, metavar="D", help="max polynomial degree of the slice")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes")
    p.add_argument("--pretty", action="store_true", help="human-readable output")
    p.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="algebroids", description="Exact computations with Lie algebroids.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _common(p)
        p.set_defaults(func=fn)
        return p

    p = add("validate", cmd_validate, "check the Lie algebroid axioms")
    p.add_argument("path", nargs="?", help="algebroid file (same as --input)")
    p = add("bracket", cmd_bracket, "bracket of two sections")
    p.add_argument("--left", metavar="PATH")
    p.add_argument("--right", metavar="PATH")
    p = add("cohomology", cmd_cohomology, "deformation cohomology dimensions on a slice")
    p.add_argument("--kmax", type=int, default=2)
    for name, fn, h in (("check-cocycle", cmd_check_cocycle, "is the cochain closed"),
                        ("find-primitive", cmd_find_primitive, "solve delta T = D in the slice"),
                        ("deform", cmd_deform, "the family [.,.] + t D"),
                        ("mc-check", cmd_mc_check, "Maurer-Cartan residuals of a 2-cochain")):
        p = add(name, fn, h)
        p.add_argument("--cochain", metavar="PATH")
    p = add("family-check", cmd_family_check, "Jacobi residuals of a family by powers of t")
    p.add_argument("--cochain", metavar="PATH")
    p.add_argument("--family", metavar="PATH", help="t-extended algebroid over the base algebroid")
    p = add("nijenhuis", cmd_nijenhuis, "deformation and torsion of a bundle endomorphism")
    p.add_argument("--endomorphism", metavar="PATH")
    p = add("schouten", cmd_schouten, "Schouten bracket of two multivectors")
    p.add_argument("--p", metavar="PATH")
    p.add_argument("--q", metavar="PATH")
    p = add("jet-eval", cmd_jet_eval, "evaluate a jet cochain on jet sections")
    p.add_argument("--cochain", metavar="PATH")
    p.add_argument("--jets", metavar="PATH")
    p = add("example", cmd_example, "gallery: list, show NAME, run NAME")
    p.add_argument("action", choices=("list", "show", "run"))
    p.add_argument("name", nargs="?")
    p = add("convert", cmd_convert, "canonicalize a wire-form document")
    p.add_argument("file", nargs="?")
    return parser


def render_pretty(report: dict) -> str:
    lines = [f"{report['verb']}: {report['status']}"]
    data = report.get("data")
    if isinstance(data, dict) and "table" in data:
        lines.append(f"{'k':>3} {'dim C':>7} {'dim Z':>7} {'dim B':>7} {'dim H':>7}")
        for row in data["table"]:
            lines.append(f"{row['k']:>3} {row['dim_C']:>7} {row['dim_Z']:>7} {row['dim_B']:>7} {row['dim_H']:>7}")
    elif isinstance(data, dict) and "results" in data:
        for r in data["results"]:
            mark = "pass" if r["passed"] else "FAIL"
            lines.append(f"  [{mark}] {r['name']} ({r['provenance']})")
    elif isinstance(data, dict) and "checks" in data:
        for c in data["checks"]:
            lines.append(f"  [{'pass' if c['passed'] else 'FAIL'}] {c['axiom']}")
    else:
        lines.append(json.dumps(data, sort_keys=True, indent=2))
    if report.get("witness") is not None:
        lines.append("witness:")
        lines.append(json.dumps(report["witness"], sort_keys=True, indent=2))
    return "\n".join(lines) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "path", None):
        if args.input:
            parser.error("give the algebroid either positionally or with --input")
        args.input = args.path
    try:
        report, code = args.func(args)
    except (UsageError, AlgebroidError, ValueError) as exc:
        report, code = {"verb": args.verb, "status": "error", "data": {"error": str(exc)},
                        "witness": None}, EXIT_ERROR
    if args.verb == "convert" and code == EXIT_OK:
        # bare document, so that convert(convert(f)) == convert(f)
        text = dumps(report["data"]["document"])
    else:
        text = render_pretty(report) if args.pretty else dumps(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
