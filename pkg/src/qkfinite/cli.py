"""Command-line front end. Every command prints one JSON document.

Exit codes: 0 verified, 1 falsified (witness in the report), 2 usage or
input error, 3 the expected E8 counterexample was confirmed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from importlib.metadata import PackageNotFoundError, version

import jsonschema

from . import acceptance
from .degree_enumerator import LiftMap, ProductSpec, Variant, admissible_degrees, degree_bound_report, first_nonzero_admissible
from .ineq_verifier import certificate, e8_vertex_scan, table1
from .order_propagation import (
    CertificateError,
    EffLattice,
    FundamentalSolution,
    RegularityError,
    construct_certificate,
    difference_identity,
    forward_check,
    generate_synthetic_T,
    propagate_lower_bounds,
    shift_connection,
    synthetic_certificate,
    verify_induction,
)
from .qseries import mat_from_json, verify_lemma_bound_A1
from .root_system import RootSystemType, build, e8_fork

OK, FALSIFIED, USAGE, EXPECTED_E8 = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- schemas

_INT_LIST = {"type": "array", "items": {"type": "integer"}}
_RATIONAL = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}]}
_LATTICE = {
    "type": "object",
    "required": ["s", "p"],
    "properties": {"s": {"type": "integer", "minimum": 1},
                   "p": {"type": "array", "minItems": 1, "items": {**_INT_LIST, "items": {"type": "integer", "minimum": 0}}}},
}
_RQ = {"oneOf": [_RATIONAL, {"type": "object", "required": ["num"],
                             "properties": {"num": {"type": "array", "items": _RATIONAL},
                                            "den": {"type": "array", "items": _RATIONAL, "minItems": 1}}}]}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _RQ}}

SCHEMAS = {
    "enumerate-degrees": {
        "type": "object",
        "required": ["family", "indices"],
        "properties": {
            "family": {"type": "string"},
            "rank": {"type": "integer", "minimum": 1},
            "indices": {**_INT_LIST, "minItems": 1},
            "variant": {"enum": [v.value for v in Variant]},
            "parabolic": _INT_LIST,
            "lift": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": _INT_LIST}},
        },
    },
    "propagate": {
        "type": "object",
        "required": ["lattice", "F", "C", "box"],
        "properties": {"lattice": _LATTICE, "F": {"type": "array", "minItems": 1, "items": _INT_LIST},
                       "C": _RATIONAL, "box": _INT_LIST},
    },
    "shift-connection": {
        "type": "object",
        "required": ["lattice", "T", "P", "p"],
        "properties": {
            "lattice": _LATTICE,
            "T": {"type": "object", "required": ["trunc", "coeffs"],
                  "properties": {"trunc": _INT_LIST, "dim": {"type": "integer"},
                                 "coeffs": {"type": "object", "additionalProperties": _MATRIX}}},
            "P": _MATRIX,
            "p": _INT_LIST,
        },
    },
}
SCHEMAS["degree-bound"] = SCHEMAS["enumerate-degrees"]
SCHEMAS["certify"] = SCHEMAS["propagate"]


def _json_path(err: jsonschema.ValidationError) -> str:
    path = "$"
    for part in err.absolute_path:
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def _load_input(args, command: str) -> dict | None:
    if not args.input:
        return None
    try:
        with open(args.input) if args.input != "-" else sys.stdin as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read input {args.input}: {exc}") from None
    schema = SCHEMAS.get(command)
    if schema is not None:
        errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(doc), key=lambda e: list(e.absolute_path))
        if errors:
            e = errors[0]
            raise UsageError(f"schema violation at {_json_path(e)}: {e.message}")
    return doc


def _encode(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return "inf" if obj == math.inf else obj
    if isinstance(obj, (tuple, set, frozenset)):
        return list(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


# ---------------------------------------------------------------- helpers

def _system_type(args) -> RootSystemType:
    if not args.family:
        raise UsageError("--family is required")
    try:
        return RootSystemType.parse(args.family, args.rank)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _int_list(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def _rational(x) -> Fraction:
    return Fraction(str(x).replace(" ", ""))


# ---------------------------------------------------------------- commands

def cmd_table1(args, _doc):
    rows = table1(args.rank or 8)
    ok = all(r["match"] for r in rows)
    return (OK if ok else FALSIFIED), {"rows": rows, "all_match": ok}


def cmd_verify_ineq(args, _doc):
    t = _system_type(args)
    if args.index is None:
        raise UsageError("--index is required")
    system = build(t)
    try:
        report = certificate(system, args.index, args.radius)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if report["verdict"]:
        return OK, report
    w = first_nonzero_admissible(ProductSpec(system, (args.index,)))
    report["witness"] = list(w) if w else None
    if str(t) == "E8" and report["det_2AQ"] < 0:
        report["expected_falsification"] = True
        return EXPECTED_E8, report
    return FALSIFIED, report


def cmd_e8_scan(args, _doc):
    scan = e8_vertex_scan()
    fork = e8_fork()
    report = {"fork": fork, "vertices": scan,
              "negative": [r["i"] for r in scan if r["sign"] < 0],
              "fork_det_2AQ": scan[fork - 1]["det_2AQ"]}
    w = first_nonzero_admissible(ProductSpec(build("E8"), (fork,)))
    report["witness"] = list(w) if w else None
    if args.radius is not None:
        report.update(certificate("E8", fork, args.radius))
    return (EXPECTED_E8 if report["fork_det_2AQ"] < 0 else OK), report


def _spec_from(args, doc):
    if doc is not None:
        try:
            t = RootSystemType.parse(doc["family"], doc.get("rank"))
        except ValueError as exc:
            raise UsageError(f"$.family: {exc}") from None
        indices, variant = tuple(doc["indices"]), doc.get("variant", "GENERAL")
        lift = LiftMap.from_pairs(doc["lift"], doc.get("parabolic", ())) if "lift" in doc else None
    else:
        t = _system_type(args)
        if not args.indices:
            raise UsageError("--indices is required")
        indices, variant, lift = _int_list(args.indices, "--indices"), args.variant, None
    try:
        return ProductSpec(build(t), indices, Variant(variant)), lift
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_enumerate_degrees(args, doc):
    spec, lift = _spec_from(args, doc)
    return OK, admissible_degrees(spec, lift).to_json()


def cmd_degree_bound(args, doc):
    spec, lift = _spec_from(args, doc)
    return OK, degree_bound_report(spec, lift)


def cmd_verify_j_a1(args, _doc):
    try:
        rep = verify_lemma_bound_A1(args.dmax or 10)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return (OK if rep["holds"] else FALSIFIED), rep


def _propagation_input(doc):
    if doc is None:
        raise UsageError("--input is required")
    try:
        lattice = EffLattice.from_json(doc["lattice"])
        return lattice, [tuple(f) for f in doc["F"]], _rational(doc["C"]), tuple(doc["box"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_propagate(args, doc):
    lattice, F, C, box = _propagation_input(doc)
    try:
        table = propagate_lower_bounds(F, C, lattice, box)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return OK, table.to_json()


def cmd_certify(args, doc):
    lattice, F, C, box = _propagation_input(doc)
    try:
        cert = construct_certificate(F, C, lattice, box)
    except CertificateError as exc:
        return FALSIFIED, {"verified": False, "degree": list(exc.degree), "link": exc.link}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = verify_induction(cert, F, C, lattice, box)
    return OK, {"verified": True, "certificate": cert.to_json(), "induction": rep}


def cmd_shift_connection(args, doc):
    if doc is None:
        # seeded synthetic instance
        s = len(_int_list(args.trunc, "--trunc")) if args.trunc else 1
        trunc = _int_list(args.trunc, "--trunc") if args.trunc else None
        lattice = EffLattice.standard(s)
        T = generate_synthetic_T(lattice, 2, seed=args.seed or 0, trunc=trunc)
        cert = synthetic_certificate(T.generators)
        rep = forward_check(T, cert)
        rep["certificate"] = cert.to_json()
        rep["generators"] = [[list(f), g] for f, g in T.generators]
        return (OK if rep["ok"] else FALSIFIED), rep
    try:
        lattice = EffLattice.from_json(doc["lattice"])
        T = FundamentalSolution.from_json({"lattice": doc["lattice"], "T": doc["T"]})
        P = mat_from_json(doc["P"])
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    if len(doc["p"]) != lattice.s:
        raise UsageError(f"$.p: expected {lattice.s} entries")
    try:
        conn = shift_connection(T, P, doc["p"])
    except RegularityError as exc:
        return FALSIFIED, {"regular": False, "degree": list(exc.degree), "message": str(exc)}
    except ZeroDivisionError as exc:
        return FALSIFIED, {"regular": None, "message": str(exc)}
    rep = conn.to_json()
    rep["difference_identity"] = difference_identity(T, conn)
    return OK, rep


def cmd_selftest(args, _doc):
    results = acceptance.run_all(echo=lambda line: print(line, file=sys.stderr))
    report = {"criteria": [r.to_json() for r in results], "all_passed": all(r.ok for r in results)}
    timings = {str(r.number): round(r.elapsed, 3) for r in results}
    return (OK if report["all_passed"] else FALSIFIED), report, {"elapsed_seconds": timings}


COMMANDS = {
    "table1": (cmd_table1, "Gram determinants of every simple type against the table"),
    "verify-ineq": (cmd_verify_ineq, "certify positivity of the bordered form for one (type, i)"),
    "e8-scan": (cmd_e8_scan, "bordered determinants at all E8 vertices"),
    "enumerate-degrees": (cmd_enumerate_degrees, "admissible Novikov degrees of a line-bundle product"),
    "degree-bound": (cmd_degree_bound, "admissible degrees plus the largest total degree"),
    "verify-j-a1": (cmd_verify_j_a1, "orders of the projective-line J-function coefficients"),
    "propagate": (cmd_propagate, "lower bounds from the order recursion"),
    "certify": (cmd_certify, "quadratic growth certificate with verified induction"),
    "shift-connection": (cmd_shift_connection, "q-shift connection of a given or seeded fundamental solution"),
    "selftest": (cmd_selftest, "run every acceptance check"),
}


def _tool_version() -> str:
    try:
        return version("qkfinite")
    except PackageNotFoundError:
        return "unknown"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qkfinite", description="Exact checks on root lattices and q-difference data.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--family", help="root system type, e.g. E8, or a family letter with --rank")
        p.add_argument("--rank", type=int)
        p.add_argument("--index", type=int, help="1-based Bourbaki index")
        p.add_argument("--indices", help="comma-separated 1-based indices, repeats allowed")
        p.add_argument("--variant", default="GENERAL", choices=[v.value for v in Variant])
        p.add_argument("--radius", type=int, help="brute-force box [0, radius]^rank")
        p.add_argument("--dmax", type=int)
        p.add_argument("--trunc", help="comma-separated truncation box")
        p.add_argument("--seed", type=int)
        p.add_argument("--input", help="JSON input file ('-' for stdin)")
        p.add_argument("--output", help="write the JSON report here instead of stdout")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    func = COMMANDS[args.command][0]
    header = {"tool": "qkfinite", "version": _tool_version(), "command": args.command,
              "arguments": {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "output") and v is not None}}
    try:
        doc = _load_input(args, args.command)
        out = func(args, doc)
    except UsageError as exc:
        print(json.dumps({"header": header, "error": str(exc)}, indent=2, sort_keys=True), file=sys.stderr)
        return USAGE
    code, report = out[0], out[1]
    if len(out) > 2:
        header.update(out[2])
    header["exit_code"] = code
    text = json.dumps(_clean({"header": header, "report": report}), indent=2, sort_keys=True, default=_encode)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code
