"""Command-line front end.

Exit codes: 0 = all checks passed, 1 = a mathematical check failed,
2 = usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import List, Optional

from . import serialize
from .actions import GLElement, GMinusElement, GPlusElement, act_r, act_s, conjugate, \
    exp_act_r, exp_act_s
from .corpus import diag_seed, random_orbit_tower
from .kp import check_action_sign, verify_axioms, verify_wave_dm00, wave_from_a, wave_tower
from .loopspace import check_factorization
from .normalize import normalize
from .rng import SplitMix64
from .series import DomainError, ShapeError
from .tower import Report, Tower, WindowError, j_series, verify_commutativity, \
    verify_flat, verify_master


class CliError(Exception):
    """Usage or I/O problem; maps to exit code 2."""


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _write_json(path: str, obj) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=1, sort_keys=False)
            fh.write("\n")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}") from exc


def _load_tower(path: str) -> Tower:
    try:
        return serialize.tower_from_json(_read_json(path))
    except serialize.FormatError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _emit_report(name: str, report: Report, as_json: bool, started: float) -> int:
    payload = {
        "command": name,
        "checks": serialize.report_to_json(report),
        "passed": report.passed,
        "elapsed_seconds": round(time.monotonic() - started, 6),
    }
    if as_json:
        print(json.dumps(payload, indent=1))
    else:
        for check in report.checks:
            status = "pass" if check.ok else "FAIL"
            where = f" at {check.cell}" if check.cell is not None else ""
            print(f"[{status}] {check.name}{where}")
        print(f"{name}: {'all checks passed' if report.passed else 'CHECKS FAILED'}")
    return 0 if report.passed else 1


def cmd_seed(args) -> int:
    if args.kind == "diag":
        tower = diag_seed(args.m, args.vars, args.deg, args.window)
        _write_json(args.out, serialize.tower_to_json(tower))
        return 0
    rng = SplitMix64(args.rng)
    tower, factors = random_orbit_tower(rng, args.m, args.vars, args.deg,
                                        args.window, max_l=args.max_l)
    _write_json(args.out, serialize.tower_to_json(tower))
    provenance = {
        "kind": "random-orbit",
        "rng": args.rng,
        "params": {"m": args.m, "vars": args.vars, "deg": args.deg,
                   "window": args.window, "max_l": args.max_l},
        "factors": {
            "gl": serialize.element_to_json(factors.gl),
            "r": serialize.element_to_json(factors.r),
            "s": serialize.element_to_json(factors.s),
        },
    }
    _write_json(args.out + ".provenance.json", provenance)
    return 0


def cmd_verify(args) -> int:
    started = time.monotonic()
    tower = _load_tower(args.tower)
    run_all = args.all or not (args.master or args.commutativity or args.flat
                               or args.loopspace)
    report = Report()
    if args.master or run_all:
        sub = verify_master(tower)
        for check in sub.checks:
            report.checks.append(check)
    if args.commutativity or run_all:
        report.record("commutativity of dM[0,0]", None,
                      verify_commutativity(tower[(0, 0)]))
    if args.flat or run_all:
        report.record("flat sections", None,
                      verify_flat(j_series(tower), tower[(0, 0)]))
    if args.loopspace or run_all:
        sub = check_factorization(tower)
        report.record("loop-space factorization", None, sub.passed,
                      "" if sub.passed else f"{len(sub.failures())} failing checks")
    return _emit_report("verify", report, args.json, started)


def cmd_act(args) -> int:
    tower = _load_tower(args.tower)
    try:
        element = serialize.element_from_json(_read_json(args.element))
    except serialize.FormatError as exc:
        raise CliError(f"{args.element}: {exc}") from exc
    if isinstance(element, GLElement):
        out = conjugate(tower, element)
    elif isinstance(element, GPlusElement):
        out = exp_act_r(tower, element) if args.exp else act_r(tower, element)
    elif isinstance(element, GMinusElement):
        out = exp_act_s(tower, element) if args.exp else act_s(tower, element)
    else:  # pragma: no cover - element_from_json is exhaustive
        raise CliError("unsupported element kind")
    _write_json(args.out, serialize.tower_to_json(out))
    return 0


def cmd_normalize(args) -> int:
    started = time.monotonic()
    tower = _load_tower(args.tower)
    gl = None
    if args.gl:
        try:
            gl = serialize.element_from_json(_read_json(args.gl))
        except serialize.FormatError as exc:
            raise CliError(f"{args.gl}: {exc}") from exc
        if not isinstance(gl, GLElement):
            raise CliError("--gl must point to a gl element")
    result = normalize(tower, gl)
    _write_json(args.out, serialize.normalization_result_to_json(result))
    if args.json:
        print(json.dumps({"command": "normalize",
                          "recovered_canonical_form": result.recovered_canonical_form,
                          "elapsed_seconds": round(time.monotonic() - started, 6)}))
    else:
        print(f"recovered canonical form: {str(result.recovered_canonical_form).lower()}")
    return 0 if result.recovered_canonical_form else 1


def cmd_kp(args) -> int:
    started = time.monotonic()
    try:
        a = serialize.a_series_from_json(_read_json(args.a))
    except serialize.FormatError as exc:
        raise CliError(f"{args.a}: {exc}") from exc
    psi_plus, psi_minus = wave_from_a(a, a.m, args.deg, args.window + 1)
    tower = wave_tower(psi_plus, psi_minus, args.window)
    report = Report()
    axioms = verify_axioms(psi_plus, psi_minus)
    report.record("wave axioms", None, axioms.passed,
                  "" if axioms.passed else f"{len(axioms.failures())} failing checks")
    master = verify_master(tower)
    report.record("master equations on wave tower", None, master.passed)
    report.record("dM[0,0] from leading wave coefficients", None,
                  verify_wave_dm00(psi_plus, psi_minus, tower))
    if args.check_sign is not None:
        e12 = [[0] * a.m for _ in range(a.m)]
        e12[0][a.m - 1] = 1
        ok = check_action_sign(a, args.check_sign, e12, args.window, args.deg)
        report.record(f"action sign at l={args.check_sign}", None, ok)
    if args.out:
        _write_json(args.out, serialize.tower_to_json(tower))
    return _emit_report("kp", report, args.json, started)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commtower",
        description="Exact computations with towers of matrix potentials")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seed", help="write a tower file")
    p.add_argument("--kind", choices=["diag", "random-orbit"], default="diag")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--vars", type=int, default=2)
    p.add_argument("--deg", type=int, default=4)
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--max-l", type=int, default=2, dest="max_l")
    p.add_argument("--rng", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_seed)

    p = sub.add_parser("verify", help="run identity checks on a tower file")
    p.add_argument("--tower", required=True)
    p.add_argument("--master", action="store_true")
    p.add_argument("--commutativity", action="store_true")
    p.add_argument("--flat", action="store_true")
    p.add_argument("--loopspace", action="store_true")
    p.add_argument("--all", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("act", help="apply a group element to a tower")
    p.add_argument("--tower", required=True)
    p.add_argument("--element", required=True)
    p.add_argument("--exp", action="store_true",
                   help="apply the group exponential instead of the Lie action")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_act)

    p = sub.add_parser("normalize", help="run the normalization pipeline")
    p.add_argument("--tower", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--gl", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("kp", help="build and check a wave-function tower")
    p.add_argument("--a", required=True, help="A(z) JSON file")
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--deg", type=int, default=4)
    p.add_argument("--check-sign", type=int, default=None, dest="check_sign")
    p.add_argument("--out", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_kp)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ShapeError, WindowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
