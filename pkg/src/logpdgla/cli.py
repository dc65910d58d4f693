"""Command-line entry point.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on bad arguments or malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import apl
from .curve import build_curve, curve_report
from .pdgla import PDGLA, gauge_action, mc_residual
from .properties import MUTATIONS, SUITES, run_suites
from .schema import SchemaError, mc_problem_from_json, resolve_problem_from_json, tw_to_json
from .tw import extract_h0, tw_d, tw_validate


class InputError(Exception):
    pass


def _emit(report, args, lines):
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


def _criteria(text):
    if text is None:
        return None
    text = text.strip()
    if not text:
        return []
    try:
        out = sorted({int(c) for c in text.split(",")})
    except ValueError:
        raise InputError(f"--criteria expects a comma separated list of numbers, got {text!r}") from None
    bad = [c for c in out if c not in SUITES]
    if bad:
        raise InputError(f"no suite for criteria {bad}; available: {sorted(SUITES)}")
    return out


def cmd_check(args):
    results = run_suites(args.seed, _criteria(args.criteria), args.samples, args.mutate)
    ok = all(r.passed for r in results)
    report = {"command": "check", "seed": args.seed, "samples": args.samples, "mutate": args.mutate,
              "passed": ok, "properties": [r.to_json() for r in results]}
    lines = [f"[{'PASS' if r.passed else 'FAIL'}] criterion {r.criterion}: {r.name} ({r.cases} cases)"
             + ("" if r.passed else f"\n    witness: {r.witness}") for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} properties passed (seed {args.seed})")
    _emit(report, args, lines)
    return 0 if ok else 1


def cmd_curve(args):
    if args.order is None or args.order < 0:
        raise InputError("--order must be a non-negative integer")
    inst = build_curve(args.order)
    rep = curve_report(inst, timing=args.timing)
    rep["command"] = "curve"
    lines = [f"[{'PASS' if c['passed'] else 'FAIL'}] {c['name']}" + (f"  ({c['detail']})" if not c["passed"] else "")
             for c in rep["checks"]]
    lines.append(f"curve at order {args.order}: {sum(c['passed'] for c in rep['checks'])}/{len(rep['checks'])} golden checks passed")
    _emit(rep, args, lines)
    return 0 if rep["passed"] else 1


def cmd_mc(args):
    try:
        nerve, eta, theta = mc_problem_from_json(_load(args.input))
    except SchemaError as e:
        raise InputError(str(e)) from None
    rep = tw_validate(eta)
    if not rep["valid"]:
        raise InputError(f"eta: not a valid Thom-Whitney element ({rep['witness']})")
    L = PDGLA(nerve)
    try:
        res = mc_residual(L, eta)
    except ValueError as e:
        raise InputError(f"eta: {e}") from None
    report = {"command": "mc", "schemaVersion": 1, "nerve": nerve.name, "order": nerve.order,
              "residual": tw_to_json(res), "isMC": not res, "certificate": None}
    lines = [f"nerve {nerve.name} at order {nerve.order}", f"residual: {res}", f"isMC: {not res}"]
    if theta is not None:
        try:
            new = gauge_action(L, theta, eta)
        except ValueError as e:
            raise InputError(f"theta: {e}") from None
        new_res = mc_residual(L, new)
        report["certificate"] = {"theta": tw_to_json(theta), "gaugeImage": tw_to_json(new),
                                 "gaugeImageResidual": tw_to_json(new_res), "gaugeImageIsMC": not new_res}
        lines += [f"gauge image: {new}", f"gauge image isMC: {not new_res}"]
    _emit(report, args, lines)
    return 0 if not res else 1


def cmd_resolve(args):
    try:
        nerve, elem = resolve_problem_from_json(_load(args.input))
    except SchemaError as e:
        raise InputError(str(e)) from None
    report = {"command": "resolve", "nerve": nerve.name, "order": nerve.order,
              "simplices": [list(s) for s in nerve.simplices], "valid": None, "witness": None, "h0": None}
    lines = [f"nerve {nerve.name} at order {nerve.order}: {len(nerve.simplices)} simplices, semicosimplicial identities hold"]
    status = 0
    if elem is not None:
        rep = tw_validate(elem)
        report["valid"] = rep["valid"]
        report["witness"] = rep["witness"]
        lines.append(f"element valid: {rep['valid']}" + ("" if rep["valid"] else f" ({rep['witness']})"))
        if not rep["valid"]:
            status = 1
        elif elem.q == 0 and not tw_d(elem):
            h0 = extract_h0(elem)
            report["h0"] = {v: str(x) for v, x in sorted(h0.items())}
            lines += [f"H^0 component on {v}: {x}" for v, x in sorted(h0.items())]
    _emit(report, args, lines)
    return status


def build_parser():
    p = argparse.ArgumentParser(prog="logpdgla", description="Exact checks for log deformation pdglas.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the report to this file instead of stdout")
        sp.add_argument("--format", choices=["text", "json"], default=None,
                        help="report format (default: json when --out ends in .json, else text)")
        sp.add_argument("--degree-ceiling", type=int, default=apl.DEFAULT_CEILING,
                        help="largest polynomial degree tried when extending forms")

    c = sub.add_parser("check", help="run the property suites")
    c.add_argument("--seed", type=int, default=7)
    c.add_argument("--samples", type=int, default=None, help="cases per property (default: the required minimum)")
    c.add_argument("--criteria", default=None, help="comma separated criteria to run (default: all)")
    c.add_argument("--mutate", choices=MUTATIONS, default=None, help="inject a known fault")
    c.add_argument("--order", type=int, default=None, help="accepted for uniformity; suites choose their own orders")
    common(c)
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("curve", help="build the curve example and run its golden checks")
    c.add_argument("--order", type=int, default=2)
    c.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identical output)")
    common(c)
    c.set_defaults(func=cmd_curve)

    c = sub.add_parser("mc", help="evaluate a Maurer-Cartan problem")
    c.add_argument("input", help="MC problem JSON")
    common(c)
    c.set_defaults(func=cmd_mc)

    c = sub.add_parser("resolve", help="validate a cover and optionally a Thom-Whitney element")
    c.add_argument("input", help="resolve problem JSON")
    common(c)
    c.set_defaults(func=cmd_resolve)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.degree_ceiling < 0:
        parser.error("--degree-ceiling must be non-negative")
    if getattr(args, "samples", None) is not None and args.samples < 1:
        parser.error("--samples must be positive")
    if args.format is None:
        args.format = "json" if args.out and args.out.endswith(".json") else "text"
    apl.DEFAULT_CEILING = args.degree_ceiling
    try:
        return args.func(args)
    except InputError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
