"""epsolve: command-line workbench for recursive domain equations over
finite pointed posets.

Exit codes: 0 all checks pass, 1 a property or verdict failed, 2 usage or
input error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .chains import check_local_determination, cocone_from_json
from .demo import yoneda_demo_report
from .equations import (
    EquationSyntaxError,
    parse_equation,
    parse_functor,
    report_json_bytes,
    solve_report,
)
from .errors import CapExceeded
from .functors import preserves_cocone
from .suite import run_all

DEFAULT_ELEM_CAP = 512


def _elem_cap(args) -> int:
    env = os.environ.get("EPSOLVE_CAP_ELEMS")
    if env is not None:
        return int(env)
    return args.max_size if getattr(args, "max_size", None) else DEFAULT_ELEM_CAP


def _write_json(path: str, payload: dict) -> None:
    with open(path, "wb") as fh:
        fh.write((json.dumps(payload, indent=2, sort_keys=True) + "\n").encode())


def _print_stage_table(stages) -> None:
    print(f"{'n':>3} {'size':>5} {'defect':>7}  canonical_form")
    for s in stages:
        print(f"{s['n']:>3} {s['size']:>5} {s['defect']:>7}  {s['canonical_form']}")


def cmd_solve(args) -> int:
    try:
        spec = parse_equation(args.equation, depth=args.depth, elem_cap=_elem_cap(args))
    except EquationSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return 2
    try:
        report = solve_report(spec, seed=args.seed)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 2
    print(f"equation: {report.equation}")
    print(f"stabilized_at: {report.stabilized_at}")
    _print_stage_table(report.stages)
    if report.ld is not None:
        print(f"locally determined: {report.ld['verdict']} defects={report.ld['defects']}")
    else:
        print("no stabilization witness; defect matrix by approximation depth:")
        for depth, row in enumerate(report.defect_matrix):
            print(f"  depth {depth}: {row}")
    if args.json:
        with open(args.json, "wb") as fh:
            fh.write(report_json_bytes(report))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "size", "canonical_form", "defect"])
            for s in report.stages:
                w.writerow([s["n"], s["size"], s["canonical_form"], s["defect"]])
    return 0


def cmd_check_ld(args) -> int:
    with open(args.cocone) as fh:
        k = cocone_from_json(json.load(fh))
    report = check_local_determination(k)
    print(f"kind: {report.kind.value}")
    print(f"verdict: {report.verdict}")
    print(f"defects: {list(report.defects)}")
    if report.adj_residuals is not None:
        print(f"adj_residuals: {[list(r) for r in report.adj_residuals]}")
    if args.json:
        _write_json(args.json, report.to_json())
    return 0 if report.verdict else 1


def cmd_preserve(args) -> int:
    try:
        functor = parse_functor(args.functor)
    except EquationSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return 2
    with open(args.cocone) as fh:
        k = cocone_from_json(json.load(fh))
    try:
        res = preserves_cocone(functor, k, elem_cap=_elem_cap(args))
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 2
    print(f"functor: {functor}")
    print(f"image apex size: {len(res.image.apex)}")
    print(f"colimiting: {res.colimiting}")
    print(f"locally determined: {res.locally_determined.verdict}")
    print(f"defects: {list(res.locally_determined.defects)}")
    if args.json:
        _write_json(
            args.json,
            {
                "functor": str(functor),
                "colimiting": res.colimiting,
                "locally_determined": res.locally_determined.to_json(),
            },
        )
    return 0 if res.colimiting and res.locally_determined.verdict else 1


def cmd_verify_theorems(args) -> int:
    results = run_all(
        seed=args.seed,
        chain_count=args.chains,
        max_size=args.max_size or 4,
        max_len=args.max_len or 5,
        lub_cases=args.lub_cases,
    )
    all_pass = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name}: {status} ({r.cases} cases)")
        if not r.passed:
            all_pass = False
            for f in r.failures[:3]:
                print(f"  counterexample: {json.dumps(f, sort_keys=True, default=str)}")
    if args.json:
        _write_json(args.json, {"results": [r.to_json() for r in results]})
    return 0 if all_pass else 1


def cmd_yoneda_demo(args) -> int:
    rep = yoneda_demo_report()
    print(json.dumps(rep, indent=2, sort_keys=True))
    if args.json:
        _write_json(args.json, rep)
    ok = (
        rep["fully_faithful"]
        and rep["proof_step_canonical"]
        and not rep["proof_step_counterexample"]
    )
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="epsolve",
        description="workbench for recursive domain equations over finite posets",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-size", type=int, default=None)
        p.add_argument("--max-len", type=int, default=None)
        p.add_argument("--json", metavar="PATH", default=None)
        p.add_argument("--csv", metavar="PATH", default=None)

    p = sub.add_parser("solve", help="iterate an equation from the one-point poset")
    p.add_argument("equation")
    p.add_argument("--depth", type=int, default=4)
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check-ld", help="local-determination check of a cocone")
    p.add_argument("--cocone", metavar="PATH", required=True)
    common(p)
    p.set_defaults(func=cmd_check_ld)

    p = sub.add_parser("preserve", help="apply a functor to a cocone and recheck")
    p.add_argument("functor")
    p.add_argument("--cocone", metavar="PATH", required=True)
    common(p)
    p.set_defaults(func=cmd_preserve)

    p = sub.add_parser("verify-theorems", help="run the seeded property suites")
    p.add_argument("--chains", type=int, default=200)
    p.add_argument("--lub-cases", type=int, default=50)
    common(p)
    p.set_defaults(func=cmd_verify_theorems)

    p = sub.add_parser("yoneda-demo", help="two-object Yoneda worked example")
    common(p)
    p.set_defaults(func=cmd_yoneda_demo)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
