"""Command line interface: `dga run <file>` plus single-shot forms.

Exit codes: 0 success; 2 validation or schema error; 3 results emitted with
uncertified or undetermined entries; 4 unsupported scope.
"""

from __future__ import annotations

import argparse
import json
import sys

from .io import SchemaError, parse_input
from .jobs import EXIT_VALIDATION, canonical_json, render_pretty, run_jobs
from .status import ScopeError


SINGLE_SHOT_OPS = [
    "homology",
    "hh",
    "ext",
    "der",
    "der-les",
    "bar-check",
    "pi",
    "les-check",
    "theorem-a",
    "lemma-c",
    "free-f",
    "adjunction-check",
    "ideal-gen-check",
    "axiom3-smoke",
    "lurie",
]


def _add_common(parser):
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument("--cache-dir", help="directory for cached job fragments")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers")
    parser.add_argument(
        "--no-stabilize",
        action="store_true",
        help="skip stabilization comparisons; truncated results become UNSTABLE",
    )
    parser.add_argument("--pretty", action="store_true", help="also print a text table")


def _add_job_flags(parser):
    parser.add_argument("input", help="JSON environment file")
    parser.add_argument("--algebra")
    parser.add_argument("--coefficients")
    parser.add_argument("--module")
    parser.add_argument("--bimodule")
    parser.add_argument("--map")
    parser.add_argument("--target")
    parser.add_argument("--from-r", dest="from_r")
    parser.add_argument("--from-s", dest="from_s")
    parser.add_argument("--free-generators", dest="free_generators")
    parser.add_argument("--point", nargs="*")
    parser.add_argument("--degrees", nargs=2, type=int, metavar=("LO", "HI"))
    parser.add_argument("--n", type=int)
    parser.add_argument("--depth", type=int)
    parser.add_argument("--cutoff", type=int)
    parser.add_argument("--cap", type=int, dest="cap")
    parser.add_argument("--disk-degree", type=int, dest="disk_degree")
    parser.add_argument("-L", type=int, dest="L")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dga",
        description="Exact homological calculus for DG algebras over Q and GF(p)",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run the job list of an input document")
    runp.add_argument("input", help="JSON environment + jobs file")
    _add_common(runp)
    for op in SINGLE_SHOT_OPS:
        p = sub.add_parser(op, help=f"single-shot {op} against an environment file")
        _add_job_flags(p)
        _add_common(p)
    return parser


def _job_from_args(op, args):
    job = {"op": op}
    for key in (
        "algebra",
        "coefficients",
        "module",
        "bimodule",
        "map",
        "target",
        "from_r",
        "from_s",
        "free_generators",
        "n",
        "depth",
        "cutoff",
        "cap",
        "L",
        "disk_degree",
    ):
        value = getattr(args, key, None)
        if value is not None:
            job[key] = value
    if getattr(args, "degrees", None) is not None:
        job["degrees"] = list(args.degrees)
    if getattr(args, "point", None):
        job["point"] = list(args.point)
    return job


def _emit(report, args):
    text = canonical_json(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.pretty:
        print(render_pretty(report), file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        env = parse_input(doc)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.command != "run":
        env.jobs = [_job_from_args(args.command, args)]
        doc = dict(doc)
        doc["jobs"] = env.jobs
    try:
        report, code = run_jobs(
            env,
            doc,
            cache_dir=args.cache_dir,
            workers=max(1, args.jobs),
            stabilize=not args.no_stabilize,
        )
    except ScopeError as exc:
        print(f"error: out of scope: {exc}", file=sys.stderr)
        return 4
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
