"""Command-line front end.

Exit status: 0 when every dispatched check passes, 1 on a verification
failure, 2 on usage errors or budget refusals.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import flanders, suite
from .ffmat import BudgetExceeded, enumerate_gl
from .report import VerificationReport

VERIFY_TARGETS = ("flanders", "bound", "split-lemma", "rank-one", "rectangular", "span-gl")
ISO_TARGETS = ("psi-bar", "phi", "perm", "alpha", "all")
EXPORT_TARGETS = ("glq", "sp4", "ag2", "qspace")


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ffverify",
        description="Exhaustive finite-field checks of bounded-rank matrix spaces and GL_2(F_2) preservers.",
    )
    parser.add_argument("verb", choices=("verify", "census", "iso", "export", "all"))
    parser.add_argument("target", nargs="?", default=None)
    parser.add_argument("--n", type=int, default=2, help="matrix size (rows)")
    parser.add_argument("--p", type=int, default=None,
                        help="columns for rectangular; first block size for split-lemma")
    parser.add_argument("--q", type=int, default=2, help="field order (2, 3 or 5)")
    parser.add_argument("--r", type=int, default=1, help="rank bound")
    parser.add_argument("--mode", choices=("affine", "linear"), default="affine")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled checks only")
    parser.add_argument("--out", default=None, help="write output here instead of stdout")
    parser.add_argument("--timing", action="store_true", help="include wall_ms in JSON reports")
    return parser


def _verify(args) -> list[VerificationReport]:
    t = args.target
    if t == "flanders":
        return [flanders.verify_rank_bound(args.n, args.q, args.r, args.mode, workers=args.workers),
                flanders.classify_maximal(args.n, args.q, args.r, args.mode, workers=args.workers)]
    if t == "bound":
        return [flanders.verify_rank_bound(args.n, args.q, args.r, args.mode, workers=args.workers)]
    if t == "split-lemma":
        # block sizes p x n and n x p; P ranges over GL_n
        return [flanders.split_lemma_check(args.p or 1, args.n, args.q)]
    if t == "rank-one":
        return [flanders.rank_one_sum_check(args.n, args.q)]
    if t == "rectangular":
        if args.p is None:
            raise UsageError("rectangular needs --p")
        return [flanders.rectangular_check(args.n, args.p, args.q, args.r, workers=args.workers)]
    if t == "span-gl":
        return [flanders.affine_span_gl(args.n, args.q)]
    raise UsageError(f"unknown verify target {t!r}; choose from {', '.join(VERIFY_TARGETS)}")


def _iso(args) -> list[VerificationReport]:
    table = {
        "psi-bar": suite.iso_psi_bar,
        "phi": lambda: suite.iso_phi(seed=args.seed),
        "perm": suite.iso_perm,
        "alpha": suite.iso_alpha,
    }
    if args.target == "all":
        return [f() for f in table.values()]
    if args.target not in table:
        raise UsageError(f"unknown iso target {args.target!r}; choose from {', '.join(ISO_TARGETS)}")
    return [table[args.target]()]


def _export(args):
    from .groups import affine_gl_stabilizers, symplectic_group
    from .quadchar2 import q_space

    t = args.target
    if t == "glq":
        mats = list(enumerate_gl(args.n, args.q))
        return {"object": "glq", "n": args.n, "q": args.q, "order": len(mats),
                "elements": [m.to_text() for m in mats]}
    if t == "sp4":
        return {"object": "sp4", **symplectic_group().to_json()}
    if t == "ag2":
        return {"object": "ag2", **affine_gl_stabilizers().to_json()}
    if t == "qspace":
        return {"object": "qspace", "forms": q_space().to_json()}
    raise UsageError(f"unknown export target {t!r}; choose from {', '.join(EXPORT_TARGETS)}")


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.workers < 1:
        parser.print_usage(sys.stderr)
        print("ffverify: error: --workers must be positive", file=sys.stderr)
        return 2
    lines: list[str] = []
    status = 0
    try:
        if args.verb == "export":
            lines.append(json.dumps(_export(args), sort_keys=True))
        else:
            if args.verb == "verify":
                reports = _verify(args)
            elif args.verb == "census":
                if args.target != "exceptional":
                    raise UsageError("census supports only 'exceptional'")
                reports = [flanders.exceptional_census()]
            elif args.verb == "iso":
                reports = _iso(args)
            else:
                if args.target is not None:
                    raise UsageError("'all' takes no target")
                reports = suite.run_all(workers=args.workers, seed=args.seed)
            for rep in reports:
                if args.format == "json":
                    lines.append(rep.to_json(timing=args.timing))
                else:
                    lines.append(rep.summary())
            status = 0 if all(r.passed for r in reports) else 1
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"ffverify: error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"ffverify: refused: {exc}", file=sys.stderr)
        return 2
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
