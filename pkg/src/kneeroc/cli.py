"""Command line entry point.

Exit codes: 0 success (possibly with warnings), 2 input error,
3 insufficient data, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from kneeroc import __version__
from kneeroc.errors import InputError, KneeRocError
from kneeroc.ingest import (
    GeneratorConfig,
    best_case_dataset,
    generate_dataset,
    generate_scores,
    parse_probabilities,
    parse_scores,
    serialize_probabilities,
    serialize_scores,
)
from kneeroc.report import Run, commit, input_digest, run_method1, run_method2, run_method3
from kneeroc.roc import DEFAULT_STEP, DEFAULT_SWEEP_STEPS, DEFAULT_T_INIT, DEFAULT_T_STOP, SweepConfig

log = logging.getLogger("kneeroc")

EXIT_OK = 0
EXIT_INPUT = 2

_DIRECTIONS = {"asc": "ascending", "desc": "descending"}


def knee_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    if not 0 <= lo <= hi:
        raise argparse.ArgumentTypeError("knee range must satisfy 0 <= LO <= HI")
    return lo, hi


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("--sensitivity", type=float, default=1.0, help="Kneedle sensitivity")


def _add_scores(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scores", required=True, type=Path, help="score file (score,label)")
    p.add_argument("--sweep-steps", type=int, default=DEFAULT_SWEEP_STEPS,
                   help="threshold count in each Gaussian ROC sweep")


def _add_method2(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t-init", type=float, default=DEFAULT_T_INIT)
    p.add_argument("--step", type=float, default=DEFAULT_STEP)
    p.add_argument("--t-stop", type=float, default=DEFAULT_T_STOP)
    p.add_argument("--direction", choices=sorted(_DIRECTIONS), default="asc")
    p.add_argument("--semantics", choices=["as-written", "conventional"], default="as-written")


def _add_method3(p: argparse.ArgumentParser) -> None:
    p.add_argument("--probs", required=True, type=Path, help="probability file (p0..pK-1[,labels])")
    p.add_argument("--prob-cutoff", type=float, default=0.35)
    p.add_argument("--knee-range", type=knee_range, default=(6, 8), metavar="LO:HI")
    p.add_argument("--max-plots", type=int, default=20, help="cap on per-sample SVG plots")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kneeroc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress warnings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("method1", help="ROC from Gaussian fits of the score file")
    _add_scores(p)
    _add_common(p)

    p = sub.add_parser("method2", help="threshold-driven redistribution sweep")
    _add_scores(p)
    _add_method2(p)
    _add_common(p)

    p = sub.add_parser("method3", help="per-sample knees of sorted probability vectors")
    _add_method3(p)
    _add_common(p)

    p = sub.add_parser("full", help="all three methods, one report")
    _add_scores(p)
    _add_method2(p)
    _add_method3(p)
    _add_common(p)

    p = sub.add_parser("generate", help="write synthetic probs.csv and scores.csv")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--classes", type=int, default=10)
    p.add_argument("--active", type=int, default=4)
    p.add_argument("--high-fraction", type=float, default=0.588)
    p.add_argument("--noise", type=float, default=0.02)
    p.add_argument("--best-case", action="store_true",
                   help="equal mass on the active classes, near zero elsewhere")
    p.add_argument("--score-count", type=int, default=250, help="scores per class")
    return parser


def _sweep(args: argparse.Namespace) -> SweepConfig:
    return SweepConfig(steps=args.sweep_steps)


def _method2(args: argparse.Namespace, scores) -> Run:
    return run_method2(
        scores, args.t_init, args.step, args.t_stop, _DIRECTIONS[args.direction],
        args.semantics, _sweep(args), args.sensitivity,
    )


def _method3(args: argparse.Namespace) -> Run:
    if args.max_plots < 0:
        raise InputError("--max-plots must be >= 0")
    return run_method3(parse_probabilities(args.probs), args.prob_cutoff, args.knee_range,
                       args.sensitivity, args.max_plots)


def execute(args: argparse.Namespace) -> None:
    if args.command == "generate":
        cfg = GeneratorConfig(args.samples, args.classes, args.active, args.high_fraction,
                              args.noise, args.seed)
        if args.best_case:
            dataset = best_case_dataset(args.samples, args.classes, args.active, args.seed)
        else:
            dataset = generate_dataset(cfg)
        scores = generate_scores(args.score_count, args.score_count, seed=args.seed)
        commit({"probs.csv": serialize_probabilities(dataset),
                "scores.csv": serialize_scores(scores)}, args.out)
        return

    run = Run()
    inputs = []
    if args.command in ("method1", "method2", "full"):
        inputs.append(args.scores)
        scores = parse_scores(args.scores)
        if args.command == "method1":
            run.merge(run_method1(scores, _sweep(args), args.sensitivity)[0])
        else:
            run.merge(_method2(args, scores))
    if args.command in ("method3", "full"):
        inputs.append(args.probs)
        run.merge(_method3(args))
    run.finish(input_digest(*inputs))
    commit(run.artifacts, args.out)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("kneeroc: %(levelname)s: %(message)s"))
    handler.setLevel(logging.ERROR if args.quiet else logging.WARNING)
    log.addHandler(handler)
    log.setLevel(logging.WARNING)
    try:
        execute(args)
    except KneeRocError as exc:
        print(f"kneeroc: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"kneeroc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        log.removeHandler(handler)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
