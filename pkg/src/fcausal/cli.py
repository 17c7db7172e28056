"""Command-line entry point: ``fcausal <command> --model FILE <effect> [options]``.

Exit status: 0 on success, 2 on input errors, 1 when an internal
consistency check fails.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .accountability import from_weights
from .causes import AnalysisSession
from .errors import AnalysisError, InvariantError
from .ingest import EffectSpec, effect_set, load_measurements, parse_model
from .report import SECTIONS, Options, build_report, parse_pairs_spec, to_csv, to_json, to_text

COMMANDS = {
    "causes": ("causes",),
    "explicate": ("causes", "explicate"),
    "account": ("account",),
    "interactions": ("interactions",),
    "report": SECTIONS,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fcausal", description="Feature causality analysis.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", required=True, metavar="PATH", help="model file (features + valid)")
    effect = common.add_mutually_exclusive_group(required=True)
    effect.add_argument("--effect-expr", metavar="EXPR", help="effect as a Boolean expression")
    effect.add_argument(
        "--effect-list", metavar="PATH", nargs="+", help="effect as configuration list file(s); one run per file"
    )
    effect.add_argument("--measurements", metavar="PATH", help="measurement CSV, used with --threshold")
    common.add_argument("--threshold", metavar="SPEC", help='"metric REL value", e.g. "time > 0.25"')
    common.add_argument("--negate", action="store_true", help="analyse the complement V minus E instead")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument(
        "--dist", default="uniform-effects", metavar="DIST", help="uniform-effects, uniform-valid, or a weight CSV"
    )
    common.add_argument("--features", metavar="LIST", help="comma-separated features to report blame for")
    common.add_argument(
        "--pairs", action="append", default=[], metavar="SPEC", help="partial config such as alg=1,level=0"
    )
    common.add_argument("--per-instance", action="store_true", help="responsibility for every effect instance")
    common.add_argument("--cover", choices=("greedy", "exact"), default="greedy")
    common.add_argument("--digits", type=int, default=4, help="significant digits for decimals in text mode")
    common.add_argument("--jobs", type=int, default=1, help="parallel runs over several --effect-list files")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise AnalysisError("io", f"cannot read {path}: {e.strerror}") from None


def run(args: argparse.Namespace, effect_file: str | None = None) -> tuple[dict, dict]:
    """Run one analysis; ``effect_file`` selects one of several ``--effect-list`` files."""
    space, valid = parse_model(_read(args.model))
    table = None
    if args.effect_expr is not None:
        spec = EffectSpec.from_expression(args.effect_expr, space)
    elif effect_file is not None:
        spec = EffectSpec.from_config_list(_read(effect_file), space)
    else:
        if not args.threshold:
            raise AnalysisError("bad-threshold", "--measurements needs --threshold")
        table = load_measurements(_read(args.measurements), space)
        spec = EffectSpec.threshold(args.threshold)
    effect = effect_set(spec, table, valid)
    if args.negate:
        effect = valid - effect
    session = AnalysisSession(valid, effect)

    opts = Options(cover=args.cover, per_instance=args.per_instance)
    if args.dist in ("uniform-effects", "uniform-valid"):
        opts.dist = args.dist
    else:
        opts.weights = from_weights(_read(args.dist), valid)
    if args.features:
        opts.features = [x.strip() for x in args.features.split(",") if x.strip()]
    opts.pairs = [parse_pairs_spec(p, session) for p in args.pairs]
    return build_report(session, COMMANDS[args.command], opts)


def _render(args, report: dict, timings: dict) -> str:
    if args.format == "json":
        return to_json(report)
    if args.format == "csv":
        return to_csv(report)
    return to_text(report, timings, args.digits)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threshold and not args.measurements:
        print("error: --threshold needs --measurements", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.WARNING, format="warning: %(message)s")
    try:
        files = args.effect_list or [None]
        if len(files) == 1:
            results = [run(args, files[0])]
        else:
            with ProcessPoolExecutor(max_workers=max(1, args.jobs)) as pool:
                results = list(pool.map(run, [args] * len(files), files))
        if len(files) == 1:
            sys.stdout.write(_render(args, *results[0]))
        elif args.format == "json":
            sys.stdout.write(to_json({"runs": [{"effect_file": f, "report": r} for f, (r, _) in zip(files, results)]}))
        elif args.format == "csv":
            for k, (f, (report, _)) in enumerate(zip(files, results)):
                rows = to_csv(report).splitlines(keepends=True)
                if k == 0:
                    sys.stdout.write("run," + rows[0])
                sys.stdout.writelines(f"{k},{row}" for row in rows[1:])
        else:
            for f, (report, timings) in zip(files, results):
                sys.stdout.write(f"== {f}\n" + _render(args, report, timings))
    except InvariantError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 1
    except AnalysisError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
