"""Command-line entry point."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .polyparse import ParseError
from .runner import emit_report, run_tasks
from .taskfile import DEFAULT_ORDER, DEFAULT_SEED, TaskFile, TaskSpec, parse_taskfile


def _common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--no-timing", action="store_true", help="zero the ms fields for byte-stable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="confsym", description="Exact checks of conformal symmetries and pairings.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a task file")
    v.add_argument("taskfile")
    v.add_argument("--order", type=int, help="override the file's jet order")
    v.add_argument("--seed", type=int, help="override the file's seed")
    _common(v)

    s = sub.add_parser("suite", help="run the canonical suite")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--order", type=int, default=DEFAULT_ORDER)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _common(s)

    solve = sub.add_parser("solve", help="solvers")
    ssub = solve.add_subparsers(dest="what", required=True)
    ckt = ssub.add_parser("ckt", help="conformal Killing fields and tensors on flat space")
    ckt.add_argument("--n", type=int, default=3)
    ckt.add_argument("--valence", type=int, choices=(1, 2), default=2)
    ckt.add_argument("--max-degree", type=int)
    _common(ckt)

    exp = sub.add_parser("experiment", help="experiments")
    esub = exp.add_subparsers(dest="what", required=True)
    yc = esub.add_parser("yamabe-ckt", help="curved second-order symmetry residuals")
    yc.add_argument("--n", type=int, default=3)
    yc.add_argument("--seed", type=int, default=DEFAULT_SEED)
    yc.add_argument("--order", type=int, default=DEFAULT_ORDER + 1)
    yc.add_argument("--weights", default="-1,0,1", help="comma-separated tensor weights")
    yc.add_argument("--sample", type=int, default=4)
    _common(yc)
    return parser


def _taskfile(args) -> TaskFile:
    if args.command == "verify":
        tf = parse_taskfile(Path(args.taskfile).read_text(encoding="utf-8"))
        if args.order is not None or args.seed is not None:
            tf = TaskFile(
                tf.n,
                tf.order if args.order is None else args.order,
                tf.seed if args.seed is None else args.seed,
                tf.decls,
                tf.tasks,
            )
        return tf
    if args.command == "suite":
        return TaskFile(args.n, args.order, args.seed, (), (TaskSpec("suite-all"),))
    if args.command == "solve":
        deg = args.max_degree if args.max_degree is not None else (2 if args.valence == 1 else 4)
        opts = (("max-degree", str(deg)), ("valence", str(args.valence)))
        return TaskFile(args.n, DEFAULT_ORDER, DEFAULT_SEED, (), (TaskSpec("solve-ckt", (), opts),))
    opts = (("sample", str(args.sample)), ("weights", args.weights))
    return TaskFile(args.n, args.order, args.seed, (), (TaskSpec("experiment-yamabe-ckt", (), opts),))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tf = _taskfile(args)
    except (ParseError, OSError) as exc:
        print(f"confsym: {exc}", file=sys.stderr)
        return 2
    report = run_tasks(tf)
    data = emit_report(report, args.format, timing=not args.no_timing)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
