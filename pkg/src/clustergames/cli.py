"""Command line front end: ``clustergames {run,score,bound,export}``.

Typed errors exit with status 2 and a JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiment
from .errors import ClusterGameError


def _add_common(p: argparse.ArgumentParser, games=experiment.GAMES) -> None:
    p.add_argument("--game", choices=games, default="triangle")
    p.add_argument("--out", help="output directory (report goes to stdout when omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clustergames", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate calibration and game circuits, then score")
    _add_common(run)
    run.add_argument("--shots", type=int, default=1024)
    run.add_argument("--reps", type=int, default=10)
    run.add_argument("--noise", default=None, help="preset name or noise-model JSON file")
    run.add_argument("--mitigate", choices=("off", "local"), default="off")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--no-optimize", action="store_true", help="run the circuits without CZ rewriting")
    run.add_argument("--workers", type=int, default=1)

    score = sub.add_parser("score", help="score externally produced counts")
    _add_common(score)
    score.add_argument("--counts", required=True, help="directory of <label>.json histograms")
    score.add_argument("--calibration", help="directory holding cal/<prepared>.json histograms")
    score.add_argument("--mitigate", choices=("off", "local"), default=None,
                       help="defaults to local when --calibration is given")

    bound = sub.add_parser("bound", help="exhaustive LHV bound")
    bound.add_argument("--game", choices=experiment.GAMES, default="triangle")
    bound.add_argument("--out")
    bound.add_argument("--workers", type=int, default=1)

    export = sub.add_parser("export", help="write every circuit as JSON")
    _add_common(export)
    return parser


def _emit(report: dict, out: str | None, name: str) -> None:
    if out:
        experiment.write_report(report, Path(out) / name)
    else:
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = experiment.RunConfig(
                game=args.game, shots=args.shots, repetitions=args.reps, noise=args.noise,
                mitigation=args.mitigate, seed=args.seed, out=args.out,
                optimize=not args.no_optimize, workers=args.workers,
            )
            result = experiment.run(cfg)
            if not args.out:
                _emit(experiment.run_report(cfg, result), None, "report.json")
        elif args.command == "score":
            mitigate = args.mitigate or ("local" if args.calibration else "off")
            if mitigate == "local" and not args.calibration:
                raise experiment.ConfigError("--mitigate local needs --calibration")
            cal = args.calibration if mitigate == "local" else None
            result = experiment.score_dir(args.game, args.counts, cal)
            _emit(result.to_dict(), args.out, "report.json")
        elif args.command == "bound":
            _emit(experiment.bound_report(args.game, partitions=max(1, args.workers), workers=args.workers),
                  args.out, f"bound_{args.game}.json")
        elif args.command == "export":
            paths = experiment.export_circuits(args.game, args.out or ".")
            print(json.dumps({"written": len(paths)}))
    except ClusterGameError as exc:
        print(json.dumps(exc.to_dict()), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
