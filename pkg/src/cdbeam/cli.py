"""Command-line front end.

Subcommands:

* ``design``          sweep a config, write weights.csv + gdi.csv
* ``beampattern``     sweep a config, write beampattern.csv
* ``benchmark``       race the two constrained solvers, write benchmark.csv
* ``validate-config`` parse a config and report what it describes

Exit codes: 0 on success, 2 when some (not all) frequencies failed,
1 on fatal errors (bad config, every frequency failed, I/O).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import pipeline

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_PARTIAL = 2


def _config_overrides(args) -> dict:
    overrides = {}
    if args.mode is not None:
        overrides["mode"] = args.mode
    if args.tau_db is not None:
        overrides["tau_db"] = args.tau_db
    if args.seed is not None:
        overrides["seed"] = args.seed
    return overrides


def _write(out_dir: Path, name: str, text: str, quiet: bool) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    if not quiet:
        print(f"wrote {path}")


def _sweep_exit(result, quiet: bool) -> int:
    failed = result.n_failed
    if not quiet:
        print(f"{len(result.records)} frequencies, {failed} failed")
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_design(args) -> int:
    config = pipeline.load_config(args.config, _config_overrides(args))
    result = pipeline.run_design(config)
    out_dir = Path(args.out)
    _write(out_dir, "weights.csv", pipeline.export_weights(result), args.quiet)
    _write(out_dir, "gdi.csv", pipeline.export_gdi(result), args.quiet)
    return _sweep_exit(result, args.quiet)


def cmd_beampattern(args) -> int:
    config = pipeline.load_config(args.config, _config_overrides(args))
    result = pipeline.run_design(config)
    text = pipeline.export_beampattern(result, resolution_deg=args.resolution_deg)
    _write(Path(args.out), "beampattern.csv", text, args.quiet)
    return _sweep_exit(result, args.quiet)


def cmd_benchmark(args) -> int:
    result = pipeline.run_benchmark(
        n=args.n, trials=args.trials, tau_db=args.tau_db, seed=args.seed
    )
    _write(Path(args.out), "benchmark.csv", pipeline.export_benchmark(result), args.quiet)
    if not args.quiet:
        print(
            f"{args.trials} trials: median iterations "
            f"pa={result.pa_median:g} dm={result.dm_median:g}"
        )
    return EXIT_OK


def cmd_validate_config(args) -> int:
    config = pipeline.load_config(args.config)
    if not args.quiet:
        print(
            f"config ok: mode={config.mode}, {config.array.n} transducers, "
            f"{len(config.frequencies)} frequencies "
            f"({config.frequencies[0]:g} to {config.frequencies[-1]:g} Hz)"
        )
    return EXIT_OK


def _add_config_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="YAML design config")
    parser.add_argument("--out", required=True, help="output directory for CSV files")
    parser.add_argument(
        "--mode", choices=pipeline.MODES, help="override the config's design mode"
    )
    parser.add_argument(
        "--tau-db", type=float, dest="tau_db", help="override the directivity target (dB)"
    )
    parser.add_argument("--seed", type=int, help="override the config's seed")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdbeam",
        description="Loudspeaker-array beamformer design under directivity constraints.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    design = sub.add_parser("design", help="sweep a design, export weights and summary")
    _add_config_options(design)
    design.set_defaults(func=cmd_design)

    beam = sub.add_parser("beampattern", help="sweep a design, export horizontal beam pattern")
    _add_config_options(beam)
    beam.add_argument(
        "--resolution-deg",
        type=float,
        default=1.0,
        dest="resolution_deg",
        help="azimuth grid step in degrees (must divide 360)",
    )
    beam.set_defaults(func=cmd_beampattern)

    bench = sub.add_parser("benchmark", help="race the constrained solvers on random instances")
    bench.add_argument("--out", required=True, help="output directory for CSV files")
    bench.add_argument("--n", type=int, default=8, help="matrix dimension")
    bench.add_argument("--trials", type=int, default=100, help="number of random instances")
    bench.add_argument(
        "--tau-db", type=float, default=6.0, dest="tau_db", help="directivity target (dB)"
    )
    bench.add_argument("--seed", type=int, default=0, help="base seed for instance generation")
    bench.add_argument("--quiet", action="store_true", help="suppress progress output")
    bench.set_defaults(func=cmd_benchmark)

    validate = sub.add_parser("validate-config", help="check a config file and summarize it")
    validate.add_argument("--config", required=True, help="YAML design config")
    validate.add_argument("--quiet", action="store_true", help="suppress the summary line")
    validate.set_defaults(func=cmd_validate_config)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (pipeline.ConfigError, pipeline.PipelineError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
