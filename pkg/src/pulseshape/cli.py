"""Command line entry point: ``pulseshape {run,verify,bounds,plot}``."""
import argparse
import json
import logging
from pathlib import Path
import sys

from . import bounds
from .experiment import ConfigError, ExperimentConfig, run_experiment, verify

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

_FLAG_KEYS = ("length", "cells", "density", "noise_db", "methods", "trials", "seed", "out", "rows", "workers")


def _rows(text):
    try:
        return [[int(v) for v in item.split(":")] for item in text.split(",") if item]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"rows must look like 0:74,1:37 ({exc})")


def _methods(text):
    return [m for m in text.split(",") if m]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON file with any of the flag values")
    common.add_argument("--length", type=int)
    common.add_argument("--cells", type=int)
    common.add_argument("--density", type=float)
    common.add_argument("--noise-db", dest="noise_db", type=float)
    common.add_argument("--methods", type=_methods, help="comma separated, e.g. gauss,localg")
    common.add_argument("--rows", type=_rows, help="tau_d:B_D pairs, e.g. 0:74,9:7")
    common.add_argument("--trials", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--out")
    common.add_argument("--workers", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="pulseshape", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run the R sweep and write results.csv")
    sub.add_parser("verify", parents=[common], help="run the invariant suite")
    sub.add_parser("bounds", parents=[common], help="print closed-form bounds as JSON")
    pp = sub.add_parser("plot", parents=[common], help="render SVG charts from results.csv")
    pp.add_argument("results", nargs="?", type=Path)
    return p


def load_config(args, rows=True):
    data = {}
    if args.config is not None:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}")
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    for key in _FLAG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    try:
        cfg = ExperimentConfig.from_dict(data)
    except TypeError as exc:
        raise ConfigError(str(exc))
    return cfg.validate(rows=rows)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        # closed-form bounds depend only on the cell count, not on the row table
        cfg = load_config(args, rows=args.command != "bounds")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "bounds":
        rec = bounds.bounds_record(cfg.cells / cfg.length, cfg.density, cfg.noise_var)
        print(json.dumps(rec, indent=2))
        return EXIT_OK

    if args.command == "run":
        records = run_experiment(cfg)
        print(f"wrote {len(records)} rows to {Path(cfg.out) / 'results.csv'}")
        return EXIT_FAIL if any(r.get("errors") for r in records) else EXIT_OK

    if args.command == "verify":
        checks = verify(cfg)
        for c in checks:
            print(c.line())
        failed = [c for c in checks if not c.passed]
        print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
        return EXIT_FAIL if failed else EXIT_OK

    if args.command == "plot":
        from .plotting import plot

        results = args.results or Path(cfg.out) / "results.csv"
        try:
            paths = plot(results)
        except (OSError, ValueError, KeyError) as exc:
            print(f"plot error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        for p in paths:
            print(p)
        return EXIT_OK
    return EXIT_CONFIG  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
