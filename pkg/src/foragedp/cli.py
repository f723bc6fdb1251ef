"""Command-line entry point.

Subcommands: ``solve`` (policy tables), ``sweep`` (behavior and performance
grids), ``align`` (policy-agreement grids), ``boundary`` (closed-form
sampling-vs-feedback curve). Every command reads one config file and prints
the paths it wrote. Exit codes: 0 success, 2 invalid config or parameters,
1 runtime failure.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import config, experiments
from .params import ConfigError, ParamError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foragedp", description=__doc__.split("\n\n")[1])
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "solve": "solve policies and write one table CSV per grid cell",
        "sweep": "simulate ensembles and write sweep.csv (+ differentials.csv)",
        "align": "simulate driven ensembles and write alignment.csv",
        "boundary": "write the closed-form boundary.csv",
    }
    for name, help_text in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to a key=value config file")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                       help="parallel worker processes (results do not depend on this)")
        p.add_argument("--seed", type=int, default=None, help="override sweep.master_seed")
        p.add_argument("--out", default=None, help="override sweep.output_dir")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = config.override(config.load_sweep_config(args.config), args.seed, args.out)
        if args.command == "solve":
            paths = experiments.write_tables(cfg)
        elif args.command == "sweep":
            paths = experiments.write_sweep(cfg, args.workers)
        elif args.command == "align":
            paths = experiments.write_alignment(cfg, args.workers)
        else:
            paths = experiments.write_boundary(cfg)
    except (ParamError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
