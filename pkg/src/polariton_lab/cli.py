"""``polariton-lab <task> [--config FILE] [--out PATH] [--set key=value ...]``

Exit status: 0 on success, 2 for configuration errors, 3 for numerical
failures (no convergence, singular systems, a point outside the valid
regime).
"""
from __future__ import annotations

import argparse
import sys

from .config import TASKS, ConfigError, load_config
from .errors import NumericalError, RegimeError
from .tasks import run
from .version import __version__

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polariton-lab",
        description="Polariton spectra, transition tables and EIT/ATS datasets for a driven circuit-QED system.",
    )
    parser.add_argument("task", choices=TASKS)
    parser.add_argument("--config", "-c", help="JSON config file (see docs/config.md)")
    parser.add_argument("--out", "-o", help="output path; stdout when omitted")
    parser.add_argument("--format", choices=("csv", "json"), help="override the output format")
    parser.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="override a config field; VALUE is parsed as JSON when possible (repeatable)",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = list(args.overrides)
    if args.out is not None:
        overrides.append(f"output={args.out}")
    if args.format is not None:
        overrides.append(f"format={args.format}")
    try:
        cfg = load_config(args.config, overrides, task=args.task)
        dataset = run(cfg)
    except (ConfigError, OSError) as exc:
        print(f"polariton-lab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, RegimeError, ValueError, ZeroDivisionError) as exc:
        print(f"polariton-lab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    fmt = cfg.output_format()
    if cfg.output:
        dataset.write(cfg.output, fmt)
    else:
        sys.stdout.write(dataset.to_json() if fmt == "json" else dataset.to_csv())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
