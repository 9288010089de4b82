"""Command line entry point: ``simulate <config> [--out DIR] [--format csv|json] [--threads N]``.

Exit codes: 0 success, 1 config error, 2 computation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .config import FORMATS, ConfigError, load_config, with_overrides
from .experiment import run_sweep

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_COMPUTE = 2
EXIT_IO = 3

log = logging.getLogger("spinbath")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="simulate",
        description="Concurrence dynamics and Zeno survival for two spins coupled to spin baths.",
    )
    ap.add_argument("config", help="TOML experiment config")
    ap.add_argument("--out", help="output directory (overrides output.dir)")
    ap.add_argument("--format", choices=FORMATS, help="output format (overrides output.format)")
    ap.add_argument("--threads", type=int, default=1, help="sweep points run concurrently (default 1)")
    ap.add_argument("--validate", action="store_true", help="parse and validate the config, then exit")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config)
        cfg = with_overrides(cfg, output_dir=args.out, output_format=args.format)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.validate:
        print("config ok")
        return EXIT_OK

    try:
        paths = run_sweep(cfg, threads=args.threads)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    log.info("%d files written to %s", len(paths), cfg.output_dir)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
