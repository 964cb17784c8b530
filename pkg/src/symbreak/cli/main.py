"""Command-line entry point.

    symbreak [--config FILE] [--out DIR] [--workers N] [--seed U64]
             [--absolute-times] [--emit-config] <subcommand> [--section.key VALUE ...]

Exit codes: 0 success, 2 configuration error, 3 numerical-tolerance failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

from ..errors import ConfigError, NumericalToleranceError
from . import config as cfgmod
from .runners import RUNNERS

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

log = logging.getLogger("symbreak")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="symbreak",
        description="Emit datasets for the ramped-pinning symmetry-breaking scenarios.",
        epilog="Any config key can be overridden as --<section>.<key> VALUE (e.g. --model.delta 1e-3).",
    )
    p.add_argument("--config", help="TOML or JSON scenario file")
    p.add_argument("--out", help="output directory (overrides outputs.directory)")
    p.add_argument("--workers", type=int, help="parallel workers")
    p.add_argument("--seed", type=int, help="tomography sampling seed (unsigned 64-bit)")
    p.add_argument("--absolute-times", action="store_true", help="emit raw times instead of t/t_hat")
    p.add_argument("--emit-config", action="store_true", help="print the resolved config as JSON and exit")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("command", choices=sorted(RUNNERS))
    return p


def split_overrides(argv: list[str]) -> tuple[list[str], dict]:
    """Pull ``--a.b value`` / ``--a.b=value`` pairs out of argv."""
    rest, overrides = [], {}
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg.startswith("--") and "." in arg.split("=", 1)[0]:
            key, eq, val = arg[2:].partition("=")
            if not eq:
                if i + 1 >= len(argv):
                    raise ConfigError("missing value for override", field=key)
                val = argv[i + 1]
                i += 1
            overrides[key] = cfgmod.parse_value(val)
        else:
            rest.append(arg)
        i += 1
    return rest, overrides


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        rest, overrides = split_overrides(argv)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    args = build_parser().parse_args(rest)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.out is not None:
        overrides["outputs.directory"] = args.out
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.seed is not None:
        overrides["tomography.seed"] = args.seed
    if args.absolute_times:
        overrides["outputs.absolute_times"] = True
    try:
        cfg = cfgmod.load(args.config, overrides)
        if args.emit_config:
            sys.stdout.write(cfgmod.emit(cfg))
            return EXIT_OK
        files = RUNNERS[args.command](cfg, cfg.outputs.directory)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalToleranceError as exc:
        print(f"numerical tolerance failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    log.info("wrote %d files to %s", len(files), cfg.outputs.directory)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
