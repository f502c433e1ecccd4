"""Command-line driver: ``maxmin-ident {forward,recover,verify,mc,demo}``.

Exit codes: 0 on success, 2 for configuration errors, 3 when the numbers
cannot be inverted.
"""

import argparse
import logging
import sys

from .exceptions import ConfigError, GeneratorDomainError, MaxMinIdentError, UnrecoverableRegionError, ValidationError
from .runner import load_config, run_demo, run_forward, run_mc, run_recover, run_verify

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

COMMANDS = {
    "forward": run_forward,
    "recover": run_recover,
    "verify": run_verify,
    "mc": run_mc,
    "demo": run_demo,
}

log = logging.getLogger("maxmin_ident")


def _seed(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _count(text):
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("grid count must be at least 2")
    return value


def build_parser():
    # argparse already exits with 2 on usage errors, matching EXIT_CONFIG
    parser = argparse.ArgumentParser(prog="maxmin-ident", description="Identifiability experiments for extremes of dependent variables.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "forward": "tabulate the joint law of the observed extremes",
        "recover": "reconstruct the component distributions",
        "verify": "compare two models through their joint laws",
        "mc": "sample, estimate and reconstruct with an error budget",
        "demo": "show that a single maximum does not identify its components",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, help="JSON experiment file")
        p.add_argument("--out", help="output path (default: config 'output', else stdout)")
        p.add_argument("--seed", type=_seed, help="override the configured seed")
        p.add_argument("--grid-count", type=_count, help="override grid.count")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config, seed=args.seed, grid_count=args.grid_count)
        text = COMMANDS[args.command](cfg)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (UnrecoverableRegionError, GeneratorDomainError) as exc:
        print(f"unrecoverable: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except MaxMinIdentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    out = args.out or cfg.output
    if out:
        try:
            with open(out, "w", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {out}: {exc.strerror}", file=sys.stderr)
            return EXIT_CONFIG
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
