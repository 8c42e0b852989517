"""Command line entry point.

    kerrline [--config PATH] [--out DIR] [--threads N] SUBCOMMAND [options]

Exit codes: 0 success, 2 invalid input, 3 convergence failure, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import sys

from .config import demo_config_path, load_config, parse_config
from .errors import KerrlineError
from .pipeline import SUBCOMMANDS, run_pipeline


def _add_global(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--config", default=default(None), help="JSON config (default: bundled demo)")
    parser.add_argument("--out", default=default("."), help="output directory")
    parser.add_argument("--threads", type=int, default=default(1), help="worker threads, 0 = auto")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kerrline", description=__doc__.splitlines()[0])
    _add_global(parser, suppress=False)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    parsers = {}
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        _add_global(sp, suppress=True)
        parsers[name] = sp
    cp = parsers["current-profile"]
    cp.add_argument("--photons", type=int, default=1, help="photons in the fundamental mode")
    cp.add_argument("--n-cutoff", type=int, default=None, help="modes included (default: all)")
    cp.add_argument("--points-per-half", type=int, default=401)
    vk = parsers["verify-kerr"]
    vk.add_argument("--tol", type=float, default=0.05, help="maximum relative deviation")
    vk.add_argument("--points", type=int, default=10, help="sweep points checked")
    lt = parsers["lattice"]
    lt.add_argument("--sites", type=int, default=4)
    lt.add_argument("--cutoff", type=int, default=None, help="per-site photon cutoff (default: fock_cutoff)")
    lt.add_argument("--sector", type=int, action="append", help="total photon number; repeatable")
    lt.add_argument("--periodic", action="store_true")
    return parser


GLOBAL = {"config", "out", "threads", "subcommand"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    options = {k: v for k, v in vars(args).items() if k not in GLOBAL and v is not None}
    try:
        if args.config is None:
            cfg = parse_config(demo_config_path().read_bytes())
        else:
            cfg = load_config(args.config)
        outcome = run_pipeline(cfg, args.subcommand, args.out, threads=args.threads, options=options)
    except KerrlineError as err:
        print(f"kerrline {args.subcommand}: {type(err).__name__}: {err}", file=sys.stderr)
        return err.exit_code
    for path in outcome.files:
        print(path)
    if outcome.exit_code:
        print(f"kerrline {args.subcommand}: check failed: {outcome.manifest['summary']}", file=sys.stderr)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
