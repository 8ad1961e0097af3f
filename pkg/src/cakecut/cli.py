"""Command-line entry point: ``cakecut run|sweep|analyze``."""

from __future__ import annotations

import argparse
import json
import sys

from .config import RunConfig, SweepConfig, load_json
from .errors import CakeError, ConfigError, ModeError
from .valuation import Valuation

EXIT_OK, EXIT_INVALID, EXIT_BOUND = 0, 2, 3


def _parser():
    p = argparse.ArgumentParser(prog="cakecut", description="Repeated cake-cutting simulator")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run one configured game")
    r.add_argument("--config", required=True)
    r.add_argument("--output-dir", help="overrides config and CAKECUT_OUTPUT_DIR")
    s = sub.add_parser("sweep", help="run a grid of games and aggregate")
    s.add_argument("--config", required=True)
    s.add_argument("--output-dir")
    s.add_argument("--fail-on-violation", action="store_true",
                   help="exit with status 3 if any bound check fails")
    a = sub.add_parser("analyze", help="recompute regrets and spiral series from a trajectory")
    a.add_argument("--trajectory", required=True)
    a.add_argument("--vb", required=True, help="Bob's valuation as a JSON literal or file")
    a.add_argument("--va", help="Alice's valuation (enables Stackelberg regret)")
    a.add_argument("--spiral-out", help="write the spiral CSV here")
    return p


def _valuation_arg(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError:
        raw = load_json(text)
    return Valuation.from_dict(raw)


def main(argv=None):
    from . import runner

    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = RunConfig.from_dict(load_json(args.config))
            if args.output_dir:
                cfg.output["dir"] = args.output_dir
            summ, _ = runner.run(cfg)
            print(runner.to_json(summ))
            return EXIT_OK
        if args.command == "sweep":
            sw = SweepConfig.from_dict(load_json(args.config))
            if args.output_dir:
                sw.output["dir"] = args.output_dir
            rows, violations = runner.sweep(sw)
            print(f"{len(rows)} grid points, {len(violations)} bound violations")
            for v in violations:
                print(f"  violation: {v['check']} instance={v['instance']} T={v['T']} "
                      f"seed={v['seed']} value={v['value']:.6g} bound={v['bound']:.6g}")
            if violations and args.fail_on_violation:
                return EXIT_BOUND
            return EXIT_OK
        vB = _valuation_arg(args.vb)
        vA = _valuation_arg(args.va) if args.va else None
        print(runner.to_json(runner.analyze(args.trajectory, vB, vA, args.spiral_out)))
        return EXIT_OK
    except (ConfigError, ModeError, CakeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
