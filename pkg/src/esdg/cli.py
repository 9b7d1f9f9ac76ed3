"""Batch command-line interface.

Subcommands: ``run`` (config-driven), ``mms`` (channel convergence table),
``entropy-audit`` (moving-lid conservation check), ``blast`` (1D model
comparison), ``selftest``.  Exit status: 0 on success/PASS, 1 on a case
failure, 2 on configuration or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cases import (run_blast_wave, run_entropy_audit, run_from_config,
                    run_mms_convergence, selftest)
from .config import ConfigError, load_config

EXIT_OK = 0
EXIT_CASE_FAILED = 1
EXIT_CONFIG_ERROR = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="esdg",
        description="Entropy-stable DG solver for mass-diffusive "
                    "compressible flow: batch cases and verification runs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate a JSON run configuration")
    p_run.add_argument("--config", required=True, help="path to config JSON")
    p_run.add_argument("--out", help="override output directory")
    p_run.add_argument("--p", type=int, help="override solution degree")
    p_run.add_argument("--elements", type=int, nargs="+",
                       help="override element counts")
    p_run.add_argument("--model", choices=("eulerian", "cns"),
                       help="override flow model")
    p_run.add_argument("--beta0", type=float,
                       help="override wall/interface penalty strength")

    p_mms = sub.add_parser("mms", help="manufactured-solution convergence")
    p_mms.add_argument("--p", type=int, default=2, choices=(2, 3, 4))
    p_mms.add_argument("--grids", type=int, nargs="+",
                       default=(4, 8, 16, 32))
    p_mms.add_argument("--t-end", type=float, default=40.0)
    p_mms.add_argument("--out", default="out")

    p_aud = sub.add_parser("entropy-audit",
                           help="moving-lid entropy-conservation audit")
    p_aud.add_argument("--p", type=int, default=5)
    p_aud.add_argument("--elements", type=int, default=8)
    p_aud.add_argument("--steps", type=int, default=1000)
    p_aud.add_argument("--beta0", type=float, default=0.0)
    p_aud.add_argument("--out", default="out")

    p_blast = sub.add_parser("blast", help="1D blast-wave model comparison")
    p_blast.add_argument("--grids", type=int, nargs="+",
                         default=(2048, 4096, 8192))
    p_blast.add_argument("--models", nargs="+",
                         default=("eulerian", "cns1d"),
                         choices=("eulerian", "cns1d"))
    p_blast.add_argument("--t-end", type=float, default=0.01)
    p_blast.add_argument("--out", default="out")

    sub.add_parser("selftest", help="run the in-process property suites")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "selftest":
            return EXIT_OK if selftest() else EXIT_CASE_FAILED

        if args.command == "run":
            cfg = load_config(args.config)
            if args.out is not None:
                cfg["output_dir"] = args.out
            if args.p is not None:
                cfg["p"] = args.p
            if args.elements is not None:
                cfg["elements"] = list(args.elements)
            if args.model is not None:
                cfg["model"] = args.model
            if args.beta0 is not None:
                cfg["discretization"]["beta0_interface"] = args.beta0
                cfg["discretization"]["beta0_wall"] = args.beta0
            result = run_from_config(cfg)
        elif args.command == "mms":
            result = run_mms_convergence(args.p, tuple(args.grids),
                                         out_dir=args.out, t_end=args.t_end)
        elif args.command == "entropy-audit":
            result = run_entropy_audit(out_dir=args.out, p=args.p,
                                       elems=args.elements,
                                       n_steps=args.steps, beta0=args.beta0)
        else:  # blast
            result = run_blast_wave(out_dir=args.out,
                                    grids=tuple(args.grids),
                                    models=tuple(args.models),
                                    t_end=args.t_end)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    print(json.dumps({"case": result.name,
                      "verdict": "PASS" if result.passed else "FAIL",
                      "artifacts": result.artifacts}, indent=2, default=str))
    return EXIT_OK if result.passed else EXIT_CASE_FAILED


if __name__ == "__main__":
    sys.exit(main())
