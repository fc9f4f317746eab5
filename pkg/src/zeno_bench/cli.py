"""Command line front-end.

Subcommands
-----------
run
    Load a config, simulate the measurement protocol over the full
    (tau, M, epsilon) grid, evaluate the analytic bound at each point,
    write ``sweep.csv`` and ``report.json``, and fail if any simulated
    distance exceeds its bound.
sweep
    Same grid engine as ``run`` but writes only ``sweep.csv``.
bound
    Evaluate bounds only (no density-matrix simulation); D_sim columns
    are left empty.
verify
    Run the deterministic property suites (pauli, stabilizer,
    measurement, bounds, or all) and print the report as JSON.
recurrence-check
    Run the phi oracle grid and the summand recurrence spot checks.

Exit codes: 0 success, 2 config schema violation, 3 model assumption
violation, 4 bound violation (artifacts are still written), 1 any other
failure.  Set ``ZENO_BENCH_LOG`` (debug/info/warning/error) for progress
logging on stderr.
"""

import argparse
import json
import logging
import os
import sys

from .config import load_config
from .errors import (
    AssumptionViolationError,
    BoundViolationError,
    ConfigError,
    VerificationError,
    ZenoBenchError,
)
from .bounds import verify_phi_grid, verify_summand_recurrence
from .sweep import enforce_bounds, report_to_dict, run_sweep, write_csv
from .verify import SUITES, run_suite
from .version import __version__

logger = logging.getLogger("zeno_bench")


def _setup_logging():
    level_name = os.environ.get("ZENO_BENCH_LOG", "").strip().upper()
    if not level_name:
        return
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.INFO
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _write_json(payload, path):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _out_dir(args, config=None):
    out = args.out
    if out is None and config is not None:
        out = config.out_dir
    out = out or "."
    os.makedirs(out, exist_ok=True)
    return out


def _run_grid(args, simulate, write_json_report):
    config = load_config(args.config)
    report = run_sweep(
        config, simulate=simulate, jobs=args.jobs, tolerance=args.tolerance
    )
    out = _out_dir(args, config)
    csv_path = os.path.join(out, "sweep.csv")
    write_csv(report, csv_path)
    logger.info("wrote %s (%d rows)", csv_path, report.points)
    if write_json_report:
        json_path = os.path.join(out, "report.json")
        _write_json(report_to_dict(report), json_path)
        logger.info("wrote %s", json_path)
    if simulate:
        enforce_bounds(report)
        print(
            f"{report.points} points: all simulated distances within "
            f"bound (max excess {report.max_excess:.3e})"
        )
    else:
        print(f"{report.points} points: bounds evaluated")
    return 0


def _cmd_run(args):
    return _run_grid(args, simulate=True, write_json_report=True)


def _cmd_sweep(args):
    return _run_grid(args, simulate=True, write_json_report=False)


def _cmd_bound(args):
    return _run_grid(args, simulate=False, write_json_report=True)


def _cmd_verify(args):
    report = run_suite(
        args.suite, seed=args.seed, zeta_perturbation=args.perturb_zeta
    )
    text = json.dumps(report, indent=2)
    print(text)
    if args.out is not None:
        out = _out_dir(args)
        _write_json(report, os.path.join(out, "report.json"))
    if not report["passed"]:
        failing = [c for c in report["checks"] if not c["passed"]]
        for entry in failing:
            print(
                f"FAILED {entry['suite']}:{entry['check']}: {entry['error']}",
                file=sys.stderr,
            )
        return 1
    return 0


def _cmd_recurrence_check(args):
    report = {
        "phi_grid": verify_phi_grid(tol=args.tolerance),
        "summand_recurrence": verify_summand_recurrence(seed=args.seed),
    }
    print(json.dumps(report, indent=2))
    if args.out is not None:
        out = _out_dir(args)
        _write_json(report, os.path.join(out, "report.json"))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="zeno-bench",
        description=(
            "Simulate weak stabilizer-measurement protocols and check the "
            "analytic distance bounds that govern them."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_grid_command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument(
            "--config", required=True, help="path to a JSON experiment config"
        )
        p.add_argument(
            "--out",
            default=None,
            help="output directory (default: config out_dir, else '.')",
        )
        p.add_argument(
            "--jobs",
            type=int,
            default=1,
            help="worker processes for grid points (default 1)",
        )
        p.add_argument(
            "--seed", type=int, default=0, help="unused by deterministic runs"
        )
        p.add_argument(
            "--tolerance",
            type=float,
            default=None,
            help="bound-comparison tolerance override",
        )
        return p

    add_grid_command(
        "run", "simulate the grid, evaluate bounds, write CSV and JSON"
    ).set_defaults(func=_cmd_run)
    add_grid_command(
        "sweep", "simulate the grid and write sweep.csv only"
    ).set_defaults(func=_cmd_sweep)
    add_grid_command(
        "bound", "evaluate bounds only, without simulation"
    ).set_defaults(func=_cmd_bound)

    p_verify = sub.add_parser(
        "verify", help="run deterministic property suites"
    )
    p_verify.add_argument(
        "--suite",
        default="all",
        choices=SUITES + ("all",),
        help="which suite to run (default all)",
    )
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument(
        "--out", default=None, help="also write report.json here"
    )
    p_verify.add_argument(
        "--perturb-zeta",
        type=float,
        default=0.0,
        help="fault-injection hook: offset the measurement strength used "
        "as the eigen-action reference (nonzero values must fail)",
    )
    p_verify.set_defaults(func=_cmd_verify)

    p_rec = sub.add_parser(
        "recurrence-check",
        help="check the phi closed form against direct summation and the "
        "summand recurrence",
    )
    p_rec.add_argument("--tolerance", type=float, default=1e-9)
    p_rec.add_argument("--seed", type=int, default=0)
    p_rec.add_argument(
        "--out", default=None, help="also write report.json here"
    )
    p_rec.set_defaults(func=_cmd_recurrence_check)
    return parser


def main(argv=None):
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except AssumptionViolationError as exc:
        print(f"assumption violation: {exc}", file=sys.stderr)
        return 3
    except BoundViolationError as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        return 4
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except ZenoBenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
