"""Grid execution: simulation and bound evaluation over (tau, M, epsilon).

Rows are produced in deterministic grid order (tau outer, then M, then
epsilon).  Each point is independent, so grids can be dispatched to a
process pool; workers rebuild the model from the raw config dictionary and
the assembled report is ordered by submission, never by completion.
"""

import concurrent.futures
import csv
import math
from dataclasses import dataclass

from .bounds import bound_parameters, theorem1_bound
from .config import build_model, config_hash, parse_config
from .dynamics import run_protocol
from .errors import BoundViolationError
from .stabilizer import decompose_hamiltonian
from .version import __version__

CSV_COLUMNS = (
    "variant",
    "Q",
    "tau",
    "M",
    "epsilon",
    "D_sim",
    "D_bound",
    "D_strong_limit",
    "B1_over_M",
    "bound_satisfied",
)


@dataclass(frozen=True)
class SweepRow:
    """One grid point: simulated distance, bound, and bound intermediates."""

    variant: str
    Q: int
    tau: float
    M: int
    epsilon: float
    D_sim: float  # None when the point was bound-only
    D_bound: float
    D_strong_limit: float
    B1_over_M: float  # None inside the refused epsilon window
    bound_satisfied: bool  # None when the point was bound-only
    pure_encoded: bool  # None when the point was bound-only
    bound_details: dict


@dataclass(frozen=True)
class SweepReport:
    """All rows of one grid run plus provenance and summary."""

    rows: tuple
    variant: str
    Q: int
    J0: float
    J1: float
    tolerance: float
    simulated: bool
    config_hash: str
    version: str
    points: int
    all_satisfied: bool  # None when the run was bound-only
    max_excess: float  # largest D_sim - D_bound, None when bound-only

    def violations(self):
        return [
            row
            for row in self.rows
            if row.bound_satisfied is False and row.pure_encoded
        ]


def _evaluate_point(code, hspec, rho0, protocol, tolerance, tau, M, epsilon, simulate):
    decomp = decompose_hamiltonian(code, hspec)
    params = bound_parameters(
        code.Q, decomp.J0, decomp.J1, tau, M, epsilon, protocol
    )
    report = theorem1_bound(params)
    d_sim = None
    satisfied = None
    pure = None
    if simulate:
        result = run_protocol(code, hspec, rho0, tau, M, epsilon, protocol)
        d_sim = result.distance
        pure = result.pure_encoded
        satisfied = d_sim <= report.B + tolerance
    return SweepRow(
        variant=protocol,
        Q=code.Q,
        tau=float(tau),
        M=int(M),
        epsilon=float(epsilon),
        D_sim=d_sim,
        D_bound=report.B,
        D_strong_limit=report.strong_limit,
        B1_over_M=None if report.B1 is None else report.B1 / M,
        bound_satisfied=satisfied,
        pure_encoded=pure,
        bound_details=report.to_dict(),
    )


def _point_worker(args):
    raw, tau, M, epsilon, simulate, tolerance = args
    config = parse_config(raw)
    code, hspec, rho0 = build_model(config)
    return _evaluate_point(
        code, hspec, rho0, config.protocol, tolerance, tau, M, epsilon, simulate
    )


def grid_points(config):
    """Deterministic row order: tau outer, then M, then epsilon."""
    return [
        (tau, M, epsilon)
        for tau in config.tau_grid
        for M in config.M_grid
        for epsilon in config.epsilon_grid
    ]


def run_sweep(config, simulate=True, jobs=1, tolerance=None):
    """Evaluate every grid point; simulate=False skips the protocol runs."""
    tol = config.tolerance if tolerance is None else float(tolerance)
    points = grid_points(config)
    code, hspec, rho0 = build_model(config)
    decomp = decompose_hamiltonian(code, hspec)
    if jobs > 1:
        tasks = [
            (config.raw, tau, M, epsilon, simulate, tol)
            for tau, M, epsilon in points
        ]
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_point_worker, tasks))
    else:
        rows = [
            _evaluate_point(
                code, hspec, rho0, config.protocol, tol, tau, M, epsilon, simulate
            )
            for tau, M, epsilon in points
        ]
    excesses = [
        row.D_sim - row.D_bound for row in rows if row.D_sim is not None
    ]
    return SweepReport(
        rows=tuple(rows),
        variant=config.protocol,
        Q=code.Q,
        J0=decomp.J0,
        J1=decomp.J1,
        tolerance=tol,
        simulated=simulate,
        config_hash=config_hash(config.raw),
        version=__version__,
        points=len(rows),
        all_satisfied=(
            all(row.bound_satisfied for row in rows) if simulate else None
        ),
        max_excess=max(excesses) if excesses else None,
    )


def enforce_bounds(report):
    """Raise when any simulated in-hypothesis row exceeds its bound."""
    violations = report.violations()
    if violations:
        worst = max(violations, key=lambda r: r.D_sim - r.D_bound)
        raise BoundViolationError(
            f"{len(violations)} of {report.points} rows exceed the bound; "
            f"worst at tau={_format_value(worst.tau)}, M={worst.M}, "
            f"epsilon={_format_value(worst.epsilon)}: "
            f"D_sim={_format_value(worst.D_sim)} > "
            f"D_bound={_format_value(worst.D_bound)} + "
            f"{_format_value(report.tolerance)}"
        )


def _format_value(value):
    """CSV cell: 17 significant digits, 'inf' for infinities, '' for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return format(value, ".17g")
    return str(value)


def write_csv(report, path):
    """Write the stable-column sweep table."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in report.rows:
            writer.writerow(
                [_format_value(getattr(row, column)) for column in CSV_COLUMNS]
            )


def report_to_dict(report):
    """JSON form of a sweep report with stable key order."""
    return {
        "version": report.version,
        "config_hash": report.config_hash,
        "variant": report.variant,
        "Q": report.Q,
        "J0": report.J0,
        "J1": report.J1,
        "tolerance": report.tolerance,
        "simulated": report.simulated,
        "points": report.points,
        "all_satisfied": report.all_satisfied,
        "max_excess": report.max_excess,
        "rows": [
            {
                "variant": row.variant,
                "Q": row.Q,
                "tau": row.tau,
                "M": row.M,
                "epsilon": "inf" if math.isinf(row.epsilon) else row.epsilon,
                "D_sim": row.D_sim,
                "D_bound": row.D_bound,
                "D_strong_limit": row.D_strong_limit,
                "B1_over_M": row.B1_over_M,
                "bound_satisfied": row.bound_satisfied,
                "pure_encoded": row.pure_encoded,
                "bound_details": row.bound_details,
            }
            for row in report.rows
        ],
    }
