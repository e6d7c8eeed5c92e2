import numpy as np

from argparse import ArgumentParser, Namespace

from ..geometry import ChartExitError
from ..loggers import Report
from ..spray import (ConvergenceError, RadiusProbe, estimate_normal_radius,
                     exp_map, log_map, solve_spray, validate_homogeneity)
from ..spray.maps import LOG_TOL, ROUND_TRIP_TOL
from . import Context

HOMOGENEITY_TOL = 1e-10
GEODESIC_SAMPLES = 11


def get_parser(parser: ArgumentParser):
    parser.add_argument("--radius",
                        action="store_true",
                        help="Also estimate the normal radius at `x`.")


def _normal_radius(ctx: Context, spray, x: np.ndarray) -> None:
    probes: list[RadiusProbe] = []
    radius = estimate_normal_radius(spray,
                                    x,
                                    ctx.step,
                                    key=ctx.key,
                                    probes=probes)
    ctx.report["normal_radius"] = {
        "radius": radius,
        "probes": [{
            "radius": probe.radius,
            "passed": probe.passed,
            "reason": probe.reason,
        } for probe in probes],
    }


def run_geodesic(args: Namespace) -> Report:
    """
    Solves the spray from (x, v) over `t_span` (by default [0, 1]).
    """
    ctx = Context(args, "geodesic")
    inputs = ctx.inputs(["spray", "x", "v"])
    spray = inputs["spray"]
    report = ctx.report
    t_span = inputs.get("t_span")
    t0, t1 = (0.0, 1.0) if t_span is None else (float(t_span[0]),
                                                 float(t_span[1]))

    solution = solve_spray(spray, inputs["x"], inputs["v"], (t0, t1),
                           ctx.step)
    for t in np.linspace(t0, solution.t_end, GEODESIC_SAMPLES):
        point, velocity = solution(float(t))
        report.log_step({
            "t": float(t),
            "x": point.tolist(),
            "v": velocity.tolist(),
        })

    report["end_point"] = solution.end_point.tolist()
    report["end_velocity"] = solution.end_velocity.tolist()
    report["exit_time"] = solution.exit_time
    if not solution.complete:
        report.add_failure({"t": solution.exit_time}, str(solution.message))

    report.add_check("spray-homogeneity",
                     validate_homogeneity(spray, key=ctx.key),
                     HOMOGENEITY_TOL)
    report.add_check("geodesic-complete",
                     0.0 if solution.complete else 1.0,
                     1.0,
                     passed=solution.complete)
    if args.radius:
        _normal_radius(ctx, spray, inputs["x"])
    return ctx.finish()


def run_exp(args: Namespace) -> Report:
    """
    exp_x(v), checked against the logarithm of the result.
    """
    ctx = Context(args, "exp")
    inputs = ctx.inputs(["spray", "x", "v"])
    spray, x, v = inputs["spray"], inputs["x"], inputs["v"]
    report = ctx.report
    tol = ctx.tol(ROUND_TRIP_TOL)

    try:
        point = exp_map(spray, x, v, ctx.step)
        report["point"] = point.tolist()
        recovered = log_map(spray, x, point, ctx.step)
        report.add_check("exp-log-round-trip",
                         float(np.max(np.abs(recovered - v))) / max(
                             1.0, float(np.max(np.abs(v)))), tol)
    except (ChartExitError, ConvergenceError) as e:
        report.add_failure("x", str(e))
        report.add_check("exp-log-round-trip", float("nan"), tol, passed=False)

    if args.radius:
        _normal_radius(ctx, spray, x)
    return ctx.finish()


def run_log(args: Namespace) -> Report:
    """
    log_x(target) by Newton iterations on the exponential.
    """
    ctx = Context(args, "log")
    inputs = ctx.inputs(["spray", "x", "target"])
    spray, x, target = inputs["spray"], inputs["x"], inputs["target"]
    report = ctx.report
    tol = ctx.tol(10 * LOG_TOL)

    try:
        v = log_map(spray, x, target, ctx.step)
        report["velocity"] = v.tolist()
        residual = float(np.max(np.abs(exp_map(spray, x, v, ctx.step) -
                                       target)))
        report.add_check("log-residual", residual, tol)
    except (ChartExitError, ConvergenceError) as e:
        report.add_failure("target", str(e))
        report.add_check("log-residual", float("nan"), tol, passed=False)

    if args.radius:
        _normal_radius(ctx, spray, x)
    return ctx.finish()
