from argparse import Namespace

from ..connection import NonSymmetricConnectionError, ObstructionReport
from ..geometry import ChartExitError
from ..loggers import Report
from ..metric import (HYPOTHESIS_TOL, HypothesisError, MetricGrid,
                      check_antisymmetry_hypothesis, higher_order_metric_check,
                      recover_metric, verify_levi_civita)
from . import Context

NABLA_G_TOL = 1e-5


def add_order_checks(report: Report, obstruction: ObstructionReport,
                     prefix: str) -> None:
    """
    One check per order and label of an `ObstructionReport`, plus a failing
    check when the expression budget stopped it early.
    """
    for check in obstruction.checks:
        name = f"{prefix}-{check.label}-order-{check.order}".replace(" ", "-")
        report.add_check(name,
                         check.residual,
                         obstruction.tol,
                         witness=check.witness)
    if obstruction.budget_message is not None:
        report.add_check(f"{prefix}-budget",
                         float("nan"),
                         obstruction.tol,
                         passed=False,
                         completed_order=obstruction.completed_order,
                         message=obstruction.budget_message)


def _recover(ctx: Context) -> MetricGrid | None:
    entry = ctx.loaded.require_metric_seed()
    conn = ctx.loaded.connections[entry.connection]
    seed = entry.seed
    report = ctx.report

    try:
        hypothesis = check_antisymmetry_hypothesis(conn, seed, step=ctx.step)
    except NonSymmetricConnectionError as e:
        report.add_failure("connection", str(e))
        report.add_check("torsion-free", float("nan"), 0.0, passed=False)
        return None
    except ChartExitError as e:
        report.add_failure("metric_seed", str(e))
        report.add_check("antisymmetry-hypothesis",
                         float("nan"),
                         HYPOTHESIS_TOL,
                         passed=False)
        return None

    report.add_check("antisymmetry-hypothesis",
                     hypothesis.residual,
                     hypothesis.tol,
                     samples=hypothesis.samples)

    try:
        metric = recover_metric(conn,
                                seed,
                                ctx.grid(seed.base_point),
                                ctx.step,
                                override=ctx.override,
                                tol=HYPOTHESIS_TOL,
                                logger=report)
    except HypothesisError as e:
        report.add_failure("metric_seed", str(e))
        return None

    for index, message in metric.failures.items():
        report.add_failure(list(index), message)

    report["overridden"] = ctx.override and not hypothesis.passed
    report["signature"] = list(seed.signature)
    report.add_check("signature-constant",
                     0.0 if metric.signature_constant else 1.0,
                     1.0,
                     passed=metric.signature_constant)
    report.add_check("metric-symmetry", metric.max_asymmetry,
                     ctx.tol(NABLA_G_TOL))
    return metric


def run_recover_metric(args: Namespace) -> Report:
    """
    Recovers the metric on the settings grid around the seed's base point
    and reports ‖∇g‖.
    """
    ctx = Context(args, "recover-metric")
    metric = _recover(ctx)
    if metric is not None:
        ctx.report.add_check("nabla-g", metric.max_residual,
                             ctx.tol(NABLA_G_TOL))
    return ctx.finish()


def run_verify_metric(args: Namespace) -> Report:
    """
    Recovers the metric, checks that the connection is its Levi-Civita
    connection and runs the g0-antisymmetry checks of ∇^k R through order K.
    """
    ctx = Context(args, "verify-metric")
    metric = _recover(ctx)
    if metric is None:
        return ctx.finish()

    entry = ctx.loaded.require_metric_seed()
    conn = ctx.loaded.connections[entry.connection]
    levi_civita = verify_levi_civita(conn, metric, ctx.tol(NABLA_G_TOL))

    ctx.report.add_check("levi-civita-torsion", levi_civita.torsion_residual,
                         levi_civita.tol)
    ctx.report.add_check("levi-civita-nabla-g", levi_civita.nabla_g_residual,
                         levi_civita.tol)

    add_order_checks(ctx.report,
                     higher_order_metric_check(conn, entry.seed, ctx.order),
                     "metric")
    return ctx.finish()
