from argparse import ArgumentParser, Namespace

from ..cah import (AFFINE_TOL, RELATES_TOL, AffineMapGrid,
                   affine_residual, affine_symmetry_check, cah_map,
                   higher_order_cah_check, involution_residual)
from ..connection import OBSTRUCTION_TOL
from ..loggers import Report
from . import Context
from .metric import add_order_checks

INVOLUTION_TOL = 1e-5


def get_parser(parser: ArgumentParser):
    parser.add_argument("--construct",
                        action="store_true",
                        help="Build the symmetry on the settings grid when "
                        "the order checks pass.")


def _add_map_checks(ctx: Context, amap: AffineMapGrid) -> None:
    report = ctx.report
    for index, message in amap.failures.items():
        report.add_failure(list(index), message)

    relates_tol = ctx.tol(RELATES_TOL)
    report.add_check("torsion-relatedness", amap.max_torsion_residual(),
                     relates_tol)
    report.add_check("curvature-relatedness", amap.max_curvature_residual(),
                     relates_tol)
    report.add_check("jacobian", amap.max_jacobian_residual(), AFFINE_TOL)
    report.add_check("horizontality", amap.max_horizontality_residual(),
                     AFFINE_TOL)

    affine = affine_residual(amap.problem, amap, AFFINE_TOL)
    report.add_check("affine", affine.max_residual, affine.tol)


def run_cah_map(args: Namespace) -> Report:
    """
    Constructs the affine map of the manifest problem on the settings grid
    around x0.
    """
    ctx = Context(args, "cah-map")
    prob = ctx.loaded.require_cah()

    amap = cah_map(prob, ctx.grid(prob.x0), ctx.step, logger=ctx.report)
    ctx.report["reachable_nodes"] = int(amap.reachable.sum())
    _add_map_checks(ctx, amap)
    return ctx.finish()


def run_cah_check(args: Namespace) -> Report:
    """
    Whether σ0 relates ∇^r T and ∇^r R of source and target at the base
    points for r = 0..K.
    """
    ctx = Context(args, "cah-check")
    prob = ctx.loaded.require_cah()

    add_order_checks(ctx.report,
                     higher_order_cah_check(prob, ctx.order,
                                            ctx.tol(RELATES_TOL)), "cah")
    return ctx.finish()


def run_affine_symmetry(args: Namespace) -> Report:
    """
    The affine-symmetry criterion at x0 through order K and, with
    `--construct`, the symmetry itself with its affine and involution
    residuals.
    """
    ctx = Context(args, "affine-symmetry")
    inputs = ctx.inputs(["connection", "x0"])
    conn, x0 = inputs["connection"], inputs["x0"]
    report = ctx.report

    result = affine_symmetry_check(conn,
                                   x0,
                                   ctx.order,
                                   ctx.tol(OBSTRUCTION_TOL),
                                   grid=ctx.grid(x0) if args.construct else None,
                                   step=ctx.step)
    add_order_checks(report, result.report, "symmetry")

    if result.symmetry is not None and result.affine is not None:
        symmetry = result.symmetry
        for index, message in symmetry.failures.items():
            report.add_failure(list(index), message)
        report.add_check("affine", result.affine.max_residual,
                         result.affine.tol)
        report.add_check("involution",
                         involution_residual(symmetry.problem, symmetry,
                                             ctx.step), INVOLUTION_TOL)
    return ctx.finish()
