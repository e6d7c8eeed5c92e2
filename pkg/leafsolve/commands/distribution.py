import jax
import numpy as np

from argparse import ArgumentParser, Namespace

from ..data.random_fields import random_matrix
from ..distribution import (BracketReport, check_leaf, iterated_bracket_obstructions,
                            levi_form, levi_tensor, solve_tde)
from ..distribution.brackets import BRACKET_TOL
from ..geometry import ChartExitError, flow_commutator_oracle
from ..loggers import Report
from . import Context

ORACLE_T = 1e-3
ORACLE_TOL = 5 * ORACLE_T
ANTISYMMETRY_TOL = 1e-10
LEAF_TOL = 1e-3


def get_parser(parser: ArgumentParser):
    parser.add_argument("--oracle",
                        action="store_true",
                        help="Also compare the Levi form with the flow "
                        "commutator of the lifted frame fields.")


def run_levi(args: Namespace) -> Report:
    """
    The Levi form on every pair of base vectors at the manifest points.
    """
    ctx = Context(args, "levi")
    inputs = ctx.inputs(["distribution", "points"])
    D = inputs["distribution"]
    report = ctx.report
    tol = ctx.tol(BRACKET_TOL)

    tensor = levi_tensor(D)
    frames = [D.frame_field(i) for i in range(D.k)]
    keys = jax.random.split(ctx.key, len(inputs["points"]))

    worst = antisymmetry = oracle = 0.0
    for n, (point, key) in enumerate(zip(inputs["points"], keys)):
        try:
            D.domain.require(point, "point")
            values = tensor.pair_values(point) if tensor.pairs else np.zeros(
                (0, D.m))

            X, Y = random_matrix((2, D.k), key=key)
            antisymmetry = max(
                antisymmetry,
                float(
                    np.max(
                        np.abs(levi_form(D, point, X, Y) +
                               levi_form(D, point, Y, X)),
                        initial=0.0)))

            deviations = []
            if args.oracle:
                for (i, j), value in zip(tensor.pairs, values):
                    bracket = flow_commutator_oracle(frames[i], frames[j],
                                                     point, ORACLE_T,
                                                     D.domain)
                    deviations.append(
                        float(
                            np.max(np.abs(
                                D.defect_at(bracket, point) - value),
                                   initial=0.0)))
                oracle = max([oracle] + deviations)
        except (ValueError, ArithmeticError, ChartExitError) as e:
            report.add_failure(n, str(e))
            continue

        norm = float(np.max(np.abs(values), initial=0.0))
        worst = max(worst, norm)
        report.log_step({
            "point": point.tolist(),
            "pairs": [[i + 1, j + 1] for i, j in tensor.pairs],
            "levi": values.tolist(),
            "max_norm": norm,
        } | ({
            "oracle_deviation": deviations
        } if args.oracle else {}))

    passed = not report["failures"]
    report.add_check("levi-vanishes", worst, tol,
                     passed=passed and worst <= tol)
    report.add_check("levi-antisymmetry", antisymmetry, ANTISYMMETRY_TOL,
                     passed=passed and antisymmetry <= ANTISYMMETRY_TOL)
    if args.oracle:
        report.add_check("levi-flow-commutator", oracle, ORACLE_TOL,
                         passed=passed and oracle <= ORACLE_TOL)
    return ctx.finish()


def _add_bracket_checks(report: Report, bracket: BracketReport,
                        point_index: int) -> None:
    for order in range(1, bracket.completed_order + 1):
        defect = bracket.max_defect(order)
        report.add_check(f"bracket-order-{order}",
                         defect,
                         bracket.tol,
                         passed=defect <= bracket.tol,
                         point=point_index)
    if bracket.budget_message is not None:
        report.add_check("bracket-budget",
                         float("nan"),
                         bracket.tol,
                         passed=False,
                         point=point_index,
                         completed_order=bracket.completed_order,
                         message=bracket.budget_message)


def run_integrability(args: Namespace) -> Report:
    """
    The iterated bracket defects through order K at every manifest point.
    """
    ctx = Context(args, "integrability")
    inputs = ctx.inputs(["distribution", "points"])
    D = inputs["distribution"]
    report = ctx.report

    assert ctx.order >= 1, (
        f"Expected a bracket order of at least 1, but found: {ctx.order}")

    for n, point in enumerate(inputs["points"]):
        try:
            bracket = iterated_bracket_obstructions(D,
                                                    point,
                                                    ctx.order,
                                                    ctx.tol(BRACKET_TOL),
                                                    logger=report)
        except (ValueError, ArithmeticError) as e:
            report.add_failure(n, str(e))
            report.add_check("bracket-evaluation", float("nan"),
                             ctx.tol(BRACKET_TOL), passed=False, point=n)
            continue
        _add_bracket_checks(report, bracket, n)

    return ctx.finish()


def run_solve_tde(args: Namespace) -> Report:
    """
    Solves df = F(x, f) on the settings grid around x0 and checks the leaf.
    """
    ctx = Context(args, "solve-tde")
    inputs = ctx.inputs(["distribution", "x0", "y0"])
    D = inputs["distribution"]
    report = ctx.report

    grid = ctx.grid(inputs["x0"])
    leaf = solve_tde(D,
                     inputs["x0"],
                     inputs["y0"],
                     grid,
                     ctx.step,
                     logger=report)
    for index, message in leaf.failures.items():
        report.add_failure(list(index), message)

    tol = ctx.tol(LEAF_TOL)
    result = check_leaf(D, leaf, tol)
    report["reachable_radius"] = leaf.reachable_radius
    report["one_sided_nodes"] = result.one_sided_nodes

    report.add_check("leaf-jacobian", result.max_leaf_residual, tol)
    report.add_check("leaf-levi", result.max_levi_residual, tol)
    report.add_check("leaf-reachable",
                     float(len(leaf.failures)),
                     1.0,
                     passed=not leaf.failures)
    return ctx.finish()
