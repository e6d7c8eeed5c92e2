"""
Relatedness of torsion and curvature under a linear map σ: TM -> TN, the
Levi form of the distribution Gr(σ) ⊕ {0} on M × N × Lin(R^n, R^m), and its
higher-order version at the base points.
"""
import numpy as np

from typing import Sequence

from ..connection import (OBSTRUCTION_TOL, ObstructionReport, OrderCheck,
                          covariant_derivatives, curvature, largest_entry,
                          torsion)
from ..distribution import GraphDistribution
from ..expr import (DEFAULT_BUDGET, BudgetExceededError, Variable, add, mul,
                    neg)
from ..geometry import Box
from .problem import CahProblem

RELATES_TOL = 1e-8
SIGMA_HALF_WIDTH = 10.0


def pull_slots(values: np.ndarray, sigma: np.ndarray,
               slots: int) -> np.ndarray:
    """
    Evaluates the first `slots` arguments of a tensor on N at σ-images:
    result[i_1..i_s, ...] = Σ values[p_1..p_s, ...] σ[p_1, i_1]..σ[p_s, i_s].
    """
    for k in range(slots):
        values = np.moveaxis(np.tensordot(values, sigma, axes=([k], [0])), -1,
                             k)
    return values


def relatedness_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """
    max |lhs − rhs| normalized by max(1, largest entry of either side).
    """
    if lhs.size == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
    return float(np.max(np.abs(lhs - rhs))) / scale


def check_relates(sigma: np.ndarray, TM: np.ndarray, TN: np.ndarray,
                  RM: np.ndarray, RN: np.ndarray) -> tuple[float, float]:
    """
    The normalized residuals over basis vectors of

        σ T^M(u, v) − T^N(σu, σv)   and   σ R^M(u, v) w − R^N(σu, σv) σ w

    from tensor values `TM[i, j, a]`, `RM[i, j, a, b]` at x and `TN`, `RN` at
    the paired point of N.
    """
    torsion_lhs = np.einsum("ak,ijk->ija", sigma, TM)
    torsion_rhs = pull_slots(TN, sigma, 2)

    curvature_lhs = np.einsum("ca,ijab->ijcb", sigma, RM)
    curvature_rhs = pull_slots(RN, sigma, 2) @ sigma

    return (relatedness_residual(torsion_lhs, torsion_rhs),
            relatedness_residual(curvature_lhs, curvature_rhs))


def levi_form_hom(prob: CahProblem,
                  x: Sequence[float] | np.ndarray,
                  y: Sequence[float] | np.ndarray,
                  sigma: np.ndarray,
                  v1: Sequence[float] | np.ndarray,
                  v2: Sequence[float] | np.ndarray
                  ) -> tuple[np.ndarray, np.ndarray]:
    """
    The Levi form of Gr(σ) ⊕ {0} at (x, y, σ) on (v1, v2), identified with

        (σ T^M(v1, v2) − T^N(σv1, σv2),  σ ∘ R^M(v1, v2) − R^N(σv1, σv2) ∘ σ).

    The second component is the connection-vertical part; the coordinate
    Levi form of `cah_distribution` differs from it by −ω^N(first part) σ.
    """
    prob.source.domain.require(x, "x")
    prob.target.domain.require(y, "y")
    sigma = np.asarray(sigma, dtype=np.float64)
    v1 = np.asarray(v1, dtype=np.float64)
    v2 = np.asarray(v2, dtype=np.float64)
    assert sigma.shape == (prob.m, prob.n), (
        f"Expected `sigma` to have shape ({prob.m}, {prob.n}), but found "
        f"shape: {sigma.shape}")

    w1, w2 = sigma @ v1, sigma @ v2
    TM = torsion(prob.source).at(x)
    TN = torsion(prob.target).at(y)
    RM = np.einsum("i,j,ijab->ab", v1, v2, curvature(prob.source).at(x))
    RN = np.einsum("p,q,pqab->ab", w1, w2, curvature(prob.target).at(y))

    vector = sigma @ np.einsum("i,j,ija->a", v1, v2, TM) - np.einsum(
        "p,q,pqa->a", w1, w2, TN)
    matrix = sigma @ RM - RN @ sigma
    return vector, matrix


def sigma_names(m: int, n: int) -> tuple[str, ...]:
    return tuple(f"s{alpha + 1}_{a + 1}" for alpha in range(m)
                 for a in range(n))


def cah_distribution(prob: CahProblem,
                     sigma_half_width: float = SIGMA_HALF_WIDTH
                     ) -> GraphDistribution:
    """
    The distribution Gr(σ) ⊕ {0} as a graph over the source coordinates on
    M × N × Lin(R^n, R^m): the lift of v at (x, y, σ) is

        (v, σ v, −(ω^M-part(v) + ω^N-part(σ v)) σ)

    with the hom-connection coefficients acting on σ flattened row-major.
    """
    n, m = prob.n, prob.m
    hom = prob.hom
    names = sigma_names(m, n)
    s = [Variable(name) for name in names]

    rows: list[tuple] = []
    for alpha in range(m):
        rows.append(tuple(s[alpha * n + i] for i in range(n)))

    for row in range(m * n):
        entries = []
        for i in range(n):
            # coefficient matrix along the lift direction (e_i, σ e_i)
            terms = []
            for c in range(m * n):
                coefficient = add(hom.omega[i, row, c],
                                  *(mul(s[mu * n + i], hom.omega[n + mu, row, c])
                                    for mu in range(m)))
                terms.append(mul(coefficient, s[c]))
            entries.append(neg(add(*terms)))
        rows.append(tuple(entries))

    domain = prob.source.domain.product(prob.target.domain).product(
        Box.cube(m * n, sigma_half_width))
    return GraphDistribution(tuple(rows), domain, prob.source.coordinates,
                             prob.target_coordinates + names)


def higher_order_cah_check(prob: CahProblem,
                           max_order: int = 4,
                           tol: float = RELATES_TOL,
                           budget: int = DEFAULT_BUDGET) -> ObstructionReport:
    """
    For r = 0..`max_order`, whether σ0 relates ∇^r T^M at x0 with ∇^r T^N at
    y0, and ∇^r R^M with ∇^r R^N (one extra σ0 on the operator argument).

    Parameters
    ---
    - `prob` (`CahProblem`): The problem.
    - `max_order` (`int`): The deepest order r.
    - `tol` (`float`): The normalized residual tolerance.
    - `budget` (`int`): The expression budget per order.

    Returns
    ---
    - An `ObstructionReport` with a "torsion" and a "curvature" check per
      order.
    """
    messages = []

    def derivatives(conn, tensor):
        try:
            return covariant_derivatives(conn, conn, tensor, max_order, budget)
        except BudgetExceededError as e:
            messages.append(str(e))
            return e.partial

    TM = derivatives(prob.source, torsion(prob.source))
    TN = derivatives(prob.target, torsion(prob.target))
    RM = derivatives(prob.source, curvature(prob.source))
    RN = derivatives(prob.target, curvature(prob.target))
    completed = min(len(TM), len(TN), len(RM), len(RN))

    sigma = prob.sigma0
    checks = []
    for r in range(completed):
        torsion_lhs = np.tensordot(TM[r].at(prob.x0), sigma, axes=([-1], [1]))
        torsion_rhs = pull_slots(TN[r].at(prob.y0), sigma, r + 2)
        checks.append(
            _relates_check(r, torsion_lhs, torsion_rhs, "torsion"))

        curvature_lhs = np.moveaxis(
            np.tensordot(RM[r].at(prob.x0), sigma, axes=([-2], [1])), -1, -2)
        curvature_rhs = pull_slots(RN[r].at(prob.y0), sigma, r + 2) @ sigma
        checks.append(
            _relates_check(r, curvature_lhs, curvature_rhs, "curvature"))

    return ObstructionReport(checks, tol, completed - 1,
                             messages[0] if messages else None)


def _relates_check(order: int, lhs: np.ndarray, rhs: np.ndarray,
                   label: str) -> OrderCheck:
    scale = max(1.0, float(np.max(np.abs(lhs), initial=0.0)),
                float(np.max(np.abs(rhs), initial=0.0)))
    residual, witness = largest_entry((lhs - rhs) / scale)
    return OrderCheck(order, residual, witness, label)
