"""
Tensor fields with values in a bundle, and their iterated covariant
derivatives.

A `TensorFieldExpr` of arity `s` stores its components densely in an object
array of shape `(n,) * s + fiber_shape`: the first `s` indices are the
covariant slots, the rest index the fiber value.
"""
import numpy as np

from dataclasses import dataclass
from functools import cached_property
from typing import Literal, Sequence

from ..expr import (DEFAULT_BUDGET, CompiledExprs, ScalarExpr, add,
                    check_budget, dag_size, differentiate, mul, neg)
from .bundle import BundleConnection, expr_array

FiberKind = Literal["scalar", "vector", "covector", "endo", "bilinear"]

FIBER_RANKS: dict[str, int] = {
    "scalar": 0,
    "vector": 1,
    "covector": 1,
    "endo": 2,
    "bilinear": 2,
}


@dataclass(frozen=True, eq=False)
class TensorFieldExpr:
    """
    A tensor field with `arity` covariant slots and values in the fiber
    described by `fiber`: a scalar, a vector s^a, a covector α_a, an
    endomorphism A^a_b or a bilinear form G_{ab}.
    """

    coordinates: tuple[str, ...]
    components: np.ndarray
    arity: int
    fiber: FiberKind

    def __post_init__(self) -> None:
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        components = expr_array(self.components)
        object.__setattr__(self, "components", components)

        assert self.fiber in FIBER_RANKS, (
            f"Expected a fiber kind in {list(FIBER_RANKS)}, but found: "
            f"{self.fiber}")

        n = len(self.coordinates)
        fiber_rank = FIBER_RANKS[self.fiber]
        assert components.ndim == self.arity + fiber_rank, (
            f"Expected {self.arity + fiber_rank} component indices, but found "
            f"{components.ndim}")
        assert components.shape[:self.arity] == (n, ) * self.arity, (
            f"Expected covariant slots of size {n}, but found shape: "
            f"{components.shape}")
        if fiber_rank == 2:
            assert components.shape[-1] == components.shape[-2], (
                f"Expected a square fiber value, but found shape: "
                f"{components.shape}")

    @property
    def n(self) -> int:
        return len(self.coordinates)

    @property
    def rank(self) -> int:
        """
        The fiber dimension r (0 for scalar fibers).
        """
        fiber_shape = self.fiber_shape
        return fiber_shape[0] if fiber_shape else 0

    @property
    def slot_shape(self) -> tuple[int, ...]:
        return self.components.shape[:self.arity]

    @property
    def fiber_shape(self) -> tuple[int, ...]:
        return self.components.shape[self.arity:]

    @property
    def size(self) -> int:
        return dag_size(self.components.flat)

    @cached_property
    def compiled(self) -> CompiledExprs:
        return CompiledExprs(list(self.components.flat), self.coordinates)

    def at(self, point: Sequence[float] | np.ndarray) -> np.ndarray:
        """
        The components at `point` as a float array of the component shape.
        """
        return self.compiled(point).reshape(self.components.shape)

    def __getitem__(self, index) -> np.ndarray | ScalarExpr:
        return self.components[index]


def fiber_action(kind: FiberKind, W: np.ndarray, value: np.ndarray,
                 index: tuple[int, ...]) -> list[ScalarExpr]:
    """
    The terms of the component `index` of the fiber action of a coefficient
    matrix `W` on a fiber value: `W s`, `−Wᵀ α`, `W A − A W` or
    `−Wᵀ G − G W`.
    """
    r = W.shape[0]
    match kind:
        case "scalar":
            return []
        case "vector":
            (a, ) = index
            return [mul(W[a, b], value[b]) for b in range(r)]
        case "covector":
            (a, ) = index
            return [neg(mul(W[b, a], value[b])) for b in range(r)]
        case "endo":
            a, b = index
            return ([mul(W[a, c], value[c, b]) for c in range(r)] +
                    [neg(mul(value[a, c], W[c, b])) for c in range(r)])
        case "bilinear":
            a, b = index
            return ([neg(mul(W[c, a], value[c, b])) for c in range(r)] +
                    [neg(mul(value[a, c], W[c, b])) for c in range(r)])
    raise ValueError(f"Unknown fiber kind: {kind}")


def nabla(tangent_conn: BundleConnection, fiber_conn: BundleConnection | None,
          tensor: TensorFieldExpr) -> TensorFieldExpr:
    """
    One covariant derivative, adding a covariant slot in front:

        (∇τ)_{z, i_1..i_s} = ∂_z τ_{i_1..i_s} + ω_z · τ_{i_1..i_s}
                             − Σ_p Σ_c Γ^c_{z i_p} τ_{i_1..c..i_s}

    where ω_z acts on the fiber value according to the fiber kind.
    """
    tangent_conn.require_tangent()
    n = tangent_conn.n
    assert tangent_conn.coordinates == tensor.coordinates, (
        f"Expected a tensor over {tangent_conn.coordinates}, but found "
        f"{tensor.coordinates}")

    if tensor.fiber != "scalar":
        assert fiber_conn is not None, "Expected a fiber connection"
        assert fiber_conn.coordinates == tensor.coordinates, (
            f"Expected a fiber connection over {tensor.coordinates}, but "
            f"found {fiber_conn.coordinates}")
        assert fiber_conn.r == tensor.rank, (
            f"Expected a fiber connection of rank {tensor.rank}, but found "
            f"{fiber_conn.r}")

    components = tensor.components
    gamma = tangent_conn.omega
    result = np.empty((n, ) + components.shape, dtype=object)

    for z in range(n):
        name = tangent_conn.coordinates[z]
        for slots in np.ndindex(tensor.slot_shape):
            value = components[slots]
            for fiber_index in np.ndindex(tensor.fiber_shape):
                full = slots + fiber_index
                terms = [differentiate(components[full], name)]

                if fiber_conn is not None and tensor.fiber != "scalar":
                    terms += fiber_action(tensor.fiber, fiber_conn.omega[z],
                                          value, fiber_index)

                for p, i_p in enumerate(slots):
                    for c in range(n):
                        moved = slots[:p] + (c, ) + slots[p + 1:] + fiber_index
                        terms.append(neg(mul(gamma[z, c, i_p],
                                             components[moved])))

                result[(z, ) + full] = add(*terms)

    return TensorFieldExpr(tensor.coordinates, result, tensor.arity + 1,
                           tensor.fiber)


def covariant_derivatives(tangent_conn: BundleConnection,
                          fiber_conn: BundleConnection | None,
                          tensor: TensorFieldExpr,
                          order: int,
                          budget: int = DEFAULT_BUDGET
                          ) -> list[TensorFieldExpr]:
    """
    The iterated covariant derivatives `[τ, ∇τ, ..., ∇^order τ]`.

    Raises
    ---
    - `BudgetExceededError` when an order outgrows `budget`; its `partial`
      holds the derivatives completed so far.
    """
    assert order >= 0, f"Expected a non-negative order, but found: {order}"

    derivatives = [tensor]
    for k in range(1, order + 1):
        derivative = nabla(tangent_conn, fiber_conn, derivatives[-1])
        check_budget(derivative.components.flat, budget, k, list(derivatives))
        derivatives.append(derivative)

    return derivatives


def covariant_derivative_tensor(tangent_conn: BundleConnection,
                                fiber_conn: BundleConnection | None,
                                tensor: TensorFieldExpr,
                                order: int = 1,
                                budget: int = DEFAULT_BUDGET
                                ) -> TensorFieldExpr:
    """
    The `order`-th covariant derivative ∇^order τ of a bundle-valued tensor.

    Parameters
    ---
    - `tangent_conn` (`BundleConnection`): A tangent connection; its
      Christoffel symbols correct the covariant slots.
    - `fiber_conn` (`BundleConnection | None`): The connection of the bundle
      the values live in (`None` for scalar tensors).
    - `tensor` (`TensorFieldExpr`): The tensor field.
    - `order` (`int`): The number of derivatives, at least 1.
    - `budget` (`int`): The expression budget per order.

    Returns
    ---
    - A tensor of arity `tensor.arity + order`; the newest slot comes first.
    """
    assert order >= 1, f"Expected an order of at least 1, but found: {order}"
    return covariant_derivatives(tangent_conn, fiber_conn, tensor, order,
                                 budget)[-1]
