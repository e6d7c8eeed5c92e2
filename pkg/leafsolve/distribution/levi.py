import numpy as np

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

from ..expr import CompiledExprs, ScalarExpr
from ..geometry import lie_bracket
from .graph import GraphDistribution


@dataclass(frozen=True, eq=False)
class LeviTensor:
    """
    The Levi form of a graph distribution on the frame X̃_i = (e_i, F(e_i)):
    `components[p]` holds the quotient components of [X̃_i, X̃_j] for the
    `p`-th pair `i < j`.
    """

    distribution: GraphDistribution
    pairs: tuple[tuple[int, int], ...]
    components: tuple[tuple[ScalarExpr, ...], ...]

    @cached_property
    def compiled(self) -> CompiledExprs:
        return CompiledExprs(
            [entry for row in self.components for entry in row],
            self.distribution.coordinates)

    def pair_values(self, point: np.ndarray) -> np.ndarray:
        """
        Values at `point` as an array of shape `(len(pairs), m)`.
        """
        return self.compiled(point).reshape(len(self.pairs),
                                            self.distribution.m)

    def max_norm(self, point: np.ndarray) -> float:
        if not self.pairs:
            return 0.0
        return float(np.max(np.abs(self.pair_values(point))))


@lru_cache(maxsize=64)
def levi_tensor(D: GraphDistribution) -> LeviTensor:
    frames = [D.frame_field(i) for i in range(D.k)]
    pairs = tuple((i, j) for i in range(D.k) for j in range(i + 1, D.k))
    components = tuple(
        D.vertical_defect(lie_bracket(frames[i], frames[j]))
        for i, j in pairs)
    return LeviTensor(D, pairs, components)


def levi_form(D: GraphDistribution, p: Sequence[float] | np.ndarray,
              X: Sequence[float] | np.ndarray,
              Y: Sequence[float] | np.ndarray) -> np.ndarray:
    """
    The Levi form L(X, Y) of D at `p`.

    Under the identification (v, w) + D ↦ w − F(v) this is

        ∂_xF(X)(Y) + ∂_yF(F(X))(Y) − ∂_xF(Y)(X) − ∂_yF(F(Y))(X),

    computed from the symbolic brackets of the frame fields and evaluated at
    `p`. Exactly antisymmetric in X and Y.

    Parameters
    ---
    - `D` (`GraphDistribution`): The distribution.
    - `p` (`Sequence[float]`): A point of `D.domain`.
    - `X`, `Y` (`Sequence[float]`): Base vectors of length `D.k`.

    Returns
    ---
    - The vector L(X, Y) of length `D.m`.
    """
    D.domain.require(p, "p")
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    assert X.shape == Y.shape == (D.k, ), (
        f"Expected base vectors of shape ({D.k},), but found: {X.shape} and "
        f"{Y.shape}")

    tensor = levi_tensor(D)
    result = np.zeros(D.m)
    if not tensor.pairs:
        return result

    values = tensor.pair_values(np.asarray(p, dtype=np.float64))
    for (i, j), value in zip(tensor.pairs, values):
        result = result + (X[i] * Y[j] - X[j] * Y[i]) * value
    return result
