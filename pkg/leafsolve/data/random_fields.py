"""
Random expressions, fields and points for property-based checks.

Every generator takes an explicit `jax.random` key and defaults to
`PRNGKey(0)`, so the draws are reproducible on every platform.
"""
import jax
import numpy as np

from jax import Array
from jax.random import PRNGKey
from typing import Sequence

from ..expr import ScalarExpr, Variable, add, apply, as_expr, mul, power
from ..geometry import Box, VectorFieldExpr


def _key(key: Array | None) -> Array:
    return PRNGKey(0) if key is None else key


def random_coefficients(n: int,
                        key: Array | None = None,
                        scale: float = 1.0) -> list[float]:
    values = jax.random.uniform(_key(key), (n, ), minval=-scale, maxval=scale)
    return [round(float(v), 6) for v in values.tolist()]


def random_polynomial(variables: Sequence[str],
                      degree: int,
                      n_terms: int = 4,
                      key: Array | None = None,
                      scale: float = 1.0) -> ScalarExpr:
    """
    A random polynomial of total degree at most `degree`.

    Parameters
    ---
    - `variables` (`Sequence[str]`): The variables the polynomial is over.
    - `degree` (`int`): The maximal total degree.
    - `n_terms` (`int`): The number of monomials drawn (duplicates allowed).
    - `key` (`jax.Array | None`): The random key; `PRNGKey(0)` if `None`.
    - `scale` (`float`): Coefficients are uniform in `[-scale, scale]`.
    """
    assert degree >= 0 and n_terms > 0, (
        f"Expected a non-negative degree and a positive number of terms, "
        f"but found: {degree} and {n_terms}")

    exponent_key, coefficient_key = jax.random.split(_key(key))
    exponents = jax.random.randint(exponent_key, (n_terms, len(variables)), 0,
                                   degree + 1).tolist()
    coefficients = random_coefficients(n_terms, coefficient_key, scale)

    terms = []
    for row, coefficient in zip(exponents, coefficients):
        # Trim the exponents from the last variable down to the degree cap.
        excess = sum(row) - degree
        for i in reversed(range(len(row))):
            if excess <= 0:
                break
            cut = min(row[i], excess)
            row[i] -= cut
            excess -= cut

        monomial = mul(*(power(Variable(name), e)
                         for name, e in zip(variables, row) if e),
                       as_expr(coefficient))
        terms.append(monomial)

    return add(*terms)


def random_transcendental(variables: Sequence[str],
                          key: Array | None = None) -> ScalarExpr:
    """
    A random composition of polynomials with `sin`, `cos`, `exp` and `tanh`,
    finite everywhere.
    """
    keys = jax.random.split(_key(key), 4)
    inner = [random_polynomial(variables, 2, 3, k, scale=0.5) for k in keys]
    return add(mul(apply("sin", inner[0]), apply("exp", inner[1])),
               apply("cos", inner[2]), apply("tanh", inner[3]))


def random_vector_field(coordinates: Sequence[str],
                        degree: int = 2,
                        key: Array | None = None) -> VectorFieldExpr:
    keys = jax.random.split(_key(key), len(coordinates))
    return VectorFieldExpr(
        tuple(coordinates),
        tuple(random_polynomial(coordinates, degree, 3, k) for k in keys))


def random_matrix(shape: tuple[int, ...],
                  key: Array | None = None,
                  scale: float = 1.0) -> np.ndarray:
    values = jax.random.uniform(_key(key), shape, minval=-scale, maxval=scale)
    return np.asarray(values, dtype=np.float64)


def random_point(box: Box, key: Array | None = None,
                 margin: float = 0.1) -> np.ndarray:
    """
    A uniform point of `box` shrunk by `margin` of its widths on each side.
    """
    lo = np.array(box.lo) + margin * box.widths()
    hi = np.array(box.hi) - margin * box.widths()
    values = jax.random.uniform(_key(key), (box.dim, ))
    return lo + (hi - lo) * np.asarray(values, dtype=np.float64)


def random_unit_vectors(dim: int, count: int,
                        key: Array | None = None) -> np.ndarray:
    values = np.asarray(jax.random.normal(_key(key), (count, dim)),
                        dtype=np.float64)
    return values / np.linalg.norm(values, axis=1, keepdims=True)
