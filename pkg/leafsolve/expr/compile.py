"""
Compilation of expression DAGs to straight-line Python functions.

Hot loops (ODE right-hand sides, grid sweeps) evaluate the same expressions
millions of times, so every batch of expressions is turned into one generated
function with a temporary per shared subtree.
"""
import math
import numpy as np

from typing import Sequence

from .nodes import (FUNCTIONS, Constant, DomainViolationError, Difference,
                    ExprError, Function, Negation, Power, Product, Quotient,
                    ScalarExpr, Sum, UnboundVariableError, Variable)


class CompiledExprs:
    """
    A callable evaluating a fixed list of expressions at points given as
    sequences of floats ordered like `variables`.

    Calling returns a `numpy` float64 array of shape `(len(exprs),)`.
    """

    def __init__(self, exprs: Sequence[ScalarExpr],
                 variables: Sequence[str]) -> None:
        self.exprs = tuple(exprs)
        self.variables = tuple(variables)

        for expr in self.exprs:
            for name in sorted(expr.free_variables):
                if name not in self.variables:
                    raise UnboundVariableError(name)

        self.source = _generate_source(self.exprs, self.variables)
        namespace: dict = {f"_{name}": f for name, f in FUNCTIONS.items()}
        exec(compile(self.source, "<leafsolve.expr>", "exec"), namespace)
        self._function = namespace["_compiled"]

    def __len__(self) -> int:
        return len(self.exprs)

    def values(self, point: Sequence[float] | np.ndarray) -> tuple:
        """
        Same as calling, but returns the raw tuple of Python floats.
        """
        args = point.tolist() if isinstance(point, np.ndarray) else [
            float(value) for value in point
        ]

        try:
            values = self._function(*args)
        except (ZeroDivisionError, ValueError, OverflowError) as e:
            raise DomainViolationError(
                f"Evaluation at {args} left the domain: {e}") from e
        except TypeError as e:
            raise ExprError(f"Expected {len(self.variables)} coordinates, "
                            f"but found {len(args)}") from e

        if not all(map(math.isfinite, values)):
            raise DomainViolationError(
                f"Evaluation at {args} produced a non-finite value.")

        return values

    def __call__(self, point: Sequence[float] | np.ndarray) -> np.ndarray:
        return np.array(self.values(point), dtype=np.float64)


def _generate_source(exprs: tuple[ScalarExpr, ...],
                     variables: tuple[str, ...]) -> str:
    leaves = [Variable(name) for name in variables]
    names: dict[int, str] = {
        id(leaf): f"_v{i}"
        for i, leaf in enumerate(leaves)
    }
    lines: list[str] = []

    def emit(node: ScalarExpr) -> str:
        known = names.get(id(node))
        if known is not None:
            return known

        match node:
            case Constant(value):
                return repr(value) if value >= 0 else f"({value!r})"
            case Variable(name):
                raise UnboundVariableError(name)
            case Sum(terms):
                code = " + ".join(emit(term) for term in terms)
            case Difference(left, right):
                code = f"{emit(left)} - {emit(right)}"
            case Product(factors):
                code = " * ".join(emit(factor) for factor in factors)
            case Quotient(numerator, denominator):
                code = f"{emit(numerator)} / {emit(denominator)}"
            case Power(base, exponent):
                code = f"{emit(base)} ** {exponent}"
            case Negation(operand):
                code = f"-{emit(operand)}"
            case Function(name, operand):
                code = f"_{name}({emit(operand)})"
            case _:
                raise TypeError(f"Unknown node type: {type(node)}")

        temporary = f"_t{len(lines)}"
        lines.append(f"    {temporary} = {code}")
        names[id(node)] = temporary
        return temporary

    outputs = [emit(expr) for expr in exprs]
    arguments = ", ".join(f"_v{i}" for i in range(len(variables)))
    body = "\n".join(lines)
    result = ", ".join(outputs) + ("," if len(outputs) == 1 else "")

    return (f"def _compiled({arguments}):\n"
            f"{body}\n"
            f"    return ({result})\n")
