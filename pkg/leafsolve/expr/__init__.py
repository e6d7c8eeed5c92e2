from .nodes import (DEFAULT_BUDGET, FUNCTIONS, ONE, ZERO, BudgetExceededError,
                    Constant, Difference, check_budget, dag_size,
                    DomainViolationError, ExprError, Function, Negation,
                    Power, Product, Quotient, ScalarExpr, Sum,
                    UnboundVariableError, Variable, add, apply, as_expr, div,
                    evaluate, mul, neg, power, sub, to_infix)
from .calculus import differentiate, gradient, simplify, substitute
from .compile import CompiledExprs
from .parser import (ExprSyntaxError, NonIntegerExponentError,
                     UnknownIdentifierError, parse_expr)

__all__ = [
    "DEFAULT_BUDGET", "BudgetExceededError", "check_budget", "dag_size",
    "FUNCTIONS", "ONE", "ZERO", "Constant", "Difference",
    "DomainViolationError", "ExprError", "Function", "Negation", "Power",
    "Product", "Quotient", "ScalarExpr", "Sum", "UnboundVariableError",
    "Variable", "add", "apply", "as_expr", "div", "evaluate", "mul", "neg",
    "power", "sub", "to_infix", "differentiate", "gradient", "simplify",
    "substitute", "CompiledExprs", "ExprSyntaxError",
    "NonIntegerExponentError", "UnknownIdentifierError", "parse_expr",
    "variables_named"
]


def variables_named(prefix: str, n: int) -> list[str]:
    """
    Returns `[f"{prefix}1", ..., f"{prefix}{n}"]`.
    """
    return [f"{prefix}{i}" for i in range(1, n + 1)]
