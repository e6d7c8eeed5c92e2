from functools import lru_cache
from typing import Mapping

from .nodes import (ONE, ZERO, Constant, Difference, Function, Negation,
                    Power, Product, Quotient, ScalarExpr, Sum, Variable, add,
                    apply, div, mul, neg, power, sub)


@lru_cache(maxsize=1 << 18)
def differentiate(expr: ScalarExpr, var: str) -> ScalarExpr:
    """
    Exact partial derivative of `expr` with respect to the variable `var`.

    The result is assembled with the simplifying constructors, so it is
    already in simplified form; repeated application yields derivatives of
    any order.
    """
    if var not in expr.free_variables:
        return ZERO

    match expr:
        case Variable(name):
            return ONE if name == var else ZERO

        case Sum(terms):
            return add(*(differentiate(term, var) for term in terms))

        case Difference(left, right):
            return sub(differentiate(left, var), differentiate(right, var))

        case Product(factors):
            terms = []
            for i, factor in enumerate(factors):
                derivative = differentiate(factor, var)
                if derivative is not ZERO:
                    terms.append(
                        mul(*factors[:i], derivative, *factors[i + 1:]))
            return add(*terms)

        case Quotient(numerator, denominator):
            d_num = differentiate(numerator, var)
            d_den = differentiate(denominator, var)
            if d_den is ZERO:
                return div(d_num, denominator)
            return div(sub(mul(d_num, denominator), mul(numerator, d_den)),
                       power(denominator, 2))

        case Power(base, exponent):
            return mul(Constant(exponent), power(base, exponent - 1),
                       differentiate(base, var))

        case Negation(operand):
            return neg(differentiate(operand, var))

        case Function(name, operand):
            inner = differentiate(operand, var)
            match name:
                case "sin":
                    outer = apply("cos", operand)
                case "cos":
                    outer = neg(apply("sin", operand))
                case "exp":
                    outer = expr
                case "log":
                    return div(inner, operand)
                case "sqrt":
                    return div(inner, mul(Constant(2.0), expr))
                case "tanh":
                    outer = sub(ONE, power(expr, 2))
                case _:
                    raise ValueError(f"Unknown function: {name}")
            return mul(outer, inner)

    raise TypeError(f"Unknown node type: {type(expr)}")


@lru_cache(maxsize=1 << 18)
def simplify(expr: ScalarExpr) -> ScalarExpr:
    """
    Rebuilds `expr` bottom-up with the simplifying constructors: constant
    folding, elimination of additive zeros and multiplicative ones, absorption
    by zero, flattening of nested sums and products. Never increases the node
    count and preserves the value wherever the input is defined.
    """
    match expr:
        case Constant() | Variable():
            return expr
        case Sum(terms):
            return add(*(simplify(term) for term in terms))
        case Difference(left, right):
            return sub(simplify(left), simplify(right))
        case Product(factors):
            return mul(*(simplify(factor) for factor in factors))
        case Quotient(numerator, denominator):
            return div(simplify(numerator), simplify(denominator))
        case Power(base, exponent):
            return power(simplify(base), exponent)
        case Negation(operand):
            return neg(simplify(operand))
        case Function(name, operand):
            return apply(name, simplify(operand))

    raise TypeError(f"Unknown node type: {type(expr)}")


def substitute(expr: ScalarExpr,
               mapping: Mapping[str, ScalarExpr]) -> ScalarExpr:
    """
    Replaces free variables by expressions, simplifying on the way up.
    """
    memo: dict[int, ScalarExpr] = {}

    def visit(node: ScalarExpr) -> ScalarExpr:
        if not (node.free_variables & mapping.keys()):
            return node
        cached = memo.get(id(node))
        if cached is not None:
            return cached

        match node:
            case Variable(name):
                result = mapping[name]
            case Sum(terms):
                result = add(*map(visit, terms))
            case Difference(left, right):
                result = sub(visit(left), visit(right))
            case Product(factors):
                result = mul(*map(visit, factors))
            case Quotient(numerator, denominator):
                result = div(visit(numerator), visit(denominator))
            case Power(base, exponent):
                result = power(visit(base), exponent)
            case Negation(operand):
                result = neg(visit(operand))
            case Function(name, operand):
                result = apply(name, visit(operand))
            case _:
                raise TypeError(f"Unknown node type: {type(node)}")

        memo[id(node)] = result
        return result

    return visit(expr)


def gradient(expr: ScalarExpr, variables: list[str]) -> list[ScalarExpr]:
    return [differentiate(expr, var) for var in variables]
