import math

from leafsolve.expr import (BudgetExceededError, CompiledExprs, Constant,
                            DomainViolationError, ExprError,
                            UnboundVariableError, Variable, check_budget,
                            dag_size, differentiate, evaluate, gradient,
                            parse_expr, simplify, substitute)

VARIABLES = ["x", "y"]


def test_differentiate_polynomial():
    expr = parse_expr("x^3 * y - 2*x", VARIABLES)

    dx = differentiate(expr, "x")
    dxx = differentiate(dx, "x")

    assert math.isclose(evaluate(dx, {"x": 2.0, "y": 0.5}), 4.0)
    assert math.isclose(evaluate(dxx, {"x": 2.0, "y": 0.5}), 6.0)
    assert differentiate(expr, "z") is Constant(0.0)


def test_differentiate_transcendental():
    expr = parse_expr("sin(x) * exp(y) / sqrt(1 + x^2)", VARIABLES)
    env = {"x": 0.3, "y": 0.2}

    dx = evaluate(differentiate(expr, "x"), env)
    expected = (math.cos(0.3) * math.exp(0.2) / math.sqrt(1.09) -
                math.sin(0.3) * math.exp(0.2) * 0.3 / 1.09**1.5)

    assert math.isclose(dx, expected, rel_tol=1e-12)


def test_gradient_matches_partials():
    expr = parse_expr("log(x) * tanh(y)", VARIABLES)

    dx, dy = gradient(expr, VARIABLES)

    assert dx is differentiate(expr, "x")
    assert dy is differentiate(expr, "y")


def test_simplify_drops_units_and_zeros():
    expr = parse_expr("0*x + 1*y", VARIABLES)

    assert simplify(expr) is Variable("y")


def test_substitute():
    expr = parse_expr("x * y + x", VARIABLES)

    substituted = substitute(expr, {"y": Constant(2.0)})

    assert substituted.free_variables == frozenset({"x"})
    assert evaluate(substituted, {"x": 1.5}) == 4.5


def test_evaluate_unbound_variable():
    try:
        evaluate(parse_expr("x + y", VARIABLES), {"x": 1.0})

        raise Exception("Expected evaluation with unbound `y` to fail")

    except UnboundVariableError as e:
        assert e.args == ("Variable `y` is not bound in the environment.", )


def test_evaluate_domain_violation():
    for text, env in [("log(x)", {"x": -1.0}), ("1/x", {"x": 0.0}),
                      ("sqrt(x)", {"x": -4.0}), ("exp(x)", {"x": 1e4})]:
        try:
            evaluate(parse_expr(text, VARIABLES), env)

            raise Exception(f"Expected evaluation of `{text}` to fail")

        except DomainViolationError:
            pass


def test_compiled_matches_evaluate():
    exprs = [
        parse_expr(text, VARIABLES)
        for text in ["x * y", "sin(x) + cos(y)^2", "-x / (1 + y^2)"]
    ]
    compiled = CompiledExprs(exprs, VARIABLES)

    values = compiled((0.7, -1.3))

    assert values.shape == (3, )
    for expr, value in zip(exprs, values):
        assert value == evaluate(expr, {"x": 0.7, "y": -1.3})


def test_compiled_wrong_arity():
    compiled = CompiledExprs([parse_expr("x + y", VARIABLES)], VARIABLES)

    try:
        compiled((1.0, ))

        raise Exception("Expected evaluation with one coordinate to fail")

    except ExprError as e:
        assert e.args == ("Expected 2 coordinates, but found 1", )


def test_compiled_unbound_variable():
    try:
        CompiledExprs([parse_expr("x + y", VARIABLES)], ["x"])

        raise Exception("Expected compilation with unbound `y` to fail")

    except UnboundVariableError as e:
        assert e.name == "y"


def test_dag_size_shares_subtrees():
    inner = parse_expr("sin(x + y)", VARIABLES)
    expr = inner * inner + inner

    assert dag_size([expr]) < expr.node_count
    assert dag_size([expr, inner]) == dag_size([expr])


def test_check_budget():
    expr = parse_expr("x * y + sin(x)", VARIABLES)

    check_budget([expr], dag_size([expr]), 1)

    try:
        check_budget([expr], 2, 3)

        raise Exception("Expected the budget check to fail")

    except BudgetExceededError as e:
        assert e.completed_order == 2
