from leafsolve.expr import (Constant, NonIntegerExponentError, Product,
                            ExprSyntaxError, UnknownIdentifierError, Variable,
                            evaluate, parse_expr, to_infix)

VARIABLES = ["x1", "x2", "y1"]


def test_parse_print_parse_is_identity():
    for text in [
            "x1^2 / 2", "sin(x1) * exp(-x2)", "-(x1 + x2) * y1",
            "x1 - (x2 - y1)", "cos(x1)/sin(x1)", "(x1 + 1)^-3", "x1 / (x2 * y1)"
    ]:
        expr = parse_expr(text, VARIABLES)
        assert parse_expr(to_infix(expr), VARIABLES) is expr


def test_parse_negative_literal():
    expr = parse_expr("-2*x1", VARIABLES)

    assert expr is Product(Constant(-2.0), Variable("x1"))


def test_parse_pi():
    expr = parse_expr("pi/2", VARIABLES)

    assert evaluate(expr, {}) == 3.141592653589793 / 2


def test_parse_unknown_identifier():
    try:
        parse_expr("x1 + z", VARIABLES)

        raise Exception("Expected parse of unknown identifier to fail")

    except UnknownIdentifierError as e:
        assert e.args == ("Unknown identifier `z` at offset 5", )
        assert e.offset == 5
        assert e.name == "z"


def test_parse_non_integer_exponent():
    try:
        parse_expr("x1^1.5", VARIABLES)

        raise Exception("Expected parse of fractional exponent to fail")

    except NonIntegerExponentError as e:
        assert e.args == ("Non-integer exponent `1.5` at offset 3", )


def test_parse_unbalanced_parenthesis():
    try:
        parse_expr("(x1", VARIABLES)

        raise Exception("Expected parse of unbalanced parenthesis to fail")

    except ExprSyntaxError as e:
        assert e.args == ("Expected ')' but found end of input at offset 3", )


def test_parse_unexpected_character():
    try:
        parse_expr("x1 $ x2", VARIABLES)

        raise Exception("Expected parse of `$` to fail")

    except ExprSyntaxError as e:
        assert e.args == ("Unexpected character '$' at offset 3", )


def test_parse_reserved_variable_name():
    try:
        parse_expr("sin", ["sin"])

        raise Exception("Expected a reserved variable name to fail")

    except AssertionError as e:
        assert e.args == ("Variable name `sin` is reserved.", )
