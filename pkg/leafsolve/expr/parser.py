"""
Recursive-descent parser for the expression grammar:

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | factor
    factor  := base ('^' ['-'] integer)?
    base    := number | ident | func '(' expr ')' | '(' expr ')'
    func    := 'sin' | 'cos' | 'exp' | 'log' | 'sqrt' | 'tanh'

`pi` is a predefined constant. A minus sign in front of a numeric literal
produces a negative constant.
"""
import math
import re

from dataclasses import dataclass
from typing import Iterable

from .nodes import (FUNCTIONS, Constant, Difference, ExprError, Function,
                    Negation, Power, Product, Quotient, ScalarExpr, Sum,
                    Variable)

CONSTANTS = {"pi": math.pi}

_TOKEN = re.compile(r"""
    (?P<space>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ExprSyntaxError(ExprError):
    """
    Malformed expression text. `offset` is the 0-based character offset of the
    offending token.
    """

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ExprSyntaxError):

    def __init__(self, name: str, offset: int) -> None:
        super().__init__(f"Unknown identifier `{name}`", offset)
        self.name = name


class NonIntegerExponentError(ExprSyntaxError):

    def __init__(self, text: str, offset: int) -> None:
        super().__init__(f"Non-integer exponent `{text}`", offset)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    position = 0

    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            raise ExprSyntaxError(f"Unexpected character {text[position]!r}",
                                  position)
        kind = match.lastgroup
        assert kind is not None
        if kind != "space":
            tokens.append(Token(kind, match.group(), position))
        position = match.end()

    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:

    def __init__(self, text: str, variables: Iterable[str]) -> None:
        self.tokens = tokenize(text)
        self.index = 0
        self.variables = set(variables)

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.current
        if token.text != text or token.kind == "end":
            raise ExprSyntaxError(
                f"Expected {text!r} but found {self._describe(token)}",
                token.offset)
        return self.advance()

    @staticmethod
    def _describe(token: Token) -> str:
        return "end of input" if token.kind == "end" else repr(token.text)

    def parse(self) -> ScalarExpr:
        expr = self.expr()
        if self.current.kind != "end":
            raise ExprSyntaxError(
                f"Unexpected {self._describe(self.current)}",
                self.current.offset)
        return expr

    def expr(self) -> ScalarExpr:
        node = self.term()

        while self.current.text in ("+", "-") and self.current.kind == "op":
            operator = self.advance().text
            right = self.term()
            if operator == "-":
                node = Difference(node, right)
            elif isinstance(node, Sum):
                node = Sum(*node.terms, right)
            else:
                node = Sum(node, right)

        return node

    def term(self) -> ScalarExpr:
        node = self.unary()

        while self.current.text in ("*", "/") and self.current.kind == "op":
            operator = self.advance().text
            right = self.unary()
            if operator == "/":
                node = Quotient(node, right)
            elif isinstance(node, Product):
                node = Product(*node.factors, right)
            else:
                node = Product(node, right)

        return node

    def unary(self) -> ScalarExpr:
        if self.current.text == "-" and self.current.kind == "op":
            self.advance()
            operand = self.unary()
            if isinstance(operand, Constant):
                return Constant(-operand.value)
            return Negation(operand)
        return self.factor()

    def factor(self) -> ScalarExpr:
        base = self.base()

        if self.current.text != "^":
            return base

        self.advance()
        sign = 1
        if self.current.text == "-" and self.current.kind == "op":
            self.advance()
            sign = -1

        token = self.current
        if token.kind != "number":
            raise ExprSyntaxError(
                f"Expected an integer exponent but found "
                f"{self._describe(token)}", token.offset)
        if not token.text.isdigit():
            raise NonIntegerExponentError(token.text, token.offset)
        self.advance()

        return Power(base, sign * int(token.text))

    def base(self) -> ScalarExpr:
        token = self.current

        match token.kind:
            case "number":
                self.advance()
                return Constant(float(token.text))

            case "ident" if token.text in FUNCTIONS:
                self.advance()
                self.expect("(")
                operand = self.expr()
                self.expect(")")
                return Function(token.text, operand)

            case "ident" if token.text in self.variables:
                self.advance()
                return Variable(token.text)

            case "ident" if token.text in CONSTANTS:
                self.advance()
                return Constant(CONSTANTS[token.text])

            case "ident":
                raise UnknownIdentifierError(token.text, token.offset)

            case "op" if token.text == "(":
                self.advance()
                inner = self.expr()
                self.expect(")")
                return inner

        raise ExprSyntaxError(f"Unexpected {self._describe(token)}",
                              token.offset)


def parse_expr(text: str, variables: Iterable[str]) -> ScalarExpr:
    """
    Parses `text` into an expression tree.

    Parameters
    ---
    - `text` (`str`): An infix expression in the documented grammar.
    - `variables` (`Iterable[str]`): The names allowed as free variables.

    Returns
    ---
    - The parsed `ScalarExpr`. The tree is kept as written (no
      simplification), so printing it and parsing again gives back the same
      tree.
    """
    variables = list(variables)
    for name in variables:
        assert _IDENT.match(name), f"Expected an identifier, but found: {name!r}"
        assert name not in FUNCTIONS and name not in CONSTANTS, (
            f"Variable name `{name}` is reserved.")

    return _Parser(text, variables).parse()
