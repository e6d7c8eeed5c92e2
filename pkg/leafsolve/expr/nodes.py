"""
Immutable expression trees over named real variables.

Nodes are hash-consed: constructing a node that is structurally identical to a
live node returns the existing object, so structural equality is identity and
common subtrees are shared between every expression that mentions them.
"""
import math

from abc import ABC
from threading import Lock
from typing import Any, Callable, ClassVar, Iterable, Mapping
from weakref import WeakValueDictionary

ADDITIVE = 1
MULTIPLICATIVE = 2
UNARY = 3
POWER = 4
ATOM = 5

FUNCTIONS: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "tanh": math.tanh,
}


class ExprError(ValueError):
    """
    Base class for every error raised by the expression language.
    """


class UnboundVariableError(ExprError):

    def __init__(self, name: str) -> None:
        super().__init__(f"Variable `{name}` is not bound in the environment.")
        self.name = name


class DomainViolationError(ExprError, ArithmeticError):
    """
    Raised when an expression is evaluated outside the domain of one of its
    partial operations (division by zero, `log` of a non-positive number,
    `sqrt` of a negative number, overflow).
    """


class BudgetExceededError(RuntimeError):
    """
    Raised when an iterated symbolic construction outgrows the expression
    budget. `completed_order` is the deepest order fully computed and
    `partial` holds whatever was computed up to it.
    """

    def __init__(self, message: str, completed_order: int,
                 partial: Any = None) -> None:
        super().__init__(message)
        self.completed_order = completed_order
        self.partial = partial


DEFAULT_BUDGET = 2_000_000

_TABLE: "WeakValueDictionary[tuple, ScalarExpr]" = WeakValueDictionary()
_TABLE_LOCK = Lock()


class ScalarExpr(ABC):
    """
    Base class of all expression nodes.

    Instances are immutable and interned; never mutate `args`.
    """

    __slots__ = ("args", "_size", "_free", "__weakref__")

    precedence: ClassVar[int] = ATOM

    args: tuple
    _size: int | None
    _free: frozenset[str] | None

    def __new__(cls, *args: Any) -> "ScalarExpr":
        key = (cls, args)

        with _TABLE_LOCK:
            node = _TABLE.get(key)

            if node is None:
                node = object.__new__(cls)
                node.args = args
                node._size = None
                node._free = None
                _TABLE[key] = node

        return node

    def __reduce__(self):
        return (type(self), self.args)

    @property
    def children(self) -> "tuple[ScalarExpr, ...]":
        return tuple(arg for arg in self.args if isinstance(arg, ScalarExpr))

    @property
    def node_count(self) -> int:
        """
        Number of nodes of the expression viewed as a tree (shared subtrees
        are counted once per occurrence).
        """
        if self._size is None:
            self._size = 1 + sum(child.node_count for child in self.children)
        return self._size

    @property
    def free_variables(self) -> frozenset[str]:
        if self._free is None:
            free: frozenset[str] = frozenset()
            for child in self.children:
                free = free | child.free_variables
            self._free = free
        return self._free

    def evaluate(self, env: Mapping[str, float]) -> float:
        return evaluate(self, env)

    def __str__(self) -> str:
        return to_infix(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({to_infix(self)!r})"

    def __add__(self, other: "ScalarExpr | float") -> "ScalarExpr":
        return add(self, as_expr(other))

    def __radd__(self, other: float) -> "ScalarExpr":
        return add(as_expr(other), self)

    def __sub__(self, other: "ScalarExpr | float") -> "ScalarExpr":
        return sub(self, as_expr(other))

    def __rsub__(self, other: float) -> "ScalarExpr":
        return sub(as_expr(other), self)

    def __mul__(self, other: "ScalarExpr | float") -> "ScalarExpr":
        return mul(self, as_expr(other))

    def __rmul__(self, other: float) -> "ScalarExpr":
        return mul(as_expr(other), self)

    def __truediv__(self, other: "ScalarExpr | float") -> "ScalarExpr":
        return div(self, as_expr(other))

    def __rtruediv__(self, other: float) -> "ScalarExpr":
        return div(as_expr(other), self)

    def __neg__(self) -> "ScalarExpr":
        return neg(self)

    def __pow__(self, exponent: int) -> "ScalarExpr":
        return power(self, exponent)


class Constant(ScalarExpr):
    __slots__ = ()
    __match_args__ = ("value", )

    def __new__(cls, value: float) -> "Constant":
        value = float(value) + 0.0
        assert math.isfinite(value), (
            f"Expected a finite constant, but found: {value}")
        return super().__new__(cls, value)  # type: ignore

    @property
    def value(self) -> float:
        return self.args[0]

    @property
    def precedence(self) -> int:  # type: ignore[override]
        return UNARY if self.value < 0 else ATOM


class Variable(ScalarExpr):
    __slots__ = ()
    __match_args__ = ("name", )

    def __new__(cls, name: str) -> "Variable":
        return super().__new__(cls, name)  # type: ignore

    @property
    def name(self) -> str:
        return self.args[0]

    @property
    def free_variables(self) -> frozenset[str]:
        return frozenset((self.name, ))


class Sum(ScalarExpr):
    __slots__ = ()
    __match_args__ = ("terms", )
    precedence = ADDITIVE

    @property
    def terms(self) -> tuple[ScalarExpr, ...]:
        return self.args


class Difference(ScalarExpr):
    __slots__ = ()
    __match_args__ = ("left", "right")
    precedence = ADDITIVE

    def __new__(cls, left: ScalarExpr, right: ScalarExpr) -> "Difference":
        return super().__new__(cls, left, right)  # type: ignore

    @property
    def left(self) -> ScalarExpr:
        return self.args[0]

    @property
    def right(self) -> ScalarExpr:
        return self.args[1]


class Product(ScalarExpr):
    __slots__ = ()
    __match_args__ = ("factors", )
    precedence = MULTIPLICATIVE

    @property
    def factors(self) -> tuple[ScalarExpr, ...]:
        return self.args


class Quotient(ScalarExpr):
    __slots__ = ()
    __match_args__ = ("numerator", "denominator")
    precedence = MULTIPLICATIVE

    def __new__(cls, numerator: ScalarExpr,
                denominator: ScalarExpr) -> "Quotient":
        return super().__new__(cls, numerator, denominator)  # type: ignore

    @property
    def numerator(self) -> ScalarExpr:
        return self.args[0]

    @property
    def denominator(self) -> ScalarExpr:
        return self.args[1]


class Power(ScalarExpr):
    __slots__ = ()
    __match_args__ = ("base", "exponent")
    precedence = POWER

    def __new__(cls, base: ScalarExpr, exponent: int) -> "Power":
        assert isinstance(exponent, int) and not isinstance(exponent, bool), (
            f"Expected an integer exponent, but found: {exponent!r}")
        return super().__new__(cls, base, exponent)  # type: ignore

    @property
    def base(self) -> ScalarExpr:
        return self.args[0]

    @property
    def exponent(self) -> int:
        return self.args[1]


class Negation(ScalarExpr):
    __slots__ = ()
    __match_args__ = ("operand", )
    precedence = UNARY

    def __new__(cls, operand: ScalarExpr) -> "Negation":
        return super().__new__(cls, operand)  # type: ignore

    @property
    def operand(self) -> ScalarExpr:
        return self.args[0]


class Function(ScalarExpr):
    __slots__ = ()
    __match_args__ = ("name", "operand")

    def __new__(cls, name: str, operand: ScalarExpr) -> "Function":
        if name not in FUNCTIONS:
            raise ValueError(f"Unknown function: {name}")
        return super().__new__(cls, name, operand)  # type: ignore

    @property
    def name(self) -> str:
        return self.args[0]

    @property
    def operand(self) -> ScalarExpr:
        return self.args[1]


ZERO = Constant(0.0)
ONE = Constant(1.0)


def as_expr(value: "ScalarExpr | float | int") -> ScalarExpr:
    if isinstance(value, ScalarExpr):
        return value
    return Constant(value)


def is_zero(expr: ScalarExpr) -> bool:
    return expr is ZERO


def is_constant(expr: ScalarExpr, value: float | None = None) -> bool:
    if not isinstance(expr, Constant):
        return False
    return value is None or expr.value == value


def _fold(function: Callable[..., float], *values: float) -> float | None:
    try:
        result = function(*values)
    except (ZeroDivisionError, ValueError, OverflowError):
        return None
    return result if math.isfinite(result) else None


def add(*terms: ScalarExpr) -> ScalarExpr:
    """
    Sum with flattening, constant folding and removal of zero terms.
    """
    flat: list[ScalarExpr] = []
    constant = 0.0
    n_constants = 0

    for term in terms:
        for inner in (term.terms if isinstance(term, Sum) else (term, )):
            if isinstance(inner, Constant):
                constant += inner.value
                n_constants += 1
            else:
                flat.append(inner)

    if not math.isfinite(constant):
        return Sum(*terms)
    if n_constants and (constant != 0.0 or not flat):
        flat.append(Constant(constant))

    match flat:
        case []:
            return ZERO
        case [single]:
            return single
    return Sum(*flat)


def sub(left: ScalarExpr, right: ScalarExpr) -> ScalarExpr:
    if left is right:
        return ZERO
    if is_zero(right):
        return left
    if is_zero(left):
        return neg(right)
    if isinstance(left, Constant) and isinstance(right, Constant):
        folded = _fold(lambda a, b: a - b, left.value, right.value)
        if folded is not None:
            return Constant(folded)
    if isinstance(right, Negation):
        return add(left, right.operand)
    if isinstance(right, Constant) and right.value < 0:
        return add(left, Constant(-right.value))
    return Difference(left, right)


def mul(*factors: ScalarExpr) -> ScalarExpr:
    """
    Product with flattening, constant folding, absorption by zero and removal
    of unit factors.
    """
    flat: list[ScalarExpr] = []
    constant = 1.0
    n_constants = 0

    for factor in factors:
        for inner in (factor.factors if isinstance(factor, Product) else
                      (factor, )):
            if isinstance(inner, Constant):
                if inner.value == 0.0:
                    return ZERO
                constant *= inner.value
                n_constants += 1
            else:
                flat.append(inner)

    if not math.isfinite(constant):
        return Product(*factors)

    if not flat:
        return Constant(constant)
    if constant == -1.0 and len(flat) == 1:
        return neg(flat[0])
    if constant != 1.0:
        flat.insert(0, Constant(constant))

    if len(flat) == 1:
        return flat[0]
    return Product(*flat)


def div(numerator: ScalarExpr, denominator: ScalarExpr) -> ScalarExpr:
    if is_constant(denominator, 1.0):
        return numerator
    if is_constant(denominator, -1.0):
        return neg(numerator)
    if is_zero(numerator) and not is_zero(denominator):
        return ZERO
    if numerator is denominator and not isinstance(numerator, Constant):
        return ONE
    if isinstance(numerator, Constant) and isinstance(denominator, Constant):
        folded = _fold(lambda a, b: a / b, numerator.value, denominator.value)
        if folded is not None:
            return Constant(folded)
    return Quotient(numerator, denominator)


def power(base: ScalarExpr, exponent: int) -> ScalarExpr:
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Constant):
        folded = _fold(lambda a: a**exponent, base.value)
        if folded is not None:
            return Constant(folded)
    if isinstance(base, Power):
        return power(base.base, base.exponent * exponent)
    return Power(base, exponent)


def neg(operand: ScalarExpr) -> ScalarExpr:
    match operand:
        case Constant(value):
            return Constant(-value)
        case Negation(inner):
            return inner
        case Difference(left, right):
            return Difference(right, left)
        case Product(factors) if isinstance(factors[0], Constant):
            return mul(Constant(-factors[0].value), *factors[1:])
    return Negation(operand)


def apply(name: str, operand: ScalarExpr) -> ScalarExpr:
    if isinstance(operand, Constant):
        folded = _fold(FUNCTIONS[name], operand.value)
        if folded is not None:
            return Constant(folded)
    return Function(name, operand)


def evaluate(expr: ScalarExpr, env: Mapping[str, float]) -> float:
    """
    Evaluates `expr` by walking the tree.

    Parameters
    ---
    - `expr` (`ScalarExpr`): The expression to evaluate.
    - `env` (`Mapping[str, float]`): Values of the free variables.

    Returns
    ---
    - The IEEE double value of the expression.

    Raises
    ---
    - `UnboundVariableError` if a free variable is missing from `env`.
    - `DomainViolationError` if a partial operation is evaluated outside its
      domain or the result is not finite.
    """
    memo: dict[int, float] = {}

    def visit(node: ScalarExpr) -> float:
        cached = memo.get(id(node))
        if cached is not None:
            return cached

        match node:
            case Constant(value):
                result = value
            case Variable(name):
                if name not in env:
                    raise UnboundVariableError(name)
                result = float(env[name])
            case Sum(terms):
                result = visit(terms[0])
                for term in terms[1:]:
                    result += visit(term)
            case Difference(left, right):
                result = visit(left) - visit(right)
            case Product(factors):
                result = 1.0
                for factor in factors:
                    result *= visit(factor)
            case Quotient(numerator, denominator):
                result = visit(numerator) / visit(denominator)
            case Power(base, exponent):
                result = visit(base)**exponent
            case Negation(operand):
                result = -visit(operand)
            case Function(name, operand):
                result = FUNCTIONS[name](visit(operand))
            case _:
                raise TypeError(f"Unknown node type: {type(node)}")

        memo[id(node)] = result
        return result

    try:
        value = visit(expr)
    except (ZeroDivisionError, ValueError, OverflowError) as e:
        if isinstance(e, ExprError):
            raise
        raise DomainViolationError(
            f"Evaluation of `{expr}` left the domain: {e}") from e

    if not math.isfinite(value):
        raise DomainViolationError(
            f"Evaluation of `{expr}` produced a non-finite value: {value}")

    return value


def _format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def to_infix(expr: ScalarExpr) -> str:
    """
    Prints `expr` in the grammar accepted by `parse_expr`, with the minimal
    parentheses needed for the parse to reproduce the same tree.
    """

    def wrap(node: ScalarExpr, parenthesize: bool) -> str:
        text = to_infix(node)
        return f"({text})" if parenthesize else text

    def chain(items: tuple[ScalarExpr, ...], operator: str,
              level: int) -> str:
        parts = [wrap(items[0], items[0].precedence < level)]
        parts += [wrap(item, item.precedence <= level) for item in items[1:]]
        return f" {operator} ".join(parts)

    match expr:
        case Constant(value):
            return _format_number(value)
        case Variable(name):
            return name
        case Sum(terms):
            return chain(terms, "+", ADDITIVE)
        case Difference(left, right):
            return chain((left, right), "-", ADDITIVE)
        case Product(factors):
            return chain(factors, "*", MULTIPLICATIVE)
        case Quotient(numerator, denominator):
            return chain((numerator, denominator), "/", MULTIPLICATIVE)
        case Power(base, exponent):
            return f"{wrap(base, base.precedence <= POWER)}^{exponent}"
        case Negation(operand):
            return f"-{wrap(operand, operand.precedence < UNARY)}"
        case Function(name, operand):
            return f"{name}({to_infix(operand)})"
    raise TypeError(f"Unknown node type: {type(expr)}")


def dag_size(exprs: Iterable[ScalarExpr]) -> int:
    """
    Number of distinct nodes reachable from `exprs`.
    """
    seen: set[int] = set()
    stack = list(exprs)

    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.extend(node.children)

    return len(seen)


def check_budget(exprs: Iterable[ScalarExpr], budget: int, order: int,
                 partial: Any = None) -> None:
    size = dag_size(exprs)
    if size > budget:
        raise BudgetExceededError(
            f"Order {order} needs {size} expression nodes, more than the "
            f"budget of {budget}", order - 1, partial)
