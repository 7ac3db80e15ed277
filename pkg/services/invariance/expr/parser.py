"""Tokenizer, syntax tree and precedence-climbing parser for scalar fields.

Grammar: real literals; variables ``t``, ``x1..xn``, ``u1..ur`` plus any
extra variables the caller admits (``s`` for family maps, ``psi1..psin`` and
``H`` for documented laws); parameter names; binary ``+ - * / ^``; unary
``-``; ``exp``, ``log``, ``pow(a, b)``; parentheses. ``^`` binds tighter than
unary minus and is right-associative.
"""

import math
import re
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from typing import Union

from core.errors import ArityMismatch, DomainError, ExpressionSyntaxError, UnknownIdentifier
from expr import dual
from expr.dual import Number

Env = Sequence[Number]
Compiled = Callable[[Env], Number]

FUNCTIONS = {"exp": 1, "log": 1, "pow": 2}

# (precedence, right associative)
BINARY = {"+": (1, False), "-": (1, False), "*": (2, False), "/": (2, False), "^": (4, True)}
UNARY_PREC = 3

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(source):
        if source[pos:].strip() == "":
            break
        match = _TOKEN.match(source, pos)
        if match is None or match.end() == pos:
            start = pos + (len(source[pos:]) - len(source[pos:].lstrip()))
            raise ExpressionSyntaxError("unexpected character", start, source[start])
        kind = match.lastgroup or "op"
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(source)))
    return tokens


# Syntax tree ---------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: float
    name: str | None = None

    def render(self) -> str:
        return self.name if self.name is not None else repr(self.value)

    def variables(self) -> frozenset[str]:
        return frozenset()

    def compile(self) -> Compiled:
        v = self.value
        return lambda env: v


@dataclass(frozen=True)
class Var:
    name: str
    slot: int

    def render(self) -> str:
        return self.name

    def variables(self) -> frozenset[str]:
        return frozenset({self.name})

    def compile(self) -> Compiled:
        i = self.slot
        return lambda env: env[i]


@dataclass(frozen=True)
class Neg:
    operand: "Node"

    def render(self) -> str:
        return f"(-{self.operand.render()})"

    def variables(self) -> frozenset[str]:
        return self.operand.variables()

    def compile(self) -> Compiled:
        f = self.operand.compile()
        return lambda env: -f(env)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"

    def render(self) -> str:
        return f"({self.left.render()} {self.op} {self.right.render()})"

    def variables(self) -> frozenset[str]:
        return self.left.variables() | self.right.variables()

    def compile(self) -> Compiled:
        a = self.left.compile()
        b = self.right.compile()
        if self.op == "+":
            return lambda env: a(env) + b(env)
        if self.op == "-":
            return lambda env: a(env) - b(env)
        if self.op == "*":
            return lambda env: a(env) * b(env)
        where = self.render()
        return lambda env: dual.divide(a(env), b(env), where)


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: "Node"

    def render(self) -> str:
        return f"({self.base.render()} ^ {self.exponent.render()})"

    def variables(self) -> frozenset[str]:
        return self.base.variables() | self.exponent.variables()

    def compile(self) -> Compiled:
        b = self.base.compile()
        where = self.render()
        # The integer-power rule is chosen statically so eval and grad agree.
        if not self.exponent.variables():
            try:
                k = dual.real(self.exponent.compile()(()))
            except DomainError:
                k = math.nan
            if float(k).is_integer() and abs(k) <= 1 << 30:
                ki = int(k)
                return lambda env: dual.int_power(b(env), ki, where)
        e = self.exponent.compile()
        return lambda env: dual.real_power(b(env), e(env), where)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"

    def render(self) -> str:
        return f"{self.func}({self.arg.render()})"

    def variables(self) -> frozenset[str]:
        return self.arg.variables()

    def compile(self) -> Compiled:
        f = self.arg.compile()
        where = self.render()
        if self.func == "exp":
            return lambda env: dual.exp(f(env), where)
        return lambda env: dual.log(f(env), where)


Node = Union[Const, Var, Neg, BinOp, Power, Call]


# Parser ----------------------------------------------------------------------


class Parser:
    """Precedence-climbing parser over a token list.

    ``slots`` maps admissible variable names to their position in the
    evaluation environment; ``params`` are folded to named constants.
    """

    def __init__(self, source: str, slots: Mapping[str, int], params: Mapping[str, float]):
        self.source = source
        self.slots = slots
        self.params = params
        self.tokens = tokenize(source)
        self.index = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect(self, text: str) -> None:
        if self.token.text != text or self.token.kind == "end":
            raise ExpressionSyntaxError(f"expected {text!r}", self.token.pos, self.token.text)
        self.advance()

    def parse(self) -> Node:
        if self.token.kind == "end":
            raise ExpressionSyntaxError("empty expression", 0, "")
        tree = self.expression(0)
        if self.token.kind != "end":
            raise ExpressionSyntaxError("unexpected token", self.token.pos, self.token.text)
        return tree

    def expression(self, min_prec: int) -> Node:
        lhs = self.unary()
        while self.token.kind == "op" and self.token.text in BINARY:
            prec, right_assoc = BINARY[self.token.text]
            if prec < min_prec:
                break
            op = self.advance().text
            rhs = self.expression(prec if right_assoc else prec + 1)
            lhs = Power(lhs, rhs) if op == "^" else BinOp(op, lhs, rhs)
        return lhs

    def unary(self) -> Node:
        if self.token.kind == "op" and self.token.text == "-":
            self.advance()
            return Neg(self.expression(UNARY_PREC))
        return self.primary()

    def primary(self) -> Node:
        tok = self.advance()
        if tok.kind == "num":
            return Const(float(tok.text))
        if tok.kind == "name":
            if self.token.text == "(" and self.token.kind == "op":
                return self.call(tok)
            if tok.text in self.slots:
                return Var(tok.text, self.slots[tok.text])
            if tok.text in self.params:
                return Const(float(self.params[tok.text]), tok.text)
            if tok.text in FUNCTIONS:
                raise ExpressionSyntaxError("function used without arguments", tok.pos, tok.text)
            raise UnknownIdentifier(tok.text, tok.pos)
        if tok.kind == "op" and tok.text == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        if tok.kind == "end":
            raise ExpressionSyntaxError("unexpected end of input", tok.pos, tok.text)
        raise ExpressionSyntaxError("unexpected token", tok.pos, tok.text)

    def call(self, name: Token) -> Node:
        if name.text not in FUNCTIONS:
            raise UnknownIdentifier(name.text, name.pos)
        self.expect("(")
        args = [self.expression(0)]
        while self.token.kind == "op" and self.token.text == ",":
            self.advance()
            args.append(self.expression(0))
        self.expect(")")
        arity = FUNCTIONS[name.text]
        if len(args) != arity:
            raise ArityMismatch(
                f"{name.text} takes {arity} argument(s), got {len(args)}",
                function=name.text,
                position=name.pos,
            )
        if name.text == "pow":
            return Power(args[0], args[1])
        return Call(name.text, args[0])
