"""Exact integer expression parser for the command line.

Grammar: decimal or 0x-hex literals, binary + - * / ^, parentheses.
^ is right-associative and binds tightest; / is exact integer division
(a nonzero remainder is an error, never truncation); unary minus is
disallowed.  A whole expression must evaluate to a nonnegative integer.
"""

from __future__ import annotations

from dataclasses import dataclass

_MAX_EXPONENT = 10 ** 7

_HEX_DIGITS = set("0123456789abcdefABCDEF")


class ExpressionError(ValueError):
    """Parse or evaluation error, carrying the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "op", "(", ")", "end"
    pos: int
    value: int = 0
    text: str = ""


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch.isdigit():
            start = i
            if ch == "0" and i + 1 < n and text[i + 1] in "xX" and i + 2 < n and text[i + 2] in _HEX_DIGITS:
                i += 2
                while i < n and text[i] in _HEX_DIGITS:
                    i += 1
                tokens.append(_Token("num", start, int(text[start + 2 : i], 16)))
            else:
                while i < n and text[i].isdigit():
                    i += 1
                tokens.append(_Token("num", start, int(text[start:i])))
            continue
        if ch in "+-*/^":
            tokens.append(_Token("op", i, text=ch))
            i += 1
            continue
        if ch in "()":
            tokens.append(_Token(ch, i))
            i += 1
            continue
        raise ExpressionError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self) -> int:
        value = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next()
            rhs = self.term()
            value = value + rhs if op.text == "+" else value - rhs
        return value

    def term(self) -> int:
        value = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next()
            rhs = self.factor()
            if op.text == "*":
                value = value * rhs
            else:
                if rhs == 0:
                    raise ExpressionError("division by zero", op.pos)
                quot, rem = divmod(value, rhs)
                if rem != 0:
                    raise ExpressionError(
                        f"inexact division ({value} = {rhs}*{quot} + {rem})", op.pos
                    )
                value = quot
        return value

    def factor(self) -> int:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.next()
            exponent = self.factor()  # right-associative
            if exponent < 0:
                raise ExpressionError("negative exponent", tok.pos)
            if exponent > _MAX_EXPONENT:
                raise ExpressionError(f"exponent exceeds {_MAX_EXPONENT}", tok.pos)
            return base ** exponent
        return base

    def atom(self) -> int:
        tok = self.next()
        if tok.kind == "num":
            return tok.value
        if tok.kind == "(":
            value = self.expr()
            closing = self.next()
            if closing.kind != ")":
                raise ExpressionError("expected ')'", closing.pos)
            return value
        if tok.kind == "op" and tok.text == "-":
            raise ExpressionError("unary minus is not allowed", tok.pos)
        raise ExpressionError("expected a number or '('", tok.pos)


def parse_expression(text: str) -> int:
    """Evaluate an integer expression exactly; raises ExpressionError with
    the failing position on bad syntax, inexact division, or a negative
    result."""
    parser = _Parser(_tokenize(text))
    value = parser.expr()
    trailing = parser.peek()
    if trailing.kind != "end":
        raise ExpressionError("unexpected trailing input", trailing.pos)
    if value < 0:
        raise ExpressionError("expression evaluates to a negative number", 0)
    return value
