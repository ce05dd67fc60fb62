"""Parser for the operator expression grammar.

    expr    := '-'? term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := rational | primitive | '(' expr ')'
    primitive := R1|R2|R3 | d1|d2|d3 | D1|D2|D3 | s1|s2|s3 ('^' exponent)?
    rational  := int ('/' int)?
    exponent  := '-'? int

The optional leading '-' on the first term is the one extension over the
minimal grammar; it lets every printable operator re-parse.  Parsed trees
come back through the normalizing constructors, so parse(to_text(x)) == x
for any normalized x.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple

from .operators import (
    Dunkl,
    Op,
    Partial,
    Refl,
    compose,
    mono,
    negate,
    scalar,
    sum_,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_AXES = "123"


def _tokenize(text: str) -> List[Tuple[str, object, int]]:
    tokens: List[Tuple[str, object, int]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()":
            tokens.append((ch, None, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            num = int(text[i:j])
            if j < n and text[j] == "/":
                k = j + 1
                if k >= n or not text[k].isdigit():
                    raise ParseError("expected denominator after '/'", j)
                m = k
                while m < n and text[m].isdigit():
                    m += 1
                tokens.append(("rat", Fraction(num, int(text[k:m])), i))
                i = m
            else:
                tokens.append(("rat", Fraction(num), i))
                i = j
            continue
        if ch in "RdDs":
            if i + 1 < n and text[i + 1] in _AXES:
                tokens.append((ch, int(text[i + 1]), i))
                i += 2
                continue
            raise ParseError(f"expected axis 1-3 after {ch!r}", i)
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> str:
        return self.tokens[self.pos][0]

    def advance(self) -> Tuple[str, object, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Tuple[str, object, int]:
        tok = self.tokens[self.pos]
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        return self.advance()

    def parse_expr(self) -> Op:
        negate_first = False
        if self.peek() == "-":
            self.advance()
            negate_first = True
        term = self.parse_term()
        terms = [negate(term) if negate_first else term]
        while self.peek() in "+-":
            sign = self.advance()[0]
            term = self.parse_term()
            terms.append(negate(term) if sign == "-" else term)
        return sum_(*terms)

    def parse_term(self) -> Op:
        factors = [self.parse_factor()]
        while self.peek() == "*":
            self.advance()
            factors.append(self.parse_factor())
        return compose(*factors)

    def parse_factor(self) -> Op:
        kind, value, position = self.advance()
        if kind == "rat":
            return scalar(value)
        if kind == "R":
            return Refl(value)
        if kind == "d":
            return Partial(value)
        if kind == "D":
            return Dunkl(value)
        if kind == "s":
            expo = 1
            if self.peek() == "^":
                self.advance()
                sign = 1
                if self.peek() == "-":
                    self.advance()
                    sign = -1
                q = self.expect("rat")[1]
                if q.denominator != 1:
                    raise ParseError("exponent must be an integer", position)
                expo = sign * q.numerator
            return mono(
                expo if value == 1 else 0,
                expo if value == 2 else 0,
                expo if value == 3 else 0,
            )
        if kind == "(":
            inner = self.parse_expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {kind!r}", position)


def parse(text: str) -> Op:
    """Parse an operator expression into its normalized tree."""
    parser = _Parser(text)
    expr = parser.parse_expr()
    parser.expect("end")
    return expr
