"""Text grammar for polynomials shared by the library and the CLI.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := INT | VAR | 'i' | 'w' | '(' expr ')'

Division is only allowed by nonzero constants, so ``3/8*x`` and ``(1-w)/24``
both parse.  The ring is inferred from the variables used: ``x, y`` (affine),
``x, y, z`` (projective) or ``x0, x1, y0, y1`` (Hirzebruch).
"""

import re
from typing import List, Optional, Sequence, Tuple

from .field import QuadFieldElement, check_descriptor
from .poly import MultiPoly

AFFINE = ("x", "y")
PROJECTIVE = ("x", "y", "z")
HIRZEBRUCH = ("x0", "x1", "y0", "y1")

_TOKEN = re.compile(r"\s*(?:(\d+)|(x0|x1|y0|y1|x|y|z|i|w)|([-+*/^()])|(\S))")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _position(text: str, offset: int) -> Tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    start = text.rfind("\n", 0, offset) + 1
    return line, offset - start + 1


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(4):
            raise ParseError(f"unexpected character {m.group(4)!r}", *_position(text, m.start(4)))
        if m.lastindex is None:
            break
        kind = {1: "int", 2: "name", 3: "op"}[m.lastindex]
        tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    return tokens


def infer_ring(text: str) -> Tuple[str, ...]:
    names = {v for k, v, _ in _tokenize(text) if k == "name" and v not in ("i", "w")}
    if names & set(HIRZEBRUCH):
        if names - set(HIRZEBRUCH):
            raise ParseError("cannot mix x0,x1,y0,y1 with x,y,z", 1, 1)
        return HIRZEBRUCH
    if "z" in names:
        return PROJECTIVE
    return AFFINE


class _Parser:
    def __init__(self, text: str, vars: Sequence[str], d: int):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0
        self.vars = tuple(vars)
        self.d = d

    def error(self, message: str, offset: Optional[int] = None):
        if offset is None:
            offset = self.tokens[self.k][2] if self.k < len(self.tokens) else len(self.text)
        raise ParseError(message, *_position(self.text, offset))

    def peek(self):
        return self.tokens[self.k] if self.k < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.k += 1
        return tok

    def parse(self) -> MultiPoly:
        if not self.tokens:
            self.error("empty polynomial")
        p = self.expr()
        if self.k < len(self.tokens):
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> MultiPoly:
        p = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MultiPoly:
        p = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, off = self.take()
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    self.error("division only by a nonzero constant", off)
                p = p / q.constant_term()
        return p

    def unary(self) -> MultiPoly:
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, off = self.take()
            if kind != "int":
                self.error("exponent must be a non-negative integer", off)
            return base ** int(val)
        return base

    def atom(self) -> MultiPoly:
        kind, val, off = self.take()
        if kind == "int":
            return MultiPoly.const(self.vars, int(val), self.d)
        if kind == "name":
            if val == "i":
                if self.d != -1:
                    self.error("constant i needs --field=-1", off)
                return MultiPoly.const(self.vars, QuadFieldElement(0, 1, -1), -1)
            if val == "w":
                if self.d != -3:
                    self.error("constant w needs --field=-3", off)
                return MultiPoly.const(self.vars, QuadFieldElement(0, 1, -3), -3)
            if val not in self.vars:
                self.error(f"variable {val} not in ring {','.join(self.vars)}", off)
            return MultiPoly.var(self.vars, val, self.d)
        if val == "(":
            p = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return p
        if kind is None:
            self.error("unexpected end of input")
        self.error(f"unexpected {val!r}", off)


def parse_poly(text: str, field: int = 0, vars: Optional[Sequence[str]] = None) -> MultiPoly:
    """Parse text into a MultiPoly over Q(sqrt(field))."""
    check_descriptor(field)
    if vars is None:
        vars = infer_ring(text)
    p = _Parser(text, vars, field).parse()
    if p.d != field:
        p = MultiPoly(p.vars, p.terms, field)
    return p


def parse_scalar(text: str, field: int = 0) -> QuadFieldElement:
    p = parse_poly(text, field, vars=("x",))
    if not p.is_constant():
        raise ParseError("expected a constant", 1, 1)
    return p.constant_term()


def parse_point(text: str, field: int = 0) -> List[QuadFieldElement]:
    """Coordinates from 'a,b', '[a:b:c]' or '[x0:x1;y0:y1]' (separators , : ;)."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    parts = [s for s in re.split(r"[,:;]", body)]
    if any(not s.strip() for s in parts):
        raise ParseError("empty coordinate", 1, 1)
    return [parse_scalar(s, field) for s in parts]
