"""Expression AST for rational update rules.

The grammar covers exactly what mapping files need: integer literals,
declared symbols plus the reserved names x0/x1/x2 and n, the four
arithmetic operators, ``^`` with integer exponents, and parentheses.
ASTs are immutable tuples so they can be hashed and compared directly:

    ("num", Fraction)      ("sym", name)      ("neg", a)
    ("add"|"sub"|"mul"|"div", a, b)           ("pow", a, int)
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import MappingSyntaxError

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[()+\-*/^]))")


def tokenize(text, line=1):
    """Split an expression into (kind, value, column) triples."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            col = pos + len(text[pos:]) - len(stripped) + 1
            raise MappingSyntaxError(f"unexpected character {stripped[0]!r}", line, col)
        num, name, op = m.groups()
        col = m.start(m.lastindex) + 1
        if num is not None:
            tokens.append(("num", int(num), col))
        elif name is not None:
            tokens.append(("sym", name, col))
        else:
            tokens.append(("op", "^" if op == "**" else op, col))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, line):
        self.tokens = tokens
        self.line = line
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise MappingSyntaxError("unexpected end of expression", self.line,
                                     self.tokens[-1][2] if self.tokens else 1)
        self.i += 1
        return tok

    def expect_op(self, op):
        tok = self.next()
        if tok[0] != "op" or tok[1] != op:
            raise MappingSyntaxError(f"expected {op!r}, got {tok[1]!r}", self.line, tok[2])

    def parse_expr(self):
        node = self.parse_term()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.next()
            rhs = self.parse_term()
            node = ("add" if tok[1] == "+" else "sub", node, rhs)
        return node

    def parse_term(self):
        node = self.parse_unary()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "*/":
            self.next()
            rhs = self.parse_unary()
            node = ("mul" if tok[1] == "*" else "div", node, rhs)
        return node

    def parse_unary(self):
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "-":
            self.next()
            return ("neg", self.parse_unary())
        if tok and tok[0] == "op" and tok[1] == "+":
            self.next()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.next()
            sign = 1
            etok = self.next()
            if etok[0] == "op" and etok[1] == "-":
                sign = -1
                etok = self.next()
            if etok[0] != "num":
                raise MappingSyntaxError("exponent must be an integer literal",
                                         self.line, etok[2])
            return ("pow", base, sign * etok[1])
        return base

    def parse_atom(self):
        tok = self.next()
        if tok[0] == "num":
            return ("num", Fraction(tok[1]))
        if tok[0] == "sym":
            return ("sym", tok[1])
        if tok[0] == "op" and tok[1] == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise MappingSyntaxError(f"unexpected token {tok[1]!r}", self.line, tok[2])


def parse_expr(text, line=1):
    """Parse one expression string into an AST."""
    tokens = tokenize(text, line)
    if not tokens:
        raise MappingSyntaxError("empty expression", line, 1)
    parser = _Parser(tokens, line)
    node = parser.parse_expr()
    if parser.peek() is not None:
        tok = parser.peek()
        raise MappingSyntaxError(f"trailing input starting at {tok[1]!r}", line, tok[2])
    return node


def free_symbols(ast):
    """All symbol names appearing in the AST."""
    kind = ast[0]
    if kind == "num":
        return set()
    if kind == "sym":
        return {ast[1]}
    if kind in ("neg",):
        return free_symbols(ast[1])
    if kind == "pow":
        return free_symbols(ast[1])
    return free_symbols(ast[1]) | free_symbols(ast[2])


def rename_symbol(ast, old, new):
    """Return the AST with every occurrence of symbol `old` renamed."""
    return substitute(ast, old, ("sym", new))


def substitute(ast, name, replacement):
    """Return the AST with every occurrence of the symbol replaced by a subtree."""
    kind = ast[0]
    if kind == "num":
        return ast
    if kind == "sym":
        return replacement if ast[1] == name else ast
    if kind == "neg":
        return ("neg", substitute(ast[1], name, replacement))
    if kind == "pow":
        return ("pow", substitute(ast[1], name, replacement), ast[2])
    return (kind, substitute(ast[1], name, replacement), substitute(ast[2], name, replacement))


def collapse_double_neg(ast):
    """Remove neg(neg(x)) pairs introduced by repeated substitutions."""
    kind = ast[0]
    if kind in ("num", "sym"):
        return ast
    if kind == "neg":
        inner = collapse_double_neg(ast[1])
        return inner[1] if inner[0] == "neg" else ("neg", inner)
    if kind == "pow":
        return ("pow", collapse_double_neg(ast[1]), ast[2])
    return (kind, collapse_double_neg(ast[1]), collapse_double_neg(ast[2]))


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4, "num": 5, "sym": 5}


def format_expr(ast, parent_prec=0, right_side=False):
    """Pretty-print an AST; parse(format(ast)) == ast."""
    kind = ast[0]
    if kind == "num":
        frac = ast[1]
        text = str(frac.numerator) if frac.denominator == 1 else f"{frac.numerator}/{frac.denominator}"
        if frac < 0:
            return f"({text})" if parent_prec > 0 else text
        return text
    if kind == "sym":
        return ast[1]
    if kind == "neg":
        inner = format_expr(ast[1], _PREC["neg"])
        text = f"-{inner}"
        return f"({text})" if parent_prec > _PREC["neg"] or (parent_prec == _PREC["neg"] and right_side) else text
    if kind == "pow":
        base = format_expr(ast[1], _PREC["pow"] + 1)
        exp = ast[2]
        text = f"{base}^{exp}" if exp >= 0 else f"{base}^-{-exp}"
        # exponentiation does not chain in the grammar, so a pow inside
        # any tighter-binding context must be parenthesized
        return f"({text})" if parent_prec > _PREC["pow"] else text
    op_char = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}[kind]
    prec = _PREC[kind]
    lhs = format_expr(ast[1], prec, right_side=False)
    rhs = format_expr(ast[2], prec + (1 if kind in ("sub", "div") else 0), right_side=True)
    # + and * are left-associative here; the right operand of - and / needs
    # the extra level so that a - (b - c) round-trips
    if kind in ("add", "mul"):
        rhs = format_expr(ast[2], prec, right_side=True)
    text = f"{lhs}{op_char}{rhs}"
    if parent_prec > prec or (parent_prec == prec and right_side):
        return f"({text})"
    return text


def eval_ast(ast, env):
    """Evaluate an AST over any domain.

    ``env`` maps symbol names to domain values and must hold a callable
    under the key ``"__const__"`` that lifts a Fraction into the domain.
    Domain values need +, -, *, / and ** with integer exponents.
    """
    kind = ast[0]
    if kind == "num":
        return env["__const__"](ast[1])
    if kind == "sym":
        try:
            return env[ast[1]]
        except KeyError:
            raise MappingSyntaxError(f"undeclared symbol {ast[1]!r}") from None
    if kind == "neg":
        return -eval_ast(ast[1], env)
    if kind == "pow":
        return eval_ast(ast[1], env) ** ast[2]
    a = eval_ast(ast[1], env)
    b = eval_ast(ast[2], env)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    return a / b
