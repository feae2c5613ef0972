"""Text syntax for scalars.

    rational  := int | int "/" posint
    imag      := rational? "i"
    term      := (rational | imag) ("*" monomial)? | monomial
    monomial  := var ("^" posint)? ("*" var ("^" posint)?)*
    poly      := ("+"|"-")? term (("+"|"-") term)*
    var       := "x" posint

A Gaussian literal such as "1-2i" is the two-term sum of "1" and "-2i".
Whitespace between tokens is ignored.
"""

import re

from gmpy2 import mpq

from .gaussian import GaussianRational, format_gaussian, _coerce
from .poly import MultiPoly, format_poly, pack


class ParseError(ValueError):
    def __init__(self, message, position, line=None):
        self.message = message
        self.position = position
        self.line = line
        where = f"column {position + 1}" if line is None else f"line {line}, column {position + 1}"
        super().__init__(f"{where}: {message}")


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>x\d+)|(?P<op>[-+*/^])|(?P<i>i))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self, kind=None, value=None):
        if self.k >= len(self.tokens):
            return None
        tok = self.tokens[self.k]
        if kind is not None and tok[0] != kind:
            return None
        if value is not None and tok[1] != value:
            return None
        return tok

    def position(self):
        if self.k < len(self.tokens):
            return self.tokens[self.k][2]
        return len(self.text)

    def take(self, kind, value=None, what=None):
        tok = self.peek(kind, value)
        if tok is None:
            raise ParseError(f"expected {what or value or kind}", self.position())
        self.k += 1
        return tok

    def posint(self):
        tok = self.take("int", what="positive integer")
        v = int(tok[1])
        if v == 0:
            raise ParseError("expected positive integer", tok[2])
        return v

    def parse(self):
        if not self.tokens:
            raise ParseError("empty scalar", 0)
        terms = {}
        sign = 1
        if self.peek("op", "-"):
            self.k += 1
            sign = -1
        elif self.peek("op", "+"):
            self.k += 1
        while True:
            mono, coeff = self.term()
            if sign < 0:
                coeff = -coeff
            terms[mono] = terms.get(mono, 0) + coeff
            if self.peek("op", "+"):
                sign = 1
            elif self.peek("op", "-"):
                sign = -1
            elif self.k < len(self.tokens):
                raise ParseError("expected '+' or '-'", self.position())
            else:
                break
            self.k += 1
        return terms

    def term(self):
        coeff = None
        if self.peek("int"):
            tok = self.take("int")
            num = int(tok[1])
            if self.peek("op", "/"):
                self.k += 1
                den_tok = self.peek("int")
                den = self.posint()
                if den == 0:
                    raise ParseError("zero denominator", den_tok[2])
                q = mpq(num, den)
            else:
                q = mpq(num)
            if self.peek("i"):
                self.k += 1
                coeff = GaussianRational(0, q)
            else:
                coeff = GaussianRational(q, 0)
            if not self.peek("op", "*"):
                return 0, coeff
            self.k += 1
        elif self.peek("i"):
            self.k += 1
            coeff = GaussianRational(0, 1)
            if not self.peek("op", "*"):
                return 0, coeff
            self.k += 1
        else:
            coeff = GaussianRational(1, 0)
        return self.monomial(), coeff

    def monomial(self):
        exps = {}
        while True:
            tok = self.take("var", what="variable")
            index = int(tok[1][1:])
            if index == 0:
                raise ParseError("variables are numbered from x1", tok[2])
            e = 1
            if self.peek("op", "^"):
                self.k += 1
                e = self.posint()
            exps[index - 1] = exps.get(index - 1, 0) + e
            if self.peek("op", "*") and self.k + 1 < len(self.tokens) and self.tokens[self.k + 1][0] == "var":
                self.k += 1
                continue
            return pack([exps.get(k, 0) for k in range(max(exps) + 1)])


def parse_scalar(text, nvars=None):
    """Parse a scalar; constants come back as GaussianRational, others as MultiPoly.

    With ``nvars`` given the result is always a MultiPoly in that many variables.
    """
    raw = _Parser(text).parse()
    terms = {m: c for m, c in raw.items() if c}
    used = 0
    for m in terms:
        used |= m
    needed = 0
    while used:
        needed += 1
        used >>= 16
    if nvars is None:
        if not any(terms) and len(terms) <= 1:
            return terms.get(0, GaussianRational(0, 0))
        return MultiPoly(terms, needed)
    if needed > nvars:
        raise ParseError(f"variable x{needed} outside ring with {nvars} variables", 0)
    return MultiPoly(terms, nvars)


def print_scalar(value):
    if isinstance(value, MultiPoly):
        return format_poly(value)
    c = _coerce(value)
    if c is None:
        raise TypeError(f"cannot print {value!r}")
    return format_gaussian(c)
