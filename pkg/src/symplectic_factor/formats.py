"""Text formats for matrices and chains.

Matrix:
    matrix <rows> <cols> <ring>
    <row of scalar tokens>
    ...

Chain of elementary matrices:
    chain <n> <K> [<ring>]
    factor minus|plus
    <n rows of A>
    <n rows of Z>
    ...

Chain of standard factors: same header, with ``factor lower|upper`` blocks
holding one symmetric G each.

Scalars use the grammar of ``parse_scalar`` and may not contain whitespace.
Blank lines and lines starting with ``#`` are ignored.
"""

from .algebra import Matrix, MultiPoly, ParseError, parse_scalar, print_scalar
from .rings import GAUSSIAN, Ring, ring_of_matrix
from .symplectic import ElementaryChain, ElementarySymplectic, FactorChain, Side, Sign, StandardFactor


class _Lines:
    """Nonblank, non-comment lines split into (token, line, column) triples."""

    def __init__(self, text):
        self.lines = []
        for number, raw in enumerate(text.splitlines(), 1):
            if raw.lstrip().startswith("#"):
                continue
            stripped = raw
            tokens = []
            col = 0
            for part in stripped.split():
                col = stripped.index(part, col)
                tokens.append((part, number, col))
                col += len(part)
            if tokens:
                self.lines.append((number, tokens))
        self.k = 0
        self.last_line = len(text.splitlines())

    def next(self, what):
        if self.k >= len(self.lines):
            raise ParseError(f"unexpected end of input, expected {what}", 0, self.last_line + 1)
        line = self.lines[self.k]
        self.k += 1
        return line

    def done(self):
        if self.k < len(self.lines):
            number, tokens = self.lines[self.k]
            raise ParseError("unexpected trailing content", tokens[0][2], number)


def _int(token, what, minimum=0):
    text, line, col = token
    if not text.isdigit() or int(text) < minimum:
        raise ParseError(f"expected {what}, got {text!r}", col, line)
    return int(text)


def _ring(token):
    text, line, col = token
    try:
        return Ring.parse(text)
    except ValueError:
        raise ParseError(f"unknown ring {text!r}", col, line) from None


def _scalar(token, ring):
    text, line, col = token
    try:
        value = parse_scalar(text, ring.nvars if ring.is_poly else None)
    except ParseError as e:
        raise ParseError(e.message, col + e.position, line) from None
    if not ring.is_poly and isinstance(value, MultiPoly):
        raise ParseError(f"polynomial entry {text!r} in a gaussian matrix", col, line)
    return value


def _rows(lines, rows, cols, ring, what):
    out = []
    for r in range(rows):
        number, tokens = lines.next(f"row {r + 1} of {what}")
        if len(tokens) != cols:
            raise ParseError(f"row {r + 1} of {what} has {len(tokens)} entries, expected {cols}", tokens[0][2], number)
        out.append([_scalar(t, ring) for t in tokens])
    return Matrix.from_rows(out) if rows else Matrix.zeros(0, cols)


def _header(lines, keyword):
    number, tokens = lines.next(f"'{keyword}' header")
    if tokens[0][0] != keyword:
        raise ParseError(f"expected '{keyword}' header, got {tokens[0][0]!r}", tokens[0][2], number)
    return number, tokens


def read_matrix(text):
    """Parse a matrix document; returns (matrix, ring)."""
    lines = _Lines(text)
    number, tokens = _header(lines, "matrix")
    if len(tokens) != 4:
        raise ParseError("header must be 'matrix <rows> <cols> <ring>'", tokens[0][2], number)
    rows = _int(tokens[1], "row count", 1)
    cols = _int(tokens[2], "column count", 1)
    ring = _ring(tokens[3])
    m = _rows(lines, rows, cols, ring, "matrix")
    lines.done()
    return ring.coerce_matrix(m), ring


def write_matrix(m, ring=None):
    ring = ring or ring_of_matrix(m)
    m = ring.coerce_matrix(m)
    out = [f"matrix {m.rows} {m.cols} {ring}"]
    for i in range(m.rows):
        out.append(" ".join(print_scalar(x) for x in m.row(i)))
    return "\n".join(out) + "\n"


_ELEMENTARY = {"minus": Sign.MINUS, "plus": Sign.PLUS}
_STANDARD = {"lower": Side.LOWER, "upper": Side.UPPER}


def read_chain(text):
    """Parse a chain document; returns (ElementaryChain or FactorChain, ring)."""
    lines = _Lines(text)
    number, tokens = _header(lines, "chain")
    if len(tokens) not in (3, 4):
        raise ParseError("header must be 'chain <n> <K> [<ring>]'", tokens[0][2], number)
    n = _int(tokens[1], "size n", 1)
    K = _int(tokens[2], "factor count K", 0)
    ring = _ring(tokens[3]) if len(tokens) == 4 else GAUSSIAN
    elementary, standard = [], []
    for k in range(K):
        number, tokens = lines.next(f"'factor' line {k + 1}")
        if tokens[0][0] != "factor" or len(tokens) != 2:
            raise ParseError("expected 'factor <minus|plus|lower|upper>'", tokens[0][2], number)
        kind, _, col = tokens[1]
        try:
            if kind in _ELEMENTARY:
                a = ring.coerce_matrix(_rows(lines, n, n, ring, f"A of factor {k + 1}"))
                z = ring.coerce_matrix(_rows(lines, n, n, ring, f"Z of factor {k + 1}"))
                elementary.append(ElementarySymplectic(_ELEMENTARY[kind], a, z))
            elif kind in _STANDARD:
                g = ring.coerce_matrix(_rows(lines, n, n, ring, f"G of factor {k + 1}"))
                standard.append(StandardFactor(_STANDARD[kind], g))
            else:
                raise ParseError(f"unknown factor kind {kind!r}", col, number)
        except ValueError as e:
            if isinstance(e, ParseError):
                raise
            raise ParseError(f"factor {k + 1}: {e}", col, number) from None
    lines.done()
    if elementary and standard:
        raise ParseError("chain mixes elementary and standard factors", 0, number)
    try:
        if standard:
            return FactorChain(tuple(standard)), ring
        return ElementaryChain(tuple(elementary), n), ring
    except ValueError as e:
        raise ParseError(str(e), 0, number) from None


def _block(m):
    return [" ".join(print_scalar(x) for x in m.row(i)) for i in range(m.rows)]


def write_chain(chain, ring=GAUSSIAN):
    if isinstance(chain, FactorChain):
        out = [f"chain {chain.n} {len(chain)} {ring}"]
        for f in chain.factors:
            out.append(f"factor {f.side.value}")
            out += _block(ring.coerce_matrix(f.G))
    else:
        out = [f"chain {chain.n} {chain.K} {ring}"]
        for e in chain.factors:
            out.append(f"factor {e.sign.value}")
            out += _block(ring.coerce_matrix(e.A)) + _block(ring.coerce_matrix(e.Z))
    return "\n".join(out) + "\n"


def parse_vector(text, ring=GAUSSIAN):
    """Whitespace-separated scalars on one line, e.g. a target for reduce."""
    out = []
    col = 0
    for part in text.split():
        col = text.index(part, col)
        out.append(_scalar((part, 1, col), ring))
        col += len(part)
    return tuple(out)


def format_vector(v):
    return " ".join(print_scalar(x) for x in v)
