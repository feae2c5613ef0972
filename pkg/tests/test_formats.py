import random

import pytest

from symplectic_factor.algebra import GaussianRational, Matrix, MultiPoly, ParseError, rational
from symplectic_factor.factorization import factor_elementary_7, random_chain
from symplectic_factor.formats import parse_vector, read_chain, read_matrix, write_chain, write_matrix
from symplectic_factor.rings import Ring
from symplectic_factor.symplectic import ElementaryChain, FactorChain


def test_matrix_round_trip():
    m = Matrix.from_rows([[1, GaussianRational(0, -1)], [rational(1, 2), 0]])
    text = write_matrix(m)
    assert text == "matrix 2 2 gaussian\n1 -i\n1/2 0\n"
    back, ring = read_matrix(text)
    assert back == m and str(ring) == "gaussian"


def test_poly_matrix_round_trip():
    x = MultiPoly.variable(0, 2)
    ring = Ring("poly", 2)
    m = ring.coerce_matrix(Matrix.from_rows([[x * x + 1, 0], [2, x]]))
    text = write_matrix(m, ring)
    back, r = read_matrix(text)
    assert r == ring and back == m


@pytest.mark.parametrize("ring", ["gaussian", "poly:2"])
def test_chain_round_trip(ring):
    ring = Ring.parse(ring)
    chain = random_chain(3, 3, random.Random(0), ring)
    text = write_chain(chain, ring)
    back, r = read_chain(text)
    assert isinstance(back, ElementaryChain)
    assert back == chain and r == ring
    std = factor_elementary_7(chain.factors[0]).chain
    back, _ = read_chain(write_chain(std, ring))
    assert isinstance(back, FactorChain) and back == std


def test_comments_and_blank_lines():
    text = "# identity\nmatrix 2 2 gaussian\n\n1 0\n  # row two\n0 1\n"
    assert read_matrix(text)[0] == Matrix.identity(2)


@pytest.mark.parametrize("text, line, column", [
    ("matrix 2 2 gaussian\n1 0\n0 1+/\n", 3, 5),
    ("matrix 2 2 gaussian\n1 0\n0\n", 3, 1),
    ("matrix 2 2 gaussian\n1 0\n", 3, 1),
    ("matrix 2 x gaussian\n", 1, 10),
    ("matrix 1 1 reals\n1\n", 1, 12),
    ("matrix 1 1 gaussian\nx1\n", 2, 1),
    ("matrix 1 1 gaussian\n1\n2\n", 3, 1),
    ("chain 2 1\nfactor sideways\n", 2, 8),
    ("chain 1 1\nfactor minus\n2\n0\n", 2, 8),
    ("chain 1 2\nfactor minus\n1\n0\nfactor minus\n1\n0\n", 5, 1),
])
def test_errors_carry_line_and_column(text, line, column):
    with pytest.raises(ParseError) as info:
        read_chain(text) if text.startswith("chain") else read_matrix(text)
    assert info.value.line == line
    assert info.value.position + 1 == column
    assert f"line {line}, column {column}" in str(info.value)


def test_vector():
    assert parse_vector("1 0 -i 1/2") == (1, 0, GaussianRational(0, -1), GaussianRational(1) / 2)
