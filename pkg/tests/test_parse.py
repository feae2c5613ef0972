import pytest
from hypothesis import given, settings

from symplectic_factor.algebra import GaussianRational, MultiPoly, ParseError, parse_scalar, print_scalar, rational

from conftest import gaussians, polys


def test_rational():
    assert parse_scalar("3/2") == rational(3, 2)


def test_gaussian():
    assert parse_scalar("1-2i") == GaussianRational(1, -2)
    assert parse_scalar("-i") == GaussianRational(0, -1)
    assert parse_scalar("1/2+3/4i") == GaussianRational(rational(1, 2), rational(3, 4))


def test_two_term_poly():
    p = parse_scalar("x1^2*x2 - 1/3")
    assert isinstance(p, MultiPoly)
    assert len(p.terms) == 2
    x, y = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    assert p == x * x * y - rational(1, 3)


def test_whitespace_is_ignored():
    assert parse_scalar(" 2 * x1 + 1 ") == parse_scalar("2*x1+1")


def test_fixed_variable_count():
    p = parse_scalar("5", nvars=3)
    assert isinstance(p, MultiPoly) and p.nvars == 3
    with pytest.raises(ParseError):
        parse_scalar("x4", nvars=3)


@pytest.mark.parametrize("text, column", [
    ("1/0", 3),
    ("1 + * 2", 5),
    ("2$", 2),
    ("x0", 1),
    ("", 1),
])
def test_errors_carry_position(text, column):
    with pytest.raises(ParseError) as info:
        parse_scalar(text)
    assert info.value.position + 1 == column


@settings(max_examples=500, deadline=None)
@given(gaussians)
def test_round_trip_gaussian(z):
    text = print_scalar(z)
    assert parse_scalar(text) == z
    assert print_scalar(parse_scalar(text)) == text


@settings(max_examples=500, deadline=None)
@given(polys(nvars=3))
def test_round_trip_poly(p):
    text = print_scalar(p)
    assert parse_scalar(text, nvars=3) == p
    assert print_scalar(parse_scalar(text, nvars=3)) == text
