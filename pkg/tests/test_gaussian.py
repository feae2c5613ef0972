import pickle

import pytest
from hypothesis import given, settings

from symplectic_factor.algebra import GaussianRational, I, ONE, ZERO, rational
from symplectic_factor.algebra.gaussian import format_gaussian, random_gaussian

from conftest import gaussians, nonzero_gaussians, rng


@settings(max_examples=1000)
@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a
    assert a * ONE == a
    assert a + (-a) == ZERO
    assert a - b == a + (-b)


@settings(max_examples=1000)
@given(nonzero_gaussians, gaussians)
def test_inverse_and_division(a, b):
    assert a * a.inverse() == ONE
    assert (b / a) * a == b
    assert a ** -2 * a * a == ONE


def test_i_squared():
    assert I * I == -ONE
    assert I ** 4 == ONE


def test_equality_with_plain_numbers():
    assert GaussianRational(3) == 3
    assert GaussianRational(rational(1, 2)) == rational(1, 2)
    assert GaussianRational(1, 1) != 1
    assert hash(GaussianRational(5)) == hash(5)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_conjugate_and_complex():
    z = GaussianRational(3, -4)
    assert z.conjugate() == GaussianRational(3, 4)
    assert z * z.conjugate() == 25
    assert complex(z) == complex(3, -4)


@pytest.mark.parametrize("z, text", [
    (GaussianRational(0), "0"),
    (GaussianRational(rational(3, 2)), "3/2"),
    (GaussianRational(0, 1), "i"),
    (GaussianRational(0, -1), "-i"),
    (GaussianRational(0, rational(2, 3)), "2/3i"),
    (GaussianRational(1, -2), "1-2i"),
    (GaussianRational(-1, 1), "-1+i"),
])
def test_canonical_print(z, text):
    assert format_gaussian(z) == text


def test_pickle_round_trip():
    z = GaussianRational(rational(-7, 3), 2)
    assert pickle.loads(pickle.dumps(z)) == z


def test_random_gaussian_bound_and_determinism():
    a = [random_gaussian(rng(4), 2) for _ in range(5)]
    b = [random_gaussian(rng(4), 2) for _ in range(5)]
    assert a == b
    r = rng(1)
    for _ in range(200):
        z = random_gaussian(r, 2)
        assert abs(z.re) <= 2 and abs(z.im) <= 2
        assert random_gaussian(r, 2, real=True).im == 0
