"""Exact Gaussian rationals: complex numbers with rational real and imaginary parts."""

from fractions import Fraction
from numbers import Rational as _RationalABC

from gmpy2 import mpq

# Rationals are gmpy2.mpq values; they are always stored in lowest terms
# with a positive denominator.
Rational = type(mpq(0))

_Q0 = mpq(0)
_Q1 = mpq(1)


def rational(numerator, denominator=1):
    """Build a reduced rational, rejecting a zero denominator."""
    if denominator == 0:
        raise ZeroDivisionError("zero denominator")
    return mpq(numerator, denominator)


def _as_q(value):
    if isinstance(value, Rational):
        return value
    if isinstance(value, (int, Fraction)) or isinstance(value, _RationalABC):
        return mpq(value)
    raise TypeError(f"not a rational value: {value!r}")


class GaussianRational:
    """An element re + im*i of Q(i). Treated as immutable: never assign to re/im."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_q(re)
        self.im = _as_q(im)

    @classmethod
    def _make(cls, re, im):
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return GaussianRational._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return GaussianRational._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational._make(a * c, _Q0)
        return GaussianRational._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def inverse(self):
        a, b = self.re, self.im
        if not b:
            if not a:
                raise ZeroDivisionError("inverse of zero")
            return GaussianRational._make(1 / a, _Q0)
        norm = a * a + b * b
        return GaussianRational._make(a / norm, -b / norm)

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = ONE
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def conjugate(self):
        return GaussianRational._make(self.re, -self.im)

    # comparison -----------------------------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    @property
    def is_real(self):
        return not self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({format_rational(self.re)}, {format_rational(self.im)})"

    def __str__(self):
        return format_gaussian(self)

    def __reduce__(self):
        return (GaussianRational, (Fraction(int(self.re.numerator), int(self.re.denominator)),
                                   Fraction(int(self.im.numerator), int(self.im.denominator))))


ZERO = GaussianRational._make(_Q0, _Q0)
ONE = GaussianRational._make(_Q1, _Q0)
I = GaussianRational._make(_Q0, _Q1)


def _coerce(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, Rational, Fraction)):
        return GaussianRational._make(mpq(value), _Q0)
    return None


def to_gaussian(value):
    """Convert an int, rational or Gaussian rational to a GaussianRational."""
    result = _coerce(value)
    if result is None:
        raise TypeError(f"cannot convert {value!r} to a Gaussian rational")
    return result


def is_number(value):
    return isinstance(value, (GaussianRational, int, Rational, Fraction)) and not isinstance(value, bool)


def format_rational(q):
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_gaussian(z):
    """Canonical text: "a", "bi", "a+bi", "a-bi"; unit imaginary parts print as "i"."""
    re, im = z.re, z.im
    if not im:
        return format_rational(re)
    if im == 1:
        imag = "i"
    elif im == -1:
        imag = "-i"
    else:
        imag = format_rational(im) + "i"
    if not re:
        return imag
    if imag.startswith("-"):
        return format_rational(re) + imag
    return format_rational(re) + "+" + imag


def random_gaussian(rng, bound=3, real=False):
    """A random Gaussian integer with parts in [-bound, bound]."""
    re = rng.randint(-bound, bound)
    im = 0 if real else rng.randint(-bound, bound)
    return GaussianRational._make(mpq(re), mpq(im))
