"""Coefficient ring descriptors and random scalar generation."""

from dataclasses import dataclass

from .algebra import GaussianRational, Matrix, MultiPoly, ONE, ZERO, random_gaussian
from .algebra.poly import pack


@dataclass(frozen=True)
class Ring:
    """Either Q(i) ("gaussian") or polynomials over Q(i) in ``nvars`` variables."""

    kind: str = "gaussian"
    nvars: int = 0

    def __post_init__(self):
        if self.kind not in ("gaussian", "poly"):
            raise ValueError(f"unknown ring {self.kind!r}")
        if self.kind == "poly" and self.nvars < 1:
            raise ValueError("polynomial ring needs at least one variable")

    @classmethod
    def parse(cls, text):
        if text == "gaussian":
            return cls("gaussian", 0)
        if text.startswith("poly:"):
            try:
                m = int(text[5:])
            except ValueError:
                raise ValueError(f"bad ring {text!r}") from None
            return cls("poly", m)
        raise ValueError(f"bad ring {text!r}")

    def __str__(self):
        return "gaussian" if self.kind == "gaussian" else f"poly:{self.nvars}"

    @property
    def is_poly(self):
        return self.kind == "poly"

    def zero(self):
        return MultiPoly({}, self.nvars) if self.is_poly else ZERO

    def one(self):
        return MultiPoly.constant(1, self.nvars) if self.is_poly else ONE

    def coerce(self, x):
        if self.is_poly:
            if isinstance(x, MultiPoly):
                return x if x.nvars == self.nvars else x.with_nvars(self.nvars)
            return MultiPoly.constant(x, self.nvars)
        if isinstance(x, MultiPoly):
            return x.constant_value()
        return x

    def coerce_matrix(self, m):
        return m.map(self.coerce)

    def random(self, rng, bound=3):
        """A random element: a Gaussian integer, or a sparse affine polynomial."""
        if not self.is_poly:
            return random_gaussian(rng, bound)
        terms = {}
        c = random_gaussian(rng, bound)
        if c:
            terms[0] = c
        for k in range(self.nvars):
            if rng.random() < 0.5:
                c = random_gaussian(rng, 2)
                if c:
                    terms[pack([0] * k + [1])] = c
        return MultiPoly(terms, self.nvars)


GAUSSIAN = Ring()


def ring_of_matrix(m):
    nvars = None
    for x in m.entries:
        if isinstance(x, MultiPoly):
            nvars = max(nvars or 0, x.nvars)
    return GAUSSIAN if nvars is None else Ring("poly", max(nvars, 1))


def random_upper_unitriangular(n, rng, ring=GAUSSIAN, bound=3):
    rows = [[ring.one() if i == j else (ring.random(rng, bound) if j > i else ring.zero()) for j in range(n)]
            for i in range(n)]
    return Matrix.from_rows(rows)


def random_symmetric(n, rng, ring=GAUSSIAN, bound=3):
    rows = [[ring.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = ring.random(rng, bound)
            rows[i][j] = v
            rows[j][i] = v
    return Matrix.from_rows(rows)


def is_constant_scalar(x):
    return not isinstance(x, MultiPoly) or x.is_constant()


def as_constant(x):
    if isinstance(x, MultiPoly):
        return x.constant_value()
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(x)
