import random

from hypothesis import strategies as st

from symplectic_factor.algebra import GaussianRational, MultiPoly, rational
from symplectic_factor.algebra.poly import pack

small_ints = st.integers(min_value=-30, max_value=30)
denominators = st.integers(min_value=1, max_value=12)

rationals = st.builds(rational, small_ints, denominators)
gaussians = st.builds(GaussianRational, rationals, rationals)
nonzero_gaussians = gaussians.filter(bool)


@st.composite
def polys(draw, nvars=2, max_terms=4, max_exp=2):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = [draw(st.integers(0, max_exp)) for _ in range(nvars)]
        terms[pack(exps)] = draw(gaussians)
    return MultiPoly(terms, nvars)


def rng(seed=0):
    return random.Random(seed)
