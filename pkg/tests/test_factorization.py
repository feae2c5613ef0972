import random

import pytest

from symplectic_factor.algebra import (
    GaussianRational, Matrix, MultiPoly, ShapeTag, invert_triangular, is_symmetric, mat_mul, rational,
    transpose,
)
from symplectic_factor.factorization import (
    Orientation, SearchStatus, SearchStrategy, Spectrum, UnsupportedSearch, diagonalize_triangular,
    factor_block_diag_constant, factor_block_diag_p1p2, factor_elementary_7, p1p2_decomposition, random_elementary,
    random_symplectic, search_k_factor,
)
from symplectic_factor.rings import Ring, random_upper_unitriangular
from symplectic_factor.symplectic import (
    ElementarySymplectic, FactorChain, FormKind, Side, Sign, StandardFactor, SymplecticForm, is_symplectic,
    is_symplectic_std, materialize_elementary,
)

POLY2 = Ring("poly", 2)
x1 = MultiPoly.variable(0, 2)
x2 = MultiPoly.variable(1, 2)


def M(*rows):
    return Matrix.from_rows([list(r) for r in rows])


def block_diag(a, b):
    n = a.rows
    return Matrix.block([[a, Matrix.zeros(n, n)], [Matrix.zeros(n, n), b]])


def test_spectrum_validation():
    assert Spectrum.default(3).lambdas == (1, 2, 3)
    with pytest.raises(ValueError):
        Spectrum((1, 1))
    with pytest.raises(ValueError):
        Spectrum((0, 1))


def test_diagonalize_examples():
    assert diagonalize_triangular(Matrix.diagonal([1, 2]), Orientation.UPPER).K == Matrix.identity(2)
    r = diagonalize_triangular(M([1, 5], [0, 2]), Orientation.UPPER)
    assert r.K == M([1, 5], [0, 1])
    assert r.Lambda.lambdas == (1, 2)
    x = MultiPoly.variable(0, 1)
    a = M([1, x, 0], [0, 2, x], [0, 0, 3])
    r = diagonalize_triangular(a, Orientation.UPPER)
    assert mat_mul(a, r.K) == mat_mul(r.K, r.Lambda.matrix())
    assert any(isinstance(v, MultiPoly) and not v.is_constant() for v in r.K.entries)


def test_diagonalize_errors():
    with pytest.raises(ValueError):
        diagonalize_triangular(M([1, 1], [0, 1]), Orientation.UPPER)
    with pytest.raises(ValueError):
        diagonalize_triangular(M([1, 0], [1, 2]), Orientation.UPPER)
    with pytest.raises(ValueError):
        diagonalize_triangular(M([x1, 0], [0, 2]), Orientation.UPPER)


def test_constant_block_examples():
    chain = factor_block_diag_constant((1, 1), Side.LOWER)
    assert chain.product() == Matrix.identity(4)
    chain = factor_block_diag_constant(Spectrum((2,)), Side.LOWER)
    assert [f.side for f in chain.factors] == [Side.LOWER, Side.UPPER, Side.LOWER, Side.UPPER]
    assert [f.G[0, 0] for f in chain.factors] == [rational(-1, 2), 1, 1, rational(-1, 2)]
    assert chain.product() == Matrix.diagonal([2, rational(1, 2)])
    chain = factor_block_diag_constant(Spectrum((2,)), Side.UPPER)
    assert chain.factors[0].side is Side.UPPER
    assert chain.product() == Matrix.diagonal([2, rational(1, 2)])


@pytest.mark.parametrize("leading", list(Side))
def test_constant_block_general_spectrum(leading):
    spectrum = Spectrum((GaussianRational(1, 1), -3, rational(2, 5)))
    chain = factor_block_diag_constant(spectrum, leading)
    assert len(chain) == 4 and chain.factors[0].side is leading
    assert chain.product() == block_diag(spectrum.matrix(), spectrum.inverse_matrix())


def test_p1p2_examples():
    lam = Spectrum.default(3)
    chain = factor_block_diag_p1p2(Matrix.identity(3), lam, Side.UPPER)
    assert chain.product() == block_diag(lam.inverse_matrix(), lam.matrix())
    a = M([1, 1], [0, 1])
    lam = Spectrum((1, 2))
    b = mat_mul(lam.inverse_matrix(), a)
    b_inv_t = transpose(invert_triangular(b, ShapeTag.UPPER_TRIANGULAR))
    for leading in Side:
        assert factor_block_diag_p1p2(a, lam, leading).product() == block_diag(b, b_inv_t)


def test_p1p2_blocks_symmetric_and_product():
    rng = random.Random(9)
    for t in range(50):
        n = 1 + t % 4
        a = random_upper_unitriangular(n, rng, POLY2 if t % 3 == 0 else Ring())
        if t % 2:
            a = transpose(a)
        lam = Spectrum.default(n)
        pp = p1p2_decomposition(a, lam)
        assert is_symmetric(pp.P1) and is_symmetric(pp.P2)
        assert mat_mul(pp.P1, pp.P2) == mat_mul(lam.inverse_matrix(), a)
        assert mat_mul(pp.P1, pp.P1_inv) == Matrix.identity(n)
        assert mat_mul(pp.P2, pp.P2_inv) == Matrix.identity(n)
        for leading in Side:
            chain = factor_block_diag_p1p2(a, lam, leading)
            assert all(is_symmetric(f.G) for f in chain.factors)


def _check_seven(e, spectrum=None):
    r = factor_elementary_7(e, spectrum)
    assert len(r.chain) == 7
    assert r.chain.factors[0].side is (Side.LOWER if e.sign is Sign.MINUS else Side.UPPER)
    assert all(is_symmetric(f.G) for f in r.chain.factors)
    target = materialize_elementary(e)
    assert r.chain.product() == target
    assert len(r.pre_merge) == 9
    pre = r.pre_merge[0].matrix()
    for f in r.pre_merge[1:]:
        pre = mat_mul(pre, f.matrix())
    assert pre == target
    return r


def test_seven_factor_examples():
    r = _check_seven(ElementarySymplectic(Sign.MINUS, Matrix.identity(2), Matrix.zeros(2, 2)))
    assert all(not f.G.is_zero() for f in r.chain.factors[1:])
    _check_seven(ElementarySymplectic(Sign.MINUS, M([1, 1], [0, 1]), Matrix.identity(2)))
    e = ElementarySymplectic(Sign.PLUS, M([1, x1], [0, 1]), M([x2, 0], [0, 0]))
    r = _check_seven(e)
    assert any(isinstance(v, MultiPoly) and not v.is_constant() for f in r.chain.factors for v in f.G.entries)


def test_seven_factor_spectrum_independent():
    rng = random.Random(1)
    spectra = [Spectrum((3, -1, GaussianRational(0, 2))), Spectrum((rational(1, 2), 5, 7))]
    for spectrum in spectra:
        for sign in Sign:
            _check_seven(random_elementary(3, sign, rng), spectrum)


def test_every_factor_symplectic():
    rng = random.Random(4)
    r = factor_elementary_7(random_elementary(3, Sign.PLUS, rng, POLY2))
    for f in r.chain.factors:
        assert is_symplectic(f.matrix(), SymplecticForm(FormKind.STANDARD, 3))


def test_search_single_factor():
    g = M([1, 2], [2, -1])
    target = StandardFactor(Side.LOWER, g).matrix()
    out = search_k_factor(target, 1, SearchStrategy.EXACT)
    assert out.status is SearchStatus.FOUND
    assert out.factors.factors == (StandardFactor(Side.LOWER, g),)
    target = StandardFactor(Side.UPPER, g).matrix()
    assert search_k_factor(target, 1, "exact").factors.factors[0].side is Side.UPPER


def test_search_single_factor_impossible():
    e = random_elementary(2, Sign.MINUS, random.Random(0))
    out = search_k_factor(materialize_elementary(e), 1, SearchStrategy.EXACT)
    assert out.status is SearchStatus.NOT_FOUND_EVIDENCE


@pytest.mark.parametrize("n", [2, 3])
def test_search_four_factors(n):
    rng = random.Random(n)
    for t in range(6):
        e = random_elementary(n, Sign.MINUS if t % 2 == 0 else Sign.PLUS, rng)
        target = materialize_elementary(e)
        out = search_k_factor(target, 4, SearchStrategy.EXACT, seed=t)
        assert out.status is SearchStatus.FOUND
        assert len(out.factors) == 4
        assert out.factors.product() == target


def test_search_three_factors_on_three_factor_product():
    rng = random.Random(8)
    g = [Matrix.from_rows([[rng.randint(1, 4), 1], [1, rng.randint(-3, 3)]]) for _ in range(3)]
    chain = FactorChain((StandardFactor(Side.UPPER, g[0]), StandardFactor(Side.LOWER, g[1]), StandardFactor(Side.UPPER, g[2])))
    out = search_k_factor(chain.product(), 3, SearchStrategy.EXACT)
    assert out.status is SearchStatus.FOUND
    assert out.factors.product() == chain.product()


def test_search_errors():
    with pytest.raises(ValueError):
        search_k_factor(M([2, 0], [0, 1]), 4, SearchStrategy.EXACT)
    with pytest.raises(UnsupportedSearch):
        search_k_factor(Matrix.identity(4), 5, SearchStrategy.EXACT)


def test_numeric_search_is_evidence_only():
    e = random_elementary(2, Sign.MINUS, random.Random(3))
    target = materialize_elementary(e)
    out = search_k_factor(target, 4, SearchStrategy.NUMERIC, restarts=6, seed=1)
    assert out.status is SearchStatus.NOT_FOUND_EVIDENCE
    assert out.factors is None
    assert out.residual_report.restarts == 6
    assert len(out.residual_report.residuals) == 6
    assert out.residual_report.min_residual < 1e-8
    again = search_k_factor(target, 4, SearchStrategy.NUMERIC, restarts=6, seed=1)
    assert again.residual_report == out.residual_report


def test_numeric_search_too_few_factors():
    e = random_elementary(2, Sign.MINUS, random.Random(3))
    out = search_k_factor(materialize_elementary(e), 2, SearchStrategy.NUMERIC, restarts=4, seed=0)
    assert out.residual_report.min_residual > 1e-3


def test_random_symplectic():
    a = random_symplectic(2, 3, 42, Ring())
    assert a == random_symplectic(2, 3, 42, Ring())
    assert is_symplectic_std(a)
    assert random_symplectic(3, 0, 1, Ring()) == Matrix.identity(6)
    p = random_symplectic(2, 2, 5, "poly:2")
    assert is_symplectic_std(p)


def test_elementary_n4_has_exact_five_factor_chain():
    # A 4-factor solution padded with a zero factor is an exact 5-factor chain,
    # so elementary targets with n = 4 are not obstructed at k = 5.
    rng = random.Random(12)
    for t in range(3):
        e = random_elementary(4, Sign.MINUS if t % 2 == 0 else Sign.PLUS, rng)
        target = materialize_elementary(e)
        out = search_k_factor(target, 4, SearchStrategy.EXACT, seed=t)
        assert out.status is SearchStatus.FOUND
        last = out.factors.factors[-1]
        padded = FactorChain(out.factors.factors + (StandardFactor(last.side.flip(), Matrix.zeros(4, 4)),))
        assert len(padded) == 5
        assert padded.product() == target
