"""Unitriangular diagonalization and factorization of elementary symplectic
matrices into standard unitriangular factors [[I, 0], [G, I]] / [[I, G], [0, I]].
"""

import random
from dataclasses import dataclass, field
from enum import Enum

from .algebra import (
    GaussianRational, Matrix, ONE, ShapeTag, ZERO, determinant, invert_triangular, is_symmetric,
    is_triangular, mat_mul, nullspace, row_echelon, solve_linear, transpose,
)
from .rings import GAUSSIAN, Ring, as_constant, is_constant_scalar, random_symmetric, random_upper_unitriangular, ring_of_matrix
from .symplectic import (
    ElementaryChain, ElementarySymplectic, FactorChain, Side, Sign, StandardFactor, is_symplectic_std,
    materialize_elementary, psi,
)


class Orientation(Enum):
    UPPER = "upper"
    LOWER = "lower"


class SearchStrategy(Enum):
    EXACT = "exact"
    NUMERIC = "numeric"


class SearchStatus(Enum):
    FOUND = "found"
    NOT_FOUND_EVIDENCE = "not-found-evidence"


class UnsupportedSearch(ValueError):
    """The requested strategy cannot handle this target size or ring."""


@dataclass(frozen=True)
class Spectrum:
    """Pairwise distinct nonzero constants lambda_1..lambda_n."""

    lambdas: tuple

    def __post_init__(self):
        lambdas = tuple(as_constant(x) for x in self.lambdas)
        object.__setattr__(self, "lambdas", lambdas)
        if any(not x for x in lambdas):
            raise ValueError("spectrum entries must be nonzero")
        if len(set(lambdas)) != len(lambdas):
            raise ValueError("spectrum entries must be pairwise distinct")

    @classmethod
    def default(cls, n):
        return cls(tuple(GaussianRational(k) for k in range(1, n + 1)))

    @property
    def n(self):
        return len(self.lambdas)

    def matrix(self):
        return Matrix.diagonal(self.lambdas)

    def inverse_matrix(self):
        return Matrix.diagonal([x.inverse() for x in self.lambdas])


@dataclass(frozen=True)
class DiagonalizationResult:
    K: Matrix
    Lambda: Spectrum


def diagonalize_triangular(a, orientation):
    """Unitriangular K (same orientation as A) with A K = K Lambda.

    Entries are filled one superdiagonal (or subdiagonal) at a time; entry
    (i, j) is a combination of entries already known, divided by
    lambda_j - lambda_i.
    """
    upper = orientation is Orientation.UPPER
    if not is_triangular(a, upper):
        raise ValueError(f"matrix is not {orientation.value} triangular")
    n = a.rows
    diag = []
    for i in range(n):
        d = a[i, i]
        if not is_constant_scalar(d):
            raise ValueError("diagonal entries must be constants")
        diag.append(as_constant(d))
    if len(set(diag)) != n:
        raise ValueError("diagonal entries must be pairwise distinct")
    ring = ring_of_matrix(a)
    k = [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)]
    for offset in range(1, n):
        for start in range(n - offset):
            if upper:
                i, j = start, start + offset
                s = ring.zero()
                for m in range(i + 1, j + 1):
                    if a[i, m] and k[m][j]:
                        s = s + a[i, m] * k[m][j]
            else:
                i, j = start + offset, start
                s = ring.zero()
                for m in range(j, i):
                    if a[i, m] and k[m][j]:
                        s = s + a[i, m] * k[m][j]
            k[i][j] = s / (diag[j] - diag[i])
    return DiagonalizationResult(Matrix.from_rows(k), Spectrum(tuple(diag)))


def _lower(g):
    return StandardFactor(Side.LOWER, g)


def _upper(g):
    return StandardFactor(Side.UPPER, g)


def _factor(side, g):
    return StandardFactor(side, g)


def factor_block_diag_constant(spectrum, leading):
    """Four standard factors whose product is diag(Lambda, Lambda^-1).

    ``spectrum`` may be a Spectrum or any sequence of nonzero constants
    (repeated values are fine here).
    """
    lambdas = spectrum.lambdas if isinstance(spectrum, Spectrum) else tuple(as_constant(x) for x in spectrum)
    if any(not x for x in lambdas):
        raise ValueError("spectrum entries must be nonzero")
    n = len(lambdas)
    lam = Matrix.diagonal(lambdas)
    lam_inv = Matrix.diagonal([x.inverse() for x in lambdas])
    ident = Matrix.identity(n)
    if leading is Side.LOWER:
        blocks = [(Side.LOWER, -lam_inv), (Side.UPPER, lam - ident), (Side.LOWER, ident), (Side.UPPER, lam_inv - ident)]
    else:
        blocks = [(Side.UPPER, lam - ident), (Side.LOWER, ident), (Side.UPPER, lam_inv - ident), (Side.LOWER, -lam)]
    return FactorChain(tuple(_factor(s, g) for s, g in blocks))


@dataclass(frozen=True)
class P1P2:
    P1: Matrix
    P2: Matrix
    P1_inv: Matrix
    P2_inv: Matrix
    K: Matrix


def p1p2_decomposition(t, spectrum):
    """Symmetric P1, P2 with P1 P2 = Lambda^-1 T, for triangular T.

    With Lambda^-1 T = K D K^-1 (K unitriangular, D its actual diagonal):
    P1 = K K^T and P2 = K^-T D K^-1.
    """
    upper = is_triangular(t, True)
    if not upper and not is_triangular(t, False):
        raise ValueError("matrix must be triangular")
    orientation = Orientation.UPPER if upper else Orientation.LOWER
    b = mat_mul(spectrum.inverse_matrix(), t)
    diag = diagonalize_triangular(b, orientation)
    k = diag.K
    tag = ShapeTag.UPPER_UNITRIANGULAR if upper else ShapeTag.LOWER_UNITRIANGULAR
    k_inv = invert_triangular(k, tag)
    k_t, k_inv_t = transpose(k), transpose(k_inv)
    d = Matrix.diagonal(diag.Lambda.lambdas)
    d_inv = Matrix.diagonal([x.inverse() for x in diag.Lambda.lambdas])
    p1 = mat_mul(k, k_t)
    p2 = mat_mul(mat_mul(k_inv_t, d), k_inv)
    p1_inv = mat_mul(k_inv_t, k_inv)
    p2_inv = mat_mul(mat_mul(k, d_inv), k_t)
    return P1P2(p1, p2, p1_inv, p2_inv, k)


def _p1p2_blocks(pp, leading):
    if leading is Side.UPPER:
        return [
            (Side.UPPER, -pp.P1),
            (Side.LOWER, pp.P1_inv - pp.P2),
            (Side.UPPER, pp.P2_inv),
            (Side.LOWER, mat_mul(mat_mul(pp.P2, pp.P1), pp.P2) - pp.P2),
        ]
    return [
        (Side.LOWER, mat_mul(mat_mul(pp.P1_inv, pp.P2_inv), pp.P1_inv) - pp.P1_inv),
        (Side.UPPER, pp.P1),
        (Side.LOWER, pp.P2 - pp.P1_inv),
        (Side.UPPER, -pp.P2_inv),
    ]


def factor_block_diag_p1p2(t, spectrum, leading):
    """Four standard factors whose product is diag(B, B^-T) with B = Lambda^-1 T."""
    pp = p1p2_decomposition(t, spectrum)
    return FactorChain(tuple(_factor(s, g) for s, g in _p1p2_blocks(pp, leading)))


@dataclass(frozen=True)
class SevenFactorResult:
    chain: FactorChain
    leading_side: Side
    pre_merge: tuple = field(default=(), compare=False)


def _merge(factors):
    out = []
    for f in factors:
        if out and out[-1].side is f.side:
            out[-1] = StandardFactor(f.side, out[-1].G + f.G)
        else:
            out.append(f)
    return out


def factor_elementary_7(e, spectrum=None):
    """Seven alternating standard factors whose product is the elementary matrix e.

    M^-(A, Z) = L(Z) diag(Lambda, Lambda^-1) diag(B, B^-T) with B = Lambda^-1 A^-T,
    and the two diagonal pieces each split into four factors; the two
    same-side neighbours at the seams are merged.  M^+ is handled the same
    way with U(Z) and B = Lambda^-1 A^-1.
    """
    n = e.n
    spectrum = spectrum or Spectrum.default(n)
    if spectrum.n != n:
        raise ValueError("spectrum size does not match the matrix")
    ring = ring_of_matrix(Matrix.block([[e.A, e.Z]]))
    a_inv = invert_triangular(e.A, ShapeTag.UPPER_UNITRIANGULAR)
    if e.sign is Sign.MINUS:
        leading = Side.LOWER
        t = transpose(a_inv)
    else:
        leading = Side.UPPER
        t = a_inv
    head = StandardFactor(leading, e.Z)
    constant = factor_block_diag_constant(spectrum, leading)
    pp = factor_block_diag_p1p2(t, spectrum, leading.flip())
    pre = (head,) + constant.factors + pp.factors
    merged = [StandardFactor(f.side, ring.coerce_matrix(f.G)) for f in _merge(pre)]
    return SevenFactorResult(FactorChain(tuple(merged)), leading, pre)


# ---------------------------------------------------------------------------
# k-factor search


@dataclass(frozen=True)
class ResidualReport:
    min_residual: float
    restarts: int
    best_leading: Side
    residuals: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class SearchOutcome:
    status: SearchStatus
    factors: FactorChain = None
    residual_report: ResidualReport = None
    note: str = ""


def _omega_conjugate(m):
    """Omega^-1 M Omega: [[X, Y], [U, V]] -> [[V, -U], [-Y, X]].

    Maps L(G) to U(-G) and U(G) to L(-G), so a chain for the conjugate with
    leading Lower gives a chain for M with leading Upper after negation.
    """
    x, y, u, v = m.blocks2()
    return Matrix.block([[v, -u], [-y, x]])


def _flip_chain(factors):
    return [StandardFactor(f.side.flip(), -f.G) for f in factors]


def sym_basis(n):
    basis = []
    for i in range(n):
        for j in range(i, n):
            rows = [[ONE if (r, c) in ((i, j), (j, i)) else ZERO for c in range(n)] for r in range(n)]
            basis.append(Matrix.from_rows(rows))
    return basis


def solve_symmetric_system(n, count, residual):
    """Solve a linear system for ``count`` symmetric n x n unknowns.

    ``residual(unknowns)`` returns a list of matrices that is affine in the
    unknowns; returns (particular solution, homogeneous basis) or None.
    Each solution is a list of ``count`` symmetric matrices.
    """
    basis = sym_basis(n)
    zero = Matrix.zeros(n, n)
    base = [zero] * count
    r0 = residual(base)
    b = [-x for m in r0 for x in m.entries]
    columns = []
    for u in range(count):
        for e in basis:
            trial = list(base)
            trial[u] = e
            r = residual(trial)
            columns.append([x - y for m, m0 in zip(r, r0) for x, y in zip(m.entries, m0.entries)])
    rows = len(b)
    coeff = Matrix(rows, len(columns), [columns[c][r] for r in range(rows) for c in range(len(columns))])
    sol = solve_linear(coeff, b)
    if sol is None:
        return None

    def assemble(vec):
        out = []
        m = len(basis)
        for u in range(count):
            acc = zero
            for idx, e in enumerate(basis):
                c = vec[u * m + idx]
                if c:
                    acc = acc + e.scale(c)
            out.append(acc)
        return out

    return assemble(sol), [assemble(v) for v in nullspace(coeff)]


def _invertible_combination(basis, rng, tries=64):
    """A deterministic-pseudorandom invertible element of a span, if found."""
    if not basis:
        return None
    for _ in range(tries):
        acc = None
        for m in basis:
            c = GaussianRational(rng.randint(-5, 5))
            term = m.scale(c)
            acc = term if acc is None else acc + term
        if determinant(acc):
            return acc
    return None


def _solve_lower_leading(t, k, rng):
    """Exact factors L(G1) U(G2) ... (k of them) equal to constant T, or None."""
    n = t.rows // 2
    t11, t12, t21, t22 = t.blocks2()
    ident = Matrix.identity(n)
    if k == 1:
        if t11 == ident and t22 == ident and t12.is_zero() and is_symmetric(t21):
            return [_lower(t21)]
        return None
    if k == 2:
        if t11 == ident and is_symmetric(t12) and is_symmetric(t21):
            return [_lower(t21), _upper(t12)]
        return None
    if k == 3:
        if not is_symmetric(t12):
            return None
        g2 = t12
        # L(G1) U(G2) L(G3) = [[I + G2 G3, G2], [G1 (I + G2 G3) + G3, G1 G2 + I]]
        solved = solve_symmetric_system(n, 2, lambda u: [
            mat_mul(g2, u[1]) - (t11 - ident),
            mat_mul(u[0], t11) + u[1] - t21,
        ])
        if solved is None:
            return None
        g1, g3 = solved[0]
        return [_lower(g1), _upper(g2), _lower(g3)]
    if k == 4:
        # L(G1) U(G2) L(G3) U(G4) has top-left block I + G2 G3 and top-right
        # (I + G2 G3) G4 + G2.  With T11 invertible, any invertible symmetric
        # G2 with T11 G2 = G2 T11^T makes G3 = G2^-1 (T11 - I),
        # G4 = T11^-1 (T12 - G2) and G1 = (T21 - G3) T11^-1 symmetric.
        if not determinant(t11):
            return None
        solved = solve_symmetric_system(n, 1, lambda u: [mat_mul(t11, u[0]) - mat_mul(u[0], transpose(t11))])
        if solved is None:
            return None
        g2 = _invertible_combination([h[0] for h in solved[1]], rng)
        if g2 is None:
            return None
        g2_inv = _inverse(g2)
        t11_inv = _inverse(t11)
        g3 = mat_mul(g2_inv, t11 - ident)
        g4 = mat_mul(t11_inv, t12 - g2)
        g1 = mat_mul(t21 - g3, t11_inv)
        if not (is_symmetric(g1) and is_symmetric(g3) and is_symmetric(g4)):
            return None
        return [_lower(g1), _upper(g2), _lower(g3), _upper(g4)]
    raise UnsupportedSearch(f"exact elimination handles k <= 4, not k = {k}")


def _inverse(m):
    n = m.rows
    aug = Matrix.block([[m, Matrix.identity(n)]])
    rows, pivots = row_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return Matrix.from_rows([r[n:] for r in rows[:n]])


def search_k_factor(target, k, strategy, *, restarts=200, seed=0, max_iter=None):
    """Look for k alternating standard factors whose product is ``target``.

    EXACT returns FOUND with a verified chain or NOT_FOUND_EVIDENCE when the
    elimination hits a degenerate branch.  NUMERIC only ever reports
    evidence: the smallest max-norm residual over the random restarts.
    """
    if not isinstance(strategy, SearchStrategy):
        strategy = SearchStrategy(strategy)
    if k < 1:
        raise ValueError("k must be at least 1")
    if target.rows != target.cols or target.rows % 2:
        raise ValueError("target must be an even square matrix")
    if not is_symplectic_std(target):
        raise ValueError("target is not symplectic for the standard form")
    if strategy is SearchStrategy.NUMERIC:
        from .numeric_search import numeric_multistart
        return numeric_multistart(target, k, restarts=restarts, seed=seed, max_iter=max_iter)
    if k > 4:
        raise UnsupportedSearch(f"exact elimination handles k <= 4, not k = {k}")
    if not all(is_constant_scalar(x) for x in target.entries):
        if k > 2:
            raise UnsupportedSearch("exact elimination for k >= 3 needs constant entries")
    else:
        target = target.map(as_constant)
    rng = random.Random(seed)
    for leading in (Side.LOWER, Side.UPPER):
        t = target if leading is Side.LOWER else _omega_conjugate(target)
        try:
            found = _solve_lower_leading(t, k, rng)
        except ZeroDivisionError:
            found = None
        if found is None:
            continue
        if leading is Side.UPPER:
            found = _flip_chain(found)
        chain = FactorChain(tuple(found))
        if chain.product() == target:
            return SearchOutcome(SearchStatus.FOUND, chain)
    return SearchOutcome(SearchStatus.NOT_FOUND_EVIDENCE, note="elimination reached a degenerate branch")


# ---------------------------------------------------------------------------
# random test matrices


def random_elementary(n, sign, rng, ring=GAUSSIAN, bound=3):
    return ElementarySymplectic(sign, random_upper_unitriangular(n, rng, ring, bound), random_symmetric(n, rng, ring, bound))


def random_chain(n, K, rng, ring=GAUSSIAN, bound=3):
    factors = [random_elementary(n, Sign.MINUS if k % 2 == 0 else Sign.PLUS, rng, ring, bound) for k in range(K)]
    return ElementaryChain(tuple(factors), n)


def random_symplectic(n, K, seed, ring=GAUSSIAN):
    """psi of a random alternating chain of K elementary matrices (I when K = 0)."""
    if isinstance(ring, str):
        ring = Ring.parse(ring)
    rng = random.Random(seed)
    m = psi(random_chain(n, K, rng, ring))
    return ring.coerce_matrix(m)


def elementary_matrix(e):
    return materialize_elementary(e)
