"""Symplectic forms, elementary and standard unitriangular factors, and the
alternating products Psi_K and their last rows Phi_K.

Conventions: Omega = [[0, I], [-I, 0]] and the skew form
Omega~ = [[0, L], [-L, 0]] with L the n x n skew-identity.  The basis change
C = diag(I, L) satisfies C^T Omega C = Omega~ and C^-1 = C.
"""

from dataclasses import dataclass, field
from enum import Enum

from .algebra import (
    Matrix, ONE, ZERO, ShapeTag, invert_triangular, is_symmetric, is_unitriangular, mat_mul, transpose, vec_mat,
)
from .algebra.poly import MultiPoly


class FormKind(Enum):
    STANDARD = "std"
    SKEW_DIAG = "skew"


class Sign(Enum):
    MINUS = "minus"
    PLUS = "plus"

    def flip(self):
        return Sign.PLUS if self is Sign.MINUS else Sign.MINUS


class Side(Enum):
    LOWER = "lower"
    UPPER = "upper"

    def flip(self):
        return Side.UPPER if self is Side.LOWER else Side.LOWER


@dataclass(frozen=True)
class SymplecticForm:
    kind: FormKind
    n: int


def skew_identity(n):
    return Matrix._raw(n, n, tuple(ONE if i + j == n - 1 else ZERO for i in range(n) for j in range(n)))


def omega_matrix(form):
    n = form.n
    if n < 1:
        raise ValueError("n must be at least 1")
    inner = Matrix.identity(n) if form.kind is FormKind.STANDARD else skew_identity(n)
    zero = Matrix.zeros(n, n)
    return Matrix.block([[zero, inner], [-inner, zero]])


def is_symplectic(h, form):
    """True iff H^T Omega H = Omega exactly for the given form."""
    if h.rows != h.cols:
        raise ValueError("symplectic test needs a square matrix")
    if h.rows % 2:
        raise ValueError("symplectic test needs an even dimension")
    if form.n * 2 != h.rows:
        raise ValueError(f"form has n={form.n} but matrix is {h.rows}x{h.cols}")
    omega = omega_matrix(form)
    return mat_mul(mat_mul(transpose(h), omega), h) == omega


def is_symplectic_std(h):
    return is_symplectic(h, SymplecticForm(FormKind.STANDARD, h.rows // 2))


def _zero_block(n, like):
    for x in like.entries:
        if isinstance(x, MultiPoly):
            return Matrix.zeros(n, n, MultiPoly({}, x.nvars))
    return Matrix.zeros(n, n)


def _identity_block(n, like):
    for x in like.entries:
        if isinstance(x, MultiPoly):
            return Matrix.identity(n, MultiPoly.constant(1, x.nvars), MultiPoly({}, x.nvars))
    return Matrix.identity(n)


@dataclass(frozen=True)
class ElementarySymplectic:
    """M^-(A, Z) = [[A^-T, 0], [Z A^-T, A]] or M^+(A, Z) = [[A^-1, Z A^T], [0, A^T]]."""

    sign: Sign
    A: Matrix
    Z: Matrix

    def __post_init__(self):
        n = self.A.rows
        if self.A.shape != (n, n) or self.Z.shape != (n, n):
            raise ValueError("A and Z must be square of the same size")
        if not is_unitriangular(self.A, True):
            raise ValueError("A must be upper unitriangular")
        if not is_symmetric(self.Z):
            raise ValueError("Z must be symmetric")

    @property
    def n(self):
        return self.A.rows


def materialize_elementary(e):
    n = e.n
    a_inv = invert_triangular(e.A, ShapeTag.UPPER_UNITRIANGULAR)
    zero = _zero_block(n, e.A if any(isinstance(x, MultiPoly) for x in e.A.entries) else e.Z)
    if e.sign is Sign.MINUS:
        a_inv_t = transpose(a_inv)
        return Matrix.block([[a_inv_t, zero], [mat_mul(e.Z, a_inv_t), e.A]])
    a_t = transpose(e.A)
    return Matrix.block([[a_inv, mat_mul(e.Z, a_t)], [zero, a_t]])


@dataclass(frozen=True)
class StandardFactor:
    """[[I, 0], [G, I]] (Lower) or [[I, G], [0, I]] (Upper) with G symmetric."""

    side: Side
    G: Matrix

    def __post_init__(self):
        if not is_symmetric(self.G):
            raise ValueError("G must be symmetric")

    @property
    def n(self):
        return self.G.rows

    def matrix(self):
        n = self.n
        ident = _identity_block(n, self.G)
        zero = _zero_block(n, self.G)
        if self.side is Side.LOWER:
            return Matrix.block([[ident, zero], [self.G, ident]])
        return Matrix.block([[ident, self.G], [zero, ident]])


@dataclass(frozen=True)
class FactorChain:
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for a, b in zip(self.factors, self.factors[1:]):
            if a.side is b.side:
                raise ValueError("factor sides must alternate")
        if len({f.n for f in self.factors}) > 1:
            raise ValueError("factors have different sizes")

    def __len__(self):
        return len(self.factors)

    @property
    def n(self):
        return self.factors[0].n

    def product(self):
        if not self.factors:
            raise ValueError("empty factor chain has no size")
        result = self.factors[0].matrix()
        for f in self.factors[1:]:
            result = apply_standard_factor(result, f)
        return result


def apply_standard_factor(m, f):
    """m times the standard factor f, using block updates instead of a full product."""
    x, y, u, v = m.blocks2()
    if f.side is Side.LOWER:
        # [[X, Y], [U, V]] [[I, 0], [G, I]] = [[X + Y G, Y], [U + V G, V]]
        return Matrix.block([[x + mat_mul(y, f.G), y], [u + mat_mul(v, f.G), v]])
    return Matrix.block([[x, mat_mul(x, f.G) + y], [u, mat_mul(u, f.G) + v]])


@dataclass(frozen=True)
class ElementaryChain:
    """Alternating factors M^-(A_1, Z_1) M^+(A_2, Z_2) ..., starting with Minus."""

    factors: tuple
    n: int = field(default=0)

    def __post_init__(self):
        factors = tuple(self.factors)
        object.__setattr__(self, "factors", factors)
        if factors:
            n = factors[0].n
            if self.n and self.n != n:
                raise ValueError("declared n does not match the factors")
            object.__setattr__(self, "n", n)
        elif self.n < 1:
            raise ValueError("an empty chain needs an explicit n")
        for k, e in enumerate(factors):
            expected = Sign.MINUS if k % 2 == 0 else Sign.PLUS
            if e.sign is not expected:
                raise ValueError(f"factor {k + 1} must be {expected.value}")
            if e.n != self.n:
                raise ValueError("factors have different sizes")

    @property
    def K(self):
        return len(self.factors)


def psi(chain):
    """The ordered product of the chain's elementary matrices (I for K = 0)."""
    result = None
    for e in chain.factors:
        m = materialize_elementary(e)
        result = m if result is None else mat_mul(result, m)
    if result is None:
        return Matrix.identity(2 * chain.n)
    return result


@dataclass(frozen=True)
class LastRowState:
    Pf: tuple
    Ps: tuple

    @property
    def vector(self):
        return self.Pf + self.Ps


def _solve_upper_transpose(y, a):
    """x with x A^T = y, i.e. x = y A^-T, for A upper unitriangular."""
    n = len(y)
    x = list(y)
    for i in range(n - 1, -1, -1):
        s = x[i]
        for k in range(i + 1, n):
            aik = a.entries[i * n + k]
            if aik and x[k]:
                s = s - aik * x[k]
        x[i] = s
    return tuple(x)


def _solve_upper(y, a):
    """x with x A = y, i.e. x = y A^-1, for A upper unitriangular."""
    n = len(y)
    x = list(y)
    for j in range(n):
        s = x[j]
        for k in range(j):
            akj = a.entries[k * n + j]
            if akj and x[k]:
                s = s - x[k] * akj
        x[j] = s
    return tuple(x)


def _vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def step_minus(state, A, Z):
    """P M^-(A, Z) = ((P_f + P_s Z) A^-T, P_s A)."""
    pf = _vadd(state.Pf, vec_mat(state.Ps, Z))
    return LastRowState(_solve_upper_transpose(pf, A), vec_mat(state.Ps, A))


def step_plus(state, A, Z):
    """P M^+(A, Z) = (P_f A^-1, (P_f Z + P_s) A^T)."""
    ps = _vadd(vec_mat(state.Pf, Z), state.Ps)
    return LastRowState(_solve_upper(state.Pf, A), vec_mat(ps, transpose(A)))


def initial_state(n, zero=ZERO, one=ONE):
    return LastRowState((zero,) * n, (zero,) * (n - 1) + (one,))


def phi_states(chain):
    """All intermediate last rows P^0, P^1, ..., P^K."""
    state = initial_state(chain.n)
    states = [state]
    for e in chain.factors:
        state = (step_minus if e.sign is Sign.MINUS else step_plus)(state, e.A, e.Z)
        states.append(state)
    return states


def phi(chain):
    """Last row of psi(chain), computed without forming the product."""
    return phi_states(chain)[-1]


def basis_change_matrix(n):
    return Matrix.block([[Matrix.identity(n), Matrix.zeros(n, n)], [Matrix.zeros(n, n), skew_identity(n)]])


def skew_basis_conjugate(m):
    """C^-1 M C with C = diag(I, L); maps Omega-symplectic to Omega~-symplectic."""
    if m.rows != m.cols or m.rows % 2:
        raise ValueError("expected an even square matrix")
    n = m.rows // 2
    # Conjugating by a permutation-like C just reorders the last n rows and columns.
    perm = list(range(n)) + [2 * n - 1 - k for k in range(n)]
    size = 2 * n
    return Matrix._raw(size, size, tuple(m.entries[perm[i] * size + perm[j]] for i in range(size) for j in range(size)))
