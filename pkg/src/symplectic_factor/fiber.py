"""Geometry of the last-row map Phi_K: singular set, exact Jacobian rank,
strata of the target space, reduction of a fiber to one multilinear
equation, and the shear vector fields tangent to that hypersurface.
"""

import random
import re
from dataclasses import dataclass, field
from enum import Enum

from .algebra import (
    Dual, GaussianRational, Matrix, MultiPoly, ONE, ShapeTag, ZERO, exact_rank, invert_triangular, mat_mul,
    print_scalar, random_gaussian, transpose, vec_mat,
)
from .rings import as_constant
from .symplectic import ElementaryChain, ElementarySymplectic, Sign, phi, initial_state, step_minus, step_plus


# ---------------------------------------------------------------------------
# singular set and Jacobian


def in_singular_set(chain):
    """Z_i e_n = 0 for i < K and A_j e_n = e_n for 1 < j < K (levels 1-based)."""
    K = chain.K
    if K < 2:
        raise ValueError("the singular set is defined for K >= 2")
    n = chain.n
    for level, e in enumerate(chain.factors, start=1):
        if level < K and any(e.Z[r, n - 1] for r in range(n)):
            return False
        if 1 < level < K and any(e.A[r, n - 1] for r in range(n - 1)):
            return False
    return True


def chain_coordinates(n, K):
    """Coordinate order for the Jacobian: per level, a_ij (i<j) then z_ij (i<=j), 1-based."""
    coords = []
    for level in range(1, K + 1):
        coords.extend(("a", level, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))
        coords.extend(("z", level, i, j) for i in range(1, n + 1) for j in range(i, n + 1))
    return coords


def _perturbed_chain(chain, coord):
    kind, level, i, j = coord
    factors = []
    for lv, e in enumerate(chain.factors, start=1):
        a_rows = [[Dual(x) for x in e.A.row(r)] for r in range(e.n)]
        z_rows = [[Dual(x) for x in e.Z.row(r)] for r in range(e.n)]
        if lv == level:
            if kind == "a":
                a_rows[i - 1][j - 1] = Dual(e.A[i - 1, j - 1], ONE)
            else:
                z_rows[i - 1][j - 1] = Dual(e.Z[i - 1, j - 1], ONE)
                z_rows[j - 1][i - 1] = Dual(e.Z[j - 1, i - 1], ONE)
        factors.append(ElementarySymplectic(e.sign, Matrix.from_rows(a_rows), Matrix.from_rows(z_rows)))
    return ElementaryChain(tuple(factors), chain.n)


def jacobian_phi(chain):
    """Exact 2n x (K n^2) Jacobian of phi, one dual-number pass per coordinate."""
    for e in chain.factors:
        for x in e.A.entries + e.Z.entries:
            if isinstance(x, MultiPoly) and not x.is_constant():
                raise TypeError("evaluate polynomial entries at a point before taking the Jacobian")
    chain = _constant_chain(chain)
    coords = chain_coordinates(chain.n, chain.K)
    columns = []
    for coord in coords:
        out = phi(_perturbed_chain(chain, coord)).vector
        columns.append([x.eps if isinstance(x, Dual) else ZERO for x in out])
    rows = 2 * chain.n
    return Matrix(rows, len(coords), [_const(columns[c][r]) for r in range(rows) for c in range(len(coords))])


def _const(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, MultiPoly):
        return x.constant_value()
    return GaussianRational(x)


def _constant_chain(chain):
    factors = [ElementarySymplectic(e.sign, e.A.map(_const), e.Z.map(_const)) for e in chain.factors]
    return ElementaryChain(tuple(factors), chain.n)


# ---------------------------------------------------------------------------
# strata


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def of(cls, K):
        return cls.EVEN if K % 2 == 0 else cls.ODD


class Family(Enum):
    G = "G"        # K even: first nonzero a_i
    N = "N"        # K even: a = 0, last nonzero b at n - i
    G_ODD = "G~"   # K odd: first nonzero b_i
    N_ODD = "N~"   # K odd: b = 0, last nonzero a at n - i


@dataclass(frozen=True)
class StratumLabel:
    family: Family
    index: int

    def __str__(self):
        return f"{self.family.value}{self.index}"


def classify_stratum(v, parity):
    """Stratum of a nonzero target vector (a | b) of length 2n."""
    v = [as_constant(x) for x in v]
    if len(v) % 2 or not v:
        raise ValueError("target must have even length")
    n = len(v) // 2
    a, b = v[:n], v[n:]
    if not any(v):
        raise ValueError("the zero vector lies in no stratum")
    if parity is Parity.EVEN:
        first, second, fam_g, fam_n = a, b, Family.G, Family.N
    else:
        first, second, fam_g, fam_n = b, a, Family.G_ODD, Family.N_ODD
    for i in range(n):
        if first[i]:
            return StratumLabel(fam_g, i + 1)
    last = max(i for i in range(n) if second[i]) + 1
    return StratumLabel(fam_n, n - last)


def all_strata(n, parity):
    if parity is Parity.EVEN:
        return [StratumLabel(Family.G, i) for i in range(1, n + 1)] + [StratumLabel(Family.N, i) for i in range(n)]
    return [StratumLabel(Family.G_ODD, i) for i in range(1, n + 1)] + [StratumLabel(Family.N_ODD, i) for i in range(n)]


def stratum_representative(n, label):
    """A simple target vector in the given stratum (a unit vector)."""
    v = [ZERO] * (2 * n)
    fam, i = label.family, label.index
    if fam is Family.G:
        v[i - 1] = ONE
    elif fam is Family.N:
        v[n + (n - i) - 1] = ONE
    elif fam is Family.G_ODD:
        v[n + i - 1] = ONE
    else:
        v[(n - i) - 1] = ONE
    return tuple(v)


def stratum_coverage(n, K, samples, seed, bound=1):
    """Count how often phi of a random chain (entries of size <= bound) lands in each stratum."""
    from .factorization import random_chain

    rng = random.Random(seed)
    parity = Parity.of(K)
    counts = {str(lab): 0 for lab in all_strata(n, parity)}
    for _ in range(samples):
        chain = random_chain(n, K, rng, bound=bound)
        counts[str(classify_stratum(phi(chain).vector, parity))] += 1
    return counts


# ---------------------------------------------------------------------------
# symbolic coordinates


@dataclass(frozen=True)
class VarId:
    """A chain coordinate: kind in {"a", "z", "d", "zt"}, level and 1-based (i, j).

    "d" are entries of A^-1 at that level; "zt" are entries of the
    congruence-transformed Z (A^-1 Z A^-T at a Minus level, A Z A^T at a
    Plus level).
    """

    kind: str
    level: int
    i: int
    j: int

    def __str__(self):
        return f"{self.kind}{self.i}{self.j}_{self.level}" if max(self.i, self.j) < 10 else \
            f"{self.kind}{self.i},{self.j}_{self.level}"


class _Coordinates:
    def __init__(self, n, K, modes):
        self.n = n
        self.K = K
        self.modes = modes  # level -> (a_kind, z_kind)
        self.vars = []
        for level in range(1, K + 1):
            a_kind, z_kind = modes.get(level, ("a", "z"))
            self.vars.extend(VarId(a_kind, level, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))
            self.vars.extend(VarId(z_kind, level, i, j) for i in range(1, n + 1) for j in range(i, n + 1))
        self.index = {v: k for k, v in enumerate(self.vars)}
        self.nvars = len(self.vars)

    def sym(self, kind, level, i, j):
        if kind in ("z", "zt") and i > j:
            i, j = j, i
        return MultiPoly.variable(self.index[VarId(kind, level, i, j)], self.nvars)

    def level_matrices(self, level, sign, value=None):
        """(A, Z) of a level as matrices of polynomials, or of values if ``value`` is given."""
        n = self.n
        a_kind, z_kind = self.modes.get(level, ("a", "z"))
        if value is None:
            one = MultiPoly.constant(1, self.nvars)
            zero = MultiPoly({}, self.nvars)
            get = self.sym
        else:
            one, zero = ONE, ZERO

            def get(kind, lv, i, j):
                if kind in ("z", "zt") and i > j:
                    i, j = j, i
                return value[self.index[VarId(kind, lv, i, j)]]

        x = Matrix.from_rows([[one if i == j else (get(a_kind, level, i + 1, j + 1) if j > i else zero)
                               for j in range(n)] for i in range(n)])
        y = Matrix.from_rows([[get(z_kind, level, i + 1, j + 1) for j in range(n)] for i in range(n)])
        a = x if a_kind == "a" else invert_triangular(x, ShapeTag.UPPER_UNITRIANGULAR)
        if z_kind == "z":
            z = y
        elif sign is Sign.MINUS:
            z = mat_mul(mat_mul(a, y), transpose(a))
        else:
            a_inv = x if a_kind == "d" else invert_triangular(a, ShapeTag.UPPER_UNITRIANGULAR)
            z = mat_mul(mat_mul(a_inv, y), transpose(a_inv))
        return a, z

    def chain_from_values(self, value):
        factors = []
        for level in range(1, self.K + 1):
            sign = Sign.MINUS if level % 2 == 1 else Sign.PLUS
            a, z = self.level_matrices(level, sign, value)
            factors.append(ElementarySymplectic(sign, a, z))
        return ElementaryChain(tuple(factors), self.n)


def _sign(level):
    return Sign.MINUS if level % 2 == 1 else Sign.PLUS


# ---------------------------------------------------------------------------
# elimination plans


@dataclass(frozen=True)
class Substitution:
    var: VarId
    index: int
    expr: MultiPoly


@dataclass(frozen=True)
class EliminationPlan:
    """Eliminations reducing the fiber phi = target to one equation residual = rhs.

    ``substitutions`` give each eliminated coordinate as a polynomial in the
    free coordinates.  ``identities`` are the 2n - 1 equations (in all
    coordinates) that the substitutions solve; together with
    ``pivot_poly = rhs`` they cut out exactly the fiber.  ``residual`` is
    ``pivot_poly`` after substitution.
    """

    n: int
    K: int
    target: tuple
    stratum: StratumLabel
    variables: tuple
    modes: dict = field(compare=False)
    substitutions: tuple = ()
    identities: tuple = ()
    pivot_coordinate: int = 0
    pivot_poly: MultiPoly = None
    residual: MultiPoly = None
    rhs: GaussianRational = None

    @property
    def free(self):
        eliminated = {s.index for s in self.substitutions}
        return tuple(k for k in range(len(self.variables)) if k not in eliminated)

    def coordinates(self):
        return _Coordinates(self.n, self.K, self.modes)

    def describe(self):
        lines = [f"stratum {self.stratum}", f"eliminated {len(self.substitutions)} of {len(self.variables)} coordinates"]
        names = [str(v) for v in self.variables]
        for s in self.substitutions:
            lines.append(f"  {s.var} := {_rename(s.expr, names)}")
        lines.append(f"residual: {_rename(self.residual, names)} = {self.rhs}")
        return "\n".join(lines)


def _rename(p, names):
    """Print a polynomial with coordinate names instead of x1, x2, ..."""
    text = print_scalar(p)
    return re.sub(r"x(\d+)", lambda m: names[int(m.group(1)) - 1], text)


class ReductionError(ValueError):
    pass


def _solve_for(eq, var_index):
    """Solve eq = 0 for a variable that occurs linearly with a constant coefficient."""
    coeff, rest = eq.coefficient_split(var_index)
    if not coeff.is_constant() or not coeff:
        raise ReductionError("elimination coefficient is not a nonzero constant")
    return -rest / coeff.constant_value()


def _vec_poly(v, nvars):
    return tuple(MultiPoly.constant(x, nvars) if not isinstance(x, MultiPoly) else x for x in v)


def reduce_fiber(target, K, n):
    """Build the elimination plan for the fiber of Phi_K over ``target``."""
    target = tuple(as_constant(x) for x in target)
    if len(target) != 2 * n:
        raise ValueError("target length must be 2n")
    if not any(target):
        raise ValueError("target must be nonzero")
    if n < 2 or K < 3:
        raise ValueError("reduction needs n >= 2 and K >= 3")
    parity = Parity.of(K)
    label = classify_stratum(target, parity)
    builder = {
        Family.G: _plan_even_g,
        Family.N: _plan_even_n,
        Family.G_ODD: _plan_odd_g,
        Family.N_ODD: _plan_odd_n,
    }[label.family]
    return builder(target, K, n, label)


def _prefix_state(coords, upto):
    """Symbolic last row after levels 1..upto."""
    nv = coords.nvars
    state = initial_state(coords.n, MultiPoly({}, nv), MultiPoly.constant(1, nv))
    for level in range(1, upto + 1):
        sign = _sign(level)
        a, z = coords.level_matrices(level, sign)
        state = (step_minus if sign is Sign.MINUS else step_plus)(state, a, z)
    return state


def _finish(coords, target, K, n, label, steps, solve_order, pivot_coordinate, pivot_poly, rhs, listing_order):
    """Solve the rewritten equations in ``solve_order`` and package the plan."""
    subs = {}
    for key in solve_order:
        eq, var = steps[key]
        idx = coords.index[var]
        eq = eq.substitute(subs) if subs else eq
        subs[idx] = _solve_for(eq, idx)
    # Each expression must depend on free coordinates only.
    for idx, expr in subs.items():
        bad = [k for k in expr.variables() if k in subs]
        if bad:
            raise ReductionError(f"expression for {coords.vars[idx]} still references eliminated coordinates")
    substitutions = tuple(Substitution(steps[key][1], coords.index[steps[key][1]], subs[coords.index[steps[key][1]]])
                          for key in listing_order)
    identities = tuple((str(key), steps[key][0]) for key in listing_order)
    residual = pivot_poly.substitute(subs)
    return EliminationPlan(
        n=n, K=K, target=target, stratum=label, variables=tuple(coords.vars), modes=dict(coords.modes),
        substitutions=substitutions, identities=identities, pivot_coordinate=pivot_coordinate,
        pivot_poly=pivot_poly, residual=residual, rhs=rhs,
    )


def _plan_even_g(target, K, n, label):
    # Level K is Plus, level K-1 is Minus.  With w = a A_K the fiber is
    # w_j = P^{K-1}_j (j > i), (w A_{K-1}^T)_j = beta_j (j < i),
    # b A_K^-T = P^{K-1}_s + w Z_K, and the pivot a_i = P^{K-1}_i.
    i = label.index
    coords = _Coordinates(n, K, {})
    nv = coords.nvars
    a_t, b_t = target[:n], target[n:]
    p2 = _prefix_state(coords, K - 2)
    a_km1, z_km1 = coords.level_matrices(K - 1, Sign.MINUS)
    a_k, z_k = coords.level_matrices(K, Sign.PLUS)
    p1 = step_minus(p2, a_km1, z_km1)
    w = vec_mat(_vec_poly(a_t, nv), a_k)
    beta = tuple(x + y for x, y in zip(p2.Pf, vec_mat(p2.Ps, z_km1)))
    w_at = vec_mat(w, transpose(a_km1))
    b_ainv_t = vec_mat(_vec_poly(b_t, nv), transpose(invert_triangular(a_k, ShapeTag.UPPER_UNITRIANGULAR)))
    w_z = vec_mat(w, z_k)
    steps = {}
    for j in range(i + 1, n + 1):
        steps[("step1", j)] = (w[j - 1] - p1.Pf[j - 1], VarId("a", K, i, j))
    for j in range(1, n + 1):
        var = VarId("z", K, min(i, j), max(i, j))
        steps[("step2", j)] = (b_ainv_t[j - 1] - p1.Ps[j - 1] - w_z[j - 1], var)
    for j in range(1, i):
        steps[("step3", j)] = (w_at[j - 1] - beta[j - 1], VarId("a", K - 1, j, i))
    step1 = [("step1", j) for j in range(n, i, -1)]
    step2 = [("step2", j) for j in range(1, n + 1) if j != i] + [("step2", i)]
    step3 = [("step3", j) for j in range(1, i)]
    return _finish(coords, target, K, n, label, steps, step1 + step3 + step2,
                   i, p1.Pf[i - 1], a_t[i - 1], step1 + step2 + step3)


def _plan_even_n(target, K, n, label):
    # a = 0 and b_q is the last nonzero entry of b (q = n - i).  Level K-1 uses
    # D = A_{K-1}^-1 and Zt = D Z D^T.  With u = (P^{K-1}_{n+1..n+q-1}, b_q, 0..0):
    # (u A_K^T)_j = b_j (j < q), (u D)_j = P^{K-2}_{n+j} (j > q),
    # P^{K-2}_f D^T + u Zt = 0, and the pivot P^{K-1}_{n+q} = b_q.
    q = n - label.index
    coords = _Coordinates(n, K, {K - 1: ("d", "zt")})
    nv = coords.nvars
    b_t = target[n:]
    p2 = _prefix_state(coords, K - 2)
    a_km1, z_km1 = coords.level_matrices(K - 1, Sign.MINUS)
    a_k, _ = coords.level_matrices(K, Sign.PLUS)
    p1 = step_minus(p2, a_km1, z_km1)
    zero = MultiPoly({}, nv)
    u = tuple(p1.Ps[k] if k < q - 1 else (MultiPoly.constant(b_t[q - 1], nv) if k == q - 1 else zero) for k in range(n))
    d = _raw_level(coords, K - 1, "d")
    zt = _raw_level(coords, K - 1, "zt")
    u_ak_t = vec_mat(u, transpose(a_k))
    u_d = vec_mat(u, d)
    f_eq = tuple(x + y for x, y in zip(vec_mat(p2.Pf, transpose(d)), vec_mat(u, zt)))
    steps = {}
    for j in range(1, q):
        steps[("aK", j)] = (u_ak_t[j - 1] - b_t[j - 1], VarId("a", K, j, q))
    for j in range(q + 1, n + 1):
        steps[("d", j)] = (u_d[j - 1] - p2.Ps[j - 1], VarId("d", K - 1, q, j))
    for j in range(1, n + 1):
        steps[("zt", j)] = (f_eq[j - 1], VarId("zt", K - 1, min(q, j), max(q, j)))
    s1 = [("aK", j) for j in range(q - 1, 0, -1)]
    s2 = [("d", j) for j in range(q + 1, n + 1)]
    s3 = [("zt", j) for j in range(1, n + 1) if j != q] + [("zt", q)]
    return _finish(coords, target, K, n, label, steps, s1 + s2 + s3,
                   n + q, p1.Ps[q - 1], b_t[q - 1], s1 + s2 + s3)


def _plan_odd_g(target, K, n, label):
    # Level K is Minus, level K-1 is Plus with E = A_{K-1}^-1.  b_i is the first
    # nonzero entry of b.  With u = (0..0, b_i, P^{K-1}_{n+i+1..2n}) and
    # gamma = P^{K-2}_f Z_{K-1} + P^{K-2}_s: (u A_K)_j = b_j (j > i),
    # (u E^T)_j = gamma_j (j < i), a A_K^T = P^{K-1}_f + u Z_K, pivot P^{K-1}_{n+i} = b_i.
    i = label.index
    coords = _Coordinates(n, K, {K - 1: ("d", "z")})
    nv = coords.nvars
    a_t, b_t = target[:n], target[n:]
    p2 = _prefix_state(coords, K - 2)
    a_km1, z_km1 = coords.level_matrices(K - 1, Sign.PLUS)
    a_k, z_k = coords.level_matrices(K, Sign.MINUS)
    p1 = step_plus(p2, a_km1, z_km1)
    zero = MultiPoly({}, nv)
    u = tuple(zero if k < i - 1 else (MultiPoly.constant(b_t[i - 1], nv) if k == i - 1 else p1.Ps[k]) for k in range(n))
    e = _raw_level(coords, K - 1, "d")
    gamma = tuple(x + y for x, y in zip(vec_mat(p2.Pf, z_km1), p2.Ps))
    u_ak = vec_mat(u, a_k)
    u_et = vec_mat(u, transpose(e))
    a_ak_t = vec_mat(_vec_poly(a_t, nv), transpose(a_k))
    u_z = vec_mat(u, z_k)
    steps = {}
    for j in range(i + 1, n + 1):
        steps[("aK", j)] = (u_ak[j - 1] - b_t[j - 1], VarId("a", K, i, j))
    for j in range(1, i):
        steps[("e", j)] = (u_et[j - 1] - gamma[j - 1], VarId("d", K - 1, j, i))
    for j in range(1, n + 1):
        steps[("zK", j)] = (a_ak_t[j - 1] - p1.Pf[j - 1] - u_z[j - 1], VarId("z", K, min(i, j), max(i, j)))
    s1 = [("aK", j) for j in range(n, i, -1)]
    s2 = [("zK", j) for j in range(1, n + 1) if j != i] + [("zK", i)]
    s3 = [("e", j) for j in range(1, i)]
    return _finish(coords, target, K, n, label, steps, s1 + s3 + s2,
                   n + i, p1.Ps[i - 1], b_t[i - 1], s1 + s2 + s3)


def _plan_odd_n(target, K, n, label):
    # b = 0 and a_q is the last nonzero entry of a (q = n - i).  Level K-1 is
    # Plus with Zt = A Z A^T.  With v = (P^{K-1}_{1..q-1}, a_q, 0..0):
    # (a A_K^T)_j = P^{K-1}_j (j < q), (v A_{K-1})_j = P^{K-2}_j (j > q),
    # P^{K-2}_s A_{K-1}^T + v Zt = 0, pivot P^{K-1}_q = a_q.
    q = n - label.index
    coords = _Coordinates(n, K, {K - 1: ("a", "zt")})
    nv = coords.nvars
    a_t = target[:n]
    p2 = _prefix_state(coords, K - 2)
    a_km1, z_km1 = coords.level_matrices(K - 1, Sign.PLUS)
    a_k, _ = coords.level_matrices(K, Sign.MINUS)
    p1 = step_plus(p2, a_km1, z_km1)
    zero = MultiPoly({}, nv)
    v = tuple(p1.Pf[k] if k < q - 1 else (MultiPoly.constant(a_t[q - 1], nv) if k == q - 1 else zero) for k in range(n))
    zt = _raw_level(coords, K - 1, "zt")
    a_ak_t = vec_mat(_vec_poly(a_t, nv), transpose(a_k))
    v_a = vec_mat(v, a_km1)
    s_eq = tuple(x + y for x, y in zip(vec_mat(p2.Ps, transpose(a_km1)), vec_mat(v, zt)))
    steps = {}
    for j in range(1, q):
        steps[("aK", j)] = (a_ak_t[j - 1] - p1.Pf[j - 1], VarId("a", K, j, q))
    for j in range(q + 1, n + 1):
        steps[("a", j)] = (v_a[j - 1] - p2.Pf[j - 1], VarId("a", K - 1, q, j))
    for j in range(1, n + 1):
        steps[("zt", j)] = (s_eq[j - 1], VarId("zt", K - 1, min(q, j), max(q, j)))
    s1 = [("aK", j) for j in range(q - 1, 0, -1)]
    s2 = [("a", j) for j in range(q + 1, n + 1)]
    s3 = [("zt", j) for j in range(1, n + 1) if j != q] + [("zt", q)]
    return _finish(coords, target, K, n, label, steps, s1 + s2 + s3,
                   q, p1.Pf[q - 1], a_t[q - 1], s1 + s2 + s3)


def _raw_level(coords, level, kind):
    """The raw coordinate matrix of a level (unitriangular for "a"/"d", symmetric otherwise)."""
    n, nv = coords.n, coords.nvars
    one, zero = MultiPoly.constant(1, nv), MultiPoly({}, nv)
    if kind in ("a", "d"):
        return Matrix.from_rows([[one if r == c else (coords.sym(kind, level, r + 1, c + 1) if c > r else zero)
                                  for c in range(n)] for r in range(n)])
    return Matrix.from_rows([[coords.sym(kind, level, r + 1, c + 1) for c in range(n)] for r in range(n)])


# ---------------------------------------------------------------------------
# verification


@dataclass
class ReductionReport:
    lines: list
    passed: int
    failed: int

    @property
    def ok(self):
        return self.failed == 0

    def text(self):
        return "\n".join(self.lines + [f"SUMMARY pass={self.passed} fail={self.failed}"])


def check_acyclic(plan):
    eliminated = {s.index for s in plan.substitutions}
    for s in plan.substitutions:
        if any(k in eliminated for k in s.expr.variables()):
            raise ReductionError(f"substitution cycle: {s.var} depends on an eliminated coordinate")


def evaluate_plan(plan, free_values):
    """Full coordinate vector from values of the free coordinates."""
    values = dict(free_values)
    for s in plan.substitutions:
        values[s.index] = s.expr.evaluate(values)
        if isinstance(values[s.index], MultiPoly):
            values[s.index] = values[s.index].constant_value()
    return values


def _random_free(plan, rng, bound=3):
    return {k: random_gaussian(rng, bound) for k in plan.free}


def solve_on_fiber(plan, free_values):
    """Adjust one free coordinate so that residual = rhs; None if no coordinate works."""
    p = plan.residual
    for k in p.variables():
        coeff, rest = p.coefficient_split(k)
        others = {m: v for m, v in free_values.items() if m != k}
        c = _const(coeff.evaluate(others))
        if c:
            r = _const(rest.evaluate(others))
            out = dict(free_values)
            out[k] = (plan.rhs - r) / c
            return out
    return None


def verify_reduction(plan, target=None, trials=50, seed=0):
    """Check the plan at random points against an independent evaluation of phi.

    Per trial: (1) at a random point, every rewritten identity vanishes after
    substitution and the pivot polynomial equals the residual; (2) after
    moving one free coordinate onto residual = rhs, phi equals the target in
    all 2n coordinates; (3) at the unconstrained point, phi equals the target
    exactly when residual = rhs there, and differs otherwise.
    """
    target = plan.target if target is None else tuple(as_constant(x) for x in target)
    check_acyclic(plan)
    coords = plan.coordinates()
    lines = []
    passed = failed = 0
    for trial in range(1, trials + 1):
        rng = random.Random(f"{seed}:{trial}")
        problems = []
        free = _random_free(plan, rng)
        full = evaluate_plan(plan, free)
        for name, poly in plan.identities:
            if _const(poly.evaluate(full)):
                problems.append(f"identity {name} nonzero")
        p_val = _const(plan.residual.evaluate(free))
        if _const(plan.pivot_poly.evaluate(full)) != p_val:
            problems.append("pivot polynomial differs from residual")
        image = phi(coords.chain_from_values(full)).vector
        if (image == target) != (p_val == plan.rhs):
            problems.append("off-fiber point not separated by the residual")
        on = None
        for _ in range(20):
            on = solve_on_fiber(plan, free)
            if on is not None:
                break
            free = _random_free(plan, rng)
        if on is None:
            problems.append("could not place a point on the fiber")
        else:
            full_on = evaluate_plan(plan, on)
            image_on = phi(coords.chain_from_values(full_on)).vector
            if image_on != target:
                bad = [str(k + 1) for k in range(len(target)) if image_on[k] != target[k]]
                problems.append("phi differs from target at coordinates " + ",".join(bad))
        if problems:
            failed += 1
            lines.append(f"TRIAL {trial} FAIL " + "; ".join(problems))
        else:
            passed += 1
            lines.append(f"TRIAL {trial} PASS identities={len(plan.identities)} pivot=P{plan.pivot_coordinate} fiber=exact")
    return ReductionReport(lines, passed, failed)


def identities_hold_symbolically(plan):
    """Every rewritten identity becomes the zero polynomial after substitution."""
    subs = {s.index: s.expr for s in plan.substitutions}
    return all(not poly.substitute(subs) for _, poly in plan.identities)


def is_multilinear(p):
    return all(p.degree_in(k) <= 1 for k in p.variables())


# ---------------------------------------------------------------------------
# shear fields


@dataclass(frozen=True)
class ShearField:
    """V = (dp/dx_i) d/dx_j - (dp/dx_j) d/dx_i on the free coordinates."""

    i: int
    j: int
    p: MultiPoly

    def apply(self, f):
        return self.p.diff(self.i) * f.diff(self.j) - self.p.diff(self.j) * f.diff(self.i)


def shear_fields(plan):
    free = plan.free
    return [ShearField(free[a], free[b], plan.residual) for a in range(len(free)) for b in range(a + 1, len(free))]


def check_tangency(fields):
    """V(p) == 0 as a polynomial for every field; gradients are computed once."""
    grads = {}
    for f in fields:
        for k in (f.i, f.j):
            if k not in grads:
                grads[k] = f.p.diff(k)
    for f in fields:
        gi, gj = grads[f.i], grads[f.j]
        if gi * gj - gj * gi:
            return False
    return True


def check_multilinearity(p):
    return all(not p.diff(k).diff(k) for k in p.variables())


def sample_smooth_fiber_point(plan, rng, tries=100):
    """Free-coordinate values on residual = rhs where the gradient is nonzero."""
    grads = {k: plan.residual.diff(k) for k in plan.residual.variables()}
    for _ in range(tries):
        point = solve_on_fiber(plan, _random_free(plan, rng))
        if point is None:
            continue
        if any(_const(g.evaluate(point)) for g in grads.values()):
            return point
    raise ReductionError("no smooth fiber point found")


def field_matrix(plan, fields, point):
    """Rows are field values at a point, expressed on the free coordinates."""
    free = plan.free
    pos = {k: c for c, k in enumerate(free)}
    grad = {k: _const(plan.residual.diff(k).evaluate(point)) for k in free}
    rows = []
    for f in fields:
        row = [ZERO] * len(free)
        row[pos[f.j]] = grad[f.i]
        row[pos[f.i]] = -grad[f.j]
        rows.append(row)
    return Matrix.from_rows(rows)


def spanning_rank(plan, point, fields=None):
    fields = shear_fields(plan) if fields is None else fields
    return exact_rank(field_matrix(plan, fields, point))


def tangent_dimension(plan):
    return len(plan.free) - 1
