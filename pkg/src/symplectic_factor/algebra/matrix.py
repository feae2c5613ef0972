"""Dense exact matrices over Q(i), polynomial rings, or dual numbers."""

from enum import Enum

from .gaussian import GaussianRational, ONE, ZERO, _coerce, is_number
from .poly import MultiPoly, NotAUnitError


class ShapeTag(Enum):
    GENERAL = "general"
    UPPER_UNITRIANGULAR = "upper-unitriangular"
    LOWER_UNITRIANGULAR = "lower-unitriangular"
    UPPER_TRIANGULAR = "upper-triangular"
    LOWER_TRIANGULAR = "lower-triangular"
    SYMMETRIC = "symmetric"
    DIAGONAL = "diagonal"


def _scalar(x):
    if isinstance(x, GaussianRational):
        return x
    if is_number(x):
        return _coerce(x)
    return x


class Matrix:
    """Immutable rows x cols matrix stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        entries = tuple(_scalar(x) for x in entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def _raw(cls, rows, cols, entries):
        obj = object.__new__(cls)
        obj.rows = rows
        obj.cols = cols
        obj.entries = entries
        return obj

    # constructors ---------------------------------------------------------

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def zeros(cls, rows, cols, zero=ZERO):
        return cls._raw(rows, cols, (zero,) * (rows * cols))

    @classmethod
    def identity(cls, n, one=ONE, zero=ZERO):
        return cls._raw(n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values, zero=ZERO):
        values = [_scalar(v) for v in values]
        n = len(values)
        return cls._raw(n, n, tuple(values[i] if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def block(cls, blocks):
        """Assemble a matrix from a 2D list of equally aligned blocks."""
        rows = []
        for brow in blocks:
            height = brow[0].rows
            if any(b.rows != height for b in brow):
                raise ValueError("block heights differ")
            for i in range(height):
                row = []
                for b in brow:
                    row.extend(b.entries[i * b.cols:(i + 1) * b.cols])
                rows.append(row)
        width = len(rows[0]) if rows else 0
        if any(len(r) != width for r in rows):
            raise ValueError("block widths differ")
        return cls._raw(len(rows), width, tuple(x for r in rows for x in r))

    # access ---------------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, index):
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j):
        return self.entries[j::self.cols]

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def submatrix(self, r0, r1, c0, c1):
        return Matrix._raw(r1 - r0, c1 - c0, tuple(
            self.entries[i * self.cols + j] for i in range(r0, r1) for j in range(c0, c1)))

    def blocks2(self):
        """Split a 2n x 2n matrix into its four n x n blocks."""
        if self.rows != self.cols or self.rows % 2:
            raise ValueError("expected an even square matrix")
        n = self.rows // 2
        return (self.submatrix(0, n, 0, n), self.submatrix(0, n, n, 2 * n),
                self.submatrix(n, 2 * n, 0, n), self.submatrix(n, 2 * n, n, 2 * n))

    def map(self, f):
        return Matrix._raw(self.rows, self.cols, tuple(f(x) for x in self.entries))

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        _same_shape(self, other)
        return Matrix._raw(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        _same_shape(self, other)
        return Matrix._raw(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return Matrix._raw(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c):
        return Matrix._raw(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.to_rows()!r})"

    def __str__(self):
        from .parse import print_scalar
        return "\n".join(" ".join(print_scalar(x) for x in self.row(i)) for i in range(self.rows))

    @property
    def T(self):
        return transpose(self)

    def is_square(self):
        return self.rows == self.cols

    def is_zero(self):
        return not any(self.entries)


def _same_shape(a, b):
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def mat_mul(a, b):
    """Exact product; zero entries of ``a`` are skipped."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.shape} times {b.shape}")
    n, m, p = a.rows, a.cols, b.cols
    ae, be = a.entries, b.entries
    brows = [be[k * p:(k + 1) * p] for k in range(m)]
    out = []
    zero = None
    for i in range(n):
        acc = [None] * p
        for k in range(m):
            aik = ae[i * m + k]
            if not aik:
                continue
            brow = brows[k]
            for j in range(p):
                bkj = brow[j]
                if not bkj:
                    continue
                t = aik * bkj
                acc[j] = t if acc[j] is None else acc[j] + t
        if zero is None and any(x is None for x in acc):
            zero = _zero_like(a, b)
        out.extend(zero if x is None else x for x in acc)
    return Matrix._raw(n, p, tuple(out))


def _zero_of(values):
    for x in values:
        if isinstance(x, MultiPoly):
            return MultiPoly({}, x.nvars)
    return ZERO


def _zero_like(a, b):
    for x in a.entries + b.entries:
        if isinstance(x, MultiPoly):
            return MultiPoly({}, x.nvars)
    return ZERO


def vec_mat(v, m):
    """Row vector (tuple) times matrix."""
    if len(v) != m.rows:
        raise ValueError("dimension mismatch")
    p = m.cols
    acc = [None] * p
    for k, vk in enumerate(v):
        if not vk:
            continue
        row = m.entries[k * p:(k + 1) * p]
        for j in range(p):
            x = row[j]
            if not x:
                continue
            t = vk * x
            acc[j] = t if acc[j] is None else acc[j] + t
    zero = _zero_of(v) if any(x is None for x in acc) else None
    if zero is ZERO:
        zero = _zero_like(m, m)
    return tuple(zero if x is None else x for x in acc)


def transpose(a):
    return Matrix._raw(a.cols, a.rows, tuple(a.entries[i * a.cols + j] for j in range(a.cols) for i in range(a.rows)))


def is_symmetric(a):
    if a.rows != a.cols:
        return False
    n = a.rows
    e = a.entries
    return all(e[i * n + j] == e[j * n + i] for i in range(n) for j in range(i + 1, n))


def is_triangular(a, upper):
    if a.rows != a.cols:
        return False
    n = a.rows
    e = a.entries
    if upper:
        return all(not e[i * n + j] for i in range(n) for j in range(i))
    return all(not e[i * n + j] for i in range(n) for j in range(i + 1, n))


def is_unitriangular(a, upper):
    if not is_triangular(a, upper):
        return False
    n = a.rows
    return all(a.entries[i * n + i] == 1 for i in range(n))


def is_diagonal(a):
    return is_triangular(a, True) and is_triangular(a, False)


def has_shape(a, tag):
    if tag is ShapeTag.GENERAL:
        return True
    if tag is ShapeTag.UPPER_UNITRIANGULAR:
        return is_unitriangular(a, True)
    if tag is ShapeTag.LOWER_UNITRIANGULAR:
        return is_unitriangular(a, False)
    if tag is ShapeTag.UPPER_TRIANGULAR:
        return is_triangular(a, True)
    if tag is ShapeTag.LOWER_TRIANGULAR:
        return is_triangular(a, False)
    if tag is ShapeTag.SYMMETRIC:
        return is_symmetric(a)
    if tag is ShapeTag.DIAGONAL:
        return is_diagonal(a)
    raise ValueError(f"unknown shape tag {tag}")


def unit_inverse(x):
    """Inverse of a unit of the scalar ring."""
    if isinstance(x, GaussianRational):
        if not x:
            raise NotAUnitError("zero is not a unit")
        return x.inverse()
    if is_number(x):
        return unit_inverse(_coerce(x))
    if isinstance(x, MultiPoly):
        return x.inverse()
    if hasattr(x, "inverse"):
        return x.inverse()
    raise TypeError(f"no inverse for {x!r}")


def invert_triangular(a, tag):
    """Exact inverse of a triangular matrix whose diagonal entries are units."""
    if tag is ShapeTag.DIAGONAL:
        if not is_diagonal(a):
            raise ValueError("matrix is not diagonal")
        return Matrix.diagonal([unit_inverse(a[i, i]) for i in range(a.rows)])
    if tag in (ShapeTag.UPPER_UNITRIANGULAR, ShapeTag.UPPER_TRIANGULAR):
        upper = True
    elif tag in (ShapeTag.LOWER_UNITRIANGULAR, ShapeTag.LOWER_TRIANGULAR):
        upper = False
    else:
        raise ValueError(f"invert_triangular needs a triangular tag, got {tag}")
    if not has_shape(a, tag):
        raise ValueError(f"matrix does not have shape {tag.value}")
    if upper:
        return transpose(_invert_lower(transpose(a)))
    return _invert_lower(a)


def _invert_lower(a):
    n = a.rows
    e = a.entries
    zero = _zero_like(a, a)
    diag_inv = []
    for i in range(n):
        d = e[i * n + i]
        diag_inv.append(None if d == 1 else unit_inverse(d))
    x = [[zero] * n for _ in range(n)]
    # Column j of the inverse solves L x = e_j by forward substitution.
    for j in range(n):
        x[j][j] = ONE if diag_inv[j] is None else diag_inv[j]
        for i in range(j + 1, n):
            s = None
            for k in range(j, i):
                lik = e[i * n + k]
                if lik and x[k][j]:
                    t = lik * x[k][j]
                    s = t if s is None else s + t
            if s is None:
                continue
            x[i][j] = -s if diag_inv[i] is None else -(s * diag_inv[i])
    if isinstance(zero, MultiPoly):
        x = [[MultiPoly.constant(v, zero.nvars) if not isinstance(v, MultiPoly) else v for v in r] for r in x]
    return Matrix.from_rows(x)


def _field_entries(a):
    out = []
    for x in a.entries:
        if isinstance(x, MultiPoly):
            if not x.is_constant():
                raise TypeError("polynomial entries must be evaluated at a point before taking rank")
            x = x.constant_value()
        elif not isinstance(x, GaussianRational):
            c = _coerce(x)
            if c is None:
                raise TypeError(f"rank needs field entries, got {type(x).__name__}")
            x = c
        out.append(x)
    return out


def row_echelon(a):
    """Reduced row echelon rows and pivot columns, by exact elimination."""
    e = _field_entries(a)
    rows = [e[i * a.cols:(i + 1) * a.cols] for i in range(a.rows)]
    pivots = []
    r = 0
    for c in range(a.cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                pr = rows[r]
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def exact_rank(a):
    """Rank over Q(i) by exact Gaussian elimination."""
    e = _field_entries(a)
    rows = [e[i * a.cols:(i + 1) * a.cols] for i in range(a.rows)]
    rank = 0
    for c in range(a.cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        inv = pr[c].inverse()
        for i in range(rank + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], pr)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _minor_expansion_det(a):
    """Division-free determinant: expansion along rows, memoized on the used columns."""
    n = a.rows
    memo = {}

    def det(row, cols):
        if row == n:
            return ONE
        key = cols
        if key in memo:
            return memo[key]
        total = ZERO
        sign = 1
        for c in range(n):
            if cols >> c & 1:
                continue
            x = a[row, c]
            if x:
                term = x * det(row + 1, cols | 1 << c)
                total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    return det(0, 0)


def determinant(a):
    if not a.is_square():
        raise ValueError("determinant of a non-square matrix")
    if any(isinstance(x, MultiPoly) and not x.is_constant() for x in a.entries):
        return _minor_expansion_det(a)
    e = _field_entries(a)
    n = a.rows
    rows = [e[i * n:(i + 1) * n] for i in range(n)]
    det = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        pr = rows[c]
        det = det * pr[c]
        inv = pr[c].inverse()
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], pr)]
    return det


def nullspace(a):
    """Basis of the right null space over Q(i), as lists of scalars."""
    rows, pivots = row_echelon(a)
    free = [c for c in range(a.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * a.cols
        v[f] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][f]
        basis.append(v)
    return basis


def solve_linear(a, b):
    """One solution x of a x = b over Q(i), or None if inconsistent."""
    aug = Matrix.block([[a, Matrix(a.rows, 1, list(b))]])
    rows, pivots = row_echelon(aug)
    if a.cols in pivots:
        return None
    x = [ZERO] * a.cols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][a.cols]
    return x


def evaluate_matrix(a, values):
    """Evaluate polynomial entries at a point (a dict or list of scalars)."""
    return a.map(lambda x: x.evaluate(values) if isinstance(x, MultiPoly) else x)
