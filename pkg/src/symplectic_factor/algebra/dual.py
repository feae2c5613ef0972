"""Dual numbers a + b*eps with eps^2 = 0, for exact forward-mode derivatives."""

from .gaussian import _coerce
from .poly import NotAUnitError


class Dual:
    """Value and first-order perturbation over any exact scalar ring."""

    __slots__ = ("val", "eps")

    def __init__(self, val, eps=0):
        # Plain Python numbers become Gaussian rationals so arithmetic stays exact.
        c = _coerce(val)
        self.val = val if c is None else c
        c = _coerce(eps)
        self.eps = eps if c is None else c

    @staticmethod
    def _parts(other):
        if isinstance(other, Dual):
            return other.val, other.eps
        if _coerce(other) is None and not hasattr(other, "terms"):
            return None
        return other, 0

    def __add__(self, other):
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return Dual(self.val + parts[0], self.eps + parts[1])

    __radd__ = __add__

    def __sub__(self, other):
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return Dual(self.val - parts[0], self.eps - parts[1])

    def __rsub__(self, other):
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return Dual(parts[0] - self.val, parts[1] - self.eps)

    def __neg__(self):
        return Dual(-self.val, -self.eps)

    def __mul__(self, other):
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        v, e = parts
        return Dual(self.val * v, self.val * e + self.eps * v)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = Dual(1, 0)
        for _ in range(exponent):
            result = result * self
        return result

    def inverse(self):
        if not self.val:
            raise NotAUnitError("dual number with zero value part")
        inv = self.val.inverse()
        return Dual(inv, -self.eps * inv * inv)

    def __truediv__(self, other):
        if isinstance(other, Dual):
            return self * other.inverse()
        c = _coerce(other)
        if c is None:
            return NotImplemented
        return Dual(self.val / c, self.eps / c)

    def __bool__(self):
        return bool(self.val) or bool(self.eps)

    def __eq__(self, other):
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return self.val == parts[0] and self.eps == parts[1]

    def __hash__(self):
        return hash((self.val, self.eps)) if self.eps else hash(self.val)

    def __repr__(self):
        return f"Dual({self.val!r}, {self.eps!r})"
