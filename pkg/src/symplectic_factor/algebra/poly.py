"""Sparse multivariate polynomials over Q(i).

Monomials are packed into a single int with ``EXP_BITS`` bits per variable,
so monomial multiplication is integer addition.  Terms live in a dict from
packed monomial to a nonzero GaussianRational.
"""

from .gaussian import GaussianRational, ONE, ZERO, _coerce, format_gaussian, format_rational

EXP_BITS = 16
EXP_MASK = (1 << EXP_BITS) - 1
MAX_EXP = EXP_MASK


class NotAUnitError(ArithmeticError):
    """Division by an element that is not invertible in its ring."""


def pack(exponents):
    m = 0
    for k, e in enumerate(exponents):
        if e < 0 or e > MAX_EXP:
            raise OverflowError(f"exponent {e} out of range")
        m |= e << (EXP_BITS * k)
    return m


def unpack(monomial, nvars):
    return tuple((monomial >> (EXP_BITS * k)) & EXP_MASK for k in range(nvars))


def exponent_of(monomial, k):
    return (monomial >> (EXP_BITS * k)) & EXP_MASK


def _grlex_key(monomial, nvars):
    exps = unpack(monomial, nvars)
    return (sum(exps), exps)


class MultiPoly:
    """A polynomial in variables x1..x{nvars}. Treated as immutable."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms=None, nvars=0):
        # Zero coefficients are dropped so that equal polynomials have equal term dicts.
        self.terms = {} if not terms else {
            m: (c if type(c) is GaussianRational else _coerce(c)) for m, c in terms.items() if c}
        self.nvars = nvars

    # constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, value, nvars=0):
        c = _coerce(value)
        if c is None:
            raise TypeError(f"not a constant: {value!r}")
        return cls({0: c} if c else {}, nvars)

    @classmethod
    def variable(cls, k, nvars):
        """The variable x{k+1} (k is zero-based)."""
        if not 0 <= k < nvars:
            raise ValueError(f"variable index {k} outside ring with {nvars} variables")
        return cls({1 << (EXP_BITS * k): ONE}, nvars)

    @classmethod
    def from_exponents(cls, mapping, nvars):
        terms = {}
        for exps, coeff in mapping.items():
            c = _coerce(coeff)
            if c:
                m = pack(exps)
                terms[m] = terms.get(m, ZERO) + c
        return cls({m: c for m, c in terms.items() if c}, nvars)

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            return other
        c = _coerce(other)
        if c is None:
            return None
        return MultiPoly({0: c} if c else {}, self.nvars)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if len(self.terms) < len(other.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        terms = dict(big)
        for m, c in small.items():
            old = terms.get(m)
            if old is None:
                terms[m] = c
            else:
                s = old + c
                if s:
                    terms[m] = s
                else:
                    del terms[m]
        return MultiPoly(terms, max(self.nvars, other.nvars))

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self.terms.items()}, self.nvars)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = _coerce(other)
            if c is None:
                return NotImplemented
            if not c:
                return MultiPoly({}, self.nvars)
            return MultiPoly({m: v * c for m, v in self.terms.items()}, self.nvars)
        nvars = max(self.nvars, other.nvars)
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly({}, nvars)
        if len(a) == 1 and 0 in a:
            return other * a[0]
        if len(b) == 1 and 0 in b:
            return self * b[0]
        # Accumulate real and imaginary parts separately as mpq to avoid
        # allocating a GaussianRational per partial product.
        re_acc = {}
        im_acc = {}
        bitems = [(m, c.re, c.im) for m, c in b.items()]
        for m1, c1 in a.items():
            r1, i1 = c1.re, c1.im
            for m2, r2, i2 in bitems:
                m = m1 + m2
                if i1 or i2:
                    re = r1 * r2 - i1 * i2
                    im = r1 * i2 + i1 * r2
                    if im:
                        im_acc[m] = im_acc[m] + im if m in im_acc else im
                else:
                    re = r1 * r2
                re_acc[m] = re_acc[m] + re if m in re_acc else re
        terms = {}
        for m, re in re_acc.items():
            im = im_acc.pop(m, None)
            if im is None:
                if re:
                    terms[m] = GaussianRational._make(re, ZERO.im)
            elif re or im:
                terms[m] = GaussianRational._make(re, im)
        for m, im in im_acc.items():
            if im:
                terms[m] = GaussianRational._make(ZERO.re, im)
        return MultiPoly(terms, nvars)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = MultiPoly({0: ONE}, self.nvars)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __truediv__(self, other):
        """Division by a unit, i.e. a nonzero constant."""
        if isinstance(other, MultiPoly):
            if not other.is_constant() or not other:
                raise NotAUnitError("polynomial division by a non-constant")
            other = other.constant_value()
        c = _coerce(other)
        if c is None:
            return NotImplemented
        if not c:
            raise ZeroDivisionError("division by zero")
        inv = c.inverse()
        return MultiPoly({m: v * inv for m, v in self.terms.items()}, self.nvars)

    def inverse(self):
        if not self.is_constant() or not self:
            raise NotAUnitError("only nonzero constant polynomials are units")
        return MultiPoly({0: self.terms[0].inverse()}, self.nvars)

    # structure ------------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.terms == other.terms
        c = _coerce(other)
        if c is None:
            return NotImplemented
        if not c:
            return not self.terms
        return len(self.terms) == 1 and self.terms.get(0) == c

    def __hash__(self):
        if not self.terms:
            return hash(0)
        if len(self.terms) == 1 and 0 in self.terms:
            return hash(self.terms[0])
        return hash(frozenset(self.terms.items()))

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        """Value of a constant polynomial as a GaussianRational."""
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(0, ZERO)

    def constant_term(self):
        return self.terms.get(0, ZERO)

    def with_nvars(self, nvars):
        return MultiPoly(self.terms, nvars)

    def variables(self):
        """Zero-based indices of the variables that occur."""
        used = 0
        for m in self.terms:
            used |= m
        out = []
        k = 0
        while used:
            if used & EXP_MASK:
                out.append(k)
            used >>= EXP_BITS
            k += 1
        return out

    def degree_in(self, k):
        return max((exponent_of(m, k) for m in self.terms), default=0)

    def total_degree(self):
        nvars = max(self.nvars, len(self.variables()) and self.variables()[-1] + 1)
        return max((sum(unpack(m, nvars)) for m in self.terms), default=0)

    def diff(self, k):
        """Partial derivative with respect to x{k+1}."""
        shift = EXP_BITS * k
        unit = 1 << shift
        terms = {}
        for m, c in self.terms.items():
            e = (m >> shift) & EXP_MASK
            if e:
                terms[m - unit] = c * e
        return MultiPoly(terms, self.nvars)

    def coefficient_split(self, k):
        """Write self = c * x{k+1} + rest when self has degree <= 1 in x{k+1}."""
        shift = EXP_BITS * k
        unit = 1 << shift
        lin, rest = {}, {}
        for m, c in self.terms.items():
            e = (m >> shift) & EXP_MASK
            if e == 0:
                rest[m] = c
            elif e == 1:
                lin[m - unit] = c
            else:
                raise ValueError(f"degree {e} in variable {k}")
        return MultiPoly(lin, self.nvars), MultiPoly(rest, self.nvars)

    def evaluate(self, values):
        """Evaluate at a point; ``values`` maps variable index to a scalar.

        Variables missing from ``values`` stay symbolic, so a partial
        assignment returns a polynomial.  A full assignment returns a
        GaussianRational (or whatever ring the values live in).
        """
        if isinstance(values, (list, tuple)):
            values = dict(enumerate(values))
        result = None
        partial = False
        powers = {}
        for m, c in self.terms.items():
            term = c
            rest = 0
            k = 0
            mm = m
            while mm:
                e = mm & EXP_MASK
                if e:
                    if k in values:
                        key = (k, e)
                        p = powers.get(key)
                        if p is None:
                            p = values[k] ** e if e > 1 else values[k]
                            powers[key] = p
                        term = term * p
                    else:
                        rest |= e << (EXP_BITS * k)
                mm >>= EXP_BITS
                k += 1
            if rest:
                partial = True
                term = MultiPoly({rest: ONE}, self.nvars) * term
            result = term if result is None else result + term
        if result is None:
            return ZERO
        if partial and not isinstance(result, MultiPoly):
            result = MultiPoly.constant(result, self.nvars)
        return result

    def substitute(self, mapping):
        """Replace variables by polynomials (or scalars); others stay."""
        result = MultiPoly({}, self.nvars)
        cache = {}
        for m, c in self.terms.items():
            term = MultiPoly({0: c}, self.nvars)
            keep = 0
            k = 0
            mm = m
            while mm:
                e = mm & EXP_MASK
                if e:
                    if k in mapping:
                        key = (k, e)
                        p = cache.get(key)
                        if p is None:
                            sub = mapping[k]
                            if not isinstance(sub, MultiPoly):
                                sub = MultiPoly.constant(sub, self.nvars)
                            p = sub ** e
                            cache[key] = p
                        term = term * p
                    else:
                        keep |= e << (EXP_BITS * k)
                mm >>= EXP_BITS
                k += 1
            if keep:
                term = term * MultiPoly({keep: ONE}, self.nvars)
            result = result + term
        return result

    def sorted_terms(self):
        """Terms in descending graded-lex order (x1 > x2 > ...)."""
        nvars = self.nvars
        if self.terms:
            nvars = max(nvars, self.variables()[-1] + 1 if self.variables() else 0)
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0], nvars), reverse=True)

    # printing -------------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r}, nvars={self.nvars})"


def format_monomial(monomial, nvars):
    parts = []
    for k, e in enumerate(unpack(monomial, nvars)):
        if e == 1:
            parts.append(f"x{k + 1}")
        elif e > 1:
            parts.append(f"x{k + 1}^{e}")
    return "*".join(parts)


def _format_term(coeff, mono_text):
    """One real-or-imaginary term with an explicit sign."""
    if not mono_text:
        text = format_gaussian(coeff)
        return text if text.startswith("-") else "+" + text
    if coeff.im:
        q = coeff.im
        if q == 1:
            head = "+i"
        elif q == -1:
            head = "-i"
        else:
            head = format_rational(q) + "i"
    else:
        q = coeff.re
        if q == 1:
            head = "+"
        elif q == -1:
            head = "-"
        else:
            head = format_rational(q)
    if head not in ("+", "-"):
        if not head.startswith("-") and not head.startswith("+"):
            head = "+" + head
        head += "*"
    return head + mono_text


def format_poly(p):
    """Canonical text; complex coefficients split into real and imaginary terms."""
    if not p.terms:
        return "0"
    pieces = []
    nvars = max(p.nvars, p.variables()[-1] + 1 if p.variables() else 0)
    for m, c in p.sorted_terms():
        mono = format_monomial(m, nvars)
        if not mono:
            pieces.append(_format_term(c, ""))
            continue
        if c.re:
            pieces.append(_format_term(GaussianRational._make(c.re, ZERO.im), mono))
        if c.im:
            pieces.append(_format_term(GaussianRational._make(ZERO.re, c.im), mono))
    text = "".join(pieces)
    return text[1:] if text.startswith("+") else text
