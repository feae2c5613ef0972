"""Bounds on the number of unitriangular factors needed for holomorphic
symplectic maps, as a small rule engine that records every rule it applies.

K(n, d) is the minimal factor count for symplectic matrices of size 2n over
a d-dimensional parameter space; Kt(n, d) is the corresponding count for
the elementary (unitriangular Omega~-symplectic) building blocks.
"""

from dataclasses import dataclass, field

BUILTIN_KTILDE = {1: 4, 2: 5}


@dataclass(frozen=True)
class BoundInput:
    n: int
    d: int
    known_ktilde: int = None
    known_kcont: int = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if self.known_ktilde is not None and self.known_ktilde < 1:
            raise ValueError("known_ktilde must be positive")
        if self.known_kcont is not None and self.known_kcont < 1:
            raise ValueError("known_kcont must be positive")


@dataclass(frozen=True)
class BoundResult:
    lower: int
    upper: int  # None when no upper bound is available
    derivation: tuple = field(default=())

    def text(self):
        upper = "unavailable" if self.upper is None else str(self.upper)
        return "\n".join([f"lower={self.lower} upper={upper}"] + [f"  {line}" for line in self.derivation])


class InconsistentBounds(ValueError):
    pass


def k_recursion_upper(k_cont_2, n):
    """Elementary factor bound (n - 1)(Kcont(2, d) + 3).

    Follows from K(n) <= Kcont(n) + K(n - 1) + 3 and Kcont(n) <= Kcont(2),
    where Kcont counts continuous elementary factors.
    """
    if n < 2 or k_cont_2 < 1:
        raise ValueError("need n >= 2 and k_cont_2 >= 1")
    return (n - 1) * (k_cont_2 + 3)


def k_stabilization_upper(ktilde_n):
    """Every elementary factor splits into at most 7 standard factors."""
    if ktilde_n < 1:
        raise ValueError("ktilde must be positive")
    return 7 * ktilde_n


def k_bounds(inp):
    trail = []
    if inp.n <= 3:
        lower = 5
        trail.append("lower bound 5: constant symplectic matrices already need 5 factors when n <= 3")
    else:
        lower = 6
        trail.append("lower bound 6: constant symplectic matrices need 6 factors when n >= 4")

    candidates = []
    if inp.known_ktilde is not None:
        candidates.append(inp.known_ktilde)
        trail.append(f"Kt(n,{inp.d}) <= {inp.known_ktilde} (supplied)")
    elif inp.d in BUILTIN_KTILDE:
        candidates.append(BUILTIN_KTILDE[inp.d])
        rel = "=" if inp.d == 1 else "<="
        trail.append(f"Kt(n,{inp.d}) {rel} {BUILTIN_KTILDE[inp.d]} (built-in elementary factor count for d={inp.d})")
    if inp.known_kcont is not None:
        rec = k_recursion_upper(inp.known_kcont, inp.n)
        candidates.append(rec)
        trail.append(f"Kt(n,{inp.d}) <= (n-1)(Kcont(2,{inp.d})+3) = {rec} with Kcont(2,{inp.d}) = {inp.known_kcont} (supplied)")
    upper = None
    if candidates:
        ktilde = min(candidates)
        if inp.n <= 3:
            upper = 4 * ktilde
            trail.append(f"upper bound 4 * Kt = {upper}: for n = 2, 3 each elementary factor needs only 4 standard factors")
        else:
            upper = k_stabilization_upper(ktilde)
            trail.append(f"upper bound 7 * Kt = {upper}: each elementary factor splits into 7 standard factors")
    else:
        trail.append(f"no Kt(n,{inp.d}) available for d={inp.d}; supply --ktilde or --kcont2 for an upper bound")

    if upper is not None and upper < lower:
        raise InconsistentBounds(f"supplied values give upper bound {upper} below lower bound {lower}")
    return BoundResult(lower, upper, tuple(trail))
