"""Floating-point multistart search for k-factor chains.

This is evidence only: it reports the smallest residual it reached and never
claims that a chain exists or does not exist.

The unknown symmetric blocks are complex.  The chain product is holomorphic
in them, so a complex Levenberg-Marquardt iteration with the exact complex
Jacobian is used directly instead of splitting into real and imaginary parts.
"""

import numpy as np

from .symplectic import Side

CONVERGED = 1e-13


def _to_complex_array(target):
    return np.array([[complex(x) for x in target.row(i)] for i in range(target.rows)], dtype=complex)


class ChainModel:
    """Product of k alternating standard factors as a function of their blocks."""

    def __init__(self, n, k, leading):
        self.n = n
        self.k = k
        self.lower = [(s % 2 == 0) == (leading is Side.LOWER) for s in range(k)]
        self.iu = np.triu_indices(n)
        self.m = len(self.iu[0])

    @property
    def nparams(self):
        return self.k * self.m

    def factors(self, z):
        n = self.n
        out = []
        for t in range(self.k):
            g = np.zeros((n, n), dtype=complex)
            g[self.iu] = z[t * self.m:(t + 1) * self.m]
            g = g + np.triu(g, 1).T
            f = np.eye(2 * n, dtype=complex)
            if self.lower[t]:
                f[n:, :n] = g
            else:
                f[:n, n:] = g
            out.append(f)
        return out

    def product(self, z):
        p = np.eye(2 * self.n, dtype=complex)
        for f in self.factors(z):
            p = p @ f
        return p

    def jacobian(self, z):
        """d(product)/d(block parameters) as a (4n^2) x (k m) complex matrix."""
        n = self.n
        fs = self.factors(z)
        size = 2 * n
        prefix = [np.eye(size, dtype=complex)]
        for f in fs:
            prefix.append(prefix[-1] @ f)
        suffix = [np.eye(size, dtype=complex)]
        for f in reversed(fs):
            suffix.append(f @ suffix[-1])
        suffix.reverse()
        diag = np.arange(n)
        cols = []
        for t in range(self.k):
            if self.lower[t]:
                left, right = prefix[t][:, n:], suffix[t + 1][:n, :]
            else:
                left, right = prefix[t][:, :n], suffix[t + 1][n:, :]
            # Entry (a, b) of G enters at positions (n+a, b) and (n+b, a) for
            # a lower factor (mirrored for upper), hence the symmetrization.
            d = np.einsum("ia,bj->abij", left, right)
            d = d + d.transpose(1, 0, 2, 3)
            d[diag, diag] /= 2
            cols.append(d[self.iu].reshape(self.m, -1))
        return np.vstack(cols).T


def levenberg_marquardt(model, target, z0, max_iter=150):
    """Damped Gauss-Newton on ||product(z) - target||; returns (z, max-norm residual)."""
    z = z0
    r = (model.product(z) - target).ravel()
    cost = np.vdot(r, r).real
    mu = 1e-3
    eye = np.eye(model.nparams)
    for _ in range(max_iter):
        if np.max(np.abs(r)) < CONVERGED:
            break
        j = model.jacobian(z)
        jh = j.conj().T
        a = jh @ j
        g = jh @ r
        while True:
            try:
                step = np.linalg.solve(a + mu * eye, -g)
            except np.linalg.LinAlgError:
                mu *= 10
                continue
            z_new = z + step
            r_new = (model.product(z_new) - target).ravel()
            cost_new = np.vdot(r_new, r_new).real
            if np.isfinite(cost_new) and cost_new < cost:
                z, r, cost = z_new, r_new, cost_new
                mu = max(mu / 3, 1e-15)
                break
            mu *= 4
            if mu > 1e12:
                return z, float(np.max(np.abs(r)))
    return z, float(np.max(np.abs(r)))


def numeric_multistart(target, k, *, restarts=200, seed=0, max_iter=None, scale=1.0):
    """Random restarts alternate between leading Lower and leading Upper chains.

    Per-restart generators are spawned from ``seed``, so results do not
    depend on evaluation order.
    """
    from .factorization import ResidualReport, SearchOutcome, SearchStatus

    t = _to_complex_array(target)
    n = target.rows // 2
    models = {side: ChainModel(n, k, side) for side in (Side.LOWER, Side.UPPER)}
    best = (np.inf, Side.LOWER)
    residuals = []
    with np.errstate(all="ignore"):
        for r, ss in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
            side = Side.LOWER if r % 2 == 0 else Side.UPPER
            model = models[side]
            rng = np.random.default_rng(ss)
            z0 = (rng.standard_normal(model.nparams) + 1j * rng.standard_normal(model.nparams)) * scale
            _, res = levenberg_marquardt(model, t, z0, max_iter or 150)
            if not np.isfinite(res):
                res = float("inf")
            residuals.append(res)
            if res < best[0]:
                best = (res, side)
    report = ResidualReport(best[0], restarts, best[1], tuple(residuals))
    return SearchOutcome(SearchStatus.NOT_FOUND_EVIDENCE, None, report,
                         note="numerical evidence only; not a proof either way")
