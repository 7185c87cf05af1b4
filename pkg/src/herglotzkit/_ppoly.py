"""Piecewise polynomials with exact Cauchy and principal-value transforms.

Each piece is stored in ascending powers of the local variable u = x - t_i.
The Cauchy transform of a polynomial piece against 1/(tau - z) splits into a
polynomial part (synthetic division) plus log terms; grouping the logs by
breakpoint makes the principal value finite at the breakpoints of any
continuous spline.
"""

from __future__ import annotations

from math import comb

import numpy as np

_LOG_CLAMP = 1e-300


class PiecewisePoly:
    """Compactly supported piecewise polynomial, zero outside its breakpoints."""

    def __init__(self, breakpoints, coeffs):
        self.breakpoints = np.asarray(breakpoints, dtype=float)
        if self.breakpoints.ndim != 1 or len(self.breakpoints) < 2:
            raise ValueError("need at least two breakpoints")
        if np.any(np.diff(self.breakpoints) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if len(coeffs) != len(self.breakpoints) - 1:
            raise ValueError("one coefficient array per piece required")
        self.coeffs = [np.atleast_1d(np.asarray(c, dtype=float)) for c in coeffs]

    @property
    def support(self):
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        t = self.breakpoints
        for i, c in enumerate(self.coeffs):
            if i == len(self.coeffs) - 1:
                mask = (x >= t[i]) & (x <= t[i + 1])
            else:
                mask = (x >= t[i]) & (x < t[i + 1])
            if mask.any():
                u = x[mask] - t[i]
                out[mask] = np.polynomial.polynomial.polyval(u, c)
        return out if out.shape else float(out)

    def piece_value(self, i, x):
        """Value of piece i's polynomial extended to arbitrary (complex) x."""
        u = np.asarray(x) - self.breakpoints[i]
        return np.polynomial.polynomial.polyval(u, self.coeffs[i])

    def integral(self):
        total = 0.0
        for i, c in enumerate(self.coeffs):
            h = self.breakpoints[i + 1] - self.breakpoints[i]
            k = np.arange(len(c))
            total += np.sum(c * h ** (k + 1) / (k + 1))
        return float(total)

    def moment(self, k):
        """Integral of x^k against this piecewise polynomial."""
        total = 0.0
        for i, c in enumerate(self.coeffs):
            t0 = self.breakpoints[i]
            h = self.breakpoints[i + 1] - t0
            # x^k = (u + t0)^k expanded in u
            xk = np.array([comb(k, j) * t0 ** (k - j) for j in range(k + 1)])
            prod = np.convolve(c, xk)
            deg = np.arange(len(prod))
            total += np.sum(prod * h ** (deg + 1) / (deg + 1))
        return float(total)

    def _piece_cauchy_terms(self, z):
        """Per-piece regular parts and per-breakpoint log coefficients.

        Returns (regular, log_coeffs) where regular has shape z.shape and
        log_coeffs[j] is the polynomial value multiplying log(t_j - z).
        """
        z = np.asarray(z)
        t = self.breakpoints
        regular = np.zeros(z.shape, dtype=complex)
        nbp = len(t)
        log_coeffs = np.zeros((nbp,) + z.shape, dtype=complex)
        for i, c in enumerate(self.coeffs):
            h = t[i + 1] - t[i]
            zeta = z - t[i]
            qz = np.polynomial.polynomial.polyval(zeta, c)
            # synthetic division: q(u) = (u - zeta) s(u) + q(zeta)
            deg = len(c) - 1
            s = np.zeros((deg,) + z.shape, dtype=complex) if deg > 0 else None
            if deg > 0:
                acc = np.full(z.shape, c[deg], dtype=complex)
                s[deg - 1] = acc
                for k in range(deg - 1, 0, -1):
                    acc = c[k] + zeta * acc
                    s[k - 1] = acc
                powers = np.array([h ** (k + 1) / (k + 1) for k in range(deg)])
                regular += np.tensordot(powers, s, axes=(0, 0))
            log_coeffs[i + 1] += qz
            log_coeffs[i] -= qz
        return regular, log_coeffs

    def cauchy(self, z):
        """Integral of p(tau)/(tau - z) for z off the real axis (vectorized)."""
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        regular, log_coeffs = self._piece_cauchy_terms(z)
        t = self.breakpoints
        logs = np.log(t[:, None] - z[None, :])
        out = regular + np.sum(log_coeffs * logs, axis=0)
        return out[0] if scalar else out

    def pv_cauchy(self, x):
        """Principal value of p(tau)/(tau - x) for real x, finite everywhere."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        regular, log_coeffs = self._piece_cauchy_terms(x)
        t = self.breakpoints
        gap = np.abs(t[:, None] - x[None, :])
        logs = np.log(np.maximum(gap, _LOG_CLAMP))
        terms = log_coeffs.real * logs
        # exact cancellation at breakpoints of a continuous spline
        terms[gap < _LOG_CLAMP] = 0.0
        out = regular.real + np.sum(terms, axis=0)
        return float(out[0]) if scalar else out

    def shifted_to(self, new_breakpoints):
        """Re-express on a refinement grid that contains the support."""
        nb = np.asarray(new_breakpoints, dtype=float)
        coeffs = []
        for i in range(len(nb) - 1):
            mid = 0.5 * (nb[i] + nb[i + 1])
            j = np.searchsorted(self.breakpoints, mid) - 1
            if j < 0 or j >= len(self.coeffs) or mid < self.breakpoints[0] or mid > self.breakpoints[-1]:
                coeffs.append(np.zeros(1))
                continue
            delta = nb[i] - self.breakpoints[j]
            coeffs.append(_shift_poly(self.coeffs[j], delta))
        return PiecewisePoly(nb, coeffs)

    def reflected(self):
        """The piecewise polynomial x -> p(-x)."""
        t = self.breakpoints
        nb = -t[::-1]
        coeffs = []
        for i in range(len(nb) - 1):
            # piece on [nb[i], nb[i+1]] mirrors piece j on [t[j], t[j+1]]
            j = len(self.coeffs) - 1 - i
            c = self.coeffs[j]
            h = t[j + 1] - t[j]
            # u_new = x - nb[i]; original local var u = -x - t[j] = h - u_new
            k = np.arange(len(c))
            flipped = np.zeros_like(c)
            for kk in range(len(c)):
                flipped += c[kk] * np.array(
                    [comb(kk, jj) * h ** (kk - jj) * (-1.0) ** jj if jj <= kk else 0.0
                     for jj in range(len(c))])
            coeffs.append(flipped)
        return PiecewisePoly(nb, coeffs)


def _shift_poly(c, delta):
    """Coefficients of p(u) re-expanded around u = delta (new var v = u - delta)."""
    c = np.asarray(c, dtype=float)
    n = len(c)
    out = np.zeros(n)
    for k in range(n):
        for j in range(k + 1):
            out[j] += c[k] * comb(k, j) * delta ** (k - j)
    return out


def sum_ppolys(polys, weights=None):
    """Weighted sum of piecewise polynomials on the merged breakpoint grid."""
    polys = list(polys)
    if weights is None:
        weights = [1.0] * len(polys)
    if not polys:
        raise ValueError("nothing to sum")
    grid = np.unique(np.concatenate([p.breakpoints for p in polys]))
    degree = max(max(len(c) for c in p.coeffs) for p in polys)
    coeffs = [np.zeros(degree) for _ in range(len(grid) - 1)]
    for w, p in zip(weights, polys):
        aligned = p.shifted_to(grid)
        for i, c in enumerate(aligned.coeffs):
            coeffs[i][: len(c)] += w * c
    return PiecewisePoly(grid, coeffs)


def linear_interpolant(x, y):
    """Piecewise-linear polynomial through sample points (x sorted)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    coeffs = []
    for i in range(len(x) - 1):
        slope = (y[i + 1] - y[i]) / (x[i + 1] - x[i])
        coeffs.append(np.array([y[i], slope]))
    return PiecewisePoly(x, coeffs)
