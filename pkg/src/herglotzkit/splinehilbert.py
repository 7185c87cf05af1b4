"""B-spline bases with exact (negative) Hilbert transforms, and the
symmetric spline density ansatz for passive approximation.

Each basis function is materialized as an exact piecewise polynomial, so
its principal-value transform has a closed form (polynomial plus grouped
logarithms) that is finite and continuous across breakpoints for order >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import BSpline

from ._ppoly import PiecewisePoly, sum_ppolys
from .errors import DomainError, PreconditionError
from .herglotz import CanonicalFn, HerglotzFn, HerglotzRep
from .measures import DensityComponent, MeasureSpec, PointMass


class SplineBasis:
    """N = len(breakpoints) - order B-splines of the given order on a
    strictly increasing breakpoint sequence; function n (1-based) lives on
    breakpoints[n-1 : n+order].
    """

    def __init__(self, order: int, breakpoints):
        if order < 2:
            raise PreconditionError("spline order must be >= 2")
        bp = np.asarray(breakpoints, dtype=float)
        if bp.ndim != 1 or np.any(np.diff(bp) <= 0):
            raise PreconditionError("breakpoints must be strictly increasing")
        if len(bp) < order + 1:
            raise PreconditionError("need at least order+1 breakpoints")
        self.order = int(order)
        self.breakpoints = bp
        self.N = len(bp) - order
        self._pieces: dict[int, PiecewisePoly] = {}

    @classmethod
    def uniform(cls, order: int, lo: float, hi: float, num_functions: int):
        """Basis of `num_functions` splines on equispaced breakpoints."""
        if num_functions < 1:
            raise PreconditionError("need at least one basis function")
        return cls(order, np.linspace(lo, hi, num_functions + order))

    @property
    def support(self):
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def interior_span(self):
        """Interval where the basis forms a partition of unity."""
        return (float(self.breakpoints[self.order - 1]),
                float(self.breakpoints[self.N]))

    def _check_index(self, n: int):
        if not 1 <= n <= self.N:
            raise PreconditionError(f"basis index {n} out of range 1..{self.N}")

    def function(self, n: int) -> PiecewisePoly:
        """Exact piecewise-polynomial form of basis function n."""
        self._check_index(n)
        if n not in self._pieces:
            knots = self.breakpoints[n - 1: n + self.order]
            bs = BSpline.basis_element(knots, extrapolate=False)
            coeffs = []
            deg = self.order - 1
            for i in range(len(knots) - 1):
                a, b = knots[i], knots[i + 1]
                # exact degree-(m-1) piece recovered from samples
                u = (np.cos(np.pi * (2 * np.arange(deg + 1) + 1)
                            / (2 * (deg + 1))) + 1.0) / 2.0 * (b - a)
                vals = bs(a + u)
                vand = np.vander(u, deg + 1, increasing=True)
                coeffs.append(np.linalg.solve(vand, vals))
            self._pieces[n] = PiecewisePoly(knots, coeffs)
        return self._pieces[n]

    def to_dict(self):
        return {"order": self.order, "breakpoints": self.breakpoints.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(d["order"], d["breakpoints"])


def bspline_eval(basis: SplineBasis, n: int, x):
    """Value of basis function n at x (0 outside its support)."""
    return basis.function(n)(np.asarray(x, dtype=float))


def bspline_hilbert(basis: SplineBasis, n: int, x):
    """Negative Hilbert transform p.v. integral of p_n(tau)/(tau - x) d tau.

    Closed form: the polynomial pieces integrate against the Cauchy kernel
    to a polynomial plus logarithmic terms grouped per breakpoint, which
    stay finite at the breakpoints because the spline is continuous.
    """
    return basis.function(n).pv_cauchy(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class DensityAnsatz:
    """Symmetric spline ansatz: pi mu'(x) = sum zeta_n (p_n(x) + p_n(-x)),
    plus a point mass zeta0 at 0 and linear term b z.
    """

    basis: SplineBasis
    zeta: tuple = ()
    zeta0: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "zeta", tuple(float(z) for z in self.zeta))
        if len(self.zeta) != self.basis.N:
            raise PreconditionError(
                f"expected {self.basis.N} spline coefficients, got {len(self.zeta)}")
        if any(z < 0 for z in self.zeta) or self.zeta0 < 0 or self.b < 0:
            raise PreconditionError("ansatz coefficients must be nonnegative")

    def to_dict(self):
        return {"basis": self.basis.to_dict(), "zeta": list(self.zeta),
                "zeta0": self.zeta0, "b": self.b}

    @classmethod
    def from_dict(cls, d):
        return cls(SplineBasis.from_dict(d["basis"]), tuple(d.get("zeta", ())),
                   float(d.get("zeta0", 0.0)), float(d.get("b", 0.0)))


def ansatz_imag(d: DensityAnsatz, x):
    """Im h(x) = pi mu'(x) = sum zeta_n (p_n(x) + p_n(-x)); even, >= 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    for n, z in enumerate(d.zeta, start=1):
        if z:
            p = d.basis.function(n)
            out = out + z * (p(x) + p(-x))
    return out if out.shape else float(out)


def ansatz_real(d: DensityAnsatz, x):
    """Re h(x) = b x - zeta0/x + (1/pi) sum zeta_n (phat_n(x) - phat_n(-x)).

    The 1/pi normalizes the raw principal-value transform to the Hilbert
    transform of the density pi mu', so that Re and Im parts assemble the
    boundary value of one Herglotz function.
    """
    x = np.asarray(x, dtype=float)
    if d.zeta0 > 0 and np.any(x == 0.0):
        raise DomainError("Re h is singular at x=0 when zeta0 > 0")
    out = d.b * x
    if d.zeta0:
        out = out - d.zeta0 / x
    for n, z in enumerate(d.zeta, start=1):
        if z:
            p = d.basis.function(n)
            out = out + (z / np.pi) * (p.pv_cauchy(x) - p.pv_cauchy(-x))
    out = np.asarray(out)
    return out if out.shape else float(out)


def ansatz_as_herglotz(d: DensityAnsatz) -> HerglotzFn:
    """Canonical Herglotz function of the ansatz: a=0, slope b,
    mu = zeta0 delta_0 + (1/pi) symmetrized spline density.
    """
    masses = (PointMass(0.0, d.zeta0),) if d.zeta0 > 0 else ()
    densities = ()
    polys, weights = [], []
    for n, z in enumerate(d.zeta, start=1):
        if z:
            p = d.basis.function(n)
            polys.extend([p, p.reflected()])
            weights.extend([z / np.pi, z / np.pi])
    if polys:
        densities = (DensityComponent.from_ppoly(sum_ppolys(polys, weights)),)
    rep = HerglotzRep(0.0, d.b, MeasureSpec(point_masses=masses,
                                            densities=densities))
    return CanonicalFn(rep)
