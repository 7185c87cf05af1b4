"""Positive Borel measures: point masses, density components, moments.

A MeasureSpec is the mu of a canonical representation.  Densities come in
four kinds: exact piecewise polynomials, the Poisson density 1/(pi(1+xi^2)),
a Lebesgue multiple c/pi, and sampled data with linear interpolation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._ppoly import PiecewisePoly, linear_interpolant
from .errors import InvalidMeasureError
from .numerics import adaptive_quad

_NONNEG_TOL = 1e-12


@dataclass(frozen=True)
class PointMass:
    xi: float
    m: float

    def __post_init__(self):
        if self.m < 0:
            raise InvalidMeasureError(f"point mass at {self.xi} has negative mass {self.m}")


class DensityComponent:
    """Absolutely continuous part of a measure, nonnegative on its support."""

    KINDS = ("piecewise_polynomial", "poisson", "lebesgue_multiple", "sampled")

    def __init__(self, kind, *, ppoly=None, c=None, x=None, values=None):
        if kind not in self.KINDS:
            raise InvalidMeasureError(f"unknown density kind {kind!r}")
        self.kind = kind
        self._ppoly = ppoly
        self.c = c
        self._x = None if x is None else np.asarray(x, dtype=float)
        self._values = None if values is None else np.asarray(values, dtype=float)
        if kind == "sampled":
            if self._x is None or self._values is None:
                raise InvalidMeasureError("sampled density needs x and values")
            self._ppoly = linear_interpolant(self._x, self._values)
        if kind == "lebesgue_multiple" and (c is None or c < 0):
            raise InvalidMeasureError("lebesgue_multiple needs c >= 0")
        if self._ppoly is not None:
            lo, hi = self._ppoly.support
            grid = np.linspace(lo, hi, 2049)
            if np.min(self._ppoly(grid)) < -_NONNEG_TOL:
                raise InvalidMeasureError("density is negative on its support")

    @classmethod
    def piecewise(cls, breakpoints, coefficients):
        return cls("piecewise_polynomial",
                   ppoly=PiecewisePoly(breakpoints, coefficients))

    @classmethod
    def from_ppoly(cls, ppoly):
        return cls("piecewise_polynomial", ppoly=ppoly)

    @classmethod
    def poisson(cls):
        return cls("poisson")

    @classmethod
    def lebesgue(cls, c):
        return cls("lebesgue_multiple", c=c)

    @classmethod
    def sampled(cls, x, values):
        return cls("sampled", x=x, values=values)

    @property
    def support(self):
        if self._ppoly is not None:
            return self._ppoly.support
        return (-np.inf, np.inf)

    @property
    def is_compact(self):
        lo, hi = self.support
        return np.isfinite(lo) and np.isfinite(hi)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self._ppoly is not None:
            return self._ppoly(x)
        if self.kind == "poisson":
            out = 1.0 / (np.pi * (1.0 + x ** 2))
        else:
            out = np.full(x.shape, self.c / np.pi)
        return out if out.shape else float(out)

    # --- transforms used by the evaluation and boundary layers ---

    def cauchy(self, z):
        """Integral of rho(xi)/(xi - z), z off the real axis."""
        z = np.asarray(z, dtype=complex)
        if self._ppoly is not None:
            return self._ppoly.cauchy(z)
        sign = np.where(z.imag > 0, 1.0, -1.0)
        if self.kind == "poisson":
            return -1.0 / (z + 1j * sign)
        return 1j * sign * self.c

    def pv_cauchy(self, x):
        """Principal value of rho(xi)/(xi - x) at real x."""
        x = np.asarray(x, dtype=float)
        if self._ppoly is not None:
            return self._ppoly.pv_cauchy(x)
        if self.kind == "poisson":
            return -x / (1.0 + x ** 2)
        return np.zeros(x.shape) if x.shape else 0.0

    def compensator(self):
        """Integral of xi rho(xi)/(1+xi^2): the kernel's convergence offset."""
        if self._ppoly is not None:
            lo, hi = self._ppoly.support
            val, _ = adaptive_quad(lambda t: t * self._ppoly(t) / (1 + t ** 2),
                                   lo, hi, tol=1e-13,
                                   initial_points=self._ppoly.breakpoints)
            return float(np.real(val))
        return 0.0  # poisson and lebesgue densities are even

    def growth_integral(self):
        """Integral of rho(xi)/(1+xi^2)."""
        if self._ppoly is not None:
            lo, hi = self._ppoly.support
            val, _ = adaptive_quad(lambda t: self._ppoly(t) / (1 + t ** 2),
                                   lo, hi, tol=1e-13,
                                   initial_points=self._ppoly.breakpoints)
            return float(np.real(val))
        if self.kind == "poisson":
            return 0.5
        return float(self.c)

    def moment(self, k):
        """Integral of xi^k rho(xi), or None when divergent/undefined."""
        if self._ppoly is not None:
            return self._ppoly.moment(k)
        if self.kind == "poisson":
            return 1.0 if k == 0 else None
        if self.kind == "lebesgue_multiple":
            return 0.0 if self.c == 0 else None
        return None

    def mass_between(self, x1, x2):
        if self._ppoly is not None:
            lo, hi = self._ppoly.support
            a, b = max(x1, lo), min(x2, hi)
            if a >= b:
                return 0.0
            val, _ = adaptive_quad(self._ppoly, a, b, tol=1e-13,
                                   initial_points=self._ppoly.breakpoints)
            return float(np.real(val))
        if self.kind == "poisson":
            return (np.arctan(x2) - np.arctan(x1)) / np.pi
        return self.c * (x2 - x1) / np.pi

    def to_dict(self):
        if self.kind == "piecewise_polynomial":
            return {"kind": self.kind,
                    "breakpoints": self._ppoly.breakpoints.tolist(),
                    "coefficients": [c.tolist() for c in self._ppoly.coeffs]}
        if self.kind == "sampled":
            return {"kind": self.kind, "x": self._x.tolist(),
                    "values": self._values.tolist()}
        if self.kind == "lebesgue_multiple":
            return {"kind": self.kind, "c": self.c}
        return {"kind": self.kind}

    @classmethod
    def from_dict(cls, d):
        kind = d["kind"]
        if kind == "piecewise_polynomial":
            return cls.piecewise(d["breakpoints"], d["coefficients"])
        if kind == "sampled":
            return cls.sampled(d["x"], d["values"])
        if kind == "lebesgue_multiple":
            return cls.lebesgue(d["c"])
        if kind == "poisson":
            return cls.poisson()
        raise InvalidMeasureError(f"unknown density kind {kind!r}")


@dataclass(frozen=True)
class MeasureSpec:
    point_masses: tuple = ()
    densities: tuple = ()
    lebesgue_coefficient: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "point_masses", tuple(self.point_masses))
        object.__setattr__(self, "densities", tuple(self.densities))
        locs = [p.xi for p in self.point_masses]
        if len(set(locs)) != len(locs):
            raise InvalidMeasureError("point-mass locations must be pairwise distinct")
        if self.lebesgue_coefficient < 0:
            raise InvalidMeasureError("lebesgue coefficient must be >= 0")

    @classmethod
    def delta(cls, xi, m=1.0):
        return cls(point_masses=(PointMass(xi, m),))

    @property
    def is_zero(self):
        return (not self.point_masses
                and not self.densities
                and self.lebesgue_coefficient == 0.0)

    @property
    def is_compact(self):
        return (self.lebesgue_coefficient == 0.0
                and all(d.is_compact for d in self.densities))

    def __add__(self, other):
        masses = {}
        for p in self.point_masses + other.point_masses:
            masses[p.xi] = masses.get(p.xi, 0.0) + p.m
        return MeasureSpec(
            point_masses=tuple(PointMass(xi, m) for xi, m in sorted(masses.items())),
            densities=self.densities + other.densities,
            lebesgue_coefficient=self.lebesgue_coefficient + other.lebesgue_coefficient)

    def density_value(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape) + self.lebesgue_coefficient / np.pi
        for d in self.densities:
            out = out + d(x)
        return out if out.shape else float(out)

    def to_json(self):
        return json.dumps({
            "point_masses": [{"xi": p.xi, "m": p.m} for p in self.point_masses],
            "densities": [d.to_dict() for d in self.densities],
            "lebesgue": self.lebesgue_coefficient,
        }, sort_keys=True)

    def to_dict(self):
        return json.loads(self.to_json())

    @classmethod
    def from_dict(cls, d):
        return cls(
            point_masses=tuple(PointMass(p["xi"], p["m"]) for p in d.get("point_masses", [])),
            densities=tuple(DensityComponent.from_dict(x) for x in d.get("densities", [])),
            lebesgue_coefficient=d.get("lebesgue", 0.0))

    @classmethod
    def from_json(cls, s):
        return cls.from_dict(json.loads(s))


def growth_check(m: MeasureSpec) -> float:
    """Value of the growth integral 1/(1+xi^2) d mu; finite for valid measures."""
    total = sum(p.m / (1.0 + p.xi ** 2) for p in m.point_masses)
    total += m.lebesgue_coefficient
    for d in m.densities:
        total += d.growth_integral()
    if not np.isfinite(total):
        raise InvalidMeasureError("growth integral diverges")
    return float(total)


def moment(m: MeasureSpec, k: int):
    """Integral of xi^k d mu, or None when it does not converge absolutely."""
    if k < 0:
        raise ValueError("moment order must be >= 0")
    total = sum(p.m * p.xi ** k for p in m.point_masses)
    if m.lebesgue_coefficient > 0:
        return None
    for d in m.densities:
        dm = d.moment(k)
        if dm is None:
            return None
        total += dm
    return float(total)


def mass_on_interval(m: MeasureSpec, x1: float, x2: float,
                     boundary_rule: str = "open") -> float:
    """mu((x1,x2)), plus half the endpoint atoms under half-weighted-endpoints."""
    if not x1 < x2:
        raise ValueError("need x1 < x2")
    if boundary_rule not in ("open", "half-weighted-endpoints"):
        raise ValueError(f"unknown boundary rule {boundary_rule!r}")
    total = 0.0
    for p in m.point_masses:
        if x1 < p.xi < x2:
            total += p.m
        elif boundary_rule == "half-weighted-endpoints" and p.xi in (x1, x2):
            total += 0.5 * p.m
    for d in m.densities:
        total += d.mass_between(x1, x2)
    total += m.lebesgue_coefficient * (x2 - x1) / np.pi
    return float(total)
