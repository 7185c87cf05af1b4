"""Boundary behavior on the real axis: Stieltjes inversion, point-mass
extraction, principal-value integrals, and Hilbert-transform boundary values.

All double limits are realized inner-limit-first (y before epsilon) through
explicit LimitSchedule ladders, so tests can tighten them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, PreconditionError
from .herglotz import HerglotzFn, WrappedFn
from .measures import DensityComponent, MeasureSpec
from .numerics import adaptive_quad, ensure_vectorized, neville_extrapolate


def _decreasing_positive(values):
    v = tuple(float(x) for x in values)
    if not v or any(x <= 0 for x in v) or any(b >= a for a, b in zip(v, v[1:])):
        raise PreconditionError("schedule values must be strictly decreasing and positive")
    return v


@dataclass(frozen=True)
class LimitSchedule:
    y_values: tuple = tuple(10.0 ** -k for k in range(1, 7))
    eps_values: tuple = tuple(10.0 ** -k for k in range(1, 5))
    extrapolation: str = "richardson"

    def __post_init__(self):
        object.__setattr__(self, "y_values", _decreasing_positive(self.y_values))
        object.__setattr__(self, "eps_values", _decreasing_positive(self.eps_values))
        if self.extrapolation not in ("none", "richardson"):
            raise PreconditionError("extrapolation must be 'none' or 'richardson'")

    def limit(self, g, steps):
        """Extrapolated limit of g(step) over the given ladder.

        Returns (estimate, residual, records) with records as (step, value).
        """
        records = [(s, g(s)) for s in steps]
        vals = [r[1] for r in records]
        if self.extrapolation == "none":
            res = abs(vals[-1] - vals[-2]) if len(vals) > 1 else float("inf")
            return vals[-1], res, records
        est, res = neville_extrapolate(list(steps), vals)
        return est, res, records


def _find_peaks(f: HerglotzFn, x1, x2, y):
    """Locations where Im f(x+iy) spikes, to seed quadrature panels."""
    grid = np.linspace(x1, x2, 2049)
    v = f(grid + 1j * y).imag
    med = np.median(v)
    idx = np.where((v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:]) &
                   (v[1:-1] > 10 * (abs(med) + 1e-30)))[0] + 1
    return grid[idx]


def _imag_part_integral(f: HerglotzFn, x1, x2, y, peaks):
    seeds = [x1, x2]
    for p in peaks:
        for k in (-32, -8, -4, -2, -1, 0, 1, 2, 4, 8, 32):
            seeds.append(p + k * y)
    seeds += list(np.linspace(x1, x2, 65))
    val, _ = adaptive_quad(lambda x: f(x + 1j * y).imag, x1, x2,
                           tol=1e-12, initial_points=seeds)
    return float(np.real(val)) / np.pi


def stieltjes_invert(f: HerglotzFn, x1: float, x2: float,
                     sched: LimitSchedule | None = None, *,
                     full_output: bool = False):
    """mu((x1,x2)) + half the endpoint atoms, via the inversion formula.

    Estimates lim_{y->0+} (1/pi) integral of Im f(x+iy) over (x1, x2).
    """
    if not x1 < x2:
        raise PreconditionError("need x1 < x2")
    sched = sched or LimitSchedule()
    peaks = _find_peaks(f, x1, x2, sched.y_values[0])
    est, residual, records = sched.limit(
        lambda y: _imag_part_integral(f, x1, x2, y, peaks), sched.y_values)
    est = float(np.real(est))
    scale = max(1.0, abs(est))
    if residual > 1e-3 * scale or not np.isfinite(est):
        raise ConvergenceError(
            f"inversion limit did not converge (residual {residual:.3g})",
            records=records)
    if full_output:
        return est, residual, records
    return est


def point_mass_at(f: HerglotzFn, alpha: float,
                  sched: LimitSchedule | None = None) -> float:
    """mu({alpha}) = lim (alpha - z) f(z) along the ray z = alpha + iy."""
    sched = sched or LimitSchedule()
    est, residual, records = sched.limit(
        lambda y: -1j * y * f(alpha + 1j * y), sched.y_values)
    scale = max(1.0, abs(est))
    if not np.isfinite(est) or residual > 1e-5 * scale or abs(est.imag) > 1e-5 * scale:
        raise ConvergenceError(
            f"point-mass limit did not converge at {alpha}", records=records)
    return max(float(est.real), 0.0)


def pv_integral(g, singularity: float, support=(-np.inf, np.inf), *,
                tol: float = 1e-9, eps_ladder=None) -> float:
    """Principal value of g(xi)/(xi - singularity) over the support interval.

    Symmetric excision with local subtraction of g(x)/(xi - x); the excision
    radius ladder is Richardson-extrapolated.  Raises ConvergenceError when
    the ladder fails to settle (non-Hoelder behavior at the singularity).
    """
    a, b = support
    x = float(singularity)
    gv = ensure_vectorized(g)
    if not a < x < b:
        # singularity outside: plain (possibly improper) integral
        return _regular_cauchy_integral(gv, x, a, b)
    tail = 0.0
    if not np.isfinite(a) or not np.isfinite(b):
        # fold the tails |xi - x| > 1 into regular integrals
        tail = _tail_cauchy_integral(gv, x, a, b)
        a, b = max(a, x - 1.0), min(b, x + 1.0)
    gx = float(np.real(gv(np.array([x]))[0]))
    log_term = gx * np.log((b - x) / (x - a))
    if eps_ladder is None:
        eps_ladder = 0.5 * min(b - x, x - a) * 2.0 ** -np.arange(15)

    def sub(t):
        return (np.real(gv(t)) - gx) / (t - x)

    rings = []
    hi = max(b - x, x - a)
    prev = eps_ladder[0]
    base = 0.0
    if b - x > prev:
        base += adaptive_quad(sub, x + prev, b, tol=0.01 * tol)[0]
    if x - a > prev:
        base += adaptive_quad(sub, a, x - prev, tol=0.01 * tol)[0]
    estimates = [base]
    for eps in eps_ladder[1:]:
        ring = adaptive_quad(sub, x + eps, x + prev, tol=0.01 * tol)[0] \
            + adaptive_quad(sub, x - prev, x - eps, tol=0.01 * tol)[0]
        base = base + float(np.real(ring))
        estimates.append(base)
        prev = eps
    est, residual = neville_extrapolate(eps_ladder, estimates)
    est = float(np.real(est))
    if residual > max(tol, 1e-9 * abs(est)):
        raise ConvergenceError(
            f"principal value did not converge (residual {residual:.3g}); "
            "integrand may not be Hoelder at the singularity",
            records=list(zip(eps_ladder, estimates)))
    return est + log_term + tail


def _regular_cauchy_integral(gv, x, a, b):
    """Integral of g/(xi-x) when x lies outside the (possibly infinite) support."""
    if np.isfinite(a) and np.isfinite(b):
        val, _ = adaptive_quad(lambda t: np.real(gv(t)) / (t - x), a, b, tol=1e-12)
        return float(np.real(val))
    if np.isfinite(a):  # support (a, inf), x < a: xi = a + tan(u)
        def h(u):
            t = a + np.tan(u)
            return np.real(gv(t)) / (t - x) / np.cos(u) ** 2
        val, _ = adaptive_quad(h, 1e-12, np.pi / 2 - 1e-12, tol=1e-12)
        return float(np.real(val))
    def h(u):  # support (-inf, b), x > b: xi = b - tan(u)
        t = b - np.tan(u)
        return np.real(gv(t)) / (t - x) / np.cos(u) ** 2
    val, _ = adaptive_quad(h, 1e-12, np.pi / 2 - 1e-12, tol=1e-12)
    return float(np.real(val))


def _tail_cauchy_integral(gv, x, a, b, inner=1.0):
    """Integral of g/(xi-x) over the unbounded parts |xi-x| > inner."""
    total = 0.0
    if not np.isfinite(b):
        # xi = x + 1/t, t in (0, 1/inner]
        val, _ = adaptive_quad(lambda t: np.real(gv(x + 1.0 / t)) / t,
                               1e-12, 1.0 / max(inner, 1e-12), tol=1e-12)
        total += float(np.real(val))
    elif b > x + inner and inner > 0:
        val, _ = adaptive_quad(lambda t: np.real(gv(t)) / (t - x),
                               x + inner, b, tol=1e-12)
        total += float(np.real(val))
    if not np.isfinite(a):
        val, _ = adaptive_quad(lambda t: np.real(gv(x - 1.0 / t)) / t,
                               1e-12, 1.0 / max(inner, 1e-12), tol=1e-12)
        total -= float(np.real(val))
    elif a < x - inner and inner > 0:
        val, _ = adaptive_quad(lambda t: np.real(gv(t)) / (t - x),
                               a, x - inner, tol=1e-12)
        total += float(np.real(val))
    return total


def boundary_value(a: float, b: float, rho: DensityComponent,
                   extra: MeasureSpec, x: float) -> complex:
    """Continuous boundary value a + bx + PV kernel integral + i pi rho(x).

    `rho` must be locally Hoelder (here: locally continuous) at x; `extra`
    carries the rest of the measure, supported away from x.
    """
    x = float(x)
    h = 1e-7
    left, right = float(rho(np.array([x - h]))[0]), float(rho(np.array([x + h]))[0])
    center = float(rho(np.array([x]))[0])
    scale = max(1.0, abs(center))
    if abs(left - center) > 1e-3 * scale + 1e-5 or abs(right - center) > 1e-3 * scale + 1e-5:
        raise DomainError(f"density is not continuous at x={x}")
    for p in extra.point_masses:
        if abs(p.xi - x) < 1e-9:
            raise DomainError("extra measure must be supported away from x")
    for d in extra.densities:
        lo, hi = d.support
        if lo - 1e-12 <= x <= hi + 1e-12:
            raise DomainError("extra measure must be supported away from x")
    out = a + b * x
    out += float(rho.pv_cauchy(np.array([x]))[0]) - rho.compensator()
    for p in extra.point_masses:
        out += p.m * (1.0 / (p.xi - x) - p.xi / (1.0 + p.xi ** 2))
    for d in extra.densities:
        out += float(d.pv_cauchy(np.array([x]))[0]) - d.compensator()
    # a Lebesgue multiple in `extra` contributes no real part at any x
    im = np.pi * center + extra.lebesgue_coefficient
    return complex(out, im)


def boundary_limit(f: HerglotzFn, x: float,
                   sched: LimitSchedule | None = None) -> complex:
    """lim_{y->0+} f(x+iy), extrapolated; raises when it does not settle."""
    sched = sched or LimitSchedule()
    est, residual, records = sched.limit(lambda y: f(x + 1j * y), sched.y_values)
    if not np.isfinite(est) or residual > 1e-4 * max(1.0, abs(est)):
        raise ConvergenceError(
            f"boundary limit at x={x} did not converge (residual {residual:.3g})",
            records=records)
    return complex(est)


def analytic_continuation_below(rho_extension, f: HerglotzFn, z) -> complex:
    """Continuation through a density interval: conj(f(conj z)) + 2 pi i rho(z)."""
    z = complex(z)
    return complex(np.conj(f(np.conj(z))) + 2j * np.pi * rho_extension(z))


def fn_from_density_callable(rho, support, label="numeric-density") -> HerglotzFn:
    """Herglotz function of a numeric density via adaptive quadrature.

    Used for densities with no exact transform (e.g. regression fixtures).
    """
    lo, hi = support
    rv = ensure_vectorized(rho)

    def evaluate(z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.empty_like(z)
        for i, zz in enumerate(z):
            val, _ = adaptive_quad(
                lambda t: rv(t) * (1.0 / (t - zz) - t / (1.0 + t ** 2)),
                lo, hi, tol=1e-12)
            out[i] = val
        return out

    return WrappedFn(evaluate, label=label)
