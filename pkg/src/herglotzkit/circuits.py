"""Passive one-port circuit models: impedances, the rotation between
positive-real (PR) functions and Herglotz functions, impulse responses of
passive systems, and a numerical admittance-passivity check.

A passive impulse response has the form w(t) = b delta'(t)
+ H(t) integral cos(xi t) d mu(xi); its Laplace transform Z(s) is PR and
h(z) = i Z(-i z) is a symmetric Herglotz function with the same b and mu.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PreconditionError
from .herglotz import HerglotzFn, WrappedFn, is_symmetric, upper_half_grid
from .measures import MeasureSpec
from .numerics import adaptive_quad

SERIES_RL = "series-RL"
SHUNT_C = "shunt-C-with-Z1"
CUSTOM_PR = "custom-rational-PR"


@dataclass(frozen=True)
class Circuit:
    """One-port circuit: series inductor+resistor, a capacitor shunting an
    inner impedance Z1, or an explicit rational PR impedance num(s)/den(s).
    """

    kind: str
    L: float = 0.0
    R: float = 0.0
    C: float = 0.0
    z1: "Circuit | None" = None
    num: tuple = ()
    den: tuple = ()

    def __post_init__(self):
        if self.kind not in (SERIES_RL, SHUNT_C, CUSTOM_PR):
            raise PreconditionError(f"unknown circuit kind {self.kind!r}")
        if min(self.L, self.R, self.C) < 0:
            raise PreconditionError("L, R, C must be nonnegative")
        object.__setattr__(self, "num", tuple(float(c) for c in self.num))
        object.__setattr__(self, "den", tuple(float(c) for c in self.den))
        if self.kind == SHUNT_C:
            if not self.C > 0:
                raise PreconditionError("shunt capacitance must be positive")
            z1 = self.z1 if self.z1 is not None else Circuit.series_rl(0.0, self.R)
            object.__setattr__(self, "z1", z1)
            z0 = impedance(z1, 1e-9)
            z_inf = impedance(z1, 1e9)
            if not np.isfinite(z0) or abs(z0) > 1e6:
                raise PreconditionError("inner impedance Z1(0) must be finite")
            if abs(z_inf) < 1e-6:
                raise PreconditionError("inner impedance must not vanish at infinity")
        if self.kind == CUSTOM_PR:
            if not self.num or not self.den:
                raise PreconditionError("rational circuit needs num and den coefficients")
            _check_pr(lambda s: np.polyval(self.num, s) / np.polyval(self.den, s))

    @classmethod
    def series_rl(cls, L: float, R: float):
        return cls(SERIES_RL, L=L, R=R)

    @classmethod
    def shunt_c(cls, C: float, z1: "Circuit"):
        return cls(SHUNT_C, C=C, z1=z1)

    @classmethod
    def rational(cls, num, den):
        return cls(CUSTOM_PR, num=tuple(num), den=tuple(den))

    def to_dict(self):
        out = {"kind": self.kind}
        if self.kind == SERIES_RL:
            out.update(L=self.L, R=self.R)
        elif self.kind == SHUNT_C:
            out.update(C=self.C, z1=self.z1.to_dict())
        else:
            out.update(num=list(self.num), den=list(self.den))
        return out

    @classmethod
    def from_dict(cls, d):
        kind = d["kind"]
        if kind == SERIES_RL:
            return cls.series_rl(d.get("L", 0.0), d.get("R", 0.0))
        if kind == SHUNT_C:
            return cls.shunt_c(d["C"], cls.from_dict(d["z1"]))
        return cls.rational(d["num"], d["den"])


def impedance(c: Circuit, s):
    """Input impedance Z(s) for Re s > 0 (vectorized over s)."""
    s = np.asarray(s, dtype=complex)
    if np.any(s.real <= 0):
        raise DomainError("impedance is defined for Re s > 0")
    return _impedance_raw(c, s)


def _impedance_raw(c: Circuit, s):
    if c.kind == SERIES_RL:
        out = c.L * s + c.R
    elif c.kind == SHUNT_C:
        out = 1.0 / (c.C * s + 1.0 / _impedance_raw(c.z1, s))
    else:
        out = np.polyval(c.num, s) / np.polyval(c.den, s)
    return out if out.shape else complex(out)


def frequency_resistance(c: Circuit):
    """Callable omega -> Re Z(-i omega), the resistance on the frequency
    axis, by direct analytic continuation of the rational impedance.
    """
    return lambda omega: np.real(
        _impedance_raw(c, -1j * np.asarray(omega, dtype=complex)))


def _check_pr(Z, tol: float = 1e-10):
    """Sampled PR check: Re Z >= 0 on a right-half-plane grid and Z real on
    the positive reals.
    """
    rng = np.random.default_rng(20)
    s = 10.0 ** rng.uniform(-3, 3, 512) * np.exp(
        1j * rng.uniform(-np.pi / 2 + 1e-6, np.pi / 2 - 1e-6, 512))
    vals = np.asarray(Z(s))
    if np.any(vals.real < -tol * (np.abs(vals) + 1.0)):
        raise PreconditionError("impedance is not positive-real: Re Z < 0 on C+")
    pos = 10.0 ** np.linspace(-3, 3, 64)
    real_vals = np.asarray(Z(pos + 0j))
    if np.any(np.abs(real_vals.imag) > tol * (np.abs(real_vals) + 1.0)):
        raise PreconditionError("impedance is not positive-real: not real on (0, inf)")


def pr_to_herglotz(Z) -> HerglotzFn:
    """Rotate a PR evaluator into the symmetric Herglotz function
    h(z) = i Z(-i z); the PR property is grid-checked first.
    """
    if isinstance(Z, Circuit):
        circuit = Z
        Z = lambda s: impedance(circuit, s)
    _check_pr(Z)

    def evaluate(z):
        z = np.asarray(z, dtype=complex)
        return 1j * np.asarray(Z(-1j * z))

    return WrappedFn(evaluate, label="rotated-PR")


def herglotz_to_pr(f: HerglotzFn):
    """Rotate a symmetric Herglotz function into the PR evaluator
    W(s) = f(i s) / i; symmetry is grid-checked first.
    """
    if not is_symmetric(f, upper_half_grid(64, seed=5), tol=1e-8):
        raise PreconditionError("herglotz_to_pr requires a symmetric Herglotz function")

    def Z(s):
        s = np.asarray(s, dtype=complex)
        return np.asarray(f(1j * s)) / 1j

    return Z


@dataclass(frozen=True)
class ImpulseResponse:
    """w(t) = b delta'(t) + H(t) integral cos(xi t) d mu(xi), mu finite."""

    derivative_delta_coefficient: float = 0.0
    measure: MeasureSpec = field(default_factory=MeasureSpec)

    def __post_init__(self):
        if self.derivative_delta_coefficient < 0:
            raise PreconditionError("delta' coefficient must be nonnegative")


def impulse_response_eval(ir: ImpulseResponse, t: float) -> float:
    """Regular part of the response at t > 0: integral of cos(xi t) d mu."""
    if not t > 0:
        raise PreconditionError("impulse_response_eval requires t > 0; the "
                                "delta' part at t=0 is symbolic")
    mu = ir.measure
    if mu.lebesgue_coefficient != 0.0:
        raise DomainError("cosine integral requires a finite measure")
    out = sum(p.m * np.cos(p.xi * t) for p in mu.point_masses)
    for d in mu.densities:
        if d.kind == "poisson":
            out += np.exp(-abs(t))
            continue
        lo, hi = d.support
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise DomainError("cosine integral requires compactly supported densities")
        # resolve the oscillation: at least ~20 panels per period
        n_seed = int(min(200000, max(65, 20 * t * (hi - lo) / np.pi)))
        val, _ = adaptive_quad(lambda x: d(x) * np.cos(x * t), lo, hi,
                               tol=1e-12, initial_points=np.linspace(lo, hi, n_seed))
        out += float(np.real(val))
    return float(out)


def _shunt_c_kernel(c: Circuit):
    """Regular kernel of the shunt-C circuit with resistive Z1 = R:
    Z(s) = (1/C)/(s + 1/(RC)), so w(t) = H(t) (1/C) exp(-t/(RC)).
    """
    z1 = c.z1
    if z1.kind != SERIES_RL or z1.L != 0 or not z1.R > 0:
        raise PreconditionError(
            "admittance_energy supports shunt-C circuits with resistive Z1; "
            "supply an ImpulseResponse for other inner impedances")
    a = 1.0 / (z1.R * c.C)
    return lambda t: np.exp(-a * t) / c.C


def admittance_energy(input_samples, response, T: float, dt: float) -> float:
    """Absorbed energy Re int_{-inf}^T v(t) u(t) dt with v = w * u.

    `input_samples` is u sampled at t = 0, dt, 2dt, ...; u must vanish at
    both ends (compact support).  The delta' part contributes the exact
    identity (b/2) u(T)^2 and a series resistance contributes
    R int u^2; only the regular kernel is convolved numerically.
    """
    u = np.asarray(input_samples, dtype=float)
    if not dt > 0 or u.ndim != 1 or len(u) < 2:
        raise PreconditionError("need a 1-d sample array and dt > 0")
    if abs(u[0]) > 1e-9 * (np.max(np.abs(u)) + 1e-300) or \
            abs(u[-1]) > 1e-9 * (np.max(np.abs(u)) + 1e-300):
        warnings.warn("input does not vanish at the ends; treating it as "
                      "compactly supported anyway", stacklevel=2)
    support = np.nonzero(np.abs(u) > 1e-12 * np.max(np.abs(u) + 1e-300))[0]
    if len(support) and len(support) < 1000:
        warnings.warn("input support is resolved by fewer than 1000 samples; "
                      "the convolution may be under-resolved", stacklevel=2)

    t = np.arange(len(u)) * dt
    i_T = int(np.searchsorted(t, T + 1e-15 * dt, side="right"))
    if i_T < 2:
        return 0.0
    b = 0.0
    r_series = 0.0
    kernel = None
    if isinstance(response, Circuit):
        if response.kind == SERIES_RL:
            b, r_series = response.L, response.R
        elif response.kind == SHUNT_C:
            kernel = _shunt_c_kernel(response)
        else:
            raise PreconditionError(
                "admittance_energy needs an ImpulseResponse for rational circuits")
    elif isinstance(response, ImpulseResponse):
        b = response.derivative_delta_coefficient
        mu = response.measure
        if not mu.is_zero:
            kernel = lambda tau: np.array([impulse_response_eval(
                ImpulseResponse(0.0, mu), max(x, 1e-300)) for x in np.atleast_1d(tau)])
    else:
        raise PreconditionError("response must be a Circuit or ImpulseResponse")

    total = 0.5 * b * u[min(i_T, len(u)) - 1] ** 2
    w_trap = np.ones(i_T)
    w_trap[0] = w_trap[-1] = 0.5
    u_head = u[:i_T]
    if r_series:
        total += r_series * dt * float(np.sum(w_trap * u_head ** 2))
    if kernel is not None:
        k = np.asarray(kernel(t[:i_T]), dtype=float)
        k[0] *= 0.5  # trapezoid in the convolution variable
        v = np.convolve(k, u[:i_T])[:i_T] * dt
        total += dt * float(np.sum(w_trap * v * u_head))
    return float(total)
