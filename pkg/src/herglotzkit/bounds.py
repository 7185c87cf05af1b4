"""Physical bounds for passive systems: the resistance-integral theorem,
bandwidth-resistance trade-off, the h_Delta amplitude bound, and the
metamaterial dispersion bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, PreconditionError
from .herglotz import HerglotzFn, h_delta_value, recover_a_b
from .numerics import adaptive_quad, neville_extrapolate_array


@dataclass(frozen=True)
class BandSpec:
    """Frequency band Omega = omega0 * [1 - B/2, 1 + B/2]."""

    omega0: float
    B: float

    def __post_init__(self):
        if not self.omega0 > 0:
            raise PreconditionError("omega0 must be positive")
        if not 0 < self.B < 2:
            raise PreconditionError("relative bandwidth B must lie in (0, 2)")

    @property
    def interval(self):
        return (self.omega0 * (1.0 - self.B / 2.0),
                self.omega0 * (1.0 + self.B / 2.0))

    @property
    def width(self):
        lo, hi = self.interval
        return hi - lo


@dataclass
class BoundReport:
    bound_value: float
    formula_id: str
    inputs: dict = field(default_factory=dict)
    achieved_value: float | None = None
    slack: float | None = None

    def __post_init__(self):
        if self.achieved_value is not None and self.slack is None:
            self.slack = self.achieved_value - self.bound_value

    def to_dict(self):
        out = {"bound_value": self.bound_value, "formula_id": self.formula_id,
               "inputs": self.inputs}
        if self.achieved_value is not None:
            out["achieved_value"] = self.achieved_value
            out["slack"] = self.slack
        return out


def h_delta(z, delta: float):
    """(1/pi) Log((z - Delta)/(z + Delta)); Im >= 1/2 on |z| <= Delta."""
    return h_delta_value(z, delta)


def resistance_integral_bound(C: float) -> float:
    """Value of the resistance integral of a shunt-C passive impedance.

    integral over (0, inf) of Re Z(-i omega) d omega = pi/(2C).
    """
    if not C > 0:
        raise PreconditionError("capacitance must be positive")
    return np.pi / (2.0 * C)


def bandwidth_resistance_bound(omega1: float, omega2: float, C: float) -> float:
    """Upper bound pi/(2 C (omega2-omega1)) on inf Re Z(-i omega) over the band."""
    if not 0 < omega1 < omega2:
        raise PreconditionError("need 0 < omega1 < omega2")
    if not C > 0:
        raise PreconditionError("capacitance must be positive")
    return np.pi / (2.0 * C * (omega2 - omega1))


def amplitude_lower_bound(b1: float, b1_0: float,
                          omega_interval_length: float) -> float:
    """Lower bound (b1 + b1_0) |Omega| / 2 on the sup norm of h + h0."""
    if b1 < 0 or b1_0 < 0:
        raise PreconditionError("leading coefficients must be nonnegative")
    if not omega_interval_length > 0:
        raise PreconditionError("interval length must be positive")
    return (b1 + b1_0) * omega_interval_length / 2.0


def metamaterial_bound(eps_t: float, eps_inf: float, B: float) -> float:
    """Best achievable sup-error (eps_inf - eps_t) B / (2 + B) for a passive
    material approximating a negative target permittivity over relative
    bandwidth B.
    """
    if not 0 < B < 2:
        raise PreconditionError("relative bandwidth B must lie in (0, 2)")
    if not eps_t < eps_inf:
        raise PreconditionError("need eps_t < eps_inf")
    return (eps_inf - eps_t) * B / (2.0 + B)


def _boundary_values_on_grid(f: HerglotzFn, grid,
                             y_ladder=(1e-3, 5e-4, 2.5e-4, 1.25e-4, 6.25e-5)):
    """Extrapolated boundary values of f at an array of real points."""
    grid = np.asarray(grid, dtype=float)
    vals = [f(grid + 1j * y) for y in y_ladder]
    est, residual = neville_extrapolate_array(list(y_ladder), vals)
    worst = float(np.max(residual))
    scale = float(np.max(np.abs(est))) + 1.0
    if worst > 1e-5 * scale:
        raise ConvergenceError(
            f"boundary values did not settle on the grid (residual {worst:.3g})")
    return est


def verify_amplitude_bound(h: HerglotzFn, h0_b1: float, band,
                           grid_density: int = 200) -> BoundReport:
    """Achieved sup |h(x) + h0_b1 x| on the band against the amplitude bound.

    h0 is the linear Herglotz function h0(z) = h0_b1 z, the canonical
    representative with leading coefficient h0_b1 and empty measure.
    """
    lo, hi = (band.interval if isinstance(band, BandSpec) else band)
    if not lo < hi:
        raise PreconditionError("band must be a nonempty interval")
    if grid_density < 2:
        raise PreconditionError("grid_density must be at least 2")
    _, b1 = recover_a_b(h)
    bound = amplitude_lower_bound(max(b1, 0.0), h0_b1, hi - lo)
    grid = np.linspace(lo, hi, int(grid_density))
    values = _boundary_values_on_grid(h, grid)
    achieved = float(np.max(np.abs(values + h0_b1 * grid)))
    return BoundReport(bound_value=bound, formula_id="amplitude-sup",
                       inputs={"b1": b1, "h0_b1": h0_b1, "band": [lo, hi],
                               "grid_density": int(grid_density)},
                       achieved_value=achieved)


def resistance_integral_numeric(re_z, window: float = 200.0) -> float:
    """(2/pi) integral over (0, inf) of Re Z(-i omega), window plus tail fit.

    `re_z` maps an array of angular frequencies to Re Z(-i omega).  The
    integrand of a shunt-C network decays like A/omega^2, so the tail mass
    beyond the window is estimated by fitting that decay near the edge.
    """
    if not window > 0:
        raise PreconditionError("window must be positive")
    val, _ = adaptive_quad(re_z, 0.0, window, tol=1e-10, rtol=1e-9,
                           initial_points=np.geomspace(1e-6, window, 200))
    samples = np.linspace(0.6 * window, window, 16)
    a_fit = float(np.mean(np.asarray(re_z(samples)) * samples ** 2))
    tail = a_fit / window
    return (2.0 / np.pi) * (float(np.real(val)) + tail)
