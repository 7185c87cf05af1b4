"""Herglotz-Nevanlinna functions: canonical representations, closed forms,
compositions, subclass tests, and the exponential representation.

Evaluation is vectorized over numpy arrays of points in the open upper
half-plane.  Every function type serializes to a JSON expression tree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExtrapolationError, PreconditionError
from .measures import DensityComponent, MeasureSpec, PointMass
from .numerics import neville_extrapolate

IM_TOL = 1e-12


def _as_points(z):
    z = np.asarray(z, dtype=complex)
    return z, z.ndim == 0


@dataclass(frozen=True)
class HerglotzRep:
    """Canonical triple (a, b, mu) of the integral representation."""

    a: float
    b: float
    mu: MeasureSpec

    def __post_init__(self):
        if self.b < 0:
            raise PreconditionError(f"canonical coefficient b must be >= 0, got {self.b}")

    @property
    def is_constant_real(self):
        return self.b == 0.0 and self.mu.is_zero

    def eval(self, z):
        """a + bz + integral of (1/(xi-z) - xi/(1+xi^2)) d mu, z off the axis."""
        z, scalar = _as_points(z)
        out = self.a + self.b * z
        for p in self.mu.point_masses:
            out = out + p.m * (1.0 / (p.xi - z) - p.xi / (1.0 + p.xi ** 2))
        for d in self.mu.densities:
            out = out + d.cauchy(z) - d.compensator()
        if self.mu.lebesgue_coefficient:
            out = out + 1j * self.mu.lebesgue_coefficient * np.where(z.imag > 0, 1.0, -1.0)
        return complex(out) if scalar else out

    def boundary_value(self, x):
        """Continuous boundary value at real x where mu is density-only there.

        Requires every point mass to sit away from x; the imaginary part is
        pi times the total density at x.
        """
        x_arr, scalar = np.asarray(x, dtype=float), np.ndim(x) == 0
        x_arr = np.atleast_1d(x_arr)
        out = (self.a + self.b * x_arr).astype(complex)
        for p in self.mu.point_masses:
            if np.any(np.abs(p.xi - x_arr) < 1e-9):
                raise DomainError(f"point mass at {p.xi} prevents a boundary value there")
            out += p.m * (1.0 / (p.xi - x_arr) - p.xi / (1.0 + p.xi ** 2))
        for d in self.mu.densities:
            out += d.pv_cauchy(x_arr) - d.compensator()
        out += 1j * np.pi * self.mu.density_value(x_arr)
        return complex(out[0]) if scalar else out

    def to_dict(self):
        return {"a": self.a, "b": self.b, "mu": self.mu.to_dict()}

    @classmethod
    def from_dict(cls, d):
        return cls(a=d["a"], b=d["b"], mu=MeasureSpec.from_dict(d["mu"]))


class HerglotzFn:
    """Base: a map of the open upper half-plane into its closure."""

    def _eval(self, z):
        raise NotImplementedError

    def __call__(self, z):
        z, scalar = _as_points(z)
        if np.any(z.imag <= 0):
            raise DomainError("evaluation requires Im z > 0; use the boundary module on the real axis")
        out = self._eval(z)
        return complex(np.asarray(out).reshape(-1)[0]) if scalar else out

    def to_dict(self):
        raise NotImplementedError


class CanonicalFn(HerglotzFn):
    def __init__(self, rep: HerglotzRep):
        self.rep = rep

    def _eval(self, z):
        return self.rep.eval(z)

    def to_dict(self):
        return {"type": "canonical", **self.rep.to_dict()}

    def __repr__(self):
        return f"CanonicalFn(a={self.rep.a}, b={self.rep.b})"


def _tan_upper(z):
    # stable for Im z > 0: |e^{2iz}| <= 1
    w = np.exp(2j * z)
    return -1j * (w - 1.0) / (w + 1.0)


def h_delta_value(z, delta):
    """(1/pi) Log((z-delta)/(z+delta)), principal branch; Herglotz for delta>0."""
    if delta <= 0:
        raise PreconditionError("delta must be > 0")
    z = np.asarray(z, dtype=complex)
    ratio = (z - delta) / (z + delta)
    # for Im z >= 0 the ratio avoids the positive-real branch issue only up
    # to the segment [-delta, delta], where the principal Log gives i pi
    out = np.log(ratio) / np.pi
    return out


_NAMED = {
    "identity": lambda z, p: z,
    "const_i": lambda z, p: np.full_like(z, 1j),
    "tan": lambda z, p: _tan_upper(z),
    "log": lambda z, p: np.log(z),
    "sqrt": lambda z, p: np.sqrt(z),
    "neg_inverse": lambda z, p: -1.0 / (z - p["alpha"]),
    "h_delta": lambda z, p: h_delta_value(z, p["delta"]),
}


class NamedFn(HerglotzFn):
    def __init__(self, name, **params):
        if name not in _NAMED:
            raise PreconditionError(f"unknown closed form {name!r}")
        self.name = name
        self.params = params

    def _eval(self, z):
        return _NAMED[self.name](z, self.params)

    def to_dict(self):
        return {"type": "named", "name": self.name, **self.params}

    def __repr__(self):
        return f"NamedFn({self.name!r}, {self.params})"


class Composition(HerglotzFn):
    def __init__(self, outer: HerglotzFn, inner: HerglotzFn):
        self.outer = outer
        self.inner = inner

    def _eval(self, z):
        return self.outer._eval(self.inner._eval(z))

    def to_dict(self):
        return {"type": "compose", "outer": self.outer.to_dict(),
                "inner": self.inner.to_dict()}


class SumFn(HerglotzFn):
    """Pointwise sum of Herglotz-Nevanlinna functions (again Herglotz)."""

    def __init__(self, *terms):
        self.terms = terms

    def _eval(self, z):
        out = np.zeros_like(np.asarray(z, dtype=complex))
        for t in self.terms:
            out = out + t._eval(z)
        return out

    def to_dict(self):
        return {"type": "sum", "terms": [t.to_dict() for t in self.terms]}


class SymmetrizedStieltjes(HerglotzFn):
    """z -> z h(z^2) for a Stieltjes function h; always symmetric."""

    def __init__(self, stieltjes: HerglotzFn):
        self.stieltjes = stieltjes

    def _eval(self, z):
        w = np.asarray(z, dtype=complex) ** 2
        out = np.empty_like(w)
        upper = w.imag > 0
        lower = w.imag < 0
        axis = ~upper & ~lower
        if upper.any():
            out[upper] = self.stieltjes._eval(w[upper])
        if lower.any():
            # Stieltjes functions are analytic off [0, inf): symmetric extension
            out[lower] = np.conj(self.stieltjes._eval(np.conj(w[lower])))
        if axis.any():
            # z on the imaginary axis: w real and <= 0, take the limit from above
            out[axis] = self.stieltjes._eval(w[axis] + 1e-14j)
        return z * out

    def to_dict(self):
        return {"type": "stieltjes_symmetrized", "inner": self.stieltjes.to_dict()}


class WrappedFn(HerglotzFn):
    """Adapter around a plain evaluator; not JSON-serializable."""

    def __init__(self, func, label="wrapped"):
        self.func = func
        self.label = label

    def _eval(self, z):
        return self.func(z)

    def to_dict(self):
        raise PreconditionError(f"{self.label} function has no serial form")


def fn_from_dict(d) -> HerglotzFn:
    t = d["type"]
    if t == "canonical":
        return CanonicalFn(HerglotzRep.from_dict(d))
    if t == "named":
        params = {k: v for k, v in d.items() if k not in ("type", "name")}
        return NamedFn(d["name"], **params)
    if t == "compose":
        return Composition(fn_from_dict(d["outer"]), fn_from_dict(d["inner"]))
    if t == "sum":
        return SumFn(*[fn_from_dict(x) for x in d["terms"]])
    if t == "stieltjes_symmetrized":
        return SymmetrizedStieltjes(fn_from_dict(d["inner"]))
    if t == "pr_rotation":
        from .circuits import Circuit, pr_to_herglotz
        return pr_to_herglotz(Circuit.from_dict(d["circuit"]))
    raise PreconditionError(f"unknown function node type {t!r}")


# --- operations ---

def eval_fn(f: HerglotzFn, z) -> complex:
    """Evaluate f at z with Im z > 0."""
    return f(z)


def eval_finite_form(a: float, b: float, sigma: MeasureSpec, z) -> complex:
    """a + bz + integral of (1+xi z)/(xi-z) d sigma, for finite sigma, Im z != 0."""
    from .measures import moment as measure_moment
    total_mass = measure_moment(sigma, 0)
    if total_mass is None:
        raise PreconditionError("finite-form representation needs a finite measure")
    z, scalar = _as_points(z)
    if np.any(z.imag == 0):
        raise DomainError("finite form requires Im z != 0")
    cauchy = np.zeros_like(z)
    for p in sigma.point_masses:
        cauchy = cauchy + p.m / (p.xi - z)
    for d in sigma.densities:
        cauchy = cauchy + d.cauchy(z)
    # (1+xi z)/(xi-z) = z + (1+z^2)/(xi-z)
    out = a + b * z + z * total_mass + (1.0 + z ** 2) * cauchy
    return complex(out) if scalar else out


def recover_a_b(f: HerglotzFn, y_ladder=(1e2, 1e3, 1e4, 1e5),
                rel_tol: float = 1e-6) -> tuple[float, float]:
    """(a, b) = (Re f(i), lim f(iy)/(iy)) with Richardson on the y-ladder."""
    a = float(np.real(f(1j)))
    ys = np.asarray(y_ladder, dtype=float)
    ratios = np.array([f(1j * y) / (1j * y) for y in ys])
    est, residual = neville_extrapolate(1.0 / ys, ratios)
    scale = max(1.0, abs(est))
    if residual > rel_tol * scale or abs(est.imag) > rel_tol * scale:
        raise ExtrapolationError(
            "b-limit did not converge on the imaginary-axis ladder",
            records=list(zip(ys, ratios)))
    b = max(float(est.real), 0.0)
    return a, b


def symmetric_extension(f: HerglotzFn, z) -> complex:
    """conj(f(conj z)) for Im z < 0."""
    z, scalar = _as_points(z)
    if np.any(z.imag >= 0):
        raise DomainError("symmetric extension is for Im z < 0")
    out = np.conj(f(np.conj(z)))
    return complex(out) if scalar else out


def is_symmetric(f: HerglotzFn, grid, tol: float = 1e-9) -> bool:
    """True iff f(-conj z) = -conj(f(z)) on every grid point."""
    grid = np.asarray(grid, dtype=complex)
    if grid.size == 0:
        raise PreconditionError("grid must be non-empty")
    lhs = f(-np.conj(grid))
    rhs = -np.conj(f(grid))
    return bool(np.max(np.abs(lhs - rhs)) <= tol)


def _boundary_limit_from_above(f, x, y_ladder=None):
    if y_ladder is None:
        y_ladder = 1e-2 * 4.0 ** -np.arange(7)
    vals = [f(complex(x, y)) for y in y_ladder]
    est, _ = neville_extrapolate(y_ladder, vals)
    return est


def is_stieltjes(f: HerglotzFn, grid, neg_axis_grid, tol: float = 1e-9) -> bool:
    """Numerical Stieltjes test: Im f >= 0, Im(z f) >= 0, f >= 0 on (-inf, 0)."""
    grid = np.asarray(grid, dtype=complex)
    neg = np.asarray(neg_axis_grid, dtype=float)
    if grid.size == 0 or neg.size == 0:
        raise PreconditionError("grids must be non-empty")
    if np.any(neg >= 0):
        raise PreconditionError("neg_axis_grid must contain negative reals only")
    fz = f(grid)
    if np.min(fz.imag) < -tol:
        return False
    if np.min((grid * fz).imag) < -tol:
        return False
    for x in neg:
        val = _boundary_limit_from_above(f, x)
        if val.real < -tol or abs(val.imag) > 1e-6:
            return False
    return True


def symmetric_from_stieltjes(h: HerglotzFn, grid=None, neg_axis_grid=None) -> HerglotzFn:
    """Build the symmetric function z -> z h(z^2) from a Stieltjes function."""
    if grid is None:
        rng = np.random.default_rng(7)
        grid = rng.uniform(-3, 3, 32) + 1j * rng.uniform(0.05, 3, 32)
    if neg_axis_grid is None:
        neg_axis_grid = [-0.5, -1.0, -2.0, -5.0]
    if not is_stieltjes(h, grid, neg_axis_grid):
        raise PreconditionError("input fails the Stieltjes test")
    return SymmetrizedStieltjes(h)


def exp_representation(gamma: float, theta: DensityComponent, z) -> complex:
    """exp(gamma + integral of kernel against theta), with 0 <= theta <= 1."""
    lo, hi = theta.support
    if np.isfinite(lo) and np.isfinite(hi):
        sample = np.linspace(lo, hi, 2049)
    else:
        sample = np.tan(np.linspace(-np.pi / 2 + 1e-3, np.pi / 2 - 1e-3, 2049))
    vals = theta(sample)
    if np.min(vals) < -1e-12 or np.max(vals) > 1.0 + 1e-12:
        raise PreconditionError("exponential representation needs 0 <= theta <= 1")
    z, scalar = _as_points(z)
    if np.any(z.imag <= 0):
        raise DomainError("evaluation requires Im z > 0")
    out = np.exp(gamma + theta.cauchy(z) - theta.compensator())
    return complex(out) if scalar else out


def compose(f: HerglotzFn, g: HerglotzFn) -> HerglotzFn:
    """The composition z -> f(g(z)); rejects real-constant inner functions."""
    probes = np.array([0.3 + 0.7j, -1.1 + 0.4j, 2.0 + 2.5j])
    gv = g(probes)
    if np.ptp(gv.real) < 1e-14 and np.ptp(gv.imag) < 1e-14 and abs(gv[0].imag) < 1e-14:
        raise PreconditionError("inner function is a real constant; composition leaves the domain")
    return Composition(f, g)


def upper_half_grid(n: int, seed: int = 0, re_range=(-5.0, 5.0),
                    im_range=(1e-3, 5.0)) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return (rng.uniform(*re_range, n) + 1j * rng.uniform(*im_range, n))


def herglotz_positivity(f: HerglotzFn, n: int = 1000, seed: int = 0,
                        tol: float = IM_TOL) -> bool:
    """Im f >= -tol on a random upper-half-plane grid."""
    grid = upper_half_grid(n, seed)
    return bool(np.min(f(grid).imag) >= -tol)


# convenient prebuilt functions used across tests and the CLI
def identity_fn():
    return NamedFn("identity")


def tan_fn():
    return NamedFn("tan")


def const_i_fn():
    return NamedFn("const_i")


def neg_inverse_fn(alpha: float):
    return NamedFn("neg_inverse", alpha=alpha)
