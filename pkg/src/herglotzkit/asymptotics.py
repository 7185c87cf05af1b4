"""Asymptotic expansions at 0 and infinity, moment extraction, sum rules,
and growth classification.

Expansion coefficients are computed by the iterated-limit formulas along the
imaginary axis.  Each coefficient is extrapolated on the sub-window of the
y-ladder with the smallest Neville residual, which balances truncation error
(large y needed) against floating-point amplification (small y needed).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .herglotz import HerglotzFn, is_symmetric, upper_half_grid
from .numerics import adaptive_quad, neville_extrapolate

# a coefficient "exists" when ladder estimates agree this well and the
# imaginary part is negligible; heuristic, surfaced in the result object
EXIST_REL_TOL = 1e-5
EXIST_IMAG_TOL = 1e-7


@dataclass
class AsymptoticExpansion:
    """Expansion coefficients plus per-coefficient convergence diagnostics.

    At infinity the coefficient list is [b1, b0, b_-1, ..., b_-K]; at zero it
    is [a_-1, a0, a1, ..., aK].  `order` is the achieved order (may be lower
    than requested when a limit is non-real or fails to settle).
    """

    location: str
    order: int
    coefficients: list = field(default_factory=list)
    residual_estimates: list = field(default_factory=list)
    complete: bool = True

    def coefficient(self, index, default=None):
        """Coefficient by power index: b_index at infinity, a_index at 0."""
        if self.location == "infinity":
            pos = 1 - index
        else:
            pos = index + 1
        if 0 <= pos < len(self.coefficients):
            return self.coefficients[pos]
        return default


def _ladder_for(location):
    if location == "infinity":
        return 6.0 * np.sqrt(2.0) ** np.arange(28)
    return 0.4 / np.sqrt(2.0) ** np.arange(28)


def _windowed_limit(steps, values, sigma):
    """Limit of values(step) as step -> 0 by windowed polynomial fits.

    Wherever the expansion exists, the data is a polynomial in the step
    variable with coefficients gamma_r (sigma i)^r.  Two nested models are
    fit per ladder sub-window: all gamma_r real (the generic structure of a
    complete real expansion, lowest noise) and only gamma_0 real (deeper
    coefficients free).  The looser model decides whether a real limit
    exists at all; the stricter one supplies the value when it is
    consistent.  An unconstrained complex fit diagnoses a non-real limit.
    Returns (estimate, quality, exist_quality, unconstrained_limit,
    allreal_quality).
    """
    steps = np.asarray(steps, dtype=float)
    values = np.asarray(values, dtype=complex)
    fallback = float(np.real(values[-1]))
    best1 = (fallback, float("inf"))
    best2 = (fallback, float("inf"), None)
    n = len(steps)
    for w in (10, 12, 14, 16):
        if w > n:
            continue
        for i in range(0, n - w + 1):
            t = steps[i:i + w] / steps[i:i + w].max()
            v = values[i:i + w]
            rhs = np.concatenate([v.real, v.imag])
            for d in (5, 7, 9):
                powers = np.array([(sigma * 1j) ** r * t ** r for r in range(d + 1)]).T
                # all-real model: one real unknown per power
                if d + 1 <= 2 * w - 2:
                    design = np.vstack([powers.real, powers.imag])
                    g, *_ = np.linalg.lstsq(design, rhs, rcond=None)
                    k = d + 1
                    rms = float(np.sqrt(2.0 * w / (2.0 * w - k)
                                        * np.mean((design @ g - rhs) ** 2))) * np.sqrt(2)
                    q = rms / max(1.0, abs(g[0]))
                    if q < best1[1]:
                        best1 = (float(g[0]), q)
                # gamma_0-real model: deeper coefficients complex
                k = 2 * d + 1
                if k <= 2 * w - 2:
                    cols = [np.concatenate([np.ones(w), np.zeros(w)])]
                    for r in range(1, d + 1):
                        pr = powers[:, r]
                        cols.append(np.concatenate([pr.real, pr.imag]))
                        cols.append(np.concatenate([-pr.imag, pr.real]))
                    design = np.stack(cols, axis=1)
                    g, *_ = np.linalg.lstsq(design, rhs, rcond=None)
                    rms = float(np.sqrt(2.0 * w / (2.0 * w - k)
                                        * np.mean((design @ g - rhs) ** 2))) * np.sqrt(2)
                    q = rms / max(1.0, abs(g[0]))
                    if q < best2[1]:
                        best2 = (float(g[0]), q, (i, w, d))
    # unconstrained fit on the winning window, for the non-real diagnostic
    cu = complex(values[-1])
    if best2[2] is not None:
        i, w, d = best2[2]
        t = steps[i:i + w] / steps[i:i + w].max()
        v = values[i:i + w]
        du = min(d, w - 3)
        vand = np.vander(t, du + 1, increasing=True).astype(complex)
        coef, *_ = np.linalg.lstsq(vand, v, rcond=None)
        cu = complex(coef[0])
    if best1[1] <= max(5.0 * best2[1], 1e-14):
        est, quality = best1
    else:
        est, quality = best2[0], best2[1]
    return est, quality, best2[1], cu, best1[1]


def _expand(f: HerglotzFn, K: int, location: str, y_ladder=None) -> AsymptoticExpansion:
    if K < -1:
        raise PreconditionError("expansion order must be >= -1")
    ys = np.asarray(_ladder_for(location) if y_ladder is None else y_ladder, float)
    z = 1j * ys
    fz = np.array([f(complex(zz)) for zz in z])
    steps = 1.0 / ys if location == "infinity" else ys
    # term l has exponent e(l): infinity 1-l, zero l-1
    sigma = -1.0 if location == "infinity" else 1.0
    exps = [1 - l if location == "infinity" else l - 1 for l in range(K + 2)]
    coeffs, residuals = [], []
    partial = np.zeros_like(fz)
    complete = True
    for j, e in enumerate(exps):
        cj = (fz - partial) * z ** (-e)
        est, res, exist_q, unconstrained, allreal_q = _windowed_limit(steps, cj, sigma)
        scale = max(1.0, abs(est))
        imag_ok = (abs(unconstrained.imag) <= max(EXIST_IMAG_TOL, 1e-6 * scale)
                   or allreal_q <= EXIST_REL_TOL * scale)
        exists = (res <= EXIST_REL_TOL * scale
                  and exist_q <= EXIST_REL_TOL * scale
                  and imag_ok)
        if not exists:
            complete = False
            break
        coeffs.append(float(est))
        residuals.append(float(res))
        partial = partial + est * z ** e
    # the list [lead, next, ...] for order K holds K+2 coefficients
    achieved = len(coeffs) - 2
    exp = AsymptoticExpansion(location=location, order=achieved,
                              coefficients=coeffs, residual_estimates=residuals,
                              complete=complete and achieved == K)
    _check_sign_invariants(exp)
    return exp


def _check_sign_invariants(exp):
    if exp.location == "infinity" and exp.coefficients:
        if exp.coefficients[0] < -1e-9:
            raise PreconditionError("leading coefficient b1 must be >= 0")
        exp.coefficients[0] = max(exp.coefficients[0], 0.0)
    if exp.location == "zero" and exp.coefficients:
        if exp.coefficients[0] > 1e-9:
            raise PreconditionError("a_-1 must be <= 0 (it equals -mu({0}))")
        exp.coefficients[0] = min(exp.coefficients[0], 0.0)


def expand_at_infinity(f: HerglotzFn, K: int, y_ladder=None) -> AsymptoticExpansion:
    """Coefficients b1, b0, b_-1, ..., b_-K by iterated limits along iy."""
    return _expand(f, K, "infinity", y_ladder)


def expand_at_zero(f: HerglotzFn, K: int, y_ladder=None) -> AsymptoticExpansion:
    """Coefficients a_-1, a0, a1, ..., aK by iterated limits along iy, y->0."""
    return _expand(f, K, "zero", y_ladder)


def moments_from_expansion(e: AsymptoticExpansion, zero_expansion=None):
    """Measure moments from expansion coefficients: moment k = -b_{-k-1}.

    Entry 0 needs a_-1 from a zero expansion (sum rule n=0) and is None when
    that expansion is not supplied.
    """
    if e.location != "infinity":
        raise PreconditionError("moments come from the expansion at infinity")
    if e.order < 1:
        raise PreconditionError("need an expansion of order >= 1 for any moment")
    out = []
    if zero_expansion is not None:
        a_m1 = zero_expansion.coefficient(-1)
        out.append(a_m1 - e.coefficient(-1))
    else:
        out.append(None)
    for k in range(1, e.order):
        out.append(-e.coefficient(-k - 1))
    return out


# --- sum rules ---

@dataclass
class SumRuleResult:
    exponent: int
    value: float
    lhs_estimate: float
    rhs_closed_form: float | None
    converged: bool
    schedule_used: object
    location: str = "infinity"

    def to_dict(self):
        sched = self.schedule_used
        return {
            "exponent": self.exponent,
            "value": self.value,
            "lhs_estimate": self.lhs_estimate,
            "rhs_closed_form": self.rhs_closed_form,
            "converged": self.converged,
            "location": self.location,
            "schedule": {"y_values": list(sched.y_values),
                         "eps_values": list(sched.eps_values),
                         "extrapolation": sched.extrapolation},
        }


def _detect_spikes(f, lo, hi, y_big=0.5, y_small=0.05, max_samples=500000):
    """Candidate pole locations of f just above [lo, hi].

    Near a real pole, Im f grows like 1/y as the axis is approached, while
    a continuous background stays put; the two-height ratio separates the
    cases independently of the background level, and Lorentzian tails keep
    the ratio high at nodes within ~3 widths of the pole, so a grid at the
    larger width cannot skip over one.
    """
    spacing = min(y_small, (hi - lo) / 16.0)
    if (hi - lo) / spacing > max_samples:
        spacing = (hi - lo) / max_samples
    grid = np.arange(lo, hi + spacing, spacing)
    vb = f(grid + 1j * y_big).imag
    vs = f(grid + 1j * y_small).imag
    flag = (vs > 3.0 * np.abs(vb) + 1e-300) & (vs > 1e-12)
    flag[1:-1] &= (vs[1:-1] >= vs[:-2]) | (vs[1:-1] >= vs[2:])
    idx = np.where(flag)[0]
    if idx.size == 0:
        return grid[idx]
    # cluster contiguous flags, keep the strongest node of each cluster
    splits = np.where(np.diff(idx) > 2)[0] + 1
    peaks = []
    for group in np.split(idx, splits):
        peaks.append(grid[group[np.argmax(vs[group])]])
    return np.asarray(peaks)


def _refine_spikes(f, peaks, width0, y_target):
    """Sharpen peak locations by argmax of Im f on shrinking local grids.

    Quadrature seeds must land within ~y of a Lorentzian of width y, so the
    coarse detection grid is zoomed level by level (vectorized across all
    peaks at once).
    """
    peaks = np.asarray(peaks, dtype=float)
    if peaks.size == 0:
        return peaks
    width = width0
    while width > y_target:
        y = max(width / 6.0, y_target)
        offsets = np.linspace(-width, width, 25)
        grid = peaks[:, None] + offsets[None, :]
        v = f(grid + 1j * y).imag
        peaks = grid[np.arange(len(peaks)), np.argmax(v, axis=1)]
        width = 2.0 * width / 24.0 * 3.0  # keep next grid overlapping
    return peaks


def _weighted_window_integral(f, lo, hi, y, exponent, spikes, subtract):
    """(1/pi) integral of x^exponent Im[f(x+iy) - sum c z^e] over [lo, hi]."""
    seeds = set()
    step = max(min(1.0, (hi - lo) / 64.0), (hi - lo) / 20000.0)
    seeds.update(np.arange(lo, hi, step))
    mags = np.geomspace(max(abs(lo), 1e-12), max(abs(hi), 1e-12), 200)
    for m in mags:
        if lo <= m <= hi:
            seeds.add(m)
        if lo <= -m <= hi:
            seeds.add(-m)
    for p in spikes:
        if lo <= p <= hi:
            for k in (-32, -8, -4, -2, -1, 0, 1, 2, 4, 8, 32):
                seeds.add(min(max(p + k * y, lo), hi))

    def integrand(x):
        z = x + 1j * y
        v = f(z)
        for e, c in subtract:
            v = v - c * z ** e
        return x ** exponent * v.imag

    val, _ = adaptive_quad(integrand, lo, hi, tol=1e-10, rtol=1e-9,
                           initial_points=sorted(seeds), max_panels=200000)
    return float(np.real(val)) / np.pi


def _double_limit_integral(f, exponent, sched, sides=(-1, 1), subtract=()):
    """lim_eps lim_y of (1/pi) integral over eps<|x|<1/eps of x^exp Im f.

    `subtract` lists (exponent, coefficient) terms of f's own asymptotic
    expansion to remove from the integrand; each such term's contribution
    vanishes in the inner y-limit, but removing it up front keeps the
    pre-limit values O(1) instead of O(y/eps^p).
    """
    subtract = [(e, c) for e, c in subtract if c != 0.0]
    y_min = sched.y_values[-1]
    spikes = {}
    for s in sides:
        lo, hi = ((sched.eps_values[-1], 1.0 / sched.eps_values[-1]) if s > 0
                  else (-1.0 / sched.eps_values[-1], -sched.eps_values[-1]))
        coarse = _detect_spikes(f, lo, hi)
        spikes[s] = _refine_spikes(f, coarse, 0.25, y_min)

    def inner(eps):
        def at_y(y):
            total = 0.0
            for s in sides:
                lo, hi = (eps, 1.0 / eps) if s > 0 else (-1.0 / eps, -eps)
                if exponent < 0:
                    # keep the inner edge clear of the smoothing scale: the
                    # (eps, 3y) sliver carries O(y^r/eps^{p-1}) pre-limit
                    # junk but only O(eps^2) once 3y < eps, so clamping it
                    # leaves the iterated limit unchanged
                    lo, hi = (max(lo, 3.0 * y), hi) if s > 0 else (lo, min(hi, -3.0 * y))
                    if lo >= hi:
                        continue
                total += _weighted_window_integral(f, lo, hi, y, exponent,
                                                   spikes[s], subtract)
            return total
        est, res, _ = sched.limit(at_y, sched.y_values)
        return float(np.real(est)), float(res)

    records = [(eps,) + inner(eps) for eps in sched.eps_values]
    # drop inner limits whose own extrapolation residual flags fp-noise
    # breakdown (steep negative weights amplify roundoff at tiny eps)
    kept = [(e, v) for e, v, r in records if r <= 1e-4 * max(1.0, abs(v))]
    if not kept:
        kept = [(e, v) for e, v, r in records]
    if len(kept) == 1 or sched.extrapolation == "none":
        est = kept[-1][1]
        residual = abs(kept[-1][1] - kept[-2][1]) if len(kept) > 1 else \
            max(r for _, _, r in records)
    else:
        est, residual = neville_extrapolate([e for e, _ in kept],
                                            [v for _, v in kept])
    return float(np.real(est)), float(residual), records


def _rhs_infinity(f, n):
    inf_exp = expand_at_infinity(f, n + 1)
    if not inf_exp.complete:
        raise PreconditionError(
            f"expansion of order {n + 1} at infinity does not exist (achieved {inf_exp.order})")
    subtract = [(1 - l, c) for l, c in enumerate(inf_exp.coefficients[:n + 2])]
    if n == 0:
        zero_exp = expand_at_zero(f, -1)
        if zero_exp.order < -1:
            raise PreconditionError("a_-1 could not be extracted at z=0")
        return zero_exp.coefficient(-1) - inf_exp.coefficient(-1), subtract
    return -inf_exp.coefficient(-n - 1), subtract


def sum_rule_at_infinity(f: HerglotzFn, n: int, sched=None) -> SumRuleResult:
    """Sum rule with weight x^n: lhs integral against rhs from expansions."""
    from .boundary import LimitSchedule
    if n < 0:
        raise PreconditionError("exponent must be >= 0")
    sched = sched or LimitSchedule()
    rhs, subtract = _rhs_infinity(f, n)
    lhs, residual, _ = _double_limit_integral(f, n, sched, subtract=subtract)
    converged = abs(lhs - rhs) < 1e-3 * max(1.0, abs(rhs))
    return SumRuleResult(exponent=n, value=lhs, lhs_estimate=lhs,
                         rhs_closed_form=rhs, converged=converged,
                         schedule_used=sched, location="infinity")


def _rhs_zero(f, p):
    zero_exp = expand_at_zero(f, p - 1)
    if not zero_exp.complete:
        raise PreconditionError(
            f"expansion of order {p - 1} at zero does not exist (achieved {zero_exp.order})")
    subtract = [(l - 1, c) for l, c in enumerate(zero_exp.coefficients)]
    if p == 2:
        inf_exp = expand_at_infinity(f, -1)
        if inf_exp.order < -1:
            raise PreconditionError("b1 could not be extracted at infinity")
        return zero_exp.coefficient(1) - inf_exp.coefficient(1), subtract
    if p == 1:
        inf_exp = expand_at_infinity(f, 0)
        if not inf_exp.complete:
            raise PreconditionError("p=1 needs order-1 expansions at both 0 and infinity")
        return zero_exp.coefficient(0) - inf_exp.coefficient(0), subtract
    return zero_exp.coefficient(p - 1), subtract


def sum_rule_at_zero(f: HerglotzFn, p: int, sched=None) -> SumRuleResult:
    """Sum rule with weight x^-p near zero."""
    from .boundary import LimitSchedule
    if p < 1:
        raise PreconditionError("exponent must be >= 1")
    sched = sched or LimitSchedule()
    rhs, subtract = _rhs_zero(f, p)
    lhs, residual, _ = _double_limit_integral(f, -p, sched, subtract=subtract)
    converged = abs(lhs - rhs) < 1e-3 * max(1.0, abs(rhs))
    return SumRuleResult(exponent=p, value=lhs, lhs_estimate=lhs,
                         rhs_closed_form=rhs, converged=converged,
                         schedule_used=sched, location="zero")


def symmetric_sum_rule(f: HerglotzFn, n: int, sched=None) -> SumRuleResult:
    """(2/pi) integral over (0, inf) of Im f(x)/x^{2n} = a_{2n-1} - b_{2n-1}.

    Coefficients outside an expansion's index range count as zero.
    """
    from .boundary import LimitSchedule
    sched = sched or LimitSchedule()
    if not is_symmetric(f, upper_half_grid(64, seed=11), tol=1e-8):
        raise PreconditionError("function is not symmetric")
    k = 2 * n - 1
    a_k = b_k = 0.0
    subtract = []
    if k >= -1:
        zero_exp = expand_at_zero(f, k)
        if not zero_exp.complete:
            raise PreconditionError(f"expansion at 0 up to a_{k} does not exist")
        a_k = zero_exp.coefficient(k)
        subtract = [(l - 1, c) for l, c in enumerate(zero_exp.coefficients)]
    if k <= 1:
        inf_exp = expand_at_infinity(f, -k)
        if not inf_exp.complete:
            raise PreconditionError(f"expansion at infinity down to b_{k} does not exist")
        b_k = inf_exp.coefficient(k)
        if k < -1:
            subtract = [(1 - l, c) for l, c in enumerate(inf_exp.coefficients)]
    rhs = a_k - b_k
    lhs, residual, _ = _double_limit_integral(f, -2 * n, sched, sides=(1,),
                                              subtract=subtract)
    lhs *= 2.0
    converged = abs(lhs - rhs) < 1e-3 * max(1.0, abs(rhs))
    return SumRuleResult(exponent=2 * n, value=lhs, lhs_estimate=lhs,
                         rhs_closed_form=rhs, converged=converged,
                         schedule_used=sched, location="symmetric")


def classify_growth(f: HerglotzFn) -> dict:
    """Numeric growth tests: regularizer necessity, finite mass, limit s."""
    ys = 10.0 ** np.arange(0, 9)
    fv = np.array([f(1j * y) for y in ys])
    ratio = np.abs(fv) / ys
    weighted = ys * fv.imag
    finite_mass = bool(ratio[-1] < 1e-6 and
                       weighted[-1] < 10.0 * max(np.min(weighted[:-1]), 1e-300) + 1e-6)
    # tail increments of integral_1^inf Im f(iy)/y dy on decade blocks
    increments = []
    for lo, hi in zip(ys[:-1], ys[1:]):
        val, _ = adaptive_quad(lambda u: f(1j * np.exp(u)).imag, np.log(lo), np.log(hi),
                               tol=1e-10)
        increments.append(float(np.real(val)))
    tail = increments[-3:]
    decreasing = all(b <= 0.6 * a + 1e-12 for a, b in zip(tail, tail[1:]))
    flatgrowing = all(b >= 0.9 * a for a, b in zip(tail, tail[1:])) and tail[-1] > 1e-9
    out = {"needs_regularizer": not decreasing, "finite_mass": finite_mass,
           "indeterminate": not decreasing and not flatgrowing}
    if decreasing or finite_mass:
        s, res = neville_extrapolate(1.0 / ys[3:], fv[3:])
        if res < 1e-5 * max(1.0, abs(s)) and abs(s.imag) < 1e-6:
            out["s_value"] = float(s.real)
    return out
