"""Passive approximation as a convex program: fit a target response on a
band Omega by the boundary values of a spline-density Herglotz ansatz,
minimizing a weighted L^p error over the nonnegative coefficients.

The residual at each sample is affine in (zeta_1..zeta_N, zeta_0, b), so
p = infinity reduces to a linear program (complex moduli approximated by a
regular K-gon of half-plane cuts) and p = 2 to nonnegative least squares.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog, nnls

from .bounds import BoundReport, metamaterial_bound
from .errors import ConvergenceError, PreconditionError
from .splinehilbert import DensityAnsatz, SplineBasis

WEIGHTS = ("unit", "inverse-x")


def _chebyshev_samples(intervals, total):
    """Chebyshev-clustered sample points, endpoints included, allocated to
    intervals proportionally to their length.
    """
    lengths = np.array([hi - lo for lo, hi in intervals])
    counts = np.maximum(2, np.round(total * lengths / lengths.sum()).astype(int))
    xs, quad = [], []
    for (lo, hi), n in zip(intervals, counts):
        theta = np.pi * np.arange(n) / (n - 1)
        x = 0.5 * (lo + hi) - 0.5 * (hi - lo) * np.cos(theta)
        xs.append(x)
        # trapezoid weights on the clustered grid, for the p=2 quadrature
        q = np.empty(n)
        q[1:-1] = 0.5 * (x[2:] - x[:-2])
        q[0] = 0.5 * (x[1] - x[0])
        q[-1] = 0.5 * (x[-1] - x[-2])
        quad.append(q)
    return np.concatenate(xs), np.concatenate(quad)


def default_basis(intervals, order: int = 3, num_functions: int = 25,
                  margin: float = 0.1) -> SplineBasis:
    """Spline basis on a neighborhood U of Omega with a relative margin."""
    lo = min(i[0] for i in intervals)
    hi = max(i[1] for i in intervals)
    pad = margin * (hi - lo)
    u_lo = lo - pad
    if lo > 0:
        u_lo = max(u_lo, 0.5 * lo)  # keep U away from the origin
    return SplineBasis.uniform(order, u_lo, hi + pad, num_functions)


class ApproxProblem:
    """Weighted L^p approximation of a sampled target F on Omega by the
    boundary values of a passive spline ansatz.
    """

    def __init__(self, omega, target, *, weight: str = "unit", p=np.inf,
                 basis: SplineBasis | None = None, sample_count: int = 200):
        intervals = [(float(lo), float(hi)) for lo, hi in
                     (omega if hasattr(omega[0], "__len__") else [omega])]
        for lo, hi in intervals:
            if not lo < hi:
                raise PreconditionError("omega intervals must be nondegenerate")
            if lo <= 0 <= hi:
                raise PreconditionError("omega must not contain x = 0")
        if weight not in WEIGHTS:
            raise PreconditionError(f"weight must be one of {WEIGHTS}")
        if p not in (2, np.inf, "inf"):
            raise PreconditionError("p must be 2 or inf")
        if sample_count < 2 * len(intervals):
            raise PreconditionError("sample_count too small for omega")
        self.omega = intervals
        self.weight = weight
        self.p = np.inf if p == "inf" else p
        self.basis = basis if basis is not None else default_basis(intervals)
        self.sample_count = int(sample_count)
        self.samples, self.quad_weights = _chebyshev_samples(intervals, sample_count)
        if callable(target):
            self.target_values = np.asarray(target(self.samples), dtype=complex)
        else:
            self.target_values = np.asarray(target, dtype=complex)
        if self.target_values.shape != self.samples.shape:
            raise PreconditionError("target must map the sample grid to complex values")
        self._system = None

    @property
    def sample_weights(self):
        if self.weight == "inverse-x":
            return 1.0 / np.abs(self.samples)
        return np.ones_like(self.samples)

    def to_dict(self):
        return {"omega": [list(i) for i in self.omega], "weight": self.weight,
                "p": "inf" if self.p == np.inf else 2,
                "basis": self.basis.to_dict(), "sample_count": self.sample_count,
                "samples": self.samples.tolist(),
                "target_re": self.target_values.real.tolist(),
                "target_im": self.target_values.imag.tolist()}

    @classmethod
    def from_dict(cls, d):
        prob = cls(d["omega"],
                   lambda x: np.interp(x, d["samples"], d["target_re"])
                   + 1j * np.interp(x, d["samples"], d["target_im"]),
                   weight=d.get("weight", "unit"), p=d.get("p", "inf"),
                   basis=SplineBasis.from_dict(d["basis"]) if "basis" in d else None,
                   sample_count=d.get("sample_count", 200))
        return prob


def assemble(problem: ApproxProblem):
    """Affine residual system: r = (A_re v + c_re) + i (A_im v + c_im) with
    variables v = (zeta_1..zeta_N, zeta_0, b).  Cached on the problem.
    """
    if problem._system is not None:
        return problem._system
    x = problem.samples
    N = problem.basis.N
    a_re = np.zeros((len(x), N + 2))
    a_im = np.zeros((len(x), N + 2))
    for n in range(1, N + 1):
        pn = problem.basis.function(n)
        a_im[:, n - 1] = pn(x) + pn(-x)
        a_re[:, n - 1] = (pn.pv_cauchy(x) - pn.pv_cauchy(-x)) / np.pi
    a_re[:, N] = -1.0 / x          # zeta_0
    a_re[:, N + 1] = x             # b
    c_re = -problem.target_values.real
    c_im = -problem.target_values.imag
    problem._system = (a_re, a_im, c_re, c_im)
    return problem._system


def residuals_of(problem: ApproxProblem, v):
    a_re, a_im, c_re, c_im = assemble(problem)
    v = np.asarray(v, dtype=float)
    return (a_re @ v + c_re) + 1j * (a_im @ v + c_im)


def error_norm(residuals, weights, p, quad_weights=None):
    """Discrete weighted p-norm: max w|r| for p=inf, quadrature-weighted
    root-sum-square for p=2.
    """
    r = np.abs(np.asarray(residuals)) * np.asarray(weights)
    if p == np.inf or p == "inf":
        return float(np.max(r)) if len(r) else 0.0
    q = np.ones_like(r) if quad_weights is None else np.asarray(quad_weights)
    return float(np.sqrt(np.sum(q * r ** 2)))


@dataclass
class ApproxSolution:
    coefficients: DensityAnsatz
    achieved_error: float
    residuals: np.ndarray
    solver_status: str
    kkt_residual: float
    extras: dict = field(default_factory=dict)

    def to_dict(self):
        return {"coefficients": self.coefficients.to_dict(),
                "achieved_error": self.achieved_error,
                "residuals_re": np.real(self.residuals).tolist(),
                "residuals_im": np.imag(self.residuals).tolist(),
                "solver_status": self.solver_status,
                "kkt_residual": self.kkt_residual}


def _solve_inf(problem, kgon, tol, maxiter):
    a_re, a_im, c_re, c_im = assemble(problem)
    w = problem.sample_weights
    m, nv = a_re.shape
    theta = 2.0 * np.pi * np.arange(kgon) / kgon
    # w_i (cos t_k Re r_i + sin t_k Im r_i) <= t  for all i, k
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    rows = (cos_t[:, None, None] * a_re[None, :, :]
            + sin_t[:, None, None] * a_im[None, :, :]) * w[None, :, None]
    rhs = -(cos_t[:, None] * c_re[None, :] + sin_t[:, None] * c_im[None, :]) * w[None, :]
    a_ub = np.concatenate([rows.reshape(kgon * m, nv),
                           -np.ones((kgon * m, 1))], axis=1)
    c = np.zeros(nv + 1)
    c[-1] = 1.0
    res = linprog(c, A_ub=a_ub, b_ub=rhs.ravel(), bounds=[(0, None)] * (nv + 1),
                  method="highs-ipm",
                  options={"ipm_optimality_tolerance": tol, "maxiter": maxiter})
    if res.status == 0:
        status = "optimal"
    elif res.status == 1:
        status = "max-iter"
    else:
        status = "infeasible-numerics"
    if res.x is None:
        raise ConvergenceError(f"linear program failed: {res.message}")
    v, t = res.x[:-1], res.x[-1]
    return np.maximum(v, 0.0), t, status


def _solve_2(problem, tol):
    a_re, a_im, c_re, c_im = assemble(problem)
    w = problem.sample_weights * np.sqrt(problem.quad_weights)
    big = np.concatenate([a_re * w[:, None], a_im * w[:, None]])
    d = -np.concatenate([c_re * w, c_im * w])
    sv = np.linalg.svd(big, compute_uv=False)
    status = "optimal"
    if big.shape[0] < big.shape[1] or sv[-1] < 1e-12 * sv[0]:
        warnings.warn("rank-deficient least-squares system; adding ridge 1e-12",
                      stacklevel=3)
        big = np.concatenate([big, np.sqrt(1e-12) * np.eye(big.shape[1])])
        d = np.concatenate([d, np.zeros(big.shape[1])])
    v, _ = nnls(big, d)
    # KKT: gradient g = B^T(Bv - d); g_i = 0 where v_i > 0, g_i >= 0 at bounds
    g = big.T @ (big @ v - d)
    active = v > 0
    kkt = max(float(np.max(np.abs(g[active]), initial=0.0)),
              float(np.max(-g[~active], initial=0.0)))
    if kkt > max(tol, 1e-9) * (np.linalg.norm(big.T @ d) + 1.0):
        status = "max-iter"
    return v, kkt, status


def solve(problem: ApproxProblem, *, kgon: int = 64, tol: float = 1e-8,
          maxiter: int = 20000) -> ApproxSolution:
    """Minimize the weighted L^p error over nonnegative ansatz coefficients.

    p = inf: epigraph linear program with a kgon-sided polyhedral modulus
    (relative modulus error 1 - cos(pi/kgon), < 0.12% at kgon = 64), solved
    by an interior-point method.  p = 2: active-set nonnegative least squares.
    """
    if problem.p == np.inf:
        v, t, status = _solve_inf(problem, kgon, tol, maxiter)
        r = residuals_of(problem, v)
        achieved = error_norm(r, problem.sample_weights, np.inf)
        kkt = abs(achieved - t)
    else:
        v, kkt, status = _solve_2(problem, tol)
        r = residuals_of(problem, v)
        achieved = error_norm(r, problem.sample_weights, 2, problem.quad_weights)
    N = problem.basis.N
    ansatz = DensityAnsatz(problem.basis, v[:N], float(v[N]), float(v[N + 1]))
    return ApproxSolution(coefficients=ansatz, achieved_error=achieved,
                          residuals=r, solver_status=status, kkt_residual=kkt)


def bound_gap_report(solution: ApproxSolution, problem: ApproxProblem) -> BoundReport:
    """Compare the achieved sup error of a metamaterial-style fit (target
    F(x) = x eps_t, inverse-x weight, single band) against the passive bound
    (eps_inf - eps_t) B / (2 + B) with eps_inf the solved slope b.
    """
    if problem.weight != "inverse-x" or len(problem.omega) != 1:
        raise PreconditionError(
            "bound_gap_report requires a single band with inverse-x weight")
    x = problem.samples
    ratios = problem.target_values / x
    eps_t = float(np.mean(ratios.real))
    if np.max(np.abs(ratios - eps_t)) > 1e-8 * (abs(eps_t) + 1.0):
        raise PreconditionError(
            "bound_gap_report requires a target of the form F(x) = x * eps_t")
    lo, hi = problem.omega[0]
    omega0 = 0.5 * (lo + hi)
    B = (hi - lo) / omega0
    eps_inf = solution.coefficients.b
    bound = metamaterial_bound(eps_t, eps_inf, B)
    return BoundReport(bound_value=bound, formula_id="metamaterial-dispersion",
                       inputs={"eps_t": eps_t, "eps_inf": eps_inf, "B": B,
                               "omega0": omega0},
                       achieved_value=solution.achieved_error)
