import numpy as np
import pytest
from scipy.integrate import quad

from herglotzkit.boundary import (LimitSchedule, analytic_continuation_below,
                                  boundary_limit, boundary_value,
                                  fn_from_density_callable, point_mass_at,
                                  pv_integral, stieltjes_invert)
from herglotzkit.errors import ConvergenceError, DomainError, PreconditionError
from herglotzkit.herglotz import (CanonicalFn, HerglotzRep, NamedFn,
                                  neg_inverse_fn)
from herglotzkit.measures import DensityComponent, MeasureSpec, PointMass


class TestLimitSchedule:
    def test_defaults(self):
        s = LimitSchedule()
        assert s.y_values[0] == pytest.approx(0.1)
        assert len(s.y_values) == 6 and len(s.eps_values) == 4

    def test_monotonicity_enforced(self):
        with pytest.raises(PreconditionError):
            LimitSchedule(y_values=(0.1, 0.2))
        with pytest.raises(PreconditionError):
            LimitSchedule(eps_values=(0.1, -0.01))


class TestStieltjesInvert:
    def test_point_mass(self):
        assert stieltjes_invert(neg_inverse_fn(3.0), 2, 4) == pytest.approx(
            1.0, abs=1e-6)

    def test_lebesgue(self):
        assert stieltjes_invert(NamedFn("const_i"), 0, 1) == pytest.approx(
            1.0 / np.pi, abs=1e-6)

    def test_zero_measure(self):
        assert stieltjes_invert(NamedFn("identity"), -1, 1) == pytest.approx(
            0.0, abs=1e-9)


class TestPointMassAt:
    def test_on_support(self):
        assert point_mass_at(neg_inverse_fn(3.0), 3.0) == pytest.approx(
            1.0, abs=1e-8)

    def test_off_support(self):
        assert point_mass_at(neg_inverse_fn(3.0), 0.0) == pytest.approx(
            0.0, abs=1e-6)

    def test_scaled(self):
        f = CanonicalFn(HerglotzRep(0.0, 0.0, MeasureSpec.delta(0.0, 2.0)))
        assert point_mass_at(f, 0.0) == pytest.approx(2.0, abs=1e-8)


class TestPvIntegral:
    def test_odd_symmetry(self):
        assert pv_integral(lambda t: np.ones_like(t), 0.0, (-1, 1)) == \
            pytest.approx(0.0, abs=1e-10)

    def test_linear_numerator(self):
        assert pv_integral(lambda t: t, 0.0, (-1, 1)) == pytest.approx(
            2.0, abs=1e-9)

    def test_poisson_on_real_line(self):
        assert pv_integral(lambda t: 1.0 / (1 + t**2), 0.0) == pytest.approx(
            0.0, abs=1e-8)

    def test_singularity_outside_support(self):
        oracle, _ = quad(lambda t: 1.0 / (t - 5.0), 0, 1)
        got = pv_integral(lambda t: np.ones_like(t), 5.0, (0, 1))
        assert got == pytest.approx(oracle, abs=1e-9)

    def test_non_hoelder_divergence(self):
        # one-sided density -1/ln(t) for t in (0, 1/2], zero for t <= 0:
        # continuous at 0 but not Hoelder, and the transform at x = 0
        # diverges like -ln|ln t|; the excision ladder must not settle
        def g(t):
            t = np.asarray(t, dtype=float)
            out = np.zeros_like(t)
            inside = (t > 0) & (t <= 0.5)
            out[inside] = -1.0 / np.log(t[inside])
            return out
        with pytest.raises(ConvergenceError):
            pv_integral(g, 0.0, (-0.5, 0.5))


class TestBoundaryValue:
    def test_poisson_density_at_zero(self):
        rho = DensityComponent.poisson()
        got = boundary_value(0.0, 0.0, rho, MeasureSpec(), 0.0)
        assert got == pytest.approx(1j, abs=1e-7)

    def test_poisson_density_at_one(self):
        rho = DensityComponent.poisson()
        got = boundary_value(0.0, 0.0, rho, MeasureSpec(), 1.0)
        assert got == pytest.approx(-1.0 / (1.0 + 1j), abs=1e-7)

    def test_affine_plus_remote_atom(self):
        rho = DensityComponent.piecewise([10.0, 11.0], [[0.0]])
        extra = MeasureSpec.delta(7.0)
        got = boundary_value(1.0, 2.0, rho, extra, 3.0)
        assert got == pytest.approx(1 + 6 + (1.0 / 4.0 - 7.0 / 50.0), abs=1e-10)
        assert got.imag == pytest.approx(0.0, abs=1e-14)

    def test_imag_is_pi_rho(self):
        rho = DensityComponent.piecewise([-1.0, 1.0], [[0.25, 0.0, 0.25]])
        got = boundary_value(0.0, 0.0, rho, MeasureSpec(), 0.5)
        assert got.imag == pytest.approx(np.pi * rho(np.array([0.5]))[0],
                                         abs=1e-12)

    def test_real_part_matches_limit_from_above(self):
        # local piece variable u = x + 1 on [-1, 1]: 0.1 + 0.3 u >= 0
        rho = DensityComponent.piecewise([-1.0, 1.0], [[0.1, 0.3]])
        rep = HerglotzRep(0.2, 0.1, MeasureSpec(densities=(rho,)))
        f = CanonicalFn(rep)
        x = 0.3
        bv = boundary_value(0.2, 0.1, rho, MeasureSpec(), x)
        lim = boundary_limit(f, x)
        assert bv.real == pytest.approx(lim.real, abs=1e-6)

    def test_atom_at_x_rejected(self):
        rho = DensityComponent.piecewise([-1.0, 1.0], [[1.0]])
        with pytest.raises(DomainError):
            boundary_value(0.0, 0.0, rho, MeasureSpec.delta(0.5), 0.5)


class TestAnalyticContinuation:
    def test_poisson_function_below(self):
        f = CanonicalFn(HerglotzRep(0.0, 0.0,
                                    MeasureSpec(densities=(DensityComponent.poisson(),))))
        rho_ext = lambda z: 1.0 / (np.pi * (1 + z * z))
        got = analytic_continuation_below(rho_ext, f, -0.5j)
        assert got == pytest.approx(-1.0 / (-0.5j + 1j), abs=1e-9)
        assert got == pytest.approx(2j, abs=1e-9)

    def test_const_i_entire(self):
        f = NamedFn("const_i")
        got = analytic_continuation_below(lambda z: 1.0 / np.pi, f, -2 - 3j)
        assert got == pytest.approx(1j, abs=1e-12)

    def test_zero_density_matches_symmetric_extension(self):
        from herglotzkit.herglotz import symmetric_extension
        f = neg_inverse_fn(3.0)
        z = 1 - 2j
        got = analytic_continuation_below(lambda w: 0.0, f, z)
        assert got == pytest.approx(symmetric_extension(f, z), abs=1e-14)


class TestInversionConsistency:
    def test_density_fixture(self):
        from herglotzkit.measures import mass_on_interval
        d = DensityComponent.piecewise([-0.5, 0.5, 1.5], [[0.5, 1.0], [1.5, -1.0]])
        mu = MeasureSpec(point_masses=(PointMass(2.5, 0.7),), densities=(d,))
        f = CanonicalFn(HerglotzRep(0.0, 0.0, mu))
        for (x1, x2) in [(-1.0, 1.0), (0.0, 3.0), (2.0, 2.6)]:
            want = mass_on_interval(mu, x1, x2,
                                    boundary_rule="half-weighted-endpoints")
            assert stieltjes_invert(f, x1, x2) == pytest.approx(want, abs=1e-4)

    def test_numeric_density_wrapper(self):
        f = fn_from_density_callable(lambda t: np.exp(-t**2), (-3, 3))
        assert f(1j).imag > 0
        got = stieltjes_invert(f, -3, 3)
        oracle, _ = quad(lambda t: np.exp(-t**2), -3, 3)
        assert got == pytest.approx(oracle, abs=1e-4)
