import numpy as np
import pytest

from herglotzkit.boundary import pv_integral
from herglotzkit.errors import DomainError, PreconditionError
from herglotzkit.splinehilbert import (DensityAnsatz, SplineBasis, ansatz_as_herglotz,
                                       ansatz_imag, ansatz_real, bspline_eval,
                                       bspline_hilbert)
from herglotzkit.herglotz import upper_half_grid


class TestSplineBasis:
    def test_hat_function_values(self):
        basis = SplineBasis(2, [0.0, 1.0, 2.0])
        assert basis.N == 1
        assert bspline_eval(basis, 1, 1.0) == pytest.approx(1.0, abs=1e-13)
        assert bspline_eval(basis, 1, 0.5) == pytest.approx(0.5, abs=1e-13)
        assert bspline_eval(basis, 1, 2.5) == 0.0

    def test_quadratic_peak(self):
        basis = SplineBasis(3, [0.0, 1.0, 2.0, 3.0])
        assert bspline_eval(basis, 1, 1.5) == pytest.approx(0.75, abs=1e-13)

    def test_partition_of_unity(self):
        basis = SplineBasis.uniform(4, -2.0, 3.0, 12)
        lo, hi = basis.interior_span
        x = np.linspace(lo, hi, 400)
        total = sum(bspline_eval(basis, n, x) for n in range(1, basis.N + 1))
        assert np.max(np.abs(total - 1.0)) < 1e-12

    def test_validation(self):
        with pytest.raises(PreconditionError):
            SplineBasis(1, [0.0, 1.0, 2.0])
        with pytest.raises(PreconditionError):
            SplineBasis(2, [0.0, 1.0, 1.0])
        with pytest.raises(PreconditionError):
            SplineBasis(3, [0.0, 1.0, 2.0])
        with pytest.raises(PreconditionError):
            SplineBasis(2, [0.0, 1.0, 2.0]).function(2)

    def test_round_trip(self):
        basis = SplineBasis(3, [0.0, 0.5, 1.5, 2.0, 4.0])
        back = SplineBasis.from_dict(basis.to_dict())
        x = np.linspace(0, 4, 50)
        for n in range(1, basis.N + 1):
            np.testing.assert_allclose(bspline_eval(back, n, x),
                                       bspline_eval(basis, n, x), atol=1e-14)


class TestBsplineHilbert:
    def test_matches_pv_quadrature_off_support(self):
        basis = SplineBasis(3, [0.0, 1.0, 2.5, 3.0, 4.0])
        for n in (1, 2):
            got = bspline_hilbert(basis, n, -10.0)
            want = pv_integral(lambda t: bspline_eval(basis, n, t), -10.0,
                               basis.support)
            assert got == pytest.approx(want, abs=1e-10)

    def test_matches_pv_quadrature_on_support(self):
        rng = np.random.default_rng(12)
        for order in (2, 3, 4):
            bp = np.cumsum(rng.uniform(0.3, 1.2, order + 3)) + 0.5
            basis = SplineBasis(order, bp)
            n = int(rng.integers(1, basis.N + 1))
            x = float(rng.uniform(bp[0], bp[-1]))
            got = bspline_hilbert(basis, n, x)
            want = pv_integral(lambda t: bspline_eval(basis, n, t), x,
                               basis.support)
            assert got == pytest.approx(want, abs=1e-8)

    def test_far_field_decay(self):
        # phat_n(x) ~ -(mass of p_n)/x far from the support
        basis = SplineBasis(3, [0.0, 1.0, 2.0, 3.0])
        mass = np.trapezoid(bspline_eval(basis, 1, np.linspace(0, 3, 4001)),
                            np.linspace(0, 3, 4001))
        x = 1e3
        assert bspline_hilbert(basis, 1, x) == pytest.approx(-mass / x, rel=2e-3)

    def test_finite_at_breakpoints(self):
        basis = SplineBasis(2, [0.0, 1.0, 2.0])
        vals = bspline_hilbert(basis, 1, np.array([0.0, 1.0, 2.0]))
        assert np.all(np.isfinite(vals))


def moderate_ansatz():
    basis = SplineBasis.uniform(3, 0.5, 3.5, 6)
    return DensityAnsatz(basis, zeta=(0.2, 0.5, 0.3, 0.1, 0.4, 0.25),
                         zeta0=0.7, b=0.3)


class TestDensityAnsatz:
    def test_validation(self):
        basis = SplineBasis(2, [0.0, 1.0, 2.0])
        with pytest.raises(PreconditionError):
            DensityAnsatz(basis, zeta=(1.0, 2.0))
        with pytest.raises(PreconditionError):
            DensityAnsatz(basis, zeta=(-1.0,))
        with pytest.raises(PreconditionError):
            DensityAnsatz(basis, zeta=(1.0,), zeta0=-0.5)

    def test_round_trip(self):
        d = moderate_ansatz()
        back = DensityAnsatz.from_dict(d.to_dict())
        x = np.linspace(-4, 4, 41)
        np.testing.assert_allclose(ansatz_imag(back, x), ansatz_imag(d, x),
                                   atol=1e-14)
        assert back.zeta0 == d.zeta0 and back.b == d.b

    def test_imag_even_and_nonnegative(self):
        d = moderate_ansatz()
        x = np.linspace(-5, 5, 501)
        vals = ansatz_imag(d, x)
        np.testing.assert_allclose(vals, ansatz_imag(d, -x), atol=1e-14)
        assert np.min(vals) >= 0.0

    def test_imag_linearity(self):
        basis = SplineBasis.uniform(3, 0.0, 2.0, 4)
        d1 = DensityAnsatz(basis, zeta=(1.0, 0.0, 0.0, 0.0))
        d2 = DensityAnsatz(basis, zeta=(0.0, 2.0, 0.0, 0.0))
        d12 = DensityAnsatz(basis, zeta=(1.0, 2.0, 0.0, 0.0))
        x = np.linspace(-3, 3, 100)
        np.testing.assert_allclose(ansatz_imag(d12, x),
                                   ansatz_imag(d1, x) + ansatz_imag(d2, x),
                                   atol=1e-13)

    def test_real_trivial_cases(self):
        basis = SplineBasis(2, [0.0, 1.0, 2.0])
        lin = DensityAnsatz(basis, zeta=(0.0,), b=2.0)
        assert ansatz_real(lin, 3.0) == pytest.approx(6.0)
        atom = DensityAnsatz(basis, zeta=(0.0,), zeta0=1.0)
        assert ansatz_real(atom, 2.0) == pytest.approx(-0.5)

    def test_real_odd(self):
        d = moderate_ansatz()
        x = np.linspace(0.1, 5, 80)
        np.testing.assert_allclose(ansatz_real(d, -x), -ansatz_real(d, x),
                                   atol=1e-12)

    def test_real_singular_at_origin(self):
        d = moderate_ansatz()
        with pytest.raises(DomainError):
            ansatz_real(d, 0.0)


class TestAnsatzAsHerglotz:
    def test_zero_ansatz_is_linear(self):
        basis = SplineBasis(2, [0.0, 1.0, 2.0])
        f = ansatz_as_herglotz(DensityAnsatz(basis, zeta=(0.0,), b=1.0))
        assert f(2 + 1j) == pytest.approx(2 + 1j, abs=1e-14)

    def test_atom_only_is_neg_inverse(self):
        basis = SplineBasis(2, [0.0, 1.0, 2.0])
        f = ansatz_as_herglotz(DensityAnsatz(basis, zeta=(0.0,), zeta0=1.0))
        for z in (1j, 2 + 0.5j):
            assert f(z) == pytest.approx(-1.0 / z, abs=1e-13)

    def test_boundary_reproduction(self):
        d = moderate_ansatz()
        f = ansatz_as_herglotz(d)
        x = np.linspace(0.25, 4.0, 30)
        y = 5e-5
        vals = f(x + 1j * y)
        err_im = np.max(np.abs(vals.imag - ansatz_imag(d, x)))
        err_re = np.max(np.abs(vals.real - ansatz_real(d, x)))
        assert err_im < 1e-3
        assert err_re < 1e-3

    def test_positivity(self):
        f = ansatz_as_herglotz(moderate_ansatz())
        z = upper_half_grid(1000, seed=21)
        assert np.min(f(z).imag) >= -1e-12
