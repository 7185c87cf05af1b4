import numpy as np
import pytest

from herglotzkit.bounds import (BandSpec, BoundReport, amplitude_lower_bound,
                                bandwidth_resistance_bound, h_delta,
                                metamaterial_bound, resistance_integral_bound,
                                resistance_integral_numeric,
                                verify_amplitude_bound)
from herglotzkit.errors import PreconditionError
from herglotzkit.herglotz import CanonicalFn, HerglotzRep, upper_half_grid
from herglotzkit.measures import DensityComponent, MeasureSpec


class TestHDelta:
    def test_limit_at_zero(self):
        for y in (1e-3, 1e-5):
            assert h_delta(1j * y, 1.0) == pytest.approx(1j, abs=1e-2)

    def test_far_field(self):
        Y = 1e6
        assert h_delta(1j * Y, 1.0) == pytest.approx(
            -2.0 / (np.pi * 1j * Y), rel=1e-5)

    def test_interior_lower_bound(self):
        rng = np.random.default_rng(1)
        r = np.sqrt(rng.uniform(0, 1, 500))
        phi = rng.uniform(0, np.pi, 500)
        z = r * np.exp(1j * phi)
        z = z[z.imag > 0]
        assert np.min(h_delta(z, 1.0).imag) >= 0.5 - 1e-9

    def test_herglotz_positivity(self):
        z = upper_half_grid(1000, seed=7)
        assert np.min(h_delta(z, 2.5).imag) >= -1e-12


class TestClosedFormBounds:
    def test_resistance(self):
        assert resistance_integral_bound(1.0) == pytest.approx(np.pi / 2)
        assert resistance_integral_bound(2.0) == pytest.approx(np.pi / 4)
        assert resistance_integral_bound(1e9) < 1e-8

    def test_bandwidth_resistance(self):
        assert bandwidth_resistance_bound(1, 2, 1) == pytest.approx(np.pi / 2)
        assert bandwidth_resistance_bound(0.5, 1.5, np.pi) == pytest.approx(0.5)
        assert bandwidth_resistance_bound(1, 1e9, 1) < 1e-8

    def test_amplitude(self):
        assert amplitude_lower_bound(1, 2, 0.2) == pytest.approx(0.3)
        assert amplitude_lower_bound(0, 0, 1.0) == 0.0
        assert amplitude_lower_bound(1, 1, 1e-12) < 1e-11

    def test_metamaterial(self):
        assert metamaterial_bound(-2.0, 1.0, 0.1) == pytest.approx(1.0 / 7.0)
        assert metamaterial_bound(-2.0, 1.0, 1e-9) < 1e-8
        with pytest.raises(PreconditionError):
            metamaterial_bound(-2.0, 1.0, 2.0)
        with pytest.raises(PreconditionError):
            metamaterial_bound(1.0, -2.0, 0.1)


class TestBandSpec:
    def test_interval(self):
        band = BandSpec(omega0=1.0, B=0.1)
        lo, hi = band.interval
        assert (lo, hi) == pytest.approx((0.95, 1.05))
        assert band.width == pytest.approx(0.1)

    def test_validation(self):
        with pytest.raises(PreconditionError):
            BandSpec(omega0=-1.0, B=0.1)
        with pytest.raises(PreconditionError):
            BandSpec(omega0=1.0, B=2.5)


class TestBoundReport:
    def test_slack_autofill(self):
        r = BoundReport(bound_value=1.0, formula_id="x", achieved_value=1.2)
        assert r.slack == pytest.approx(0.2)
        assert r.to_dict()["slack"] == pytest.approx(0.2)


class TestVerifyAmplitudeBound:
    def test_linear_function(self):
        h = CanonicalFn(HerglotzRep(0.0, 1.0, MeasureSpec()))
        report = verify_amplitude_bound(h, 2.0, (1.0, 1.2))
        # sup |x + 2x| on [1, 1.2] is 3.6; bound is 3 * 0.2 / 2 = 0.3
        assert report.achieved_value == pytest.approx(3.6, abs=1e-6)
        assert report.slack >= -1e-9

    def test_canonical_rep_never_negative_slack(self):
        d = DensityComponent.piecewise([2.0, 3.0], [[0.5, 0.1]])
        h = CanonicalFn(HerglotzRep(0.0, 0.4, MeasureSpec(densities=(d,))))
        report = verify_amplitude_bound(h, 1.0, BandSpec(1.0, 0.4))
        assert report.slack >= -1e-9

    def test_finer_grid_non_decreasing(self):
        h = CanonicalFn(HerglotzRep(0.3, 0.7, MeasureSpec.delta(5.0)))
        coarse = verify_amplitude_bound(h, 0.5, (1.0, 2.0), grid_density=100)
        fine = verify_amplitude_bound(h, 0.5, (1.0, 2.0), grid_density=200)
        assert fine.achieved_value >= coarse.achieved_value - 1e-12


class TestResistanceIntegralNumeric:
    def test_shunt_c_identity(self):
        # Z(s) = 1/(s + 1) for C = R = 1: Re Z(-i w) = 1/(1 + w^2)
        got = resistance_integral_numeric(lambda w: 1.0 / (1.0 + w**2))
        assert got == pytest.approx(1.0, rel=1e-4)

    def test_scaling_with_c(self):
        C = 2.5
        got = resistance_integral_numeric(lambda w: 1.0 / (1.0 + (C * w) ** 2))
        assert got == pytest.approx(1.0 / C, rel=1e-4)
