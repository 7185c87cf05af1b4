import numpy as np
import pytest

from herglotzkit.errors import DomainError, PreconditionError
from herglotzkit.herglotz import (CanonicalFn, HerglotzRep, NamedFn,
                                  compose, eval_finite_form, eval_fn,
                                  exp_representation, fn_from_dict,
                                  is_stieltjes, is_symmetric, neg_inverse_fn,
                                  recover_a_b, symmetric_extension,
                                  symmetric_from_stieltjes, upper_half_grid)
from herglotzkit.measures import DensityComponent, MeasureSpec, PointMass


def rep_delta3():
    return HerglotzRep(0.3, 0.0, MeasureSpec.delta(3.0))


class TestEval:
    def test_point_mass_oracle(self):
        f = CanonicalFn(rep_delta3())
        assert f(1j) == pytest.approx(-1.0 / (1j - 3.0), abs=1e-12)
        assert f(1j) == pytest.approx(0.3 + 0.1j, abs=1e-12)

    def test_identity(self):
        f = CanonicalFn(HerglotzRep(0.0, 1.0, MeasureSpec()))
        assert f(2 + 5j) == pytest.approx(2 + 5j)

    def test_lebesgue_gives_const_i(self):
        f = CanonicalFn(HerglotzRep(0.0, 0.0, MeasureSpec(lebesgue_coefficient=1.0)))
        assert f(1j) == pytest.approx(1j, abs=1e-12)
        assert f(5 + 0.3j) == pytest.approx(1j, abs=1e-12)

    def test_real_axis_rejected(self):
        with pytest.raises(DomainError):
            CanonicalFn(rep_delta3())(1.0 + 0j)

    def test_positivity_on_random_grid(self):
        d = DensityComponent.piecewise([-1.0, 0.0, 2.0], [[0.5], [1.0, -0.5]])
        f = CanonicalFn(HerglotzRep(-0.7, 0.2, MeasureSpec(
            point_masses=(PointMass(1.5, 2.0),), densities=(d,))))
        z = upper_half_grid(1000, seed=3)
        assert np.min(f(z).imag) >= -1e-12


class TestFiniteForm:
    def test_matches_canonical(self):
        got = eval_finite_form(0.3, 0.0, MeasureSpec.delta(3.0, 0.1), 1j)
        assert got == pytest.approx(0.3 + 0.1j, abs=1e-12)

    def test_pure_affine(self):
        assert eval_finite_form(5.0, 2.0, MeasureSpec(), 1j) == pytest.approx(5 + 2j)

    def test_delta_zero(self):
        y = 0.25
        got = eval_finite_form(0.0, 0.0, MeasureSpec.delta(0.0, 1.0), 1j * y)
        assert got == pytest.approx(1j / y, abs=1e-12)

    def test_agrees_with_eval_via_weighting(self):
        mu = MeasureSpec.delta(2.0, 5.0)
        sigma = MeasureSpec.delta(2.0, 5.0 / (1 + 4.0))
        f = CanonicalFn(HerglotzRep(1.0, 0.5, mu))
        for z in (1j, 2 + 0.5j, -3 + 2j):
            assert eval_finite_form(1.0, 0.5, sigma, z) == pytest.approx(
                f(z), abs=1e-10)


class TestRecoverAB:
    def test_identity(self):
        a, b = recover_a_b(CanonicalFn(HerglotzRep(0.0, 1.0, MeasureSpec())))
        assert (a, b) == pytest.approx((0.0, 1.0), abs=1e-8)

    def test_point_mass(self):
        a, b = recover_a_b(CanonicalFn(rep_delta3()))
        assert a == pytest.approx(0.3, abs=1e-8)
        assert b == pytest.approx(0.0, abs=1e-8)

    def test_const_i(self):
        a, b = recover_a_b(NamedFn("const_i"))
        assert (a, b) == pytest.approx((0.0, 0.0), abs=1e-8)

    def test_round_trip_compact_measure(self):
        d = DensityComponent.piecewise([0.0, 1.0], [[1.0, 1.0]])
        rep = HerglotzRep(-2.5, 1.75, MeasureSpec(densities=(d,)))
        f = CanonicalFn(rep)
        a, b = recover_a_b(f)
        assert a == pytest.approx(f(1j).real, abs=1e-6)
        assert b == pytest.approx(1.75, abs=1e-6)


class TestSymmetry:
    def test_symmetric_extension_const_i(self):
        assert symmetric_extension(NamedFn("const_i"), -1j) == pytest.approx(-1j)

    def test_symmetric_extension_point_mass(self):
        f = CanonicalFn(rep_delta3())
        expect = np.conj(-1.0 / ((1 + 1j) - 3.0))
        assert symmetric_extension(f, 1 - 1j) == pytest.approx(expect, abs=1e-12)

    def test_is_symmetric(self):
        grid = upper_half_grid(64, seed=0)
        assert is_symmetric(NamedFn("identity"), grid)
        assert is_symmetric(NamedFn("const_i"), grid)
        assert not is_symmetric(CanonicalFn(rep_delta3()), grid)


class TestStieltjes:
    def test_examples(self):
        grid = upper_half_grid(64, seed=2)
        neg = -np.geomspace(0.1, 10.0, 16)
        f_good = CanonicalFn(HerglotzRep(1.0 / 2.0, 0.0, MeasureSpec.delta(1.0)))
        # f(z) = 1/(1-z): a = Re(1/(1-i)) = 1/2 cancels the compensator
        assert is_stieltjes(f_good, grid, neg)
        assert not is_stieltjes(NamedFn("identity"), grid, neg)
        assert is_stieltjes(neg_inverse_fn(0.0), grid, neg)

    def test_symmetric_from_stieltjes(self):
        grid = upper_half_grid(64, seed=4)
        f = symmetric_from_stieltjes(neg_inverse_fn(0.0))
        for z in (0.5 + 0.5j, 2j, -1 + 1j):
            assert f(z) == pytest.approx(-1.0 / z, abs=1e-12)
        assert is_symmetric(f, grid)

    def test_non_stieltjes_rejected(self):
        with pytest.raises(PreconditionError):
            symmetric_from_stieltjes(NamedFn("identity"))


class TestExpRepresentation:
    def test_theta_zero(self):
        theta = DensityComponent.piecewise([-1.0, 1.0], [[0.0]])
        assert exp_representation(0.0, theta, 1j) == pytest.approx(1.0, abs=1e-12)
        assert exp_representation(np.log(2.0), theta, 1j) == pytest.approx(
            2.0, abs=1e-12)

    def test_indicator_vs_quadrature(self):
        theta = DensityComponent.piecewise([0.0, 50.0], [[1.0]])
        from scipy.integrate import quad
        z = 1j
        re_part, _ = quad(lambda t: np.real(1/(t - z) - t/(1 + t*t)), 0, 50)
        im_part, _ = quad(lambda t: np.imag(1/(t - z)), 0, 50)
        oracle = np.exp(re_part + 1j * im_part)
        assert exp_representation(0.0, theta, z) == pytest.approx(oracle, abs=1e-7)

    def test_range_enforced(self):
        theta = DensityComponent.piecewise([0.0, 1.0], [[2.0]])
        with pytest.raises(PreconditionError):
            exp_representation(0.0, theta, 1j)


class TestCompose:
    def test_identity_neutral(self):
        g = CanonicalFn(rep_delta3())
        f = compose(NamedFn("identity"), g)
        assert f(1j) == pytest.approx(g(1j), abs=1e-14)

    def test_involution(self):
        f = compose(neg_inverse_fn(0.0), neg_inverse_fn(0.0))
        for z in (1j, 2 + 3j):
            assert f(z) == pytest.approx(z, abs=1e-12)

    def test_h_delta_inner_disk(self):
        f = compose(NamedFn("h_delta", delta=1.0), NamedFn("identity"))
        assert f(0.5j).imag >= 0.5 - 1e-12


class TestSerialization:
    def test_round_trip_named(self):
        f = NamedFn("neg_inverse", alpha=3.0)
        g = fn_from_dict(f.to_dict())
        assert g(1j) == pytest.approx(f(1j))

    def test_round_trip_canonical(self):
        f = CanonicalFn(rep_delta3())
        g = fn_from_dict(f.to_dict())
        assert g(2 + 1j) == pytest.approx(f(2 + 1j), abs=1e-14)

    def test_eval_fn_wrapper(self):
        assert eval_fn(NamedFn("identity"), 1j) == 1j
