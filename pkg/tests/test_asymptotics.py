import numpy as np
import pytest

from herglotzkit.asymptotics import (classify_growth, expand_at_infinity,
                                     expand_at_zero, moments_from_expansion,
                                     sum_rule_at_infinity, sum_rule_at_zero,
                                     symmetric_sum_rule)
from herglotzkit.herglotz import (CanonicalFn, HerglotzRep, NamedFn,
                                  neg_inverse_fn, tan_fn)
from herglotzkit.measures import MeasureSpec, PointMass, moment


def discrete_rep(pairs, a=0.0, b=0.0):
    mu = MeasureSpec(point_masses=tuple(PointMass(x, m) for x, m in pairs))
    return CanonicalFn(HerglotzRep(a, b, mu))


class TestExpandAtInfinity:
    def test_neg_inverse(self):
        e = expand_at_infinity(neg_inverse_fn(0.0), 1)
        assert e.coefficient(1) == pytest.approx(0.0, abs=1e-10)
        assert e.coefficient(0) == pytest.approx(0.0, abs=1e-10)
        assert e.coefficient(-1) == pytest.approx(-1.0, abs=1e-9)

    def test_point_mass_at_three(self):
        e = expand_at_infinity(neg_inverse_fn(3.0), 2)
        assert e.coefficient(-1) == pytest.approx(-1.0, abs=1e-9)
        assert e.coefficient(-2) == pytest.approx(-3.0, abs=1e-8)

    def test_tan_b0_does_not_exist(self):
        e = expand_at_infinity(tan_fn(), 1)
        assert e.coefficient(1) == pytest.approx(0.0, abs=1e-9)
        assert not e.complete
        assert e.order < 1

    def test_linear_function(self):
        f = CanonicalFn(HerglotzRep(2.0, 3.0, MeasureSpec()))
        e = expand_at_infinity(f, 1)
        assert e.coefficient(1) == pytest.approx(3.0, abs=1e-10)
        assert e.coefficient(0) == pytest.approx(2.0, abs=1e-10)


class TestExpandAtZero:
    def test_tan_odd_coefficients(self):
        e = expand_at_zero(tan_fn(), 5)
        assert e.coefficient(-1) == pytest.approx(0.0, abs=1e-9)
        assert e.coefficient(1) == pytest.approx(1.0, abs=1e-6)
        assert e.coefficient(3) == pytest.approx(1.0 / 3.0, abs=1e-5)
        assert e.coefficient(5) == pytest.approx(2.0 / 15.0, abs=1e-4)

    def test_neg_inverse_taylor(self):
        e = expand_at_zero(neg_inverse_fn(3.0), 1)
        assert e.coefficient(-1) == pytest.approx(0.0, abs=1e-10)
        assert e.coefficient(0) == pytest.approx(1.0 / 3.0, abs=1e-9)
        assert e.coefficient(1) == pytest.approx(1.0 / 9.0, abs=1e-8)

    def test_atom_at_zero(self):
        e = expand_at_zero(neg_inverse_fn(0.0), -1)
        assert e.coefficient(-1) == pytest.approx(-1.0, abs=1e-10)


class TestMoments:
    def test_delta_two(self):
        f = discrete_rep([(2.0, 1.0)])
        e = expand_at_infinity(f, 3)
        assert -e.coefficient(-3) == pytest.approx(4.0, abs=1e-7)

    def test_delta_zero_moments_vanish(self):
        f = discrete_rep([(0.0, 1.0)])
        e = expand_at_infinity(f, 3)
        got = moments_from_expansion(e)
        assert got[1] == pytest.approx(0.0, abs=1e-8)
        assert got[2] == pytest.approx(0.0, abs=1e-8)

    def test_symmetric_pair(self):
        f = discrete_rep([(1.0, 1.0), (-1.0, 1.0)])
        e = expand_at_infinity(f, 3)
        got = moments_from_expansion(e)
        assert got[2] == pytest.approx(2.0, abs=1e-8)

    def test_zeroth_moment_needs_zero_expansion(self):
        f = discrete_rep([(2.0, 1.5)])
        e_inf = expand_at_infinity(f, 1)
        assert moments_from_expansion(e_inf)[0] is None
        e0 = expand_at_zero(f, 0)
        got = moments_from_expansion(e_inf, e0)
        assert got[0] == pytest.approx(1.5, abs=1e-8)

    def test_relative_accuracy_random_measures(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            pairs = [(float(x), float(m)) for x, m in
                     zip(rng.uniform(-3, 3, 3), rng.uniform(0.2, 2.0, 3))]
            f = discrete_rep(pairs)
            mu = MeasureSpec(point_masses=tuple(PointMass(x, m) for x, m in pairs))
            e = expand_at_infinity(f, 5)
            for k in range(1, 5):
                want = moment(mu, k)
                assert -e.coefficient(-k - 1) == pytest.approx(
                    want, rel=1e-5, abs=1e-7)


class TestSumRules:
    def test_infinity_n0(self):
        r = sum_rule_at_infinity(neg_inverse_fn(3.0), 0)
        assert r.value == pytest.approx(1.0, abs=1e-3)
        assert r.converged

    def test_infinity_n1(self):
        r = sum_rule_at_infinity(neg_inverse_fn(3.0), 1)
        assert r.value == pytest.approx(3.0, abs=3e-3)
        assert r.converged

    def test_identity_trivial(self):
        r = sum_rule_at_infinity(NamedFn("identity"), 0)
        assert r.value == pytest.approx(0.0, abs=1e-6)

    def test_zero_p1(self):
        # for -1/(z-3): a0 - b0 = 1/3 - 0
        r = sum_rule_at_zero(neg_inverse_fn(3.0), 1)
        assert r.value == pytest.approx(1.0 / 3.0, abs=1e-3)
        assert r.converged

    def test_symmetric_tan(self):
        r = symmetric_sum_rule(tan_fn(), 1)
        assert r.value == pytest.approx(1.0, abs=1e-3)
        assert r.converged

    def test_symmetric_rejects_asymmetric(self):
        from herglotzkit.errors import PreconditionError
        with pytest.raises(PreconditionError):
            symmetric_sum_rule(neg_inverse_fn(3.0), 1)

    def test_result_serialization(self):
        r = sum_rule_at_infinity(neg_inverse_fn(3.0), 0)
        d = r.to_dict()
        assert d["converged"] is True
        assert "y_values" in d["schedule"]


class TestClassifyGrowth:
    def test_finite_mass_point(self):
        out = classify_growth(neg_inverse_fn(3.0))
        assert out["finite_mass"] and not out["needs_regularizer"]
        assert out["s_value"] == pytest.approx(0.0, abs=1e-6)

    def test_const_i_infinite_mass(self):
        out = classify_growth(NamedFn("const_i"))
        assert not out["finite_mass"]

    def test_linear_growth(self):
        out = classify_growth(NamedFn("identity"))
        assert not out["finite_mass"]
