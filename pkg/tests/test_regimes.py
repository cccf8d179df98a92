"""Sample-size planners against closed forms and the published tables."""

import math

import pytest
from scipy import stats

from conftest import make_gaussian_pair
from rsregimes.distributions import Constant, SystemPair
from rsregimes.errors import DegenerateError, RangeError
from rsregimes.rates import difference_rate, legendre_transform
from rsregimes.distributions import cgf_evaluator
from rsregimes.regimes import (AllocationPolicy, clt_plan, ld_plan, md_plan,
                               md_scaling_diag, plan_for)

EQUAL = AllocationPolicy("equal")
OPTIMAL = AllocationPolicy("optimal")
INDEPENDENT = AllocationPolicy("independent")


class TestPublishedTables:
    def test_table1_equal_allocation(self, exp_pair):
        alpha = 0.05
        assert clt_plan(exp_pair, alpha, EQUAL).n1 == 598
        assert abs(ld_plan(exp_pair, alpha, EQUAL).n1 - 1320) <= 2
        assert md_plan(exp_pair, alpha, EQUAL).n1 == 1325

    def test_table2_equal_allocation(self, two_point_pair):
        alpha = 0.01
        assert clt_plan(two_point_pair, alpha, EQUAL).n1 == 111
        assert abs(ld_plan(two_point_pair, alpha, EQUAL).n1 - 477) <= 2
        assert md_plan(two_point_pair, alpha, EQUAL).n1 == 188

    def test_equal_allocation_gives_equal_counts(self, exp_pair, two_point_pair):
        for pair, alpha in ((exp_pair, 0.05), (two_point_pair, 0.01)):
            for regime in ("clt", "ld", "md"):
                plan = plan_for(pair, alpha, regime, EQUAL)
                assert plan.n1 == plan.n2
                assert plan.raw1 == plan.raw2


class TestCltPolicies:
    def test_closed_forms_on_unequal_gaussian(self):
        s1, s2, delta, alpha = 1.0, 2.0, 0.25, 0.03
        pair = make_gaussian_pair(s1, s2, delta)
        z = float(stats.norm.isf(alpha))

        plan = clt_plan(pair, alpha, OPTIMAL)
        assert plan.raw1 == pytest.approx(z ** 2 * (s1 + s2) * s1 / delta ** 2, rel=1e-12)
        assert plan.raw2 == pytest.approx(z ** 2 * (s1 + s2) * s2 / delta ** 2, rel=1e-12)

        plan = clt_plan(pair, alpha, EQUAL)
        assert plan.raw1 == pytest.approx(z ** 2 * (s1 ** 2 + s2 ** 2) / delta ** 2, rel=1e-12)

        plan = clt_plan(pair, alpha, INDEPENDENT)
        assert plan.raw1 == pytest.approx(2 * z ** 2 * s1 ** 2 / delta ** 2, rel=1e-12)
        assert plan.raw2 == pytest.approx(2 * z ** 2 * s2 ** 2 / delta ** 2, rel=1e-12)

    def test_rounding_is_ceiling_with_floor_two(self):
        pair = make_gaussian_pair(1.0, 1.0, 3.0)
        plan = clt_plan(pair, 0.4, EQUAL)   # raw ~ 0.0143
        assert plan.n1 == 2
        assert plan.raw1 < 2

    def test_optimal_needs_both_variances(self, two_point_pair):
        with pytest.raises(DegenerateError):
            clt_plan(two_point_pair, 0.01, OPTIMAL)

    def test_totally_degenerate_pair(self):
        pair = SystemPair(Constant(1.0), Constant(0.5), 0.5)
        with pytest.raises(DegenerateError):
            clt_plan(pair, 0.05, EQUAL)


class TestMdPolicies:
    def test_closed_forms_on_unequal_gaussian(self):
        s1, s2, delta, alpha = 0.7, 1.4, 0.2, 0.02
        pair = make_gaussian_pair(s1, s2, delta)
        log_inv = math.log(1.0 / alpha)

        plan = md_plan(pair, alpha, OPTIMAL)
        assert plan.raw1 == pytest.approx(2 * log_inv * (s1 + s2) * s1 / delta ** 2, rel=1e-12)
        assert plan.raw2 == pytest.approx(2 * log_inv * (s1 + s2) * s2 / delta ** 2, rel=1e-12)

        plan = md_plan(pair, alpha, EQUAL)
        assert plan.raw1 == pytest.approx(2 * log_inv * (s1 ** 2 + s2 ** 2) / delta ** 2, rel=1e-12)

        plan = md_plan(pair, alpha, INDEPENDENT)
        assert plan.raw1 == pytest.approx(4 * log_inv * s1 ** 2 / delta ** 2, rel=1e-12)
        assert plan.raw2 == pytest.approx(4 * log_inv * s2 ** 2 / delta ** 2, rel=1e-12)

    def test_optimal_needs_both_deviations(self, two_point_pair):
        with pytest.raises(DegenerateError):
            md_plan(two_point_pair, 0.01, OPTIMAL)


class TestLdPolicies:
    def test_equal_uses_difference_rate(self, exp_pair):
        alpha = 0.05
        plan = ld_plan(exp_pair, alpha, EQUAL)
        expected = math.log(1 / alpha) / difference_rate(exp_pair).value
        assert plan.raw1 == pytest.approx(expected, rel=1e-12)

    def test_equal_closed_form_two_exponentials(self, exp_pair):
        m1, m2 = 1.0, 1.0 / 1.1
        rate = math.log((m1 + m2) ** 2 / (4 * m1 * m2))
        plan = ld_plan(exp_pair, 0.05, EQUAL)
        assert plan.raw1 == pytest.approx(math.log(20.0) / rate, rel=1e-9)

    def test_optimal_splits_by_allocation_search(self, exp_pair):
        alpha = 0.05
        plan = ld_plan(exp_pair, alpha, OPTIMAL)
        # raw_i = log(1/alpha) * p_i / G, so raw1 + raw2 = log(1/alpha)/G
        from rsregimes.rates import optimal_allocation
        res = optimal_allocation(exp_pair, "ld")
        assert plan.raw1 == pytest.approx(math.log(20.0) * res.p1 / res.rate, rel=1e-9)
        assert plan.raw2 == pytest.approx(math.log(20.0) * res.p2 / res.rate, rel=1e-9)
        assert plan.raw1 + plan.raw2 <= 2 * ld_plan(exp_pair, alpha, EQUAL).raw1 + 1e-6

    def test_independent_midpoint_anchor(self, exp_pair):
        alpha = 0.05
        b = 0.5 * (exp_pair.mu1 + exp_pair.mu2)
        plan = ld_plan(exp_pair, alpha, INDEPENDENT)
        i1 = legendre_transform(cgf_evaluator(exp_pair.dist1), b).value
        i2 = legendre_transform(cgf_evaluator(exp_pair.dist2), b).value
        assert plan.raw1 == pytest.approx(math.log(20.0) / i1, rel=1e-9)
        assert plan.raw2 == pytest.approx(math.log(20.0) / i2, rel=1e-9)

    def test_independent_respects_explicit_anchor(self, exp_pair):
        b = exp_pair.mu2 + 0.25 * exp_pair.delta
        plan = ld_plan(exp_pair, 0.05, AllocationPolicy("independent", anchor_b=b))
        i1 = legendre_transform(cgf_evaluator(exp_pair.dist1), b).value
        assert plan.raw1 == pytest.approx(math.log(20.0) / i1, rel=1e-9)

    def test_independent_anchor_outside_gap(self, exp_pair):
        for b in (exp_pair.mu1, exp_pair.mu2, 2.0):
            with pytest.raises(RangeError):
                ld_plan(exp_pair, 0.05, AllocationPolicy("independent", anchor_b=b))

    def test_nonequal_policies_need_both_variances(self, two_point_pair):
        with pytest.raises(DegenerateError):
            ld_plan(two_point_pair, 0.01, OPTIMAL)
        with pytest.raises(DegenerateError):
            ld_plan(two_point_pair, 0.01, INDEPENDENT)


class TestPlanFor:
    def test_dispatch(self, exp_pair):
        for regime, expected in (("clt", 598), ("ld", 1320), ("md", 1325)):
            assert plan_for(exp_pair, 0.05, regime, EQUAL).n1 == expected

    def test_unknown_regime(self, exp_pair):
        with pytest.raises(ValueError):
            plan_for(exp_pair, 0.05, "lil", EQUAL)

    def test_alpha_validation(self, exp_pair):
        for alpha in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(RangeError):
                plan_for(exp_pair, alpha, "clt", EQUAL)

    def test_policy_kind_validation(self):
        with pytest.raises(ValueError):
            AllocationPolicy("proportional")

    def test_sizes_grow_as_alpha_shrinks(self, exp_pair):
        for regime in ("clt", "ld", "md"):
            lax = plan_for(exp_pair, 0.1, regime, EQUAL)
            strict = plan_for(exp_pair, 0.001, regime, EQUAL)
            assert strict.raw1 > lax.raw1

    def test_sizes_grow_as_delta_shrinks(self):
        for regime in ("clt", "md"):
            wide = plan_for(make_gaussian_pair(delta=0.2), 0.05, regime, EQUAL)
            narrow = plan_for(make_gaussian_pair(delta=0.1), 0.05, regime, EQUAL)
            assert narrow.raw1 > wide.raw1
        # LD sizing responds to delta through the rate of the difference law
        wide = plan_for(make_gaussian_pair(delta=0.2), 0.05, "ld", EQUAL)
        narrow = plan_for(make_gaussian_pair(delta=0.1), 0.05, "ld", EQUAL)
        assert narrow.raw1 > wide.raw1

    def test_gaussian_ld_equals_md_at_equal_policy(self):
        pair = make_gaussian_pair(1.0, 2.0, 0.3)
        ld = plan_for(pair, 0.01, "ld", EQUAL)
        md = plan_for(pair, 0.01, "md", EQUAL)
        assert ld.raw1 == pytest.approx(md.raw1, rel=1e-6)


class TestMdScaling:
    def test_link_constant(self):
        diag = md_scaling_diag(0.05, 1.0 - 1.0 / 1.1, 0.4)
        # L = log(1/alpha) * delta^((1-2 beta)/beta) at beta=0.4 -> exponent 1/2
        expected = math.log(20.0) * (1.0 - 1.0 / 1.1) ** 0.5
        assert diag.L == pytest.approx(expected, rel=1e-12)
        assert diag.L == pytest.approx(0.90324, abs=5e-5)

    def test_beta_window(self):
        for beta in (1.0 / 3.0, 0.5, 0.2, 0.7):
            with pytest.raises(RangeError):
                md_scaling_diag(0.05, 0.1, beta)
