"""Moment and cumulant oracles for every distribution family.

Expected values are textbook closed forms computed inline, never read back
from the implementation.
"""

import math

import numpy as np
import pytest

from rsregimes.distributions import (Bernoulli, CgfEvaluator, Constant,
                                     Exponential, Normal, Shifted, SystemPair,
                                     cgf, cgf_evaluator, cgf_prime,
                                     cgf_prime2, moments, sample)
from rsregimes.errors import DomainError

THETAS = [-2.0, -0.5, -0.1, 0.0, 0.1, 0.5, 0.9]


def test_normal_moments():
    m = moments(Normal(1.5, 2.0))
    assert m.mean == 1.5
    assert m.variance == 4.0
    assert m.third_central == 0.0
    assert m.fourth_central == 48.0
    assert m.skewness == 0.0
    assert m.kurtosis == 3.0


def test_exponential_moments():
    mean = 0.7
    m = moments(Exponential(mean))
    assert m.mean == pytest.approx(mean, abs=0)
    assert m.variance == pytest.approx(mean ** 2, rel=1e-15)
    assert m.third_central == pytest.approx(2 * mean ** 3, rel=1e-15)
    assert m.fourth_central == pytest.approx(9 * mean ** 4, rel=1e-15)
    assert m.skewness == pytest.approx(2.0, rel=1e-14)
    assert m.kurtosis == pytest.approx(9.0, rel=1e-14)


@pytest.mark.parametrize("p", [0.001, 0.3, 0.5, 0.92])
def test_bernoulli_moments(p):
    q = 1.0 - p
    m = moments(Bernoulli(p))
    assert m.mean == pytest.approx(p, abs=0)
    assert m.variance == pytest.approx(p * q, rel=1e-15)
    assert m.third_central == pytest.approx(p * q * (q - p), rel=1e-13)
    assert m.fourth_central == pytest.approx(p * q * (q ** 3 + p ** 3), rel=1e-13)
    # Bernoulli sits exactly on the kurtosis lower bound skew^2 + 1.
    assert m.kurtosis == pytest.approx(m.skewness ** 2 + 1.0, rel=1e-10)


def test_constant_and_shifted_moments():
    m = moments(Constant(3.25))
    assert (m.mean, m.variance, m.third_central, m.fourth_central) == (3.25, 0.0, 0.0, 0.0)
    assert math.isnan(m.skewness) and math.isnan(m.kurtosis)

    base = Exponential(2.0)
    shifted = Shifted(base, -1.25)
    ms, mb = moments(shifted), moments(base)
    assert ms.mean == pytest.approx(mb.mean - 1.25, rel=1e-15)
    for field in ("variance", "third_central", "fourth_central", "skewness", "kurtosis"):
        assert getattr(ms, field) == getattr(mb, field)


@pytest.mark.parametrize("theta", THETAS)
def test_normal_cgf_closed_form(theta):
    mu, sigma = -0.4, 1.7
    d = Normal(mu, sigma)
    assert cgf(d, theta) == pytest.approx(mu * theta + 0.5 * sigma ** 2 * theta ** 2, rel=1e-15, abs=1e-15)
    assert cgf_prime(d, theta) == pytest.approx(mu + sigma ** 2 * theta, rel=1e-15, abs=1e-15)
    assert cgf_prime2(d, theta) == pytest.approx(sigma ** 2, rel=1e-15)


@pytest.mark.parametrize("theta", [t for t in THETAS if t < 1.0 / 0.8])
def test_exponential_cgf_closed_form(theta):
    mean = 0.8
    d = Exponential(mean)
    assert cgf(d, theta) == pytest.approx(-math.log(1.0 - mean * theta), rel=1e-14, abs=1e-15)
    assert cgf_prime(d, theta) == pytest.approx(mean / (1.0 - mean * theta), rel=1e-14)
    assert cgf_prime2(d, theta) == pytest.approx((mean / (1.0 - mean * theta)) ** 2, rel=1e-13)


def test_exponential_cgf_domain_error():
    d = Exponential(2.0)
    for theta in (0.5, 0.6, 5.0):
        with pytest.raises(DomainError):
            cgf(d, theta)
    ev = cgf_evaluator(d)
    assert ev.domain[1] == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("theta", THETAS)
@pytest.mark.parametrize("p", [0.001, 0.25, 0.999])
def test_bernoulli_cgf_closed_form(p, theta):
    d = Bernoulli(p)
    expected = math.log((1.0 - p) + p * math.exp(theta))
    assert cgf(d, theta) == pytest.approx(expected, rel=1e-13, abs=1e-15)
    ez = p * math.exp(theta) / ((1.0 - p) + p * math.exp(theta))
    assert cgf_prime(d, theta) == pytest.approx(ez, rel=1e-12, abs=1e-15)
    assert cgf_prime2(d, theta) == pytest.approx(ez * (1.0 - ez), rel=1e-11, abs=1e-15)


def test_bernoulli_degenerate_probabilities():
    for p in (0.0, 1.0):
        d = Bernoulli(p)
        assert cgf(d, 0.7) == pytest.approx(0.7 * p, abs=1e-15)
        assert cgf_prime(d, 0.7) == p
        assert cgf_prime2(d, 0.7) == 0.0


@pytest.mark.parametrize("spec", [
    Normal(0.3, 1.2), Exponential(1.4), Bernoulli(0.2),
    Shifted(Exponential(0.5), 2.0),
])
def test_cgf_derivatives_match_finite_differences(spec):
    ev = cgf_evaluator(spec)
    h = 1e-6
    for theta in (-0.3, 0.0, 0.4):
        d1 = (ev.psi(theta + h) - ev.psi(theta - h)) / (2 * h)
        # differencing the analytic first derivative avoids the catastrophic
        # roundoff of a second central difference of psi itself
        d2 = (ev.dpsi(theta + h) - ev.dpsi(theta - h)) / (2 * h)
        assert ev.dpsi(theta) == pytest.approx(d1, rel=1e-7, abs=1e-7)
        assert ev.d2psi(theta) == pytest.approx(d2, rel=1e-7, abs=1e-9)


def test_cgf_evaluator_is_plain_callable_bundle():
    ev = cgf_evaluator(Normal(0.0, 1.0))
    assert isinstance(ev, CgfEvaluator)
    assert ev.psi(0.0) == 0.0 and ev.dpsi(0.0) == 0.0 and ev.d2psi(0.0) == 1.0


@pytest.mark.parametrize("spec,draws", [
    (Normal(2.0, 3.0), 2_000_000),
    (Exponential(1.3), 2_000_000),
    (Bernoulli(0.2), 2_000_000),
    (Shifted(Exponential(1.0), -5.0), 1_000_000),
])
def test_sampling_matches_moments(spec, draws):
    rng = np.random.default_rng(2024)
    xs = sample(spec, rng, draws)
    m = moments(spec)
    # 6-sigma windows on the sample mean and variance.
    mean_tol = 6.0 * math.sqrt(m.variance / draws)
    assert float(xs.mean()) == pytest.approx(m.mean, abs=mean_tol)
    var_var = (m.fourth_central - m.variance ** 2) / draws
    assert float(xs.var(ddof=1)) == pytest.approx(m.variance, abs=6.0 * math.sqrt(var_var))


def test_sampling_is_deterministic():
    for spec in (Normal(0, 1), Exponential(2.0), Bernoulli(0.4), Constant(1.0),
                 Shifted(Bernoulli(0.4), 3.0)):
        a = sample(spec, np.random.default_rng(99), 16)
        b = sample(spec, np.random.default_rng(99), 16)
        assert np.array_equal(np.asarray(a), np.asarray(b))


def test_constant_sampling_consumes_no_stream():
    rng1 = np.random.default_rng(7)
    sample(Constant(2.0), rng1, 100)
    rng2 = np.random.default_rng(7)
    assert rng1.random() == rng2.random()


def test_lattice_flags():
    assert Bernoulli(0.3).is_lattice()
    assert Constant(1.0).is_lattice()
    assert Normal(1.0, 0.0).is_lattice()
    assert not Normal(0.0, 1.0).is_lattice()
    assert not Exponential(1.0).is_lattice()
    assert Shifted(Bernoulli(0.3), 1.0).is_lattice()
    assert not Shifted(Exponential(1.0), 1.0).is_lattice()


class TestSystemPair:
    def test_gap_must_match_delta(self):
        with pytest.raises(ValueError):
            SystemPair(Normal(0.0, 1.0), Normal(-0.2, 1.0), 0.1)
        with pytest.raises(ValueError):
            SystemPair(Normal(0.0, 1.0), Normal(-0.1, 1.0), -0.1)

    def test_basic_properties(self, exp_pair):
        assert exp_pair.mu1 == 1.0
        assert exp_pair.mu2 == pytest.approx(1.0 / 1.1, rel=1e-15)
        assert exp_pair.var1 == 1.0
        assert exp_pair.var2 == pytest.approx((1.0 / 1.1) ** 2, rel=1e-14)
        assert exp_pair.sigma2 == pytest.approx(1.0 / 1.1, rel=1e-14)

    def test_shifted_competitor_ties_the_means(self, exp_pair):
        tied = exp_pair.x2_shifted()
        assert moments(tied).mean == pytest.approx(exp_pair.mu1, rel=1e-14)
        assert moments(tied).variance == pytest.approx(exp_pair.var2, rel=1e-14)

    def test_difference_cgf_matches_direct_sum(self, exp_pair):
        dcgf = exp_pair.difference_cgf()
        tied = exp_pair.x2_shifted()
        for theta in (-0.4, -0.05, 0.0, 0.2, 0.7):
            expected = cgf(tied, theta) + cgf(exp_pair.dist1, -theta)
            assert dcgf.psi(theta) == pytest.approx(expected, rel=1e-14, abs=1e-15)
        # difference mean is zero by construction
        assert dcgf.dpsi(0.0) == pytest.approx(0.0, abs=1e-12)

    def test_difference_cgf_domain_intersection(self, exp_pair):
        # X2 side allows theta < 1/mu2; -X1 side allows theta > -1/mu1.
        lo, hi = exp_pair.difference_cgf().domain
        assert lo == pytest.approx(-1.0, rel=1e-14)
        assert hi == pytest.approx(1.1, rel=1e-14)

    def test_difference_moments_closed_form(self, exp_pair):
        m = exp_pair.difference_moments()
        mu2 = 1.0 / 1.1
        assert m.mean == pytest.approx(0.0, abs=1e-15)
        assert m.variance == pytest.approx(1.0 + mu2 ** 2, rel=1e-14)
        assert m.third_central == pytest.approx(2 * mu2 ** 3 - 2.0, rel=1e-13)
        expected_fc = 9 * mu2 ** 4 + 6 * mu2 ** 2 + 9.0
        assert m.fourth_central == pytest.approx(expected_fc, rel=1e-13)

    def test_difference_moments_against_brute_force(self, two_point_pair):
        # D = (Bernoulli(0.001) + 0.007) - 0.008 takes value 0.999 w.p. 0.001
        # and -0.001 w.p. 0.999.
        m = two_point_pair.difference_moments()
        p = 0.001
        values = np.array([1.0 - p, -p])
        probs = np.array([p, 1.0 - p])
        for field, order in (("variance", 2), ("third_central", 3), ("fourth_central", 4)):
            expected = float((probs * values ** order).sum())
            assert getattr(m, field) == pytest.approx(expected, rel=1e-12)

    def test_difference_lattice_flag(self, exp_pair, two_point_pair, gaussian_pair):
        assert two_point_pair.difference_is_lattice()
        assert not exp_pair.difference_is_lattice()
        assert not gaussian_pair.difference_is_lattice()
