import math
from fractions import Fraction

import numpy as np
import pytest

from dunkl_lln.dunkl import MultivariatePoly, finite_mixed_moment
from dunkl_lln.ensembles import (
    EnsembleSample,
    MomentEstimate,
    hermite_log_bgf,
    hermite_log_bgf_series,
    hermite_spec,
    monte_carlo_moments,
    p_k_statistic,
    sample_beta_hermite,
    sample_gue_dense,
)


def test_hermite_log_bgf_examples():
    assert hermite_log_bgf(2, 1) == MultivariatePoly.from_symmetric({(2,): 1}, 2)
    assert hermite_log_bgf(1, Fraction(1, 2)) == MultivariatePoly.from_symmetric({(2,): 1}, 1)
    assert hermite_log_bgf(3, 1) == MultivariatePoly.from_symmetric({(2,): Fraction(3, 2)}, 3)
    assert hermite_log_bgf_series(3, 1).coeffs == {(2,): Fraction(3, 2)}


def test_hermite_spec_examples():
    assert hermite_spec(1).c == {(2,): 1}
    assert hermite_spec(Fraction(1, 2)).c == {(2,): 2}


@pytest.mark.parametrize("N, theta", [(1, Fraction(1)), (3, Fraction(2, 5)), (4, Fraction(3))])
def test_hermite_spec_matches_second_derivative(N, theta):
    F = hermite_log_bgf(N, theta)
    for i in range(1, N + 1):
        assert F.derivative(i).derivative(i).constant_term() / N == hermite_spec(theta).c[(2,)]


@pytest.mark.parametrize("N, theta", [(2, Fraction(1)), (3, Fraction(1, 3))])
def test_scaling_substitution(N, theta):
    # (1/2 theta) sum y_i^2 at y = sqrt(N) x is (N/2 theta) sum x_i^2: each
    # degree-2 coefficient picks up a factor of N
    base = MultivariatePoly.from_symmetric({(2,): 1 / (2 * theta)}, N)
    scaled = MultivariatePoly(N, {e: v * N ** (sum(e) // 2) for e, v in base.terms.items()})
    assert scaled == hermite_log_bgf(N, theta)


def test_sample_shape_and_determinism():
    a = sample_beta_hermite(6, 1.5, seed=11, trial=3)
    b = sample_beta_hermite(6, 1.5, seed=11, trial=3)
    c = sample_beta_hermite(6, 1.5, seed=11, trial=4)
    assert a == b and a != c
    assert len(a.eigenvalues) == 6
    assert list(a.eigenvalues) == sorted(a.eigenvalues)
    with pytest.raises(ValueError):
        sample_beta_hermite(0, 2, 1)
    with pytest.raises(ValueError):
        sample_beta_hermite(3, 0, 1)


def test_sample_validation():
    with pytest.raises(ValueError):
        EnsembleSample((2.0, 1.0), 2.0)
    with pytest.raises(ValueError):
        EnsembleSample((), 2.0)


@pytest.mark.parametrize("beta", [1.0, 2.0, 4.0])
def test_single_eigenvalue_variance(beta):
    x = np.array([sample_beta_hermite(1, beta, 5, t).eigenvalues[0] for t in range(100_000)])
    sq = x ** 2
    stderr = sq.std(ddof=1) / math.sqrt(len(sq))
    assert abs(sq.mean() - 2 / beta) <= 3 * stderr
    assert abs(x.mean()) <= 3 * x.std() / math.sqrt(len(x))


def test_p_k_statistic_examples():
    assert p_k_statistic(EnsembleSample((0.0, 0.0, 0.0), 2.0), 2) == 0
    assert p_k_statistic(EnsembleSample((2.0,), 2.0, scaled=True), 3) == 8
    s = EnsembleSample((-1.0, 0.5, 3.0), 2.0)
    N = 3
    assert p_k_statistic(s, 2) == pytest.approx(np.mean((np.array(s.eigenvalues) / math.sqrt(N)) ** 2))


def test_p_k_statistic_invariance_and_homogeneity():
    vals = (-1.5, -0.2, 0.7, 2.0)
    s = EnsembleSample(vals, 2.0)
    doubled = EnsembleSample(tuple(2 * v for v in vals), 2.0)
    for k in (1, 2, 3, 4):
        assert p_k_statistic(doubled, k) == pytest.approx(2 ** k * p_k_statistic(s, k))
    # the statistic only sees the multiset of eigenvalues
    assert p_k_statistic(s, 3) == pytest.approx(
        np.mean([(v / 2) ** 3 for v in reversed(vals)])
    )


def test_moment_estimate_validation():
    with pytest.raises(ValueError):
        MomentEstimate(2, 1.0, 0.1, 1)
    with pytest.raises(ValueError):
        MomentEstimate(2, 1.0, -0.1, 5)


def test_monte_carlo_minimal_and_deterministic():
    a = monte_carlo_moments(5, 2.0, 2, (1, 2), seed=3)
    b = monte_carlo_moments(5, 2.0, 2, (1, 2), seed=3)
    assert a == b and a.failures == 0
    assert [e.order for e in a.estimates] == [1, 2]
    with pytest.raises(ValueError):
        monte_carlo_moments(5, 2.0, 1, (2,), seed=3)


def test_monte_carlo_counts_failures():
    from scipy.linalg import LinAlgError

    def flaky(t):
        if t % 3 == 0:
            raise LinAlgError("forced")
        return sample_beta_hermite(4, 2.0, 0, t)

    res = monte_carlo_moments(4, 2.0, 9, (2,), seed=0, sampler=flaky)
    assert res.failures == 3 and res.estimates[0].trials == 6


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_monte_carlo_matches_exact_finite_moments(beta):
    N, theta = 10, Fraction(beta, 2)
    F = hermite_log_bgf(N, theta)
    res = monte_carlo_moments(N, beta, 2000, (1, 2, 3, 4), seed=21)
    for est in res.estimates:
        exact = float(finite_mixed_moment(F, (est.order,), theta))
        assert abs(est.mean - exact) <= 4 * est.stderr


def test_gue_limit_moments():
    res = monte_carlo_moments(200, 2.0, 500, (2, 3, 4), seed=9)
    for est, limit in zip(res.estimates, (1, 0, 2)):
        assert abs(est.mean - limit) <= 4 * est.stderr


def test_dense_oracle_agrees_with_tridiagonal():
    N, trials = 50, 2000
    tri = monte_carlo_moments(N, 2.0, trials, (2, 4), seed=1)
    dense = monte_carlo_moments(N, 2.0, trials, (2, 4), seed=1, sampler=lambda t: sample_gue_dense(N, 2, t))
    for a, b in zip(tri.estimates, dense.estimates):
        assert abs(a.mean - b.mean) <= 4 * math.hypot(a.stderr, b.stderr)
