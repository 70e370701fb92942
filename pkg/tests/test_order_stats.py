import itertools
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from orderinfo.distributions import Cauchy, DiscreteDist, GaussianMixture, Uniform, bernoulli, salt_pepper_dist
from orderinfo.order_stats import (
    InstanceTooLarge,
    SampleModel,
    brute_force_joint_pmf,
    index_set,
    joint_distribution,
    joint_pdf,
    joint_pmf,
    joint_pmf_counts,
    marginal_pdf,
    marginal_pmf,
    mc_joint_estimate,
)


@st.composite
def instances(draw, max_n=6, max_support=3, max_k=3):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_support))
    support = tuple(float(v) for v in sorted(draw(st.lists(st.integers(0, 9), min_size=m, max_size=m, unique=True))))
    raw = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=m, max_size=m)))
    dist = DiscreteDist(support, tuple(raw / raw.sum()))
    k = draw(st.integers(1, min(max_k, n)))
    S = tuple(sorted(draw(st.lists(st.integers(1, n), min_size=k, max_size=k, unique=True))))
    vals = sorted(draw(st.lists(st.sampled_from(support), min_size=k, max_size=k)))
    return SampleModel(n, dist), S, vals


def test_marginal_examples():
    model = SampleModel(3, bernoulli(0.5))
    assert marginal_pmf(model, 2).probs == pytest.approx((0.5, 0.5))
    assert joint_pmf(model, (1, 3), (0, 1)) == pytest.approx(0.75)
    assert joint_pmf(model, (1, 3), (1, 0)) == 0.0


def test_marginal_matches_binomial_tail():
    model = SampleModel(16, salt_pepper_dist(150, 0.3, 0.05))
    for i in range(1, 17):
        d = marginal_pmf(model, i)
        # P(X_(i) <= x) = P(at least i draws are <= x)
        for x, cdf in zip(d.support, d.cumulative):
            q = model.parent.cdf(x)
            assert cdf == pytest.approx(stats.binom.sf(i - 1, 16, q), abs=1e-14)


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(instances())
def test_three_paths_agree(inst):
    model, S, vals = inst
    a = joint_pmf(model, S, vals)
    b = joint_pmf_counts(model, S, vals)
    c = brute_force_joint_pmf(model, S, vals)
    assert abs(a - b) <= 1e-10 and abs(b - c) <= 1e-10


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(instances(max_n=12, max_k=4))
def test_inclusion_exclusion_matches_counts_larger_n(inst):
    model, S, vals = inst
    assert joint_pmf(model, S, vals) == pytest.approx(joint_pmf_counts(model, S, vals), abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(instances())
def test_joint_law_sums_to_one_and_marginalises(inst):
    model, S, _ = inst
    rows, probs = joint_distribution(model, S)
    assert math.fsum(probs) == pytest.approx(1.0, abs=1e-12)
    # summing out all but the first index gives its marginal
    first = marginal_pmf(model, S[0])
    for x, p in zip(first.support, first.probs):
        assert math.fsum(probs[rows[:, 0] == x]) == pytest.approx(p, abs=1e-12)
    assert np.all(np.diff(rows, axis=1) >= 0)


def test_nonmonotone_values_have_zero_mass():
    model = SampleModel(4, salt_pepper_dist(100, 0.4, 0.5))
    assert joint_pmf(model, (1, 2), (255, 0)) == 0.0
    assert joint_pmf_counts(model, (1, 2), (255, 0)) == 0.0
    assert joint_pmf(model, (2,), (7,)) == 0.0


def test_brute_force_guard():
    model = SampleModel(16, salt_pepper_dist(150, 0.3, 0.05))
    with pytest.raises(InstanceTooLarge):
        brute_force_joint_pmf(model, (1,), (0,))


def test_index_validation():
    assert index_set([3, 1, 2], 5) == (1, 2, 3)
    for bad in ([0], [6], [1, 1]):
        with pytest.raises(ValueError):
            index_set(bad, 5)
    with pytest.raises(ValueError):
        index_set([], 5, allow_empty=False)
    with pytest.raises(ValueError):
        SampleModel(0, bernoulli(0.5))


def test_discrete_ops_reject_continuous():
    model = SampleModel(3, Uniform(0, 1))
    with pytest.raises(TypeError):
        joint_pmf(model, (1,), (0.5,))
    with pytest.raises(TypeError):
        joint_pdf(SampleModel(3, bernoulli(0.5)), (1,), (0.5,))


@pytest.mark.parametrize("parent", [Uniform(0, 1), GaussianMixture((-2, 2), (0.15, 0.1), (0.5, 0.5)), Cauchy(0, 1)])
def test_marginal_pdf_integrates_to_one(parent):
    model = SampleModel(7, parent)
    for i in (1, 4, 7):
        total = integrate.quad(lambda x: marginal_pdf(model, i, x), -np.inf, np.inf, limit=400)[0]
        assert total == pytest.approx(1.0, abs=1e-7)


def test_joint_pdf_uniform_closed_form():
    # for U(0,1), X_(i) < X_(j) has density n!/((i-1)!(j-i-1)!(n-j)!) x^(i-1) (y-x)^(j-i-1) (1-y)^(n-j)
    n, i, j, x, y = 6, 2, 5, 0.3, 0.7
    c = math.factorial(n) / (math.factorial(i - 1) * math.factorial(j - i - 1) * math.factorial(n - j))
    want = c * x ** (i - 1) * (y - x) ** (j - i - 1) * (1 - y) ** (n - j)
    assert joint_pdf(SampleModel(n, Uniform(0, 1)), (i, j), (x, y)) == pytest.approx(want, rel=1e-12)
    assert joint_pdf(SampleModel(n, Uniform(0, 1)), (i, j), (y, x)) == 0.0


def test_joint_pdf_integrates_to_one():
    model = SampleModel(5, Uniform(0, 1))
    total = integrate.dblquad(lambda y, x: joint_pdf(model, (2, 4), (x, y)), 0, 1, lambda x: x, lambda x: 1)[0]
    assert total == pytest.approx(1.0, abs=1e-8)


def test_full_joint_pdf_is_n_factorial_product():
    model = SampleModel(4, Uniform(0, 2))
    assert joint_pdf(model, (1, 2, 3, 4), (0.1, 0.5, 1.2, 1.9)) == pytest.approx(24 / 16)


@pytest.mark.parametrize("S, vals", [((1, 16), (0.0, 255.0)), ((4,), (150.0,)), ((2, 3), (0.0, 150.0))])
def test_mc_agrees_with_exact(S, vals):
    model = SampleModel(16, salt_pepper_dist(150, 0.3, 0.05))
    exact = joint_pmf_counts(model, S, vals)
    est, se = mc_joint_estimate(model, S, vals, 200_000, seed=4)
    assert abs(est - exact) <= 4 * max(se, 1e-4)


def test_mc_event_callable_and_guard():
    model = SampleModel(5, Uniform(0, 1))
    # P(X_(3) <= 0.5) = P(Bin(5, 0.5) >= 3) = 0.5
    est, se = mc_joint_estimate(model, (3,), lambda b: b[:, 0] <= 0.5, 100_000, seed=1)
    assert abs(est - 0.5) < 4 * se
    with pytest.raises(ValueError):
        mc_joint_estimate(model, (3,), lambda b: b[:, 0] <= 0.5, 0, seed=1)


def test_exhaustive_small_bernoulli():
    # n=3 Bernoulli(0.3): enumerate by hand
    model = SampleModel(3, bernoulli(0.3))
    for S in itertools.chain.from_iterable(itertools.combinations(range(1, 4), k) for k in (1, 2, 3)):
        for vals in itertools.product((0.0, 1.0), repeat=len(S)):
            assert joint_pmf(model, S, vals) == pytest.approx(brute_force_joint_pmf(model, S, vals), abs=1e-15)
