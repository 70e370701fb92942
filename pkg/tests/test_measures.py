import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from scipy import integrate

from orderinfo import measures
from orderinfo.distributions import Cauchy, DiscreteDist, GaussianMixture, Uniform, bernoulli, salt_pepper_dist
from orderinfo.measures import (
    MeasureValue,
    degenerate_r4_r5,
    mc_r1,
    mc_r2,
    mc_r3,
    measure,
    profile,
    r1,
    r2,
    r3,
    unit_for_base,
)
from orderinfo.order_stats import SampleModel, marginal_pdf

MIX = GaussianMixture((-2.0, 2.0), (0.15, 0.1), (0.5, 0.5))
SP_LIGHT = SampleModel(16, salt_pepper_dist(150, 0.3, 0.05))


@st.composite
def models(draw, max_n=7):
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(2, 3))
    support = tuple(float(v) for v in sorted(draw(st.lists(st.integers(-20, 40), min_size=m, max_size=m, unique=True))))
    raw = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=m, max_size=m)))
    return SampleModel(n, DiscreteDist(support, tuple(raw / raw.sum())))


@st.composite
def model_and_sets(draw):
    model = draw(models())
    idx = draw(st.permutations(range(1, model.n + 1)))
    k = draw(st.integers(1, min(2, model.n - 1)))
    j = draw(st.integers(0, min(2, model.n - k)))
    return model, tuple(sorted(idx[:k])), tuple(sorted(idx[k:k + j]))


def test_examples():
    assert r1(SampleModel(1, bernoulli(0.5)), [1]).value == pytest.approx(math.log(2))
    assert r2(SampleModel(5, Uniform(0, 1)), [3]).value == pytest.approx(9 / 140, abs=1e-15)
    assert r3(SampleModel(5, Uniform(0, 1)), [1], [3]).value == pytest.approx(1 / 63, abs=1e-15)
    assert r3(SampleModel(5, Uniform(0, 1)), [3]).value == pytest.approx(1 / 28, abs=1e-15)
    assert r2(SampleModel(19, bernoulli(0.5)), [10]).value == pytest.approx(0.16339684807462618, rel=1e-12)


def test_units():
    assert unit_for_base(math.e) == "nats" and unit_for_base(2) == "bits"
    with pytest.raises(ValueError):
        unit_for_base(10)
    assert r1(SP_LIGHT, [1], base=2).unit == "bits"
    assert r3(SP_LIGHT, [1]).unit == "squared-units"


def test_measure_value_guards():
    assert MeasureValue(-1e-14, "nats").value == 0.0
    with pytest.raises(ValueError):
        MeasureValue(-1e-3, "nats")
    with pytest.raises(ValueError):
        MeasureValue(math.nan, "nats")
    assert MeasureValue(1.0, "nats").exact and not MeasureValue(1.0, "nats", 0.1).exact


def test_set_validation():
    with pytest.raises(ValueError):
        r1(SP_LIGHT, [1], [1])
    with pytest.raises(ValueError):
        r3(SP_LIGHT, [])
    with pytest.raises(ValueError):
        measure(SP_LIGHT, 4, [1])


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(model_and_sets())
def test_conditioning_never_increases(case):
    model, S, V = case
    for m in (1, 3):
        assert measure(model, m, S, V).value <= measure(model, m, S).value + 1e-12
    assert r2(model, S, V).value <= r2(model, tuple(sorted(S + V))).value + 1e-10


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(model_and_sets())
def test_entropy_chain_rule_and_bits(case):
    model, S, V = case
    W = tuple(sorted(S + V))
    joint = r1(model, W).value
    assert joint == pytest.approx(r1(model, V).value + r1(model, S, V).value if V else r1(model, S).value, abs=1e-12)
    assert r1(model, S, V, base=2).value == pytest.approx(r1(model, S, V).value / math.log(2), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(model_and_sets(), st.floats(-500, 500))
def test_shift_invariance(case, c):
    model, S, V = case
    moved = SampleModel(model.n, model.parent.shifted(c))
    for m in (1, 2, 3):
        assert measure(moved, m, S, V).value == pytest.approx(measure(model, m, S, V).value, rel=1e-9, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(models())
def test_r2_bounds_and_full_set(model):
    # observing all order statistics reveals the sample mean, so r2 = Var(X)
    var = model.parent.var()
    full = r2(model, range(1, model.n + 1)).value
    assert full == pytest.approx(var, rel=1e-10)
    for i in range(1, model.n + 1):
        assert r2(model, [i]).value <= var + 1e-12


@settings(max_examples=60, deadline=None)
@given(models())
def test_pinned_r2_matches_count_grouping(model):
    for i in range(1, model.n + 1):
        assert measures._r2_pinned(model, i) == pytest.approx(measures._r2_discrete(model, (i,), ()), rel=1e-10, abs=1e-12)


def test_reflection_symmetry_bernoulli():
    a, b = SampleModel(11, bernoulli(0.3)), SampleModel(11, bernoulli(0.7))
    for i in range(1, 12):
        for m in (1, 2, 3):
            assert measure(a, m, [i]).value == pytest.approx(measure(b, m, [12 - i]).value, abs=1e-12)


def test_infinite_and_undefined_cases():
    cont = SampleModel(5, MIX)
    assert r1(cont, [3]).value == math.inf
    cauchy = SampleModel(25, Cauchy(0, 2e-4))
    assert r2(cauchy, [13]).value == math.inf
    vals = [v.value for v in profile(cauchy, 3)]
    assert vals[0] == vals[-1] == math.inf
    # X_(i) has a finite second moment only for 3 <= i <= n - 2
    assert vals[1] == vals[-2] == math.inf
    assert all(math.isfinite(v) for v in vals[2:-2])


def test_cauchy_variance_symmetric_and_near_median_law():
    cauchy = SampleModel(25, Cauchy(0, 2e-4))
    v = [r3(cauchy, [i]).value for i in (3, 4, 13, 22, 23)]
    assert v[0] == pytest.approx(v[4], rel=1e-8) and v[1] == pytest.approx(v[3], rel=1e-8)
    assert v[2] == pytest.approx((math.pi * 2e-4) ** 2 / (4 * 25), rel=0.2)


def test_mixture_variance_matches_density_quadrature():
    model = SampleModel(25, MIX)
    for i in (1, 2, 13, 25):
        f = lambda x: marginal_pdf(model, i, x)  # noqa: E731
        pts = [-2.0, 0.0, 2.0]
        m1 = integrate.quad(lambda x: x * f(x), -12, 12, points=pts, limit=500, epsabs=1e-13)[0]
        m2 = integrate.quad(lambda x: x * x * f(x), -12, 12, points=pts, limit=500, epsabs=1e-13)[0]
        assert r3(model, [i]).value == pytest.approx(m2 - m1 * m1, rel=1e-7)


def test_mixture_r2_matches_mc():
    model = SampleModel(25, MIX)
    exact = r2(model, [13]).value
    est, se = mc_r2(model, [13], trials=40_000, seed=3)
    assert abs(est - exact) < 4 * se


def test_uniform_quadrature_matches_spacing_identity():
    model = SampleModel(12, Uniform(-1, 2))
    for i in (1, 5, 12):
        assert r3(model, [i], closed_form=False).value == pytest.approx(r3(model, [i]).value, rel=1e-10)
        assert r2(model, [i], closed_form=False).value == pytest.approx(r2(model, [i]).value, rel=1e-10)


def test_uniform_conditional_r3_against_mc():
    model = SampleModel(7, Uniform(0, 3))
    exact = r3(model, [2, 5], [4]).value
    est, se = mc_r3(model, [2, 5], [4], trials=200_000, seed=9)
    assert abs(est - exact) < 4 * se
    fallback = r3(model, [2, 5], [4], trials=200_000, seed=10, closed_form=False)
    assert not fallback.exact and abs(fallback.value - exact) < 4 * fallback.stderr


def test_conditional_r2_orthogonal_decomposition():
    # r2(S|V) = r2(S u V) - r2(V); with every index observed r2 = Var(X) = a^2 / 12
    model = SampleModel(4, Uniform(0, 2))
    cond = r2(model, [1, 2], [3, 4], trials=100_000, seed=2)
    rest = r2(model, [3, 4], trials=100_000, seed=5)
    assert abs(cond.value + rest.value - 4 / 12) < 4 * math.hypot(cond.stderr, rest.stderr)


@pytest.mark.parametrize(
    "model, S, V",
    [
        (SP_LIGHT, (1,), ()),
        (SP_LIGHT, (4, 12), ()),
        (SampleModel(19, bernoulli(0.5)), (10,), (9,)),
        (SampleModel(6, salt_pepper_dist(90, 0.6, 0.4)), (2,), (5,)),
    ],
)
def test_discrete_mc_oracles(model, S, V):
    for exact_fn, mc_fn, seed in ((r1, mc_r1, 1), (r2, mc_r2, 2), (r3, mc_r3, 3)):
        exact = exact_fn(model, S, V).value
        est, se = mc_fn(model, S, V, trials=200_000, seed=seed)
        assert abs(est - exact) <= 4 * se + 1e-9


def test_mc_guards():
    with pytest.raises(ValueError):
        mc_r1(SP_LIGHT, [1], trials=10)
    with pytest.raises(TypeError):
        mc_r1(SampleModel(3, MIX), [1], trials=10_000)
    assert mc_r2(SampleModel(5, Cauchy(0, 1)), [3], trials=10_000) == (math.inf, 0.0)


def test_mc_seeded_determinism():
    a = mc_r3(SampleModel(9, MIX), [5], trials=5000, seed=42)
    assert a == mc_r3(SampleModel(9, MIX), [5], trials=5000, seed=42)


@pytest.mark.parametrize("k", range(1, 6))
def test_degenerate_constants(k):
    S = tuple(range(1, k + 1))
    assert degenerate_r4_r5(SampleModel(8, MIX), S) == (0.0, float(k))
    assert degenerate_r4_r5(SampleModel(8, bernoulli(0.5)), S) == (0.0, 0.0)


def test_profile_lengths():
    assert len(profile(SP_LIGHT, 1)) == 16
    assert [round(v.value, 12) for v in profile(SP_LIGHT, 3)][:2] != [0.0, 0.0]
