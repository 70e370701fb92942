import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from orderinfo.closed_forms import (
    BinomialRef,
    argmax_candidates,
    asymptotic_r1_r3,
    bernoulli_argmax,
    bernoulli_r1,
    bernoulli_r2,
    bernoulli_r3,
    binary_entropy,
    uniform_argmax,
    uniform_r2,
    uniform_r3,
)
from orderinfo.distributions import Uniform, bernoulli
from orderinfo.measures import r1, r2, r3
from orderinfo.order_stats import SampleModel

P_GRID = [round(0.1 * k, 1) for k in range(1, 10)]


def test_examples():
    assert bernoulli_r1(1, 0.5, 1) == pytest.approx(math.log(2))
    assert bernoulli_r1(1, 0.5, 1, base=2) == pytest.approx(1.0)
    assert bernoulli_r3(1, 0.5, 1) == 0.25
    assert bernoulli_r2(1, 0.5, 1) == pytest.approx(0.25)
    assert uniform_r2(5, 1, 3) == pytest.approx(9 / 140, abs=1e-15)
    assert uniform_r3(5, 1, 3) == pytest.approx(1 / 28, abs=1e-15)
    assert uniform_argmax(5) == (3,)
    assert uniform_argmax(6) == (3, 4)


@given(st.integers(1, 400), st.floats(0.01, 0.99))
def test_binomial_reference_against_scipy(n, q):
    b = BinomialRef(n, q)
    for i in {0, 1, n // 3, n // 2, n, n + 1}:
        assert b.lower(i) == pytest.approx(stats.binom.cdf(i - 1, n, q), abs=1e-13)
        assert b.upper(i) == pytest.approx(stats.binom.sf(i - 1, n, q), abs=1e-13)


def test_binary_entropy_edges():
    assert binary_entropy(0.0) == 0.0 and binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5, 2) == 1.0
    with pytest.raises(ValueError):
        binary_entropy(1.5)


@given(st.integers(1, 60), st.sampled_from(P_GRID))
def test_reflection_symmetry(n, p):
    # X -> 1 - X maps Bernoulli(p) order i onto Bernoulli(1-p) order n+1-i
    for i in range(1, n + 1):
        assert bernoulli_r1(n, p, i) == pytest.approx(bernoulli_r1(n, 1 - p, n + 1 - i), abs=1e-12)
        assert bernoulli_r3(n, p, i) == pytest.approx(bernoulli_r3(n, 1 - p, n + 1 - i), abs=1e-14)
        assert bernoulli_r2(n, p, i) == pytest.approx(bernoulli_r2(n, 1 - p, n + 1 - i), abs=1e-12)


@given(st.integers(1, 40), st.floats(0.1, 10.0))
def test_uniform_scale_law_and_symmetry(n, a):
    for i in range(1, n + 1):
        assert uniform_r2(n, a, i) == pytest.approx(a * a * uniform_r2(n, 1, i), rel=1e-12)
        assert uniform_r3(n, a, i) == pytest.approx(uniform_r3(n, a, n + 1 - i), rel=1e-12)


def test_bernoulli_argmax_exhaustive_scan():
    for n in range(1, 51):
        for p in P_GRID:
            h = [bernoulli_r1(n, p, i) for i in range(1, n + 1)]
            v = [bernoulli_r3(n, p, i) for i in range(1, n + 1)]
            top = max(h)
            best = min(i for i in range(1, n + 1) if h[i - 1] >= top * (1 - 1e-12))
            assert bernoulli_argmax(n, p) == best
            assert v[best - 1] == pytest.approx(max(v), rel=1e-12)


def test_two_point_candidate_set_can_miss():
    # n(1-p) = 4 is integral and the peak sits one above it
    assert argmax_candidates(5, 0.2, extended=False) == (4,)
    assert bernoulli_argmax(5, 0.2) == 5
    assert bernoulli_r1(5, 0.2, 5) > bernoulli_r1(5, 0.2, 4)


def test_uniform_argmax_scan():
    for n in range(1, 41):
        vals = [uniform_r3(n, 1, i) for i in range(1, n + 1)]
        top = max(vals)
        assert uniform_argmax(n) == tuple(i for i in range(1, n + 1) if vals[i - 1] >= top * (1 - 1e-12))
        vals2 = [uniform_r2(n, 1, i) for i in range(1, n + 1)]
        assert uniform_argmax(n) == tuple(i for i in range(1, n + 1) if vals2[i - 1] >= max(vals2) * (1 - 1e-12))


@pytest.mark.parametrize("n", [1, 2, 7, 19, 25])
def test_bernoulli_forms_match_generic(n):
    for p in (0.1, 0.5, 0.8):
        model = SampleModel(n, bernoulli(p))
        for i in range(1, n + 1):
            assert bernoulli_r1(n, p, i) == pytest.approx(r1(model, [i]).value, abs=1e-10)
            assert bernoulli_r2(n, p, i) == pytest.approx(r2(model, [i]).value, abs=1e-10)
            assert bernoulli_r3(n, p, i) == pytest.approx(r3(model, [i]).value, abs=1e-10)


@pytest.mark.parametrize("n", [1, 4, 9])
def test_uniform_forms_match_generic(n):
    model = SampleModel(n, Uniform(0, 2.5))
    for i in range(1, n + 1):
        assert uniform_r2(n, 2.5, i) == pytest.approx(r2(model, [i], closed_form=False).value, abs=1e-10)
        assert uniform_r3(n, 2.5, i) == pytest.approx(r3(model, [i], closed_form=False).value, abs=1e-10)


@pytest.mark.parametrize("p", [0.3, 0.5, 0.7])
def test_asymptotics(p):
    n = 10**4
    assert abs(asymptotic_r1_r3(n, p, 1 - p, "r1") - math.log(2)) < 0.02
    assert abs(asymptotic_r1_r3(n, p, 1 - p, "r3") - 0.25) < 0.01
    for c in (1 - p - 0.2, 1 - p + 0.2):
        assert asymptotic_r1_r3(n, p, c, "r1") < 1e-6


def test_argument_checks():
    with pytest.raises(ValueError):
        bernoulli_r1(5, 1.0, 1)
    with pytest.raises(ValueError):
        bernoulli_r3(5, 0.5, 6)
    with pytest.raises(ValueError):
        uniform_r2(5, 0.0, 1)
    with pytest.raises(ValueError):
        asymptotic_r1_r3(10, 0.5, 0.5, "r2")
