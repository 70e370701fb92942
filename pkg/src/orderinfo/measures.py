"""Informativeness measures of order statistics.

For index sets S (observed) and V (already known):

* r1(S|V) = H(X_(S) | X_(V)), infinite for continuous parents;
* r2(S|V) = E ||E[X^n | X_(V)] - E[X^n | X_(S), X_(V)]||^2;
* r3(S|V) = E ||X_(S) - E[X_(S) | X_(V)]||^2.

By exchangeability E[X_j | order statistics] is the same for every j, so
r2 = n E[(m_W - m_V)^2] with m_A = E[X_1 | X_(A)] and W = S u V.

Discrete parents are handled exactly through the multinomial-count table.
Continuous parents use quadrature on the quantile scale where a single
index is involved, exact spacing identities for the uniform, and Monte Carlo
otherwise (the returned value then carries a standard error).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate, special

from . import closed_forms
from .distributions import ContinuousDist, DiscreteDist, Uniform
from .order_stats import SampleModel, index_set, joint_distribution, marginal_pmf

__all__ = [
    "MeasureValue",
    "unit_for_base",
    "r1",
    "r2",
    "r3",
    "measure",
    "profile",
    "degenerate_r4_r5",
    "mc_r1",
    "mc_r2",
    "mc_r3",
    "MIN_TRIALS",
]

MIN_TRIALS = 1000
DEFAULT_TRIALS = 200_000
MC_CHUNK = 1 << 16

# divergence test for tail integrals on the quantile scale
_WINDOWS = 40
_DIVERGENCE_RATIO = 1e-3
_QUAD_REL = 1e-10


@dataclass(frozen=True)
class MeasureValue:
    value: float
    unit: str
    stderr: float = 0.0

    def __post_init__(self):
        if math.isnan(self.value) or self.value < 0.0:
            # tiny negative values are rounding residue of differences
            if not math.isnan(self.value) and self.value > -1e-12:
                object.__setattr__(self, "value", 0.0)
            else:
                raise ValueError(f"measure value must be nonnegative, got {self.value}")

    def __float__(self) -> float:
        return float(self.value)

    @property
    def exact(self) -> bool:
        return self.stderr == 0.0

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)


def unit_for_base(base: float) -> str:
    if base == math.e:
        return "nats"
    if base == 2:
        return "bits"
    raise ValueError("log base must be e or 2")


def _sets(model: SampleModel, S, V) -> tuple[tuple[int, ...], tuple[int, ...]]:
    s = index_set(S, model.n, allow_empty=False)
    v = index_set(V, model.n)
    if set(s) & set(v):
        raise ValueError(f"S {s} and V {v} must be disjoint")
    return s, v


def _columns(whole: tuple[int, ...], part: tuple[int, ...]) -> list[int]:
    return [whole.index(i) for i in part]


def _group(keys: np.ndarray) -> np.ndarray:
    """Group label per row of a 2-D key array (empty keys give one group)."""
    if keys.shape[1] == 0:
        return np.zeros(len(keys), dtype=np.int64)
    return np.unique(keys, axis=0, return_inverse=True)[1].ravel()


def _entropy(probs: np.ndarray) -> float:
    p = probs[probs > 0]
    return -math.fsum(p * np.log(p))


# --------------------------------------------------------------------------
# r1
# --------------------------------------------------------------------------

def r1(model: SampleModel, S: Sequence[int], V: Sequence[int] = (), base: float = math.e) -> MeasureValue:
    """H(X_(S) | X_(V)); +inf for a continuous parent."""
    s, v = _sets(model, S, V)
    unit = unit_for_base(base)
    if not model.is_discrete:
        return MeasureValue(math.inf, unit)
    if len(s) == 1 and not v:
        h = _entropy(np.asarray(marginal_pmf(model, s[0]).probs))
    else:
        w = tuple(sorted(s + v))
        h = _entropy(joint_distribution(model, w)[1])
        if v:
            h -= _entropy(joint_distribution(model, v)[1])
    return MeasureValue(max(h, 0.0) / math.log(base), unit)


# --------------------------------------------------------------------------
# r2
# --------------------------------------------------------------------------

def _count_means(model: SampleModel, idx: tuple[int, ...]):
    """Per count vector: order-statistic values at idx, sample mean, probability."""
    from .order_stats import _count_table  # shared enumeration, not public API

    parent = model.parent
    live = [j for j, p in enumerate(parent.probs) if p > 0.0]
    counts, weights = _count_table(model.n, tuple(parent.probs[j] for j in live))
    support = np.asarray(parent.support)[live]
    # centre values so squared differences do not cancel for large supports
    centre = parent.mean()
    xbar = counts @ (support - centre) / model.n
    cum = np.cumsum(counts, axis=1)
    cats = np.stack([(cum < i).sum(axis=1) for i in idx], axis=1) if idx else np.zeros((len(counts), 0), int)
    return cats, xbar, weights


def _r2_discrete(model: SampleModel, s, v) -> float:
    w = tuple(sorted(s + v))
    cats, xbar, prob = _count_means(model, w)
    gw = _group(cats)
    gv = _group(cats[:, _columns(w, v)])
    pw = np.bincount(gw, weights=prob)
    mw = np.bincount(gw, weights=prob * xbar) / pw
    pv = np.bincount(gv, weights=prob)
    mv = np.bincount(gv, weights=prob * xbar) / pv
    diff = mw[gw] - mv[gv]
    return model.n * math.fsum(prob * diff * diff)


def _r2_pinned(model: SampleModel, i: int) -> float:
    """Singleton r2 by conditioning on the value of one designated draw.

    With Y the other n-1 draws, X_(i) <= u given X_1 = x holds when at least
    i-1 of Y are <= u (if x <= u) or at least i of them are (if x > u).
    """
    from scipy.stats import binom

    parent = model.parent
    xs = np.asarray(parent.support)
    px = np.asarray(parent.probs)
    cum = np.asarray(parent.cumulative)
    n = model.n
    tail_pinned_low = binom.sf(i - 2, n - 1, cum)   # P(#Y<=u >= i-1)
    tail_pinned_high = binom.sf(i - 1, n - 1, cum)  # P(#Y<=u >= i)
    # cdf_given[x, u] = P(X_(i) <= u | X_1 = x)
    below = xs[:, None] <= xs[None, :]
    cdf_given = np.where(below, tail_pinned_low[None, :], tail_pinned_high[None, :])
    cdf_given[:, -1] = 1.0
    pmf_given = np.clip(np.diff(cdf_given, axis=1, prepend=0.0), 0.0, None)
    joint = px[:, None] * pmf_given
    pu = joint.sum(axis=0)
    centred = xs - parent.mean()
    with np.errstate(invalid="ignore", divide="ignore"):
        cond = (centred[:, None] * joint).sum(axis=0) / pu
    live = pu > 0
    return n * math.fsum(pu[live] * cond[live] ** 2)


def r2(model: SampleModel, S: Sequence[int], V: Sequence[int] = (), trials: int = DEFAULT_TRIALS,
       seed: int = 0, closed_form: bool = True) -> MeasureValue:
    """Squared-units r2.  ``closed_form=False`` skips the uniform shortcut."""
    s, v = _sets(model, S, V)
    unit = "squared-units"
    parent = model.parent
    if model.is_discrete:
        if len(s) == 1 and not v:
            return MeasureValue(_r2_pinned(model, s[0]), unit)
        return MeasureValue(_r2_discrete(model, s, v), unit)
    if not parent.has_mean():
        return MeasureValue(math.inf, unit)
    if len(s) == 1 and not v:
        if closed_form and isinstance(parent, Uniform):
            return MeasureValue(closed_forms.uniform_r2(model.n, parent.b - parent.a, s[0]), unit)
        return MeasureValue(_r2_quadrature(model, s[0]), unit)
    est, se = mc_r2(model, s, v, trials, seed)
    return MeasureValue(est, unit, se)


# --------------------------------------------------------------------------
# quadrature on the quantile scale
# --------------------------------------------------------------------------

def _beta_logpdf(a: float, b: float):
    const = -special.betaln(a, b)

    def f(u: float) -> float:
        return const + (a - 1.0) * math.log(u) + (b - 1.0) * math.log1p(-u)

    return f


def _half_integral(fn, weight) -> float:
    """Integral of fn(t) * exp(weight(t)) over t in (0, 1/2].

    Dyadic windows [2^-(j+1), 2^-j] are added until they stop contributing;
    if after ``_WINDOWS`` windows the last still adds more than
    ``_DIVERGENCE_RATIO`` of the running total, the integral diverges.
    """
    def g(t):
        return fn(t) * math.exp(weight(t))

    total = 0.0
    last = 0.0
    for j in range(1, _WINDOWS + 1):
        lo, hi = 2.0 ** -(j + 1), 2.0 ** -j
        # absolute slack tied to the running total, so negligible windows
        # are not pushed to full relative precision
        with warnings.catch_warnings():
            # steep quantiles (gaps between mixture modes) trip the roundoff
            # detector while still meeting ~1e-9 relative accuracy
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            last = integrate.quad(g, lo, hi, epsabs=1e-13 * abs(total), epsrel=_QUAD_REL, limit=200)[0]
        total += last
        if j >= 4 and abs(last) <= 1e-16 * abs(total):
            return total
    if abs(last) > _DIVERGENCE_RATIO * abs(total):
        return math.inf if total > 0 else -math.inf
    return total


def _order_stat_expectation(parent: ContinuousDist, n: int, i: int, h) -> float:
    """E[h(X_(i))] with X_(i) = Q(U), U ~ Beta(i, n-i+1).

    The upper half is integrated in v = 1 - u with the upper quantile so
    that heavy right tails keep full precision.
    """
    low = _half_integral(lambda u: h(parent.quantile(u)), _beta_logpdf(i, n - i + 1))
    high = _half_integral(lambda v: h(parent.isf(v)), _beta_logpdf(n - i + 1, i))
    if math.isinf(low) or math.isinf(high):
        if math.isinf(low) and math.isinf(high) and (low > 0) != (high > 0):
            return math.nan
        return low if math.isinf(low) else high
    return low + high


def _variance_continuous(parent: ContinuousDist, n: int, i: int) -> float:
    """Var(X_(i)); +inf when the second moment diverges."""
    # centre near the bulk of X_(i) to keep the second moment well conditioned
    centre = float(parent.quantile(min(max(i / (n + 1.0), 1e-300), 1 - 1e-16)))
    shift = _order_stat_expectation(parent, n, i, lambda x: x - centre)
    if not math.isfinite(shift):
        return math.inf
    second = _order_stat_expectation(parent, n, i, lambda x: (x - centre) ** 2)
    if not math.isfinite(second):
        return math.inf
    return max(second - shift * shift, 0.0)


def _r2_quadrature(model: SampleModel, i: int) -> float:
    parent = model.parent
    n = model.n
    mu = parent.mean()

    def gap(x: float) -> float:
        below = float(parent.partial_mean(-math.inf, x)) if i > 1 else 0.0
        above = float(parent.partial_mean(x, math.inf)) if i < n else 0.0
        m = (x + (i - 1) * below + (n - i) * above) / n
        return (m - mu) ** 2

    val = _order_stat_expectation(parent, n, i, gap)
    return n * val if math.isfinite(val) else math.inf


# --------------------------------------------------------------------------
# r3
# --------------------------------------------------------------------------

def _uniform_conditional_r3(model: SampleModel, s, v) -> float:
    """Exact E[Var(X_(i) | X_(V))] for a uniform parent.

    Given its nearest known neighbours l < i < u (0 and n+1 stand for the
    interval ends), X_(i) is a scaled Beta(i-l, u-i) between them, which
    yields a^2 (i-l)(u-i) / ((u-l)(n+1)(n+2)).
    """
    n = model.n
    a = model.parent.b - model.parent.a
    known = (0,) + v + (n + 1,)
    total = []
    for i in s:
        j = int(np.searchsorted(known, i))
        lo, hi = known[j - 1], known[j]
        total.append(a * a * (i - lo) * (hi - i) / ((hi - lo) * (n + 1) * (n + 2)))
    return math.fsum(total)


def _r3_discrete(model: SampleModel, s, v) -> float:
    if not v:
        acc = []
        for i in s:
            d = marginal_pmf(model, i)
            acc.append(d.var())
        return math.fsum(acc)
    w = tuple(sorted(s + v))
    values, prob = joint_distribution(model, w)
    gv = _group(values[:, _columns(w, v)])
    pv = np.bincount(gv, weights=prob)
    acc = []
    for c in _columns(w, s):
        x = values[:, c] - model.parent.mean()
        m = np.bincount(gv, weights=prob * x) / pv
        acc.append(math.fsum(prob * (x - m[gv]) ** 2))
    return math.fsum(acc)


def r3(model: SampleModel, S: Sequence[int], V: Sequence[int] = (), trials: int = DEFAULT_TRIALS,
       seed: int = 0, closed_form: bool = True) -> MeasureValue:
    """Squared-units r3.  ``closed_form=False`` skips the uniform spacing identity."""
    s, v = _sets(model, S, V)
    unit = "squared-units"
    parent = model.parent
    if model.is_discrete:
        return MeasureValue(_r3_discrete(model, s, v), unit)
    if closed_form and isinstance(parent, Uniform):
        return MeasureValue(_uniform_conditional_r3(model, s, v), unit)
    if not v:
        vals = [_variance_continuous(parent, model.n, i) for i in s]
        return MeasureValue(math.fsum(vals) if all(map(math.isfinite, vals)) else math.inf, unit)
    est, se = mc_r3(model, s, v, trials, seed)
    return MeasureValue(est, unit, se)


def measure(model: SampleModel, m: int, S: Sequence[int], V: Sequence[int] = (), base: float = math.e,
            trials: int = DEFAULT_TRIALS, seed: int = 0) -> MeasureValue:
    """Dispatch to r1, r2 or r3 by number."""
    if m == 1:
        return r1(model, S, V, base)
    if m == 2:
        return r2(model, S, V, trials, seed)
    if m == 3:
        return r3(model, S, V, trials, seed)
    raise ValueError("measure number must be 1, 2 or 3")


def profile(model: SampleModel, m: int, base: float = math.e, trials: int = DEFAULT_TRIALS,
            seed: int = 0) -> list[MeasureValue]:
    """r_m(i) for every i in [n]."""
    return [measure(model, m, (i,), (), base, trials, seed) for i in range(1, model.n + 1)]


def degenerate_r4_r5(model: SampleModel, S: Sequence[int]) -> tuple[float, float]:
    """Constant values of the two degenerate measures: (0, |S|) or (0, 0)."""
    s = index_set(S, model.n, allow_empty=False)
    return (0.0, 0.0) if model.is_discrete else (0.0, float(len(s)))


# --------------------------------------------------------------------------
# Monte Carlo oracles
# --------------------------------------------------------------------------

def _check_trials(trials: int) -> None:
    if trials < MIN_TRIALS:
        raise ValueError(f"Monte Carlo needs at least {MIN_TRIALS} trials")


def _discrete_draws(model: SampleModel, cols: list[int], trials: int, seed: int):
    """Sorted category codes at the requested columns, plus row means."""
    parent: DiscreteDist = model.parent
    cum = np.asarray(parent.cumulative)
    support = np.asarray(parent.support) - parent.mean()
    rng = np.random.default_rng(seed)
    codes, means = [], []
    done = 0
    while done < trials:
        rows = min(MC_CHUNK, trials - done)
        c = np.searchsorted(cum, rng.random((rows, model.n)), side="right")
        c = np.minimum(c, parent.size - 1).astype(np.int16)
        c.sort(axis=1)
        codes.append(c[:, cols])
        means.append(support[c].mean(axis=1))
        done += rows
    return np.concatenate(codes), np.concatenate(means)


def _plugin_entropy(labels: np.ndarray) -> tuple[float, np.ndarray, int]:
    """Miller-Madow entropy (nats), per-row -log p-hat, number of occupied cells."""
    counts = np.bincount(labels)
    counts = counts[counts > 0] if labels.size else counts
    full = np.bincount(labels)
    n = labels.size
    p = full / n
    with np.errstate(divide="ignore"):
        nlog = -np.log(p)
    occupied = int(np.count_nonzero(full))
    h = _entropy(p) + (occupied - 1) / (2.0 * n)
    return h, nlog[labels], occupied


def mc_r1(model: SampleModel, S: Sequence[int], V: Sequence[int] = (), trials: int = 10**6, seed: int = 0,
          base: float = math.e) -> tuple[float, float]:
    """Plug-in conditional entropy from simulated samples, with standard error.

    The error combines the first-order delta term with the chi-square spread
    of the second-order term, which dominates near uniform cells.
    """
    _check_trials(trials)
    if not model.is_discrete:
        raise TypeError("mc_r1 needs a discrete parent")
    s, v = _sets(model, S, V)
    w = tuple(sorted(s + v))
    codes, _ = _discrete_draws(model, [i - 1 for i in w], trials, seed)
    hw, lw, kw = _plugin_entropy(_group(codes))
    hv, lv, kv = 0.0, np.zeros(trials), 1
    if v:
        hv, lv, kv = _plugin_entropy(_group(codes[:, _columns(w, v)]))
    infl = lw - lv
    var = infl.var() / trials + (kw - 1 + kv - 1) / (2.0 * trials * trials)
    scale = math.log(base)
    return max(hw - hv, 0.0) / scale, math.sqrt(var) / scale


def _uniform_order_stats(n: int, rows: int, rng: np.random.Generator) -> np.ndarray:
    u = rng.random((rows, n))
    u.sort(axis=1)
    return u


def mc_r2(model: SampleModel, S: Sequence[int], V: Sequence[int] = (), trials: int = 10**6,
          seed: int = 0) -> tuple[float, float]:
    """Monte Carlo r2 with standard error.

    Discrete: conditional means estimated by grouping simulated samples on
    the observed order-statistic values; the error uses the influence
    function of n(E[m_W^2] - E[m_V^2]).  Continuous: the conditional means
    are exact given the simulated order statistics (the unobserved draws in
    each gap are i.i.d. truncated parent), so only the outer mean is sampled.
    """
    _check_trials(trials)
    s, v = _sets(model, S, V)
    n = model.n
    w = tuple(sorted(s + v))
    if model.is_discrete:
        codes, y = _discrete_draws(model, [i - 1 for i in w], trials, seed)
        gw = _group(codes)
        gv = _group(codes[:, _columns(w, v)])
        mw = (np.bincount(gw, weights=y) / np.bincount(gw))[gw]
        mv = (np.bincount(gv, weights=y) / np.bincount(gv))[gv]
        est = n * float(np.mean((mw - mv) ** 2))
        infl = n * ((2 * mw * y - mw**2) - (2 * mv * y - mv**2)) - est
        return est, float(infl.std() / math.sqrt(trials))
    parent = model.parent
    if not parent.has_mean():
        return math.inf, 0.0
    mu = parent.mean()
    rng = np.random.default_rng(seed)
    contrib = []
    done = 0
    while done < trials:
        rows = min(MC_CHUNK, trials - done)
        x = parent.quantile_array(_uniform_order_stats(n, rows, rng))
        diff = _rb_mean(parent, x, w, n) - (_rb_mean(parent, x, v, n) if v else mu)
        contrib.append(n * diff * diff)
        done += rows
    c = np.concatenate(contrib)
    return float(c.mean()), float(c.std() / math.sqrt(trials))


def _rb_mean(parent: ContinuousDist, x: np.ndarray, idx: tuple[int, ...], n: int) -> np.ndarray:
    """E[sample mean | X_(idx)] row by row."""
    total = x[:, [i - 1 for i in idx]].sum(axis=1)
    bounds = (0,) + idx + (n + 1,)
    for lo, hi in zip(bounds, bounds[1:]):
        gap = hi - lo - 1
        if gap:
            a = x[:, lo - 1] if lo > 0 else np.full(len(x), -np.inf)
            b = x[:, hi - 1] if hi <= n else np.full(len(x), np.inf)
            total = total + gap * parent.partial_mean(a, b)
    return total / n


def mc_r3(model: SampleModel, S: Sequence[int], V: Sequence[int] = (), trials: int = 10**6,
          seed: int = 0) -> tuple[float, float]:
    """Monte Carlo r3 with standard error.

    V empty: sample variance of X_(i).  Discrete with V: pooled within-group
    variance over groups of equal X_(V).  Continuous with V: two independent
    redraws of X_(i) given X_(V) (a scaled beta on the quantile scale between
    the neighbouring known order statistics); half their squared difference
    is unbiased for the conditional variance.
    """
    _check_trials(trials)
    s, v = _sets(model, S, V)
    n = model.n
    rng = np.random.default_rng(seed)
    if model.is_discrete:
        w = tuple(sorted(s + v))
        codes, _ = _discrete_draws(model, [i - 1 for i in w], trials, seed)
        support = np.asarray(model.parent.support) - model.parent.mean()
        g = _group(codes[:, _columns(w, v)])
        sizes = np.bincount(g)
        contrib = np.zeros(trials)
        for c in _columns(w, s):
            x = support[codes[:, c]]
            m = np.bincount(g, weights=x) / sizes
            corr = np.where(sizes > 1, sizes / np.maximum(sizes - 1, 1), 0.0)
            contrib += (x - m[g]) ** 2 * corr[g]
        return float(contrib.mean()), float(contrib.std() / math.sqrt(trials))
    parent = model.parent
    if not v:
        xs = []
        done = 0
        while done < trials:
            rows = min(MC_CHUNK, trials - done)
            u = np.stack([rng.beta(i, n - i + 1, rows) for i in s], axis=1)
            xs.append(parent.quantile_array(u))
            done += rows
        x = np.concatenate(xs)
        dev = x - x.mean(axis=0)
        contrib = (dev**2).sum(axis=1) * trials / (trials - 1)
        return float(contrib.mean()), float(contrib.std() / math.sqrt(trials))
    known = (0,) + v + (n + 1,)
    contrib = []
    done = 0
    while done < trials:
        rows = min(MC_CHUNK, trials - done)
        u = _uniform_order_stats(n, rows, rng)
        ends = np.concatenate([np.zeros((rows, 1)), u, np.ones((rows, 1))], axis=1)
        acc = np.zeros(rows)
        for i in s:
            j = int(np.searchsorted(known, i))
            lo, hi = known[j - 1], known[j]
            left, width = ends[:, lo], ends[:, hi] - ends[:, lo]
            first = parent.quantile_array(left + width * rng.beta(i - lo, hi - i, rows))
            second = parent.quantile_array(left + width * rng.beta(i - lo, hi - i, rows))
            acc += 0.5 * (first - second) ** 2
        contrib.append(acc)
        done += rows
    c = np.concatenate(contrib)
    return float(c.mean()), float(c.std() / math.sqrt(trials))
