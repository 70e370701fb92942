"""Distributions of order statistics X_(i) of an i.i.d. sample of size n.

Three exact routes for discrete parents are provided and cross-checked:

* ``joint_pmf``: inclusion-exclusion over which coordinates are strict,
  each term a sum over occupancy vectors ``t`` between consecutive cut points.
* ``joint_pmf_counts``: the sorted sample is a function of the multinomial
  category counts, so sum multinomial masses over consistent count vectors.
  This is the production path.
* ``brute_force_joint_pmf``: enumerate all raw samples (tiny instances only).

Indices are 1-based throughout, as in the usual X_(1) <= ... <= X_(n).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Union

import numpy as np
from scipy import special, stats

from .distributions import ContinuousDist, DiscreteDist, Distribution

__all__ = [
    "SampleModel",
    "InstanceTooLarge",
    "index_set",
    "marginal_pmf",
    "marginal_pdf",
    "joint_pmf",
    "joint_pmf_counts",
    "joint_distribution",
    "joint_pdf",
    "brute_force_joint_pmf",
    "mc_joint_estimate",
    "sorted_samples",
]

BRUTE_FORCE_LIMIT = 10**7
MC_CHUNK = 1 << 16


class InstanceTooLarge(ValueError):
    """Raised when an exhaustive enumeration would exceed its budget."""


@dataclass(frozen=True)
class SampleModel:
    n: int
    parent: Distribution

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("sample size n must be a positive integer")
        object.__setattr__(self, "n", int(self.n))

    @property
    def is_discrete(self) -> bool:
        return self.parent.is_discrete


def index_set(indices: Iterable[int], n: int, allow_empty: bool = True) -> tuple[int, ...]:
    """Validate and return indices as a sorted tuple of distinct ints in [1, n]."""
    idx = tuple(int(i) for i in indices)
    if not allow_empty and not idx:
        raise ValueError("index set must be nonempty")
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate indices in {idx}")
    if any(i < 1 or i > n for i in idx):
        raise ValueError(f"indices {idx} must lie in [1, {n}]")
    return tuple(sorted(idx))


def _require_discrete(model: SampleModel) -> DiscreteDist:
    if not model.is_discrete:
        raise TypeError("this operation needs a discrete parent; use the density routines")
    return model.parent


def _require_continuous(model: SampleModel) -> ContinuousDist:
    if model.is_discrete:
        raise TypeError("this operation needs a continuous parent")
    return model.parent


def marginal_pmf(model: SampleModel, i: int) -> DiscreteDist:
    """Law of X_(i) on the parent support.

    P(X_(i) <= v) is the chance that at least i of the n draws are <= v.
    """
    parent = _require_discrete(model)
    (i,) = index_set([i], model.n, allow_empty=False)
    cum = np.asarray(parent.cumulative)
    tail = stats.binom.sf(i - 1, model.n, cum)
    tail[-1] = 1.0
    masses = np.clip(np.diff(tail, prepend=0.0), 0.0, None)
    masses /= math.fsum(masses)
    return DiscreteDist(parent.support, tuple(masses))


def marginal_pdf(model: SampleModel, i: int, x) -> np.ndarray | float:
    """Density of X_(i): Beta(i, n-i+1) law pushed through the parent cdf."""
    parent = _require_continuous(model)
    (i,) = index_set([i], model.n, allow_empty=False)
    x = np.asarray(x, dtype=float)
    u = parent.cdf(x)
    out = stats.beta.pdf(u, i, model.n - i + 1) * parent.pdf(x)
    return out if np.ndim(out) else float(out)


# --------------------------------------------------------------------------
# Inclusion-exclusion route
# --------------------------------------------------------------------------

def _occupancy_prob(n: int, idx: tuple[int, ...], cuts: tuple[float, ...]) -> float:
    """P(for every j, at most n - i_j draws exceed cut j), cuts given as cdf levels.

    ``cuts[j]`` is P(X <= y_j) for the j-th cut point.  ``t_k`` counts draws
    above the last cut, ``t_j`` draws in (y_j, y_{j+1}], the rest fall at or
    below y_1.  Cut levels must be nondecreasing.
    """
    k = len(idx)
    cells = [1.0 - cuts[-1]] + [cuts[j + 1] - cuts[j] for j in range(k - 2, -1, -1)]
    # cells[0] pairs with t_k, cells[1] with t_{k-1}, ...
    bottom = cuts[0]
    terms: list[float] = []

    def walk(level: int, used: int, coef: float, prob: float) -> None:
        # level counts down from k (t_k first); used = sum of t_m with m > level
        if level == 0:
            rest = n - used
            terms.append(coef * prob * bottom**rest)
            return
        cap = n - idx[level - 1] - used
        cell = cells[k - level]
        for t in range(cap + 1):
            c = coef * math.comb(n - used, t)
            p = prob * cell**t
            if p == 0.0 and t > 0:
                break
            walk(level - 1, used + t, c, p)

    walk(k, 0, 1.0, 1.0)
    return math.fsum(terms)


def joint_pmf(model: SampleModel, S: Sequence[int], values: Sequence[float]) -> float:
    """P(X_(S) = values) by inclusion-exclusion over strict/non-strict cuts.

    For each subset I of positions the term is P(X_(I) < x_I, X_(I^c) <= x_I^c).
    When strict and weak cuts interleave out of order, a later (smaller) cut
    implies the earlier constraint, so each cut is replaced by the running
    minimum from the right before the occupancy sum.
    """
    parent = _require_discrete(model)
    idx = index_set(S, model.n, allow_empty=False)
    vals = tuple(float(v) for v in values)
    if len(vals) != len(idx):
        raise ValueError("values must align with S")
    if any(b < a for a, b in zip(vals, vals[1:])):
        return 0.0
    if any(parent.pmf(v) == 0.0 for v in vals):
        return 0.0
    k = len(idx)
    le = [parent.cdf(v) for v in vals]
    lt = [parent.cdf_left(v) for v in vals]
    cache: dict[tuple[float, ...], float] = {}
    total = []
    for mask in range(1 << k):
        levels = [lt[j] if mask >> j & 1 else le[j] for j in range(k)]
        for j in range(k - 2, -1, -1):
            levels[j] = min(levels[j], levels[j + 1])
        key = tuple(levels)
        if key not in cache:
            cache[key] = _occupancy_prob(model.n, idx, key)
        sign = -1.0 if bin(mask).count("1") % 2 else 1.0
        total.append(sign * cache[key])
    return min(1.0, max(0.0, math.fsum(total)))


# --------------------------------------------------------------------------
# Multinomial-count route
# --------------------------------------------------------------------------

def _compositions(n: int, m: int) -> np.ndarray:
    """All nonnegative integer vectors of length m summing to n."""
    if m == 1:
        return np.array([[n]], dtype=np.int64)
    bars = np.array(list(itertools.combinations(range(n + m - 1), m - 1)), dtype=np.int64)
    padded = np.concatenate([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), n + m - 1)], axis=1)
    return np.diff(padded, axis=1) - 1


@lru_cache(maxsize=256)
def _count_table(n: int, probs: tuple[float, ...]) -> tuple[np.ndarray, np.ndarray]:
    """(count vectors over positive-mass categories, their multinomial probabilities)."""
    p = np.asarray(probs)
    counts = _compositions(n, len(p))
    logp = special.gammaln(n + 1) - special.gammaln(counts + 1).sum(axis=1) + (counts * np.log(p)).sum(axis=1)
    return counts, np.exp(logp)


@lru_cache(maxsize=512)
def _joint_table(model: SampleModel, idx: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    parent = model.parent
    live = [j for j, p in enumerate(parent.probs) if p > 0.0]
    counts, weights = _count_table(model.n, tuple(parent.probs[j] for j in live))
    cum = np.cumsum(counts, axis=1)
    # X_(i) is the first category whose running count reaches i
    cat = np.stack([(cum < i).sum(axis=1) for i in idx], axis=1)
    keys, inverse = np.unique(cat, axis=0, return_inverse=True)
    probs = np.zeros(len(keys))
    np.add.at(probs, inverse.ravel(), weights)
    support = np.asarray(parent.support)[live]
    values = support[keys]
    values.setflags(write=False)
    probs.setflags(write=False)
    return values, probs


def joint_distribution(model: SampleModel, S: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Full joint law of X_(S): (value tuples as rows, masses).  Cached per model."""
    _require_discrete(model)
    idx = index_set(S, model.n, allow_empty=False)
    return _joint_table(model, idx)


def joint_pmf_counts(model: SampleModel, S: Sequence[int], values: Sequence[float]) -> float:
    """P(X_(S) = values) from the multinomial-count enumeration."""
    rows, probs = joint_distribution(model, S)
    vals = np.asarray(values, dtype=float)
    if vals.shape != (rows.shape[1],):
        raise ValueError("values must align with S")
    hit = np.all(rows == vals, axis=1)
    return float(math.fsum(probs[hit]))


def brute_force_joint_pmf(model: SampleModel, S: Sequence[int], values: Sequence[float]) -> float:
    """Oracle: enumerate every raw sample, sort it, add up matching mass."""
    parent = _require_discrete(model)
    idx = index_set(S, model.n, allow_empty=False)
    vals = np.asarray(values, dtype=float)
    if vals.shape != (len(idx),):
        raise ValueError("values must align with S")
    m, n = parent.size, model.n
    if m**n > BRUTE_FORCE_LIMIT:
        raise InstanceTooLarge(f"{m}^{n} raw samples exceeds the brute-force limit of {BRUTE_FORCE_LIMIT}")
    support = np.asarray(parent.support)
    logp = np.log(np.asarray(parent.probs, dtype=float), where=np.asarray(parent.probs) > 0,
                  out=np.full(m, -np.inf))
    cols = np.array(idx) - 1
    acc = []
    total = m**n
    step = max(1, min(total, 1 << 18))
    for start in range(0, total, step):
        codes = np.arange(start, min(total, start + step))
        digits = np.empty((len(codes), n), dtype=np.int64)
        rem = codes.copy()
        for c in range(n):
            digits[:, c] = rem % m
            rem //= m
        w = np.exp(logp[digits].sum(axis=1))
        srt = np.sort(support[digits], axis=1)[:, cols]
        acc.append(math.fsum(w[np.all(srt == vals, axis=1)]))
    return math.fsum(acc)


# --------------------------------------------------------------------------
# Continuous parents
# --------------------------------------------------------------------------

def _log_gap_coefficient(n: int, idx: tuple[int, ...]) -> float:
    gaps = np.diff((0,) + idx + (n + 1,)) - 1
    return math.lgamma(n + 1) - sum(math.lgamma(g + 1) for g in gaps)


def joint_pdf(model: SampleModel, S: Sequence[int], values: Sequence[float]) -> float:
    """Joint density of X_(S); zero unless the values strictly increase."""
    parent = _require_continuous(model)
    idx = index_set(S, model.n, allow_empty=False)
    vals = [float(v) for v in values]
    if len(vals) != len(idx):
        raise ValueError("values must align with S")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        return 0.0
    dens = [float(parent.pdf(v)) for v in vals]
    if any(d <= 0.0 for d in dens):
        return 0.0
    levels = [0.0] + [float(parent.cdf(v)) for v in vals] + [1.0]
    gaps = np.diff((0,) + idx + (model.n + 1,)) - 1
    logval = _log_gap_coefficient(model.n, idx) + sum(math.log(d) for d in dens)
    for g, lo, hi in zip(gaps, levels, levels[1:]):
        if g:
            width = hi - lo
            if width <= 0.0:
                return 0.0
            logval += g * math.log(width)
    return math.exp(logval)


# --------------------------------------------------------------------------
# Sampling oracle
# --------------------------------------------------------------------------

def sorted_samples(model: SampleModel, trials: int, rng: np.random.Generator, chunk: int = MC_CHUNK):
    """Yield sorted (rows, n) sample blocks, ``trials`` rows in total."""
    done = 0
    while done < trials:
        rows = min(chunk, trials - done)
        block = model.parent.sample_rng((rows, model.n), rng)
        block.sort(axis=1)
        yield block
        done += rows


Event = Union[Sequence[float], Callable[[np.ndarray], np.ndarray]]


def mc_joint_estimate(model: SampleModel, S: Sequence[int], event: Event, trials: int,
                      seed: int) -> tuple[float, float]:
    """Monte Carlo probability of an event on X_(S), with its standard error.

    ``event`` is either a value vector (equality event) or a callable mapping a
    (rows, |S|) array of order-statistic values to a boolean row mask.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    idx = index_set(S, model.n, allow_empty=False)
    cols = np.array(idx) - 1
    if callable(event):
        test = event
    else:
        target = np.asarray(event, dtype=float)
        if target.shape != (len(idx),):
            raise ValueError("event values must align with S")
        test = lambda block: np.all(block == target, axis=1)  # noqa: E731
    hits = 0
    rng = np.random.default_rng(seed)
    for block in sorted_samples(model, trials, rng):
        hits += int(np.count_nonzero(test(block[:, cols])))
    p = hits / trials
    return p, math.sqrt(p * (1.0 - p) / trials)
