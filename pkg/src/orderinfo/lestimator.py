"""L-estimators: fixed nonnegative weights on the sorted window, summing to 1.

Classical members are the mean, median, min, max, midpoint and rank-r
filters.  The measure-driven constructors weight each rank by how
informative its order statistic is under the noise model.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .measures import MeasureValue
from .order_stats import SampleModel
from .selection import sequential_select

__all__ = [
    "LEstimator",
    "apply",
    "apply_many",
    "named",
    "coeffs_salt_pepper",
    "coeffs_sequential",
    "coeffs_continuous",
    "to_csv",
    "from_csv",
    "INVERSE_FLOOR",
]

INVERSE_FLOOR = 1e-12
_SUM_TOL = 1e-12


@dataclass(frozen=True)
class LEstimator:
    alpha: tuple[float, ...]
    truncation: int | None = None

    def __post_init__(self):
        a = tuple(float(x) for x in self.alpha)
        object.__setattr__(self, "alpha", a)
        if not a:
            raise ValueError("an L-estimator needs at least one coefficient")
        if any(not math.isfinite(x) or x < 0.0 for x in a):
            raise ValueError("coefficients must be finite and nonnegative")
        if abs(math.fsum(a) - 1.0) > _SUM_TOL:
            raise ValueError(f"coefficients sum to {math.fsum(a)!r}, not 1")

    @classmethod
    def from_weights(cls, weights: Iterable[float], truncation: int | None = None) -> "LEstimator":
        """Normalize nonnegative weights; the largest entry absorbs rounding."""
        w = np.asarray(list(weights), dtype=float)
        total = math.fsum(w)
        if not total > 0.0 or not math.isfinite(total):
            raise ValueError("weights must have a positive finite sum")
        a = w / total
        top = int(np.argmax(a))
        a[top] = 0.0
        a[top] = max(0.0, 1.0 - math.fsum(a))
        return cls(tuple(a), truncation)

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def weights(self) -> np.ndarray:
        w = np.asarray(self.alpha)
        w.setflags(write=False)
        return w


def apply(filt: LEstimator, window: Sequence[float]) -> float:
    """sum_k alpha_k x_(k) for one window."""
    x = np.sort(np.asarray(window, dtype=float).ravel())
    if x.size != filt.n:
        raise ValueError(f"window has {x.size} values, filter expects {filt.n}")
    return math.fsum(filt.weights * x)


def apply_many(filt: LEstimator, windows: np.ndarray) -> np.ndarray:
    """Apply to every window along the last axis."""
    x = np.sort(np.asarray(windows, dtype=float), axis=-1)
    if x.shape[-1] != filt.n:
        raise ValueError(f"windows have {x.shape[-1]} values, filter expects {filt.n}")
    live = np.flatnonzero(filt.weights)
    # only ranks with weight matter; summing them in a fixed order keeps
    # results independent of how the windows are batched
    out = np.zeros(x.shape[:-1])
    for k in live:
        out += filt.weights[k] * x[..., k]
    return out


def named(kind: str, n: int, r: int | None = None) -> LEstimator:
    """mean, median, min, max, midpoint or rank (needs r)."""
    if n < 1:
        raise ValueError("window length must be positive")
    a = np.zeros(n)
    if kind == "mean":
        return LEstimator.from_weights(np.ones(n))
    if kind == "median":
        if n % 2 == 0:
            raise ValueError("the median filter needs an odd window length")
        a[n // 2] = 1.0
    elif kind == "min":
        a[0] = 1.0
    elif kind == "max":
        a[-1] = 1.0
    elif kind == "midpoint":
        a[0] += 0.5
        a[-1] += 0.5
    elif kind == "rank":
        if r is None or not 1 <= r <= n:
            raise ValueError(f"rank filter needs r in [1, {n}]")
        a[r - 1] = 1.0
    else:
        raise ValueError(f"unknown filter kind {kind!r}")
    return LEstimator(tuple(a))


def _as_floats(values: Iterable[MeasureValue | float]) -> np.ndarray:
    return np.array([float(v) for v in values], dtype=float)


def coeffs_salt_pepper(r1_values: Iterable[MeasureValue | float], rho: float,
                       floor: float = INVERSE_FLOOR) -> LEstimator:
    """Weights from single-index entropies under impulse noise.

    Light noise (rho < 0.5) favours nearly deterministic ranks, weighting by
    1 / max(r1, floor); heavy noise weights by r1 itself.
    """
    r = _as_floats(r1_values)
    if r.size == 0 or np.any(~np.isfinite(r)) or np.any(r < 0):
        raise ValueError("r1 values must be finite and nonnegative")
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [0, 1]")
    if not np.any(r > 0):
        raise ValueError("all r1 values are zero; no rank carries information")
    w = 1.0 / np.maximum(r, floor) if rho < 0.5 else r
    return LEstimator.from_weights(w)


def coeffs_sequential(model: SampleModel, d: int, base: float = math.e) -> LEstimator:
    """Weights on the first d greedily chosen ranks, proportional to their entropy gains."""
    if not model.is_discrete:
        raise ValueError("sequential entropy weights need a discrete parent")
    if not 1 <= d <= model.n:
        raise ValueError(f"truncation d must lie in [1, {model.n}]")
    sel = sequential_select(model, 1, d, base)
    w = np.zeros(model.n)
    for i, g in zip(sel.indices, sel.scores):
        w[i - 1] = g.value
    if not np.any(w > 0):
        raise ValueError("every conditional gain is zero")
    return LEstimator.from_weights(w, truncation=d)


def coeffs_continuous(r3_values: Iterable[MeasureValue | float]) -> LEstimator:
    """Weights proportional to r3; ranks with infinite r3 get weight zero."""
    r = _as_floats(r3_values)
    w = np.where(np.isfinite(r), r, 0.0)
    if np.any(w < 0):
        raise ValueError("r3 values must be nonnegative")
    if not np.any(w > 0):
        raise ValueError("need at least one finite positive r3 value")
    return LEstimator.from_weights(w)


def to_csv(filt: LEstimator) -> str:
    buf = io.StringIO()
    buf.write("k,alpha\n")
    for k, a in enumerate(filt.alpha, start=1):
        buf.write(f"{k},{a:.17g}\n")
    return buf.getvalue()


def from_csv(text: str) -> LEstimator:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["k", "alpha"]:
        raise ValueError("expected a 'k,alpha' header")
    body = [r for r in rows[1:] if r]
    ks = [int(r[0]) for r in body]
    if ks != list(range(1, len(ks) + 1)):
        raise ValueError("k must run 1..n in order")
    return LEstimator.from_weights(float(r[1]) for r in body)
