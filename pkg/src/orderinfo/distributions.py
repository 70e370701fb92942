"""Parent population models.

Discrete parents live on a finite, strictly ascending support.  Continuous
parents are a closed family (uniform, Gaussian mixture, Cauchy) plus a
``CustomContinuous`` escape hatch built from user callables.  Every object is
immutable; sampling takes an explicit seed and never touches global RNG state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Callable, Union

import numpy as np
from scipy import integrate, special

__all__ = [
    "DiscreteDist",
    "ContinuousDist",
    "Uniform",
    "GaussianMixture",
    "Cauchy",
    "CustomContinuous",
    "Distribution",
    "bernoulli",
    "salt_pepper_dist",
    "evaluate",
    "sample",
]

_SUM_TOL = 1e-12
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class DiscreteDist:
    """Finite-support pmf.  ``support`` is strictly ascending."""

    support: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        support = tuple(float(v) for v in self.support)
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)
        if not support:
            raise ValueError("support must be nonempty")
        if len(support) != len(probs):
            raise ValueError("support and probs must have the same length")
        if any(b <= a for a, b in zip(support, support[1:])):
            raise ValueError("support must be strictly increasing")
        if any(p < 0 or not math.isfinite(p) for p in probs):
            raise ValueError("probabilities must be finite and nonnegative")
        if abs(math.fsum(probs) - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities sum to {math.fsum(probs)!r}, not 1")

    is_discrete = True

    @property
    def size(self) -> int:
        return len(self.support)

    @property
    def cumulative(self) -> tuple[float, ...]:
        # last entry pinned to exactly 1
        acc = []
        for j in range(len(self.probs)):
            acc.append(math.fsum(self.probs[: j + 1]))
        acc[-1] = 1.0
        return tuple(acc)

    def pmf(self, x: float) -> float:
        try:
            return self.probs[self.support.index(float(x))]
        except ValueError:
            return 0.0

    def cdf(self, x: float) -> float:
        j = int(np.searchsorted(self.support, x, side="right"))
        return 0.0 if j == 0 else self.cumulative[j - 1]

    def cdf_left(self, x: float) -> float:
        """P(X < x)."""
        j = int(np.searchsorted(self.support, x, side="left"))
        return 0.0 if j == 0 else self.cumulative[j - 1]

    def quantile(self, u: float) -> float:
        """Smallest support point with cdf >= u."""
        if not 0.0 <= u <= 1.0:
            raise ValueError("u must lie in [0, 1]")
        cum = self.cumulative
        j = int(np.searchsorted(cum, u, side="left"))
        # skip leading zero-mass points when u == 0
        while j < len(cum) - 1 and self.probs[j] == 0.0:
            j += 1
        return self.support[min(j, len(cum) - 1)]

    def mean(self) -> float:
        return math.fsum(p * v for v, p in zip(self.support, self.probs))

    def var(self) -> float:
        m = self.mean()
        return math.fsum(p * (v - m) ** 2 for v, p in zip(self.support, self.probs))

    def sample(self, count: int, seed: int) -> np.ndarray:
        return self.sample_rng(count, np.random.default_rng(seed))

    def sample_rng(self, size, rng: np.random.Generator) -> np.ndarray:
        u = rng.random(size)
        idx = np.searchsorted(np.asarray(self.cumulative), u, side="right")
        return np.asarray(self.support)[np.minimum(idx, self.size - 1)]

    def shifted(self, c: float) -> "DiscreteDist":
        return DiscreteDist(tuple(v + c for v in self.support), self.probs)


def _drop_zero_masses(points: dict[float, float]) -> DiscreteDist:
    kept = sorted((v, p) for v, p in points.items() if p > 0.0)
    return DiscreteDist(tuple(v for v, _ in kept), tuple(p for _, p in kept))


def bernoulli(p: float) -> DiscreteDist:
    """Two-point pmf on {0, 1} with success probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return _drop_zero_masses({0.0: 1.0 - p, 1.0: p})


def salt_pepper_dist(x: float, rho: float, rho1: float) -> DiscreteDist:
    """Observed pixel law when a clean value ``x`` is hit by impulse noise.

    A pixel is corrupted with probability ``rho``; a corrupted pixel becomes 0
    (pepper) with probability ``rho1`` and 255 (salt) otherwise.
    """
    if not 0.0 < x < 255.0:
        raise ValueError("clean pixel value must lie strictly between 0 and 255")
    if not (0.0 <= rho <= 1.0 and 0.0 <= rho1 <= 1.0):
        raise ValueError("rho and rho1 must lie in [0, 1]")
    return _drop_zero_masses({0.0: rho1 * rho, float(x): 1.0 - rho, 255.0: (1.0 - rho1) * rho})


class ContinuousDist:
    """Absolutely continuous parent.

    Subclasses provide ``pdf``, ``cdf``, ``sf``, ``quantile``, ``isf``,
    ``partial_mean`` and ``sample_rng``.  ``isf`` is the upper-tail quantile
    (``isf(v) == quantile(1 - v)``) and is evaluated directly so that heavy
    upper tails stay resolvable for ``v`` far below machine epsilon.
    """

    is_discrete = False

    def sample(self, count: int, seed: int) -> np.ndarray:
        return self.sample_rng(count, np.random.default_rng(seed))

    def sf(self, x):
        return 1.0 - self.cdf(x)

    def isf(self, v: float) -> float:
        return self.quantile(1.0 - v)

    def has_mean(self) -> bool:
        return True

    def quantile_array(self, u) -> np.ndarray:
        """Elementwise quantile for arrays of levels."""
        return np.vectorize(self.quantile, otypes=[float])(u)


@dataclass(frozen=True)
class Uniform(ContinuousDist):
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("Uniform requires a < b")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where((x >= self.a) & (x <= self.b), 1.0 / (self.b - self.a), 0.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0)
        return out if out.ndim else float(out)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.clip((self.b - x) / (self.b - self.a), 0.0, 1.0)
        return out if out.ndim else float(out)

    def quantile(self, u: float) -> float:
        return self.a + (self.b - self.a) * u

    def isf(self, v: float) -> float:
        return self.b - (self.b - self.a) * v

    def quantile_array(self, u) -> np.ndarray:
        return self.a + (self.b - self.a) * np.asarray(u, dtype=float)

    def mean(self) -> float:
        return 0.5 * (self.a + self.b)

    def var(self) -> float:
        return (self.b - self.a) ** 2 / 12.0

    def partial_mean(self, lo, hi):
        """E[X | lo < X < hi]."""
        lo = np.maximum(np.asarray(lo, dtype=float), self.a)
        hi = np.minimum(np.asarray(hi, dtype=float), self.b)
        out = 0.5 * (lo + hi)
        return out if out.ndim else float(out)

    def sample_rng(self, size, rng):
        return rng.uniform(self.a, self.b, size)


@dataclass(frozen=True)
class GaussianMixture(ContinuousDist):
    """Finite mixture of normals; ``variances`` are sigma squared, not sigma."""

    means: tuple[float, ...]
    variances: tuple[float, ...]
    weights: tuple[float, ...]
    _components: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        means = tuple(float(m) for m in self.means)
        variances = tuple(float(v) for v in self.variances)
        weights = tuple(float(w) for w in self.weights)
        if not (len(means) == len(variances) == len(weights) >= 1):
            raise ValueError("means, variances and weights must have equal nonzero length")
        if any(v <= 0 for v in variances):
            raise ValueError("variances must be positive")
        if any(w < 0 for w in weights) or abs(math.fsum(weights) - 1.0) > _SUM_TOL:
            raise ValueError("weights must be nonnegative and sum to 1")
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "variances", variances)
        object.__setattr__(self, "weights", weights)
        comps = tuple(
            (w, m, math.sqrt(v), NormalDist(m, math.sqrt(v)))
            for w, m, v in zip(weights, means, variances)
            if w > 0
        )
        object.__setattr__(self, "_components", comps)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = sum(w * np.exp(-0.5 * ((x - m) / s) ** 2) / (s * math.sqrt(2 * math.pi))
                  for w, m, s, _ in self._components)
        return out if np.ndim(out) else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = sum(w * special.ndtr((x - m) / s) for w, m, s, _ in self._components)
        return out if np.ndim(out) else float(out)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        out = sum(w * special.ndtr((m - x) / s) for w, m, s, _ in self._components)
        return out if np.ndim(out) else float(out)

    def _cdf_scalar(self, x: float) -> float:
        return math.fsum(w * 0.5 * math.erfc((m - x) / (s * _SQRT2)) for w, m, s, _ in self._components)

    def _sf_scalar(self, x: float) -> float:
        return math.fsum(w * 0.5 * math.erfc((x - m) / (s * _SQRT2)) for w, m, s, _ in self._components)

    def _pdf_scalar(self, x: float) -> float:
        return math.fsum(w * math.exp(-0.5 * ((x - m) / s) ** 2) / (s * 2.5066282746310002)
                         for w, m, s, _ in self._components)

    def _invert(self, target: float, fn, sign: float, bracket: tuple[float, float]) -> float:
        # safeguarded Newton on fn(x) = target; fn is cdf (sign +1) or sf (sign -1)
        lo, hi = bracket
        if lo == hi:
            return lo
        x = 0.5 * (lo + hi)
        for _ in range(200):
            g = fn(x) - target
            if g == 0.0:
                return x
            if (g > 0) == (sign > 0):
                hi = x
            else:
                lo = x
            d = self._pdf_scalar(x)
            step = x - sign * g / d if d > 0 else math.nan
            x_new = step if lo < step < hi else 0.5 * (lo + hi)
            if abs(x_new - x) <= 1e-15 * max(1.0, abs(x)) or hi - lo <= 1e-15 * max(1.0, abs(x)):
                return x_new
            x = x_new
        return x

    def quantile(self, u: float) -> float:
        if u <= 0.0:
            return -math.inf
        if u >= 1.0:
            return math.inf
        # the mixture quantile lies between the component quantiles
        qs = [nd.inv_cdf(u) for _, _, _, nd in self._components]
        return self._invert(u, self._cdf_scalar, 1.0, (min(qs), max(qs)))

    def isf(self, v: float) -> float:
        if v <= 0.0:
            return math.inf
        if v >= 1.0:
            return -math.inf
        qs = [2 * m - nd.inv_cdf(v) for _, m, _, nd in self._components]
        return self._invert(v, self._sf_scalar, -1.0, (min(qs), max(qs)))

    def quantile_array(self, u) -> np.ndarray:
        # vectorized bracketed Newton, same scheme as the scalar path
        u = np.asarray(u, dtype=float)
        z = special.ndtri(u)
        comp = np.stack([m + s * z for _, m, s, _ in self._components])
        lo, hi = comp.min(axis=0), comp.max(axis=0)
        x = 0.5 * (lo + hi)
        for _ in range(100):
            g = self.cdf(x) - u
            hi = np.where(g > 0, x, hi)
            lo = np.where(g <= 0, x, lo)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = x - g / self.pdf(x)
            inside = (step > lo) & (step < hi)
            x_new = np.where(inside, step, 0.5 * (lo + hi))
            done = np.abs(x_new - x) <= 1e-14 * np.maximum(1.0, np.abs(x))
            x = x_new
            if np.all(done | (lo == hi)):
                break
        return x

    def mean(self) -> float:
        return math.fsum(w * m for w, m, _, _ in self._components)

    def var(self) -> float:
        mu = self.mean()
        return math.fsum(w * (s * s + (m - mu) ** 2) for w, m, s, _ in self._components)

    def partial_mean(self, lo, hi):
        """E[X | lo < X < hi] from the closed-form normal partial expectations."""
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        num = 0.0
        den = 0.0
        for w, m, s, _ in self._components:
            za, zb = (lo - m) / s, (hi - m) / s
            pa, pb = _norm_pdf(za), _norm_pdf(zb)
            mass = special.ndtr(zb) - special.ndtr(za)
            # upper-tail intervals lose precision through ndtr differences
            mass = np.where(za > 0, special.ndtr(-za) - special.ndtr(-zb), mass)
            num = num + w * (m * mass - s * (pb - pa))
            den = den + w * mass
        with np.errstate(invalid="ignore", divide="ignore"):
            out = num / den
        return out if np.ndim(out) else float(out)

    def sample_rng(self, size, rng):
        w = np.array([c[0] for c in self._components])
        m = np.array([c[1] for c in self._components])
        s = np.array([c[2] for c in self._components])
        k = np.searchsorted(np.cumsum(w), rng.random(size), side="right")
        k = np.minimum(k, len(w) - 1)
        return m[k] + s[k] * rng.standard_normal(size)


def _norm_pdf(z):
    z = np.asarray(z, dtype=float)
    with np.errstate(invalid="ignore"):
        out = np.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
    return np.where(np.isinf(z), 0.0, out)


@dataclass(frozen=True)
class Cauchy(ContinuousDist):
    location: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("Cauchy scale must be positive")

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.location) / self.scale
        out = 1.0 / (math.pi * self.scale * (1.0 + z * z))
        return out if np.ndim(out) else float(out)

    def cdf(self, x):
        z = (np.asarray(x, dtype=float) - self.location) / self.scale
        with np.errstate(divide="ignore"):
            # arctan(-1/z)/pi keeps relative precision deep in the left tail
            out = np.where(z < 0, np.arctan(-1.0 / z) / math.pi, 0.5 + np.arctan(z) / math.pi)
        return out if np.ndim(out) else float(out)

    def sf(self, x):
        z = (np.asarray(x, dtype=float) - self.location) / self.scale
        with np.errstate(divide="ignore"):
            out = np.where(z > 0, np.arctan(1.0 / z) / math.pi, 0.5 - np.arctan(z) / math.pi)
        return out if np.ndim(out) else float(out)

    def quantile(self, u: float) -> float:
        if u <= 0.0:
            return -math.inf
        if u >= 1.0:
            return math.inf
        if u <= 0.5:
            # cot form keeps relative precision of small u
            return self.location - self.scale / math.tan(math.pi * u)
        return self.location + self.scale / math.tan(math.pi * (1.0 - u))

    def isf(self, v: float) -> float:
        if v <= 0.0:
            return math.inf
        if v >= 1.0:
            return -math.inf
        if v <= 0.5:
            return self.location + self.scale / math.tan(math.pi * v)
        return self.location - self.scale / math.tan(math.pi * (1.0 - v))

    def quantile_array(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore"):
            low = self.location - self.scale / np.tan(math.pi * u)
            high = self.location + self.scale / np.tan(math.pi * (1.0 - u))
        return np.where(u <= 0.5, low, high)

    def has_mean(self) -> bool:
        return False

    def mean(self) -> float:
        return math.nan

    def var(self) -> float:
        return math.inf

    def partial_mean(self, lo, hi):
        """E[X | lo < X < hi]; infinite on unbounded intervals."""
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        za, zb = (lo - self.location) / self.scale, (hi - self.location) / self.scale
        mass = (np.arctan(zb) - np.arctan(za)) / math.pi
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            part = self.scale * (np.log1p(zb * zb) - np.log1p(za * za)) / (2 * math.pi)
            out = self.location + part / mass
        out = np.where(np.isinf(za) & (za < 0), -np.inf, out)
        out = np.where(np.isinf(zb) & (zb > 0), np.where(np.isinf(za) & (za < 0), np.nan, np.inf), out)
        return out if out.ndim else float(out)

    def sample_rng(self, size, rng):
        # inverse cdf so one uniform stream drives everything
        u = rng.random(size)
        return self.location + self.scale * np.tan(math.pi * (u - 0.5))


@dataclass(frozen=True, eq=False)
class CustomContinuous(ContinuousDist):
    """Continuous parent assembled from user callables.

    ``partial_mean`` falls back to quadrature of ``x * pdf(x)`` when not given.
    """

    pdf_fn: Callable[[float], float]
    cdf_fn: Callable[[float], float]
    quantile_fn: Callable[[float], float]
    partial_mean_fn: Callable[[float, float], float] | None = None
    name: str = "custom"

    def pdf(self, x):
        return np.vectorize(self.pdf_fn, otypes=[float])(x) if np.ndim(x) else float(self.pdf_fn(x))

    def cdf(self, x):
        return np.vectorize(self.cdf_fn, otypes=[float])(x) if np.ndim(x) else float(self.cdf_fn(x))

    def quantile(self, u: float) -> float:
        return float(self.quantile_fn(u))

    def mean(self) -> float:
        return self.partial_mean(-math.inf, math.inf)

    def var(self) -> float:
        m = self.mean()
        return integrate.quad(lambda u: (self.quantile(u) - m) ** 2, 0, 1, limit=200)[0]

    def partial_mean(self, lo, hi):
        if self.partial_mean_fn is not None:
            f = self.partial_mean_fn
        else:
            def f(a, b):
                ua, ub = self.cdf_fn(a), self.cdf_fn(b)
                if ub <= ua:
                    return math.nan
                val = integrate.quad(self.quantile_fn, ua, ub, limit=200)[0]
                return val / (ub - ua)
        if np.ndim(lo) or np.ndim(hi):
            return np.vectorize(f, otypes=[float])(lo, hi)
        return float(f(lo, hi))

    def sample_rng(self, size, rng):
        u = rng.random(size)
        return np.vectorize(self.quantile_fn, otypes=[float])(u)


Distribution = Union[DiscreteDist, ContinuousDist]


def evaluate(dist: Distribution, x: float) -> tuple[float, float]:
    """Return (pmf-or-pdf at x, P(X <= x))."""
    if dist.is_discrete:
        return dist.pmf(x), dist.cdf(x)
    return float(dist.pdf(x)), float(dist.cdf(x))


def sample(dist: Distribution, count: int, seed: int) -> np.ndarray:
    """``count`` i.i.d. draws, reproducible from ``seed``."""
    if count < 1:
        raise ValueError("count must be positive")
    return dist.sample(count, seed)
