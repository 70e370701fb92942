"""Closed-form measures for Bernoulli and Uniform parents.

Independent of the generic machinery in ``measures`` so the two can check
each other.  For a Bernoulli(p) parent the number of zeros B is
Binomial(n, 1 - p) and X_(i) = 1 exactly when B < i.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BinomialRef",
    "binary_entropy",
    "bernoulli_r1",
    "bernoulli_r2",
    "bernoulli_r3",
    "bernoulli_argmax",
    "argmax_candidates",
    "uniform_r2",
    "uniform_r3",
    "uniform_argmax",
    "asymptotic_r1_r3",
]


@dataclass(frozen=True)
class BinomialRef:
    """Binomial(n, q) with tails from a factorial-free pmf recurrence.

    Terms are grown outward from the mode with ratio
    pmf(k+1)/pmf(k) = (n-k)/(k+1) * q/(1-q) and normalized at the end, so no
    term overflows and nothing underflows near the bulk.
    """

    n: int
    q: float
    pmf: np.ndarray = field(init=False, repr=False, compare=False)
    _below: np.ndarray = field(init=False, repr=False, compare=False)
    _above: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n, q = int(self.n), float(self.q)
        if n < 0 or not 0.0 <= q <= 1.0:
            raise ValueError("need n >= 0 and q in [0, 1]")
        w = np.zeros(n + 1)
        if q == 0.0:
            w[0] = 1.0
        elif q == 1.0:
            w[n] = 1.0
        else:
            mode = min(n, int(math.floor((n + 1) * q)))
            odds = q / (1.0 - q)
            w[mode] = 1.0
            for k in range(mode, n):
                w[k + 1] = w[k] * (n - k) / (k + 1) * odds
                if w[k + 1] == 0.0:
                    break
            for k in range(mode, 0, -1):
                w[k - 1] = w[k] * k / ((n - k + 1) * odds)
                if w[k - 1] == 0.0:
                    break
            w /= math.fsum(w)
        # below[i] = P(B < i), above[i] = P(B >= i), both summed from the small end
        below = np.concatenate([[0.0], np.cumsum(w)])
        above = np.concatenate([np.cumsum(w[::-1])[::-1], [0.0]])
        below = np.minimum(below, 1.0)
        above = np.minimum(above, 1.0)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "pmf", w)
        object.__setattr__(self, "_below", below)
        object.__setattr__(self, "_above", above)

    def lower(self, i: int) -> float:
        """P(B < i)."""
        return float(self._below[min(max(i, 0), self.n + 1)])

    def upper(self, i: int) -> float:
        """P(B >= i)."""
        return float(self._above[min(max(i, 0), self.n + 1)])


def binary_entropy(t: float, base: float = math.e) -> float:
    if not -1e-12 <= t <= 1.0 + 1e-12:
        raise ValueError(f"probability {t!r} outside [0, 1]")
    if t <= 0.0 or t >= 1.0:
        return 0.0
    return -(t * math.log(t) + (1.0 - t) * math.log1p(-t)) / math.log(base)


def _check(n: int, p: float, i: int) -> None:
    if n < 1 or not 1 <= i <= n:
        raise ValueError("need 1 <= i <= n")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")


def bernoulli_r1(n: int, p: float, i: int, base: float = math.e) -> float:
    """Entropy of X_(i): binary entropy of P(B < i)."""
    _check(n, p, i)
    return binary_entropy(BinomialRef(n, 1.0 - p).lower(i), base)


def bernoulli_r2(n: int, p: float, i: int) -> float:
    """n * Var(E[X_1 | X_(i)]).

    With B' the zero count among the other n-1 draws,
    E[X_1 | X_(i)=1] = p P(B'<i)/P(B<i) and E[X_1 | X_(i)=0] = p P(B'>=i)/P(B>=i).
    A branch whose conditioning event has probability zero is dropped.
    """
    _check(n, p, i)
    b = BinomialRef(n, 1.0 - p)
    bp = BinomialRef(n - 1, 1.0 - p)
    acc = []
    for num, den in ((bp.lower(i), b.lower(i)), (bp.upper(i), b.upper(i))):
        if den > 0.0:
            acc.append(num * num / den)
    return max(0.0, n * p * p * (math.fsum(acc) - 1.0))


def bernoulli_r3(n: int, p: float, i: int) -> float:
    """Var(X_(i)) = P(B < i) P(B >= i)."""
    _check(n, p, i)
    b = BinomialRef(n, 1.0 - p)
    return b.lower(i) * b.upper(i)


def bernoulli_argmax(n: int, p: float) -> int:
    """Index whose X_(i) is closest to a fair coin.

    The one with P(B >= i) nearest 1/2 wins, the smaller on a tie.  A median
    m of B lies in {floor, ceil} of n(1-p) and the winner is m or m + 1, so
    ceil + 1 joins the candidates; without it an integral n(1-p) can miss
    (n=5, p=0.2 peaks at i=5).
    """
    _check(n, p, 1)
    b = BinomialRef(n, 1.0 - p)
    return min(argmax_candidates(n, p), key=lambda i: (abs(b.upper(i) - 0.5), i))


def argmax_candidates(n: int, p: float, extended: bool = True) -> tuple[int, ...]:
    """floor and ceil of n(1-p), plus ceil + 1 when ``extended``, clamped to [1, n]."""
    centre = n * (1.0 - p)
    lo, hi = int(math.floor(centre)), int(math.ceil(centre))
    raw = {lo, hi, hi + 1} if extended else {lo, hi}
    return tuple(sorted({min(max(i, 1), n) for i in raw}))


def _check_uniform(n: int, a: float, i: int) -> None:
    if n < 1 or not 1 <= i <= n:
        raise ValueError("need 1 <= i <= n")
    if not a > 0:
        raise ValueError("interval length a must be positive")


def uniform_r2(n: int, a: float, i: int) -> float:
    """a^2 i (n+1-i) / (4 n (n+2)) for a Uniform(0, a) parent."""
    _check_uniform(n, a, i)
    return a * a * i * (n + 1 - i) / (4.0 * n * (n + 2))


def uniform_r3(n: int, a: float, i: int) -> float:
    """Var(X_(i)) = a^2 i (n+1-i) / ((n+1)^2 (n+2)), a scaled Beta(i, n-i+1)."""
    _check_uniform(n, a, i)
    return a * a * i * (n + 1 - i) / ((n + 1) ** 2 * (n + 2))


def uniform_argmax(n: int) -> tuple[int, ...]:
    """The sample median index, or both central indices when n is even."""
    if n < 1:
        raise ValueError("n must be positive")
    return tuple(sorted({(n + 2) // 2, (n + 1) // 2}))


def asymptotic_r1_r3(n: int, p: float, c: float, which: str, base: float = math.e) -> float:
    """Bernoulli r1 or r3 at i = floor(c n), for studying n -> infinity."""
    if not 0.0 < c < 1.0:
        raise ValueError("c must lie in (0, 1)")
    i = min(max(int(math.floor(c * n)), 1), n)
    if which == "r1":
        return bernoulli_r1(n, p, i, base)
    if which == "r3":
        return bernoulli_r3(n, p, i)
    raise ValueError("which must be 'r1' or 'r3'")
