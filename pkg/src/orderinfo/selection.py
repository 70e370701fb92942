"""Choosing the most informative order statistics.

Three procedures, all ranking indices by a measure r_m:

* marginal: rank single indices by r_m(i);
* joint: best k-subset by the set measure r_m(S), exhaustive search;
* sequential: greedy, each step maximizing r_m(j | already chosen).

Ties go to the smaller index (lexicographically smallest set for joint).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .measures import MeasureValue, measure, profile
from .order_stats import SampleModel

__all__ = [
    "SelectionResult",
    "marginal_select",
    "joint_select",
    "sequential_select",
    "DEFAULT_BUDGET",
    "TIE_RTOL",
]

DEFAULT_BUDGET = 100_000
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class SelectionResult:
    """Chosen indices with their scores.

    ``scores`` is aligned with ``indices``: single-index measures for
    marginal and joint, conditional gains for sequential.  ``set_score`` is
    the set measure for joint selection and None otherwise.
    """

    indices: tuple[int, ...]
    scores: tuple[MeasureValue, ...]
    approach: str
    m: int
    set_score: MeasureValue | None = None


def _beats(a: float, b: float) -> bool:
    """a is larger than b beyond the tie tolerance."""
    if math.isinf(a) or math.isinf(b):
        return a > b
    return a - b > TIE_RTOL * max(abs(a), abs(b))


def _argmax(cands, score) -> int:
    """First candidate (in the given order) whose score is not beaten."""
    best, best_val = None, -math.inf
    for c in cands:
        val = score(c)
        if best is None or _beats(val, best_val):
            best, best_val = c, val
    return best


def _validate(model: SampleModel, m: int, k: int) -> None:
    if m not in (1, 2, 3):
        raise ValueError("measure number must be 1, 2 or 3")
    if not 1 <= k <= model.n:
        raise ValueError(f"k must lie in [1, {model.n}]")
    if m == 1 and not model.is_discrete:
        raise ValueError("r1 is infinite for every index of a continuous parent; pick m=2 or m=3")


def marginal_select(model: SampleModel, m: int, k: int, base: float = math.e, **mc) -> SelectionResult:
    _validate(model, m, k)
    scores = profile(model, m, base, **mc)
    left = list(range(1, model.n + 1))
    chosen = []
    for _ in range(k):
        i = _argmax(left, lambda j: scores[j - 1].value)
        chosen.append(i)
        left.remove(i)
    return SelectionResult(tuple(chosen), tuple(scores[i - 1] for i in chosen), "marginal", m)


def joint_select(model: SampleModel, m: int, k: int, base: float = math.e, budget: int = DEFAULT_BUDGET,
                 **mc) -> SelectionResult:
    _validate(model, m, k)
    total = math.comb(model.n, k)
    if total > budget:
        raise ValueError(
            f"C({model.n},{k}) = {total} subsets exceeds the budget of {budget}; use sequential_select"
        )
    singles = profile(model, m, base, **mc)
    if m == 3:
        # without conditioning r3 of a set is the sum of its variances
        def set_value(S):
            return math.fsum(singles[i - 1].value for i in S)
    else:
        def set_value(S):
            val = measure(model, m, S, (), base, **mc)
            if not val.exact:
                raise ValueError("joint selection needs an exact set measure for this parent")
            return val.value
    best = _argmax(itertools.combinations(range(1, model.n + 1), k), set_value)
    unit = singles[0].unit
    return SelectionResult(tuple(best), tuple(singles[i - 1] for i in best), "joint", m,
                           MeasureValue(set_value(best), unit))


def sequential_select(model: SampleModel, m: int, k: int, base: float = math.e, **mc) -> SelectionResult:
    _validate(model, m, k)
    chosen: list[int] = []
    gains: list[MeasureValue] = []
    for _ in range(k):
        known = tuple(sorted(chosen))
        cands = [j for j in range(1, model.n + 1) if j not in chosen]
        vals = {j: measure(model, m, (j,), known, base, **mc) for j in cands}
        j = _argmax(cands, lambda c: vals[c].value)
        chosen.append(j)
        gains.append(vals[j])
    return SelectionResult(tuple(chosen), tuple(gains), "sequential", m)
