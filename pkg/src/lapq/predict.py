"""Rank arithmetic, prediction error measures and synthetic rank predictions.

Predictions produced by the generators are plain lists indexed by *true*
rank: ``pred[i]`` is the predicted rank of the element whose true rank is
``i + 1``.  All ranks are 1-based.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .errors import NotFoundError
from .instrument import DirtyOracle, Rng


def rank_of(u, values: Iterable) -> int:
    """Number of values ``v`` with ``v <= u``, counted with multiplicity."""
    return sum(1 for v in values if v <= u)


def sorted_rank(u, sorted_values: Sequence) -> int:
    """``rank_of`` for an already sorted sequence, by bisection."""
    return bisect_right(sorted_values, u)


def err_dirty(u, values: Iterable, oracle: DirtyOracle) -> int:
    """Number of ``v`` whose dirty comparison with ``u`` disagrees with the true one."""
    ru = oracle.rank(u)
    return sum(1 for v in values if (ru < oracle.rank(v)) != (u < v))


def err_pointer(u, predicted_pred, queue: Sequence) -> int:
    """Rank distance between ``u`` and its predicted predecessor in ``queue``."""
    if predicted_pred not in queue:
        raise NotFoundError(predicted_pred)
    return abs(rank_of(u, queue) - rank_of(predicted_pred, queue))


def err_rank(true_rank: int, predicted_rank: int) -> int:
    return abs(true_rank - predicted_rank)


@dataclass
class ErrorReport:
    errors: list[int] = field(default_factory=list)

    @property
    def max_error(self) -> int:
        return max(self.errors, default=0)

    @property
    def sum_log_error(self) -> float:
        return sum(math.log2(e + 2) for e in self.errors)

    @classmethod
    def from_ranks(cls, true_ranks: Iterable[int], predicted: Iterable[int]) -> ErrorReport:
        return cls([abs(t - p) for t, p in zip(true_ranks, predicted)])

    @classmethod
    def from_prediction(cls, pred: Sequence[int]) -> ErrorReport:
        """Report for a generator output indexed by true rank."""
        return cls([abs(i + 1 - r) for i, r in enumerate(pred)])


def gen_class(n: int, c: int, rng: Rng) -> list[int]:
    """Class-setting predictions.

    ``c - 1`` distinct cut points are drawn uniformly from ``{1, ..., n-1}``,
    splitting the true ranks ``1..n`` into ``c`` non-empty classes
    ``(t_k, t_{k+1}]``.  Each element receives a rank drawn uniformly from its
    own class.  ``c == n`` is therefore exact and ``c == 1`` is uniform noise.
    """
    if not 1 <= c <= n:
        raise ValueError(f"class count must satisfy 1 <= c <= n, got c={c}, n={n}")
    # partial Fisher-Yates over the candidate cut points 1..n-1
    pool = list(range(1, n))
    for i in range(c - 1):
        j = i + rng.randbelow(n - 1 - i)
        pool[i], pool[j] = pool[j], pool[i]
    thresholds = [0, *sorted(pool[: c - 1]), n]
    pred = [0] * n
    for k in range(c):
        lo, hi = thresholds[k], thresholds[k + 1]
        width = hi - lo
        for i in range(lo, hi):
            pred[i] = lo + 1 + rng.randbelow(width)
    return pred


def gen_decay(n: int, steps: int, rng: Rng) -> list[int]:
    """Decay-setting predictions.

    Start from the exact ranking; each step picks a uniform element and swaps
    it with its left or right neighbour in the predicted order (no-op at the
    ends), so the output stays a permutation of ``1..n``.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    order = list(range(n))  # order[position] = true index
    pos = list(range(n))  # pos[true index] = position
    for _ in range(steps):
        e = rng.randbelow(n)
        p = pos[e]
        q = p + (1 if rng.next_u64() >> 63 else -1)
        if 0 <= q < n:
            f = order[q]
            order[p], order[q] = f, e
            pos[e], pos[f] = q, p
    return [p + 1 for p in pos]


def gen_jitter(n: int, eta: int, rng: Rng) -> list[int]:
    """Local displacement predictions with error scale ``eta``.

    Every element's true position is shifted by an independent uniform offset
    in ``[-eta, eta]`` and the predicted ranks are the positions in the
    resulting order (ties broken by true rank).  The output is a permutation
    with every displacement at most ``2 * eta``.
    """
    if eta < 0:
        raise ValueError("eta must be >= 0")
    if eta == 0:
        return list(range(1, n + 1))
    span = 2 * eta + 1
    scores = [(i + rng.randbelow(span), i) for i in range(n)]
    scores.sort()
    pred = [0] * n
    for r, (_, i) in enumerate(scores, start=1):
        pred[i] = r
    return pred


def true_ranks(values: Sequence) -> list[int]:
    """1-based rank of each value by sorted position (ties by index)."""
    order = sorted(range(len(values)), key=values.__getitem__)
    out = [0] * len(values)
    for r, i in enumerate(order, start=1):
        out[i] = r
    return out
