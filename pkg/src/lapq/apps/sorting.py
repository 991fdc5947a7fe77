"""Sorting drivers under the three prediction models, plus heap baselines.

Every driver takes the keys and their predicted ranks (aligned lists), inserts
everything into one queue and drains it.  It returns the sorted keys and an
:class:`ExperimentRecord` whose counters cover the whole run.
"""

from __future__ import annotations

import time
from collections.abc import Sequence

from ..heaps import BinaryHeap, FibonacciHeap, RandomizedBinaryHeap
from ..instrument import NEG_INF, ComparisonLedger, DirtyOracle, Rng
from ..predict import ErrorReport, true_ranks
from ..queue import Lapq
from .records import ExperimentRecord

SORTERS = ("lapq-pointer", "lapq-rank", "lapq-dirty", "rbheap", "binheap", "fibheap")


def _order(n: int, order: str, rng: Rng) -> list[int]:
    if order == "given":
        return list(range(n))
    if order == "random":
        return rng.permutation(n)
    raise ValueError(f"unknown insertion order {order!r}")


def _record(
    tag: str, values: Sequence, predicted: Sequence[int], ledger: ComparisonLedger,
    started: float, parameter, seed: int, timing: bool,
) -> ExperimentRecord:
    rec = ExperimentRecord(
        tag, len(values), parameter, seed, ledger.clean, ledger.dirty,
        time.perf_counter() - started if timing else None,
    )
    return rec.with_errors(ErrorReport.from_ranks(true_ranks(values), predicted))


def _check_lengths(values: Sequence, predicted: Sequence[int]) -> None:
    if len(values) != len(predicted):
        raise ValueError("values and predicted ranks must have equal length")


def sort_offline_positional(
    values: Sequence, predicted: Sequence[int], rng: Rng | None = None,
    *, parameter=0, seed: int = 0, timing: bool = False,
) -> tuple[list, ExperimentRecord]:
    """Bucket-sort by predicted rank, then insert each key with the previous one as pointer."""
    _check_lengths(values, predicted)
    started = time.perf_counter()
    n = len(values)
    led = ComparisonLedger()
    q = Lapq("pointer", rng=rng if rng is not None else Rng(seed), ledger=led)
    buckets: list[list[int]] = [[] for _ in range(n + 1)]
    for i, r in enumerate(predicted):
        buckets[min(max(r, 1), n)].append(i)
    prev = NEG_INF
    for b in buckets:
        for i in b:
            u = values[i]
            q.insert_pointer(u, prev)
            prev = u
    out = q.drain()
    q.clear()
    return out, _record("lapq-pointer", values, predicted, led, started, parameter, seed, timing)


def sort_online_rank(
    values: Sequence, predicted: Sequence[int], rng: Rng | None = None,
    *, order: str = "random", parameter=0, seed: int = 0, timing: bool = False,
) -> tuple[list, ExperimentRecord]:
    """Insert arrivals online with their predicted ranks, then drain."""
    _check_lengths(values, predicted)
    started = time.perf_counter()
    rng = rng if rng is not None else Rng(seed)
    led = ComparisonLedger()
    q = Lapq("rank", rng=rng, ledger=led)
    for i in _order(len(values), order, rng):
        q.insert_rank(values[i], max(predicted[i], 1))
    out = q.drain()
    q.clear()
    return out, _record("lapq-rank", values, predicted, led, started, parameter, seed, timing)


def sort_dirty(
    values: Sequence, predicted: Sequence[int], rng: Rng | None = None,
    *, order: str = "random", parameter=0, seed: int = 0, timing: bool = False,
) -> tuple[list, ExperimentRecord]:
    """Insert with dirty comparisons given by the predicted ranks of the keys."""
    _check_lengths(values, predicted)
    started = time.perf_counter()
    rng = rng if rng is not None else Rng(seed)
    led = ComparisonLedger()
    oracle = DirtyOracle(dict(zip(values, predicted)))
    q = Lapq("dirty", rng=rng, ledger=led, oracle=oracle)
    for i in _order(len(values), order, rng):
        q.insert_dirty(values[i])
    out = q.drain()
    q.clear()
    return out, _record("lapq-dirty", values, predicted, led, started, parameter, seed, timing)


def sort_heap(
    kind: str, values: Sequence, predicted: Sequence[int], rng: Rng | None = None,
    *, order: str = "random", parameter=0, seed: int = 0, timing: bool = False,
) -> tuple[list, ExperimentRecord]:
    """Heapsort with ``rbheap`` (dirty insertion), ``binheap`` or ``fibheap``."""
    _check_lengths(values, predicted)
    started = time.perf_counter()
    rng = rng if rng is not None else Rng(seed)
    led = ComparisonLedger()
    if kind == "rbheap":
        h = RandomizedBinaryHeap(rng, led, DirtyOracle(dict(zip(values, predicted))))
    elif kind == "binheap":
        h = BinaryHeap(led)
    elif kind == "fibheap":
        h = FibonacciHeap(led)
    else:
        raise ValueError(f"unknown heap {kind!r}")
    for i in _order(len(values), order, rng):
        h.insert(values[i])
    out = h.drain()
    return out, _record(kind, values, predicted, led, started, parameter, seed, timing)


def run_sorter(
    name: str, values: Sequence, predicted: Sequence[int], rng: Rng,
    *, parameter=0, seed: int = 0, timing: bool = False,
) -> tuple[list, ExperimentRecord]:
    kw = dict(parameter=parameter, seed=seed, timing=timing)
    if name == "lapq-pointer":
        return sort_offline_positional(values, predicted, rng, **kw)
    if name == "lapq-rank":
        return sort_online_rank(values, predicted, rng, **kw)
    if name == "lapq-dirty":
        return sort_dirty(values, predicted, rng, **kw)
    if name in ("rbheap", "binheap", "fibheap"):
        return sort_heap(name, values, predicted, rng, **kw)
    raise ValueError(f"unknown sorter {name!r}; expected one of {SORTERS}")
