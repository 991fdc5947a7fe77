"""Dijkstra over instrumented queues, with rank-prediction schemes.

The queue holds graph nodes keyed by tentative distance and relaxations call
``decrease_key``.  With ``duplicates=True`` a relaxation inserts a new entry
instead and stale entries are skipped on extraction.  Only comparisons made
inside the queue are charged.  The runs that build predictions (ground truth
and warm-up) use an uncharged ``heapq``.
"""

from __future__ import annotations

import heapq
import math
import time
from bisect import bisect_right
from collections.abc import Callable

from ..heaps import BinaryHeap, FibonacciHeap, RandomizedBinaryHeap
from ..instrument import ComparisonLedger, DirtyOracle, Rng
from ..predict import ErrorReport, gen_class, gen_decay
from ..queue import Lapq
from .graphs import Graph
from .records import ExperimentRecord

QUEUES = ("lapq-rank", "lapq-dirty", "binheap", "fibheap", "rbheap")

# scheme(node, key) -> predicted rank of the key being inserted
PredictionScheme = Callable[[int, float], int]


def plain_dijkstra(g: Graph, source: int, record: list | None = None) -> list[float]:
    """Uncharged reference Dijkstra; appends every inserted key to ``record``."""
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} is not a node")
    dist = [math.inf] * g.n
    dist[source] = 0.0
    if record is not None:
        record.append(0.0)
    heap = [(0.0, source)]
    done = [False] * g.n
    adj = g.adj
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                if record is not None:
                    record.append(nd)
                heapq.heappush(heap, (nd, v))
    return dist


class NodeRankScheme:
    """Perturbed ranks of the nodes ordered by their distance from the source.

    Reachable nodes are ranked by ``(distance, id)``.  The ranks are then
    perturbed by the class or decay generator, and every key a node is
    inserted with gets that node's rank.
    """

    def __init__(self, g: Graph, source: int, mode: str, parameter: int, rng: Rng) -> None:
        dist = plain_dijkstra(g, source)
        order = sorted((d, u) for u, d in enumerate(dist) if d < math.inf)
        n = len(order)
        if mode == "class":
            pred = gen_class(n, min(max(int(parameter), 1), n), rng)
        elif mode == "decay":
            pred = gen_decay(n, int(parameter), rng)
        else:
            raise ValueError(f"unknown perturbation {mode!r}; expected class or decay")
        self.rank = {u: pred[i] for i, (_, u) in enumerate(order)}
        self.reachable = n

    def __call__(self, node: int, key: float) -> int:
        return self.rank[node]


class KeyRankScheme:
    """Ranks of keys among those memorized from a warm-up run at a random source."""

    def __init__(self, g: Graph, rng: Rng, source: int | None = None) -> None:
        if g.n == 0:
            raise ValueError("empty graph")
        self.source = rng.randbelow(g.n) if source is None else source
        keys: list[float] = []
        plain_dijkstra(g, self.source, keys)
        keys.sort()
        self.keys = keys

    def __call__(self, node: int, key: float) -> int:
        return max(1, bisect_right(self.keys, key))


def _make_queue(name: str, rng: Rng, ledger: ComparisonLedger, oracle: DirtyOracle):
    if name == "lapq-rank":
        return Lapq("rank", rng=rng, ledger=ledger)
    if name == "lapq-dirty":
        return Lapq("dirty", rng=rng, ledger=ledger, oracle=oracle)
    if name == "binheap":
        return BinaryHeap(ledger)
    if name == "fibheap":
        return FibonacciHeap(ledger)
    if name == "rbheap":
        return RandomizedBinaryHeap(rng, ledger, oracle)
    raise ValueError(f"unknown queue {name!r}; expected one of {QUEUES}")


def dijkstra(
    g: Graph,
    source: int,
    queue: str = "binheap",
    scheme: PredictionScheme | None = None,
    rng: Rng | None = None,
    *,
    duplicates: bool = False,
    parameter=0,
    seed: int = 0,
    timing: bool = False,
) -> tuple[list[float], ExperimentRecord]:
    """Shortest distances from ``source`` (``math.inf`` when unreachable).

    The prediction schemes need ``lapq-rank``, ``lapq-dirty`` or ``rbheap``
    and are ignored by the other queues.  The record's error columns compare
    every predicted key rank with the key's rank among all keys the run
    inserted.
    """
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} is not a node")
    started = time.perf_counter()
    rng = rng if rng is not None else Rng(seed)
    led = ComparisonLedger()
    oracle = DirtyOracle()
    q = _make_queue(queue, rng, led, oracle)
    predicted = scheme is not None and queue in ("lapq-rank", "lapq-dirty", "rbheap")
    if queue == "lapq-rank" and scheme is None:
        raise ValueError("lapq-rank needs a prediction scheme")
    by_rank = queue == "lapq-rank"
    assign = oracle.assign
    inserted: list[tuple[float, int]] = []  # (key, predicted rank)

    def push(v: int, d: float, item) -> None:
        if predicted:
            r = scheme(v, d)
            inserted.append((d, r))
            if by_rank:
                q.insert_rank(d, r, item)
                return
            assign(d, r)
        elif queue in ("lapq-dirty", "rbheap"):
            assign(d, 1)  # no predictions: every dirty comparison says "equal"
        if queue == "lapq-dirty":
            q.insert_dirty(d, item)
        else:
            q.insert(d, item)

    def lower(v: int, d: float) -> None:
        if predicted:
            r = scheme(v, d)
            inserted.append((d, r))
            if by_rank:
                q.decrease_key(v, d, r)
                return
            assign(d, r)
        elif queue in ("lapq-dirty", "rbheap"):
            assign(d, 1)
        q.decrease_key(v, d)

    dist = [math.inf] * g.n
    dist[source] = 0.0
    adj = g.adj
    if duplicates:
        done = [False] * g.n
        version = 0
        push(source, 0.0, (source, version))
        while len(q):
            d, (u, _) = q.extract_min()
            if done[u]:
                continue
            done[u] = True
            for v, w in adj[u]:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    version += 1
                    push(v, nd, (v, version))
    else:
        push(source, 0.0, source)
        while len(q):
            d, u = q.extract_min()
            for v, w in adj[u]:
                nd = d + w
                old = dist[v]
                if nd < old:
                    dist[v] = nd
                    if old == math.inf:
                        push(v, nd, v)
                    else:
                        lower(v, nd)
    rec = ExperimentRecord(
        queue, g.n, parameter, seed, led.clean, led.dirty,
        time.perf_counter() - started if timing else None,
    )
    if inserted:
        keys = sorted(k for k, _ in inserted)
        rec.with_errors(ErrorReport([abs(bisect_right(keys, k) - r) for k, r in inserted]))
    return dist, rec
