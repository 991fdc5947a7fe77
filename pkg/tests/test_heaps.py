from __future__ import annotations

import math
from bisect import bisect_right, insort

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lapq.errors import EmptyQueueError, NotFoundError
from lapq.heaps import (
    BinaryHeap,
    FibonacciHeap,
    RandomizedBinaryHeap,
    exponential_search,
    randomized_binary_search,
    rbs_comparison_cap,
)
from lapq.instrument import ComparisonLedger, DirtyOracle, Rng


def counting_less(box):
    def less(a, b):
        box[0] += 1
        return a < b

    return less


def worst_case(k: int, memo={0: 0}) -> int:
    # exact worst case of the pivot rule over all targets and pivot choices:
    # W(length) = max over allowed pivots and both outcomes
    if k in memo:
        return memo[k]
    d = k - 1
    a = min(-(-d // 4), d >> 1)
    best = 0
    for p in range(a, d - a + 1):
        best = max(best, 1 + max(worst_case(p), worst_case(k - 1 - p)))
    memo[k] = best
    return best


def test_cap_values():
    assert rbs_comparison_cap(1) == 1
    assert rbs_comparison_cap(1000) == 25 == math.ceil(math.log(1000) / math.log(4 / 3))
    for k in range(2, 3000):
        assert rbs_comparison_cap(k) == math.ceil(math.log(k) / math.log(4 / 3) - 1e-12)


def test_worst_case_within_cap():
    for k in range(1, 600):
        assert worst_case(k) <= rbs_comparison_cap(k)


def test_single_element_search():
    for u, want in ((0, 0), (5, 1), (9, 1)):
        box = [0]
        assert randomized_binary_search([5], u, counting_less(box), Rng(1)) == want
        assert box[0] == 1


@given(st.lists(st.integers(0, 50), max_size=200), st.integers(-2, 52), st.integers(0, 2**32))
def test_rbs_matches_linear_rank_and_cap(vals, u, seed):
    L = sorted(vals)
    box = [0]
    got = randomized_binary_search(L, u, counting_less(box), Rng(seed))
    assert got == sum(1 for v in L if v <= u)
    assert box[0] <= rbs_comparison_cap(len(L))


@given(st.lists(st.integers(0, 50), max_size=200), st.integers(-2, 52), st.integers(0, 210))
def test_exponential_search_matches_rank(vals, u, start):
    L = sorted(vals)
    box = [0]
    got = exponential_search(L, start, u, counting_less(box))
    assert got == bisect_right(L, u)
    true = bisect_right(L, u)
    dist = abs(true - min(start, len(L)))
    assert box[0] <= 2 * math.log2(dist + 2) + 2


def test_exponential_search_near_start():
    L = list(range(0, 200, 2))
    for u in range(-1, 201):
        r = bisect_right(L, u)
        box = [0]
        assert exponential_search(L, r, u, counting_less(box)) == r
        assert box[0] <= 2
        for s in (r - 1, r + 1):
            if 0 <= s <= len(L):
                box = [0]
                assert exponential_search(L, s, u, counting_less(box)) == r
                assert box[0] <= 4


def fill(h, keys, oracle=None):
    for k in keys:
        if oracle is None:
            h.insert(k)
        else:
            h.insert_dirty(k, oracle=oracle)


ALL_HEAPS = [
    lambda: RandomizedBinaryHeap(Rng(3), oracle=DirtyOracle(lambda v: v)),
    lambda: RandomizedBinaryHeap(Rng(4)),
    lambda: BinaryHeap(),
    lambda: FibonacciHeap(),
]


@pytest.mark.parametrize("make", ALL_HEAPS, ids=["rb-dirty", "rb-clean", "bin", "fib"])
@given(
    ops=st.lists(st.tuples(st.integers(0, 3), st.integers(0, 60), st.integers(0, 500)), max_size=200),
)
def test_heaps_against_sorted_oracle(make, ops):
    h = make()
    ref: list = []
    live: dict = {}
    for i, (op, k, r) in enumerate(ops):
        if op <= 1:
            h.insert(k, i)
            live[i] = k
            insort(ref, k)
        elif op == 2 and ref:
            key, item = h.extract_min()
            assert key == ref.pop(0)
            assert live.pop(item) == key
        elif op == 3 and live:
            item = sorted(live)[r % len(live)]
            new = live[item] - 1 - r % 9
            h.decrease_key(item, new)
            ref.remove(live[item])
            insort(ref, new)
            live[item] = new
        if ref:
            assert h.find_min()[0] == ref[0]
        h.check()
    assert h.drain() == ref


def test_rb_heap_structure_invariants_and_reversed_oracle():
    h = RandomizedBinaryHeap(Rng(5), oracle=DirtyOracle(lambda v: -v))
    vals = Rng(6).permutation(3000)
    for v in vals:
        h.insert(v)
        if v % 97 == 0:
            h.check()
    h.check()
    assert h.drain() == sorted(vals)


def test_rb_heap_ascending_insert_and_singleton():
    h = RandomizedBinaryHeap(Rng(1), oracle=DirtyOracle(lambda v: v))
    fill(h, range(1, 500))
    assert h.drain() == list(range(1, 500))
    led = ComparisonLedger()
    h = RandomizedBinaryHeap(Rng(2), led)
    h.insert(7)
    c0 = led.clean
    assert h.extract_min()[0] == 7
    assert led.clean == c0
    with pytest.raises(EmptyQueueError):
        h.extract_min()
    with pytest.raises(ValueError):
        RandomizedBinaryHeap(Rng(0)).insert_dirty(3)


def test_rb_heap_extract_cost_bound():
    led = ComparisonLedger()
    h = RandomizedBinaryHeap(Rng(8), led, DirtyOracle(lambda v: v))
    r = Rng(9)
    fill(h, r.permutation(5000))
    while len(h):
        n = len(h)
        c0 = led.clean
        h.extract_min()
        assert led.clean - c0 <= 2 * math.ceil(math.log2(n + 1))


def test_rb_heap_perfect_oracle_insert_cost():
    n = 20000
    led = ComparisonLedger()
    h = RandomizedBinaryHeap(Rng(10), led, DirtyOracle(lambda v: v))
    fill(h, Rng(11).permutation(n))
    ll = math.log2(math.log2(n))
    assert led.clean / n <= 2 * ll + 4
    assert led.dirty / n <= 2 * ll + 6


def test_binary_heap_ascending_run_costs_one_each():
    led = ComparisonLedger()
    h = BinaryHeap(led)
    fill(h, range(1, 1001))
    assert led.clean == 999


def test_fibonacci_decrease_key_and_min():
    h = FibonacciHeap()
    for k in range(100):
        h.insert(k, k)
    h.extract_min()  # builds trees
    for item in range(51, 100, 3):
        h.decrease_key(item, -item)
        assert h.find_min() == (-item, item)
    h.check()
    with pytest.raises(ValueError):
        h.decrease_key(10, 10)
    with pytest.raises(NotFoundError):
        h.key(0)
    out = h.drain()
    assert out == sorted(out)


@pytest.mark.parametrize("cls", [BinaryHeap, FibonacciHeap])
def test_baseline_errors(cls):
    h = cls()
    with pytest.raises(EmptyQueueError):
        h.extract_min()
    with pytest.raises(EmptyQueueError):
        h.find_min()
    h.insert(1, "a")
    with pytest.raises(ValueError):
        h.insert(2, "a")


def test_stats_shape():
    for h in (RandomizedBinaryHeap(Rng(0)), BinaryHeap(), FibonacciHeap()):
        h.insert(3)
        h.extract_min()
        assert set(h.stats()) == {"clean", "dirty", "inserts", "extracts", "fallbacks"}
        assert h.stats()["inserts"] == 1 == h.stats()["extracts"]
