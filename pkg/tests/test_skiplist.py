from __future__ import annotations

import math
from bisect import bisect_right, insort

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lapq.errors import EmptyQueueError, NotFoundError
from lapq.instrument import ComparisonLedger, DirtyOracle, Rng
from lapq.skiplist import SkipList


def build(keys, seed=0):
    s = SkipList(Rng(seed))
    for k in keys:
        s.insert(k)
    return s


def build_sorted(keys, seed=0):
    # keys ascending and distinct: each predecessor is known
    s = SkipList(Rng(seed))
    w = s.head
    for k in keys:
        w = s.insert_after(w, k)
    return s


def linear_pred(s: SkipList, key):
    # level-1 scan oracle
    w = s.head
    for x in s.nodes():
        if x.key <= key:
            w = x
    return w


def test_empty_and_single_insert():
    s = SkipList(Rng(1))
    assert s.search_top_down(5) is s.head
    s.insert_after(s.head, 5)
    assert s.keys() == [5]
    assert s.head.next[0].next[0] is s.nil
    s.check()


def test_insert_after_and_duplicates():
    s = build([1, 2, 4])
    s.insert_after(s.node(2), 3)
    assert s.keys() == [1, 2, 3, 4]
    s.insert_after(s.node(3), 3)
    assert s.distinct == 4 and len(s) == 5
    assert len(s.node(3).bucket) == 2
    s.check()


def test_insert_after_costs_nothing():
    s = build(range(0, 100, 2))
    before = s.ledger.clean
    s.insert_after(s.node(40), 41)
    assert s.ledger.clean == before


def test_exp_search_examples():
    s = build(range(1, 101))
    n = s.exp_search_insert(s.node(50), 50.5)
    assert n.prev[0].key == 50
    n = s.exp_search_insert(s.node(100), 0.5)
    assert n.prev[0] is s.head
    assert s.keys() == sorted([*range(1, 101), 50.5, 0.5])
    s.check()


@given(
    st.lists(st.integers(0, 400), min_size=1, max_size=300, unique=True),
    st.integers(0, 400),
    st.integers(0, 2**32),
    st.data(),
)
def test_locate_from_matches_linear_scan(keys, key, seed, data):
    s = build(keys, seed)
    if key in s:
        return
    srcs = [s.head, *s.nodes()]
    src = srcs[data.draw(st.integers(0, len(srcs) - 1))]
    assert s.locate_from(src, key) is linear_pred(s, key)


@given(st.lists(st.integers(0, 300), max_size=300), st.integers(0, 2**32))
def test_inserts_keep_sorted_multiset(keys, seed):
    s = build(keys, seed)
    s.check()
    assert [k for k, _ in s.elements()] == sorted(keys)


def test_exp_search_cost_grows_with_distance():
    ds = (1, 16, 256, 4096)
    tot = dict.fromkeys(ds, 0)
    for seed in range(30):
        s = build_sorted(range(0, 20000, 2), seed)
        src = s.node(10000)
        led = s.ledger
        for d in ds:
            c0 = led.clean
            s.locate_from(src, 10000 + 2 * d - 1)  # true predecessor d nodes away
            tot[d] += led.clean - c0
    means = [tot[d] / 30 for d in ds]
    assert means == sorted(means)
    assert means[-1] <= means[0] + 4 * math.log2(4096)


@given(st.lists(st.integers(0, 100), unique=True, max_size=80), st.integers(-5, 105), st.integers(0, 999))
def test_top_down_clean_and_perfect_dirty_agree(keys, u, seed):
    s = build(keys, seed)
    clean = s.search_top_down(u)
    assert clean is linear_pred(s, u)
    oracle = DirtyOracle({k: k for k in [*keys, u]})
    led = s.ledger
    c0 = led.clean
    assert s.search_top_down(u, oracle) is clean
    assert led.clean == c0


def test_top_down_example():
    s = build([1, 3, 5])
    assert s.search_top_down(4).key == 3


def test_heights_geometric_and_sentinels():
    s = SkipList(Rng(3))
    hs = [s.sample_height() for _ in range(100000)]
    assert abs(sum(hs) / len(hs) - 2) < 0.05
    assert abs(hs.count(1) / 1e5 - 0.5) < 0.01
    t = build(range(500), 4)
    assert t.level == max(n.height for n in t.nodes())
    with pytest.raises(ValueError):
        SkipList(Rng(0), p=1.0)


def test_max_height_mean():
    tot = 0
    for seed in range(30):
        s = build_sorted(range(10000), seed)
        tot += s.level
    assert tot / 30 <= math.log2(10000) + 5


def test_extract_order_and_fifo():
    s = SkipList(Rng(0))
    for k in (3, 1, 2):
        s.insert(k)
    assert [s.extract_min()[0] for _ in range(3)] == [1, 2, 3]
    with pytest.raises(EmptyQueueError):
        s.extract_min()
    with pytest.raises(EmptyQueueError):
        s.find_min()
    s.insert(5, "a")
    s.insert(5, "b")
    assert s.find_min() == (5, "a")
    assert s.extract_min() == (5, "a")
    assert s.extract_min() == (5, "b")
    s.check()


def test_decrease_key_and_delete():
    s = build([1, 5, 9])
    s.decrease_key(9, 0)
    assert s.keys() == [0, 1, 5]
    with pytest.raises(ValueError):
        s.decrease_key(5, 5)
    with pytest.raises(NotFoundError):
        s.decrease_key(7, 3)
    s.delete(1)
    assert s.keys() == [0, 5]
    with pytest.raises(NotFoundError):
        s.delete(1)
    with pytest.raises(NotFoundError):
        s.remove(5, "nope")
    s.check()


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 60)), max_size=200), st.integers(0, 99))
def test_random_operation_sequences(ops, seed):
    s = SkipList(Rng(seed))
    ref: list = []
    for op, k in ops:
        if op <= 1:
            s.insert(k)
            insort(ref, k)
        elif op == 2 and ref:
            assert s.extract_min()[0] == ref.pop(0)
        elif op == 3 and ref:
            old = ref[bisect_right(ref, k) - 1] if bisect_right(ref, k) else ref[0]
            new = old - 1 - k % 5
            s.decrease_key(old, new)
            ref.remove(old)
            insort(ref, new)
        s.check()
        assert [x for x, _ in s.elements()] == ref


def test_extract_min_is_cheap():
    led = ComparisonLedger()
    s = SkipList(Rng(2), led)
    r = Rng(3)
    for k in r.permutation(100000):
        s.insert(k)
    c0 = led.clean
    while len(s):
        s.extract_min()
    assert (led.clean - c0) / 100000 <= 4


def test_clear_resets():
    s = build(range(50))
    s.clear()
    assert len(s) == 0 and s.keys() == []
    s.insert(3)
    s.check()
