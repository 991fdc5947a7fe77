from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lapq.errors import MissingPredictionError, NotFoundError
from lapq.instrument import DirtyOracle, Rng
from lapq.predict import (
    ErrorReport,
    err_dirty,
    err_pointer,
    err_rank,
    gen_class,
    gen_decay,
    gen_jitter,
    rank_of,
    sorted_rank,
    true_ranks,
)

# frozen outputs of the reference generators
GOLDEN_CLASS_10_2_SEED42 = [2, 2, 3, 1, 7, 2, 6, 9, 9, 8]
GOLDEN_DECAY_100_1E4_SEED42_MAX = 30


def test_rank_of_examples():
    assert rank_of(3, [1, 2, 5]) == 2
    assert rank_of(0, [1, 2, 5]) == 0
    assert rank_of(5, [1, 5, 5]) == 3


@given(st.lists(st.integers(-20, 20)), st.integers(-25, 25))
def test_sorted_rank_matches_rank_of(vals, u):
    assert sorted_rank(u, sorted(vals)) == rank_of(u, vals)


def test_err_dirty_examples():
    # 2 and 1 are reversed in the predicted order, 2 and 3 are not
    o = DirtyOracle({1: 2, 2: 1, 3: 3})
    assert err_dirty(2, [1, 3], o) == 1
    assert err_dirty(2, [1, 3], DirtyOracle({1: 1, 2: 2, 3: 3})) == 0
    v = list(range(10, 17))
    rev = DirtyOracle({x: -x for x in v + [5]})
    assert err_dirty(5, v, rev) == 7
    with pytest.raises(MissingPredictionError):
        err_dirty(4, v, rev)


def test_err_pointer_examples():
    assert err_pointer(3.5, 1, [1, 2, 3, 4, 5]) == 2
    assert err_pointer(3.5, 3, [1, 2, 3, 4, 5]) == 0
    assert err_pointer(5, 20, [10, 20]) == 2
    with pytest.raises(NotFoundError):
        err_pointer(5, 7, [10, 20])


@given(st.lists(st.integers(0, 50), min_size=1), st.integers(0, 60))
def test_err_pointer_true_predecessor_is_zero(q, u):
    below = [v for v in q if v <= u]
    if below:
        assert err_pointer(u, max(below), q) == 0


def test_err_rank_examples():
    assert err_rank(5, 7) == 2
    assert err_rank(5, 5) == 0
    assert err_rank(1, 100) == 99


def test_error_report():
    r = ErrorReport([0, 2, 6])
    assert r.max_error == 6
    assert r.sum_log_error == pytest.approx(1 + 2 + 3)
    assert ErrorReport().max_error == 0
    assert ErrorReport.from_ranks([1, 2, 3], [3, 2, 1]).errors == [2, 0, 2]
    assert ErrorReport.from_prediction([2, 1, 3]).errors == [1, 1, 0]


def test_gen_class_golden():
    assert gen_class(10, 2, Rng(42)) == GOLDEN_CLASS_10_2_SEED42


@given(st.integers(1, 300), st.data())
def test_gen_class_ranges_and_classes(n, data):
    c = data.draw(st.integers(1, n))
    seed = data.draw(st.integers(0, 2**64 - 1))
    pred = gen_class(n, c, Rng(seed))
    assert len(pred) == n
    assert all(1 <= r <= n for r in pred)
    # predictions never leave their class, so each of the c - 1 cut points t
    # separates ranks <= t from ranks > t on both sides
    cuts = [t for t in range(1, n) if max(pred[:t]) <= t and min(pred[t:]) > t]
    assert len(cuts) >= c - 1


def test_gen_class_perfect_and_uniform():
    n = 500
    assert ErrorReport.from_prediction(gen_class(n, n, Rng(1))).max_error == 0
    r = Rng(2)
    draws = [x for _ in range(40) for x in gen_class(n, 1, r)]
    mean = sum(draws) / len(draws)
    assert abs(mean - (n + 1) / 2) < 5
    # roughly flat histogram over quarters
    quarters = [sum(1 for x in draws if q * n / 4 < x <= (q + 1) * n / 4) for q in range(4)]
    for q in quarters:
        assert abs(q - len(draws) / 4) < 0.03 * len(draws)


def test_gen_class_class_structure():
    # reconstruct the classes: within a class every prediction is inside it
    n, c = 200, 7
    pred = gen_class(n, c, Rng(8))
    # element i (true rank i+1) and its prediction lie in the same class, so
    # for every cut point t no prediction of an element at rank <= t exceeds t
    cuts = [t for t in range(1, n) if max(pred[:t]) <= t and min(pred[t:]) > t]
    assert len(cuts) >= c - 1


def test_gen_class_rejects_bad_c():
    with pytest.raises(ValueError):
        gen_class(5, 0, Rng(0))
    with pytest.raises(ValueError):
        gen_class(5, 6, Rng(0))


def test_gen_decay_golden_and_basic():
    p = gen_decay(100, 10**4, Rng(42))
    assert ErrorReport.from_prediction(p).max_error == GOLDEN_DECAY_100_1E4_SEED42_MAX
    assert gen_decay(50, 0, Rng(0)) == list(range(1, 51))
    with pytest.raises(ValueError):
        gen_decay(5, -1, Rng(0))


@given(st.integers(0, 2**64 - 1), st.integers(2, 60))
def test_gen_decay_single_step(seed, n):
    errs = ErrorReport.from_prediction(gen_decay(n, 1, Rng(seed))).errors
    moved = [e for e in errs if e]
    assert moved in ([], [1, 1])


@given(st.integers(0, 2**64 - 1), st.integers(1, 80), st.integers(0, 400))
def test_gen_decay_permutation_and_total_displacement(seed, n, steps):
    p = gen_decay(n, steps, Rng(seed))
    assert sorted(p) == list(range(1, n + 1))
    assert sum(ErrorReport.from_prediction(p).errors) <= 2 * steps


@given(st.integers(0, 2**64 - 1), st.integers(1, 200), st.integers(0, 40))
def test_gen_jitter_bounded_permutation(seed, n, eta):
    p = gen_jitter(n, eta, Rng(seed))
    assert sorted(p) == list(range(1, n + 1))
    assert ErrorReport.from_prediction(p).max_error <= 2 * eta


def test_true_ranks():
    assert true_ranks([30, 10, 20]) == [3, 1, 2]
    assert true_ranks([5, 5]) == [1, 2]
    assert true_ranks([]) == []
    assert math.isfinite(ErrorReport([1]).sum_log_error)
