from __future__ import annotations

import math
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lapq.errors import MissingPredictionError
from lapq.instrument import (
    NEG_INF,
    POS_INF,
    ComparisonLedger,
    DirtyOracle,
    Rng,
    clean_less,
    dirty_less,
    is_sentinel,
)

# published SplitMix64 output for seed 1234567
REFERENCE = [
    6457827717110365317,
    3203168211198807973,
    9817491932198370423,
    4593380528125082431,
    16408922859458223821,
]

_M = (1 << 64) - 1


def splitmix64(seed: int, count: int) -> list[int]:
    # straight transcription of the reference C routine
    out = []
    x = seed
    for _ in range(count):
        x = (x + 0x9E3779B97F4A7C15) & _M
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M
        out.append(z ^ (z >> 31))
    return out


def test_reference_vector():
    r = Rng(1234567)
    assert [r.next_u64() for _ in range(5)] == REFERENCE


@given(st.integers(0, _M))
def test_stream_matches_transcription(seed):
    r = Rng(seed)
    assert [r.next_u64() for _ in range(4)] == splitmix64(seed, 4)


@given(st.integers(0, _M), st.integers(1, 1 << 63))
def test_randbelow_is_lemire_multiply_shift(seed, n):
    # oracle: draw raw words, reject the biased low region, take the high word
    words = iter(splitmix64(seed, 64))
    threshold = (1 << 64) % n
    while True:
        m = next(words) * n
        if (m & _M) >= threshold:
            break
    assert Rng(seed).randbelow(n) == m >> 64


def test_randbelow_range_and_uniformity():
    r = Rng(9)
    counts = Counter(r.randbelow(6) for _ in range(60000))
    assert set(counts) == set(range(6))
    for c in counts.values():
        assert abs(c - 10000) < 500


@given(st.integers(0, _M), st.integers(0, 60))
def test_shuffle_uses_randbelow_draws(seed, n):
    a = list(range(n))
    Rng(seed).shuffle(a)
    b = list(range(n))
    r = Rng(seed)
    for i in range(n - 1, 0, -1):
        j = r.randbelow(i + 1)
        b[i], b[j] = b[j], b[i]
    assert a == b
    assert sorted(a) == list(range(n))


@given(st.integers(0, _M), st.integers(0, 200))
def test_geometric_many_equals_repeated_geometric(seed, count):
    r = Rng(seed)
    one = [r.geometric() for _ in range(count)]
    assert Rng(seed).geometric_many(count) == one


def test_geometric_law():
    r = Rng(5)
    draws = r.geometric_many(100000)
    mean = sum(draws) / len(draws)
    assert abs(mean - 2.0) < 0.05
    c = Counter(draws)
    assert abs(c[1] / 1e5 - 0.5) < 0.01
    assert abs(c[2] / 1e5 - 0.25) < 0.01


def test_geometric_general_p_mean():
    r = Rng(11)
    draws = [r.geometric(0.25) for _ in range(40000)]
    assert abs(sum(draws) / len(draws) - 4.0) < 0.1
    with pytest.raises(ValueError):
        r.geometric(0.0)


def test_poisson_mean_and_variance():
    r = Rng(3)
    xs = [r.poisson(20.0) for _ in range(5000)]
    mean = sum(xs) / len(xs)
    var = sum((x - mean) ** 2 for x in xs) / len(xs)
    assert abs(mean - 20) < 0.4
    assert abs(var - 20) < 2.0


def test_random_in_unit_interval_and_spawn_independent():
    r = Rng(1)
    xs = [r.random() for _ in range(1000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    a, b = Rng(1).spawn(), Rng(1).spawn()
    assert a.next_u64() == b.next_u64()
    assert Rng(1).spawn().state != Rng(1).state


def test_randbelow_rejects_bad_bounds():
    with pytest.raises(ValueError):
        Rng(0).randbelow(0)


def test_clean_less_counts():
    led = ComparisonLedger()
    assert clean_less(3, 5, led) is True
    assert led.clean == 1
    assert clean_less(5, 5, led) is False
    assert led.clean == 2
    assert clean_less(NEG_INF, 5, led) is True
    assert clean_less(5, POS_INF, led) is True
    assert clean_less(POS_INF, 5, led) is False
    assert clean_less(NEG_INF, NEG_INF, led) is False
    assert led.clean == 2 and led.dirty == 0


def test_dirty_less_counts_and_orders():
    led = ComparisonLedger()
    o = DirtyOracle({"a": 2, "b": 7})
    assert dirty_less("a", "b", o, led) is True
    assert dirty_less("b", "a", o, led) is False
    assert dirty_less("a", "a", o, led) is False
    assert led.dirty == 3 and led.clean == 0
    assert o.dirty_less(NEG_INF, "a", led) is True
    assert led.dirty == 3


def test_dirty_oracle_missing_entry_is_an_error():
    with pytest.raises(MissingPredictionError):
        dirty_less("x", "y", DirtyOracle({"x": 1}), ComparisonLedger())


def test_callable_oracle_and_assign():
    o = DirtyOracle(lambda v: -v)
    assert o.rank(3) == -3
    o.assign(3, 100)
    assert o.rank(3) == 100
    assert 99 in o


def test_sentinels_and_snapshot():
    assert is_sentinel(NEG_INF) and is_sentinel(POS_INF) and not is_sentinel(0)
    assert not is_sentinel(-math.inf)
    led = ComparisonLedger()
    snap = led.snapshot()
    clean_less(1, 2, led)
    assert led.since(snap) == (1, 0)
