"""Deterministic randomness, comparison counting and dirty-comparison oracles.

Every random draw in the package goes through :class:`Rng`, a SplitMix64
generator.  SplitMix64 is fully specified by three constants and two
xor-shift-multiply rounds, so any port reproduces the streams bit-exactly:

    state  = (state + 0x9E3779B97F4A7C15) mod 2**64
    z      = state
    z      = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z      = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    output = z ^ (z >> 31)

Reference vector: seed 1234567 yields 6457827717110365317,
3203168211198807973, 9817491932198370423, 4593380528125082431,
16408922859458223821.

Derived draws are defined on top of ``next_u64`` so they are portable too:

* ``random()``      -- ``(next_u64() >> 11) * 2**-53``
* ``randbelow(n)``  -- Lemire's multiply-shift: ``x * n >> 64`` for a draw
  ``x``, redrawn while ``(x * n) mod 2**64 < 2**64 mod n``
* ``geometric(p)``  -- for ``p == 1/2`` one draw, ``1 + ctz(x)``; otherwise
  repeated ``random() < p`` trials.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Hashable, Mapping, MutableSequence
from typing import Any

from .errors import MissingPredictionError

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV53 = 1.0 / (1 << 53)


class Rng:
    """SplitMix64 pseudo random generator."""

    __slots__ = ("_state",)

    def __init__(self, seed: int = 0) -> None:
        self._state = seed & _MASK

    @property
    def state(self) -> int:
        return self._state

    def next_u64(self) -> int:
        s = (self._state + _GAMMA) & _MASK
        self._state = s
        s = ((s ^ (s >> 30)) * _MIX1) & _MASK
        s = ((s ^ (s >> 27)) * _MIX2) & _MASK
        return s ^ (s >> 31)

    def spawn(self) -> Rng:
        """Return an independent generator seeded from this stream."""
        return Rng(self.next_u64())

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return (self.next_u64() >> 11) * _INV53

    def uniform(self, a: float, b: float) -> float:
        return a + (b - a) * self.random()

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if not 0 < n <= _MASK:
            raise ValueError("randbelow requires 1 <= n < 2**64")
        st = (self._state + _GAMMA) & _MASK
        z = ((st ^ (st >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        m = (z ^ (z >> 31)) * n
        if (m & _MASK) < n:
            t = (_MASK + 1 - n) % n
            while (m & _MASK) < t:
                st = (st + _GAMMA) & _MASK
                z = ((st ^ (st >> 30)) * _MIX1) & _MASK
                z = ((z ^ (z >> 27)) * _MIX2) & _MASK
                m = (z ^ (z >> 31)) * n
        self._state = st
        return m >> 64

    def randint(self, a: int, b: int) -> int:
        """Uniform integer in the closed range [a, b]."""
        return a + self.randbelow(b - a + 1)

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]

    def shuffle(self, seq: MutableSequence[Any]) -> None:
        """In-place Fisher-Yates shuffle (from the back); same draws as ``randbelow``."""
        st = self._state
        for i in range(len(seq) - 1, 0, -1):
            n = i + 1
            st = (st + _GAMMA) & _MASK
            z = ((st ^ (st >> 30)) * _MIX1) & _MASK
            z = ((z ^ (z >> 27)) * _MIX2) & _MASK
            m = (z ^ (z >> 31)) * n
            if (m & _MASK) < n:
                t = (_MASK + 1 - n) % n
                while (m & _MASK) < t:
                    st = (st + _GAMMA) & _MASK
                    z = ((st ^ (st >> 30)) * _MIX1) & _MASK
                    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
                    m = (z ^ (z >> 31)) * n
            j = m >> 64
            seq[i], seq[j] = seq[j], seq[i]
        self._state = st

    def permutation(self, n: int) -> list[int]:
        out = list(range(n))
        self.shuffle(out)
        return out

    def geometric(self, p: float = 0.5) -> int:
        """Number of trials up to and including the first success (support 1, 2, ...)."""
        if p == 0.5:
            x = self.next_u64()
            if x == 0:
                return 64
            return (x & -x).bit_length()
        if not 0.0 < p <= 1.0:
            raise ValueError("geometric requires 0 < p <= 1")
        k = 1
        while self.random() >= p:
            k += 1
        return k

    def geometric_many(self, count: int, p: float = 0.5) -> list[int]:
        """``count`` geometric draws; identical to calling :meth:`geometric` repeatedly."""
        if p != 0.5:
            return [self.geometric(p) for _ in range(count)]
        out = [0] * count
        st = self._state
        for i in range(count):
            st = (st + _GAMMA) & _MASK
            z = ((st ^ (st >> 30)) * _MIX1) & _MASK
            z = ((z ^ (z >> 27)) * _MIX2) & _MASK
            z ^= z >> 31
            out[i] = (z & -z).bit_length() if z else 64
        self._state = st
        return out

    def exponential(self) -> float:
        return -math.log(1.0 - self.random())

    def poisson(self, lam: float) -> int:
        """Poisson(lam) as the number of unit-rate arrivals in [0, lam]."""
        if lam < 0:
            raise ValueError("poisson requires lam >= 0")
        t = self.exponential()
        k = 0
        while t <= lam:
            k += 1
            t += self.exponential()
        return k


class _Sentinel:
    __slots__ = ("name", "sign")

    def __init__(self, name: str, sign: int) -> None:
        self.name = name
        self.sign = sign

    def __repr__(self) -> str:
        return self.name


NEG_INF = _Sentinel("-inf", -1)
POS_INF = _Sentinel("+inf", 1)


def is_sentinel(x: object) -> bool:
    return x is NEG_INF or x is POS_INF


class ComparisonLedger:
    """Counts clean and dirty comparisons.

    Hot loops in the data structures count locally and add their totals in
    one step; the counters are only ever increased.
    """

    __slots__ = ("clean", "dirty")

    def __init__(self) -> None:
        self.clean = 0
        self.dirty = 0

    def snapshot(self) -> tuple[int, int]:
        return self.clean, self.dirty

    def since(self, snap: tuple[int, int]) -> tuple[int, int]:
        return self.clean - snap[0], self.dirty - snap[1]

    def __repr__(self) -> str:
        return f"ComparisonLedger(clean={self.clean}, dirty={self.dirty})"


def _sentinel_less(a, b) -> bool:
    # at least one operand is a sentinel
    if a is b:
        return False
    if a is NEG_INF or b is POS_INF:
        return True
    return False


def clean_less(a, b, ledger: ComparisonLedger) -> bool:
    """True order ``a < b``; charged unless an operand is a sentinel."""
    if is_sentinel(a) or is_sentinel(b):
        return _sentinel_less(a, b)
    ledger.clean += 1
    return a < b


class DirtyOracle:
    """Dirty order induced by predicted ranks: ``a <^ b`` iff ``R(a) < R(b)``.

    ``ranks`` is either a mapping element -> predicted rank or a callable.
    Mappings can be extended online with :meth:`assign`.
    """

    __slots__ = ("_ranks", "_fn")

    def __init__(
        self,
        ranks: Mapping[Hashable, int] | Callable[[Any], int] | None = None,
    ) -> None:
        self._fn = None
        if ranks is None:
            self._ranks: dict = {}
        elif callable(ranks) and not isinstance(ranks, Mapping):
            self._ranks = {}
            self._fn = ranks
        else:
            self._ranks = dict(ranks)

    def assign(self, element, rank: int) -> None:
        self._ranks[element] = rank

    def __contains__(self, element) -> bool:
        return element in self._ranks or self._fn is not None

    def rank(self, element) -> int:
        try:
            return self._ranks[element]
        except KeyError:
            if self._fn is not None:
                return self._fn(element)
            raise MissingPredictionError(element) from None

    @property
    def table(self) -> dict:
        """The backing dict (callable oracles answer misses through the function)."""
        return self._ranks

    @property
    def function(self):
        return self._fn

    def dirty_less(self, a, b, ledger: ComparisonLedger) -> bool:
        return dirty_less(a, b, self, ledger)


def dirty_less(a, b, oracle: DirtyOracle, ledger: ComparisonLedger) -> bool:
    """Predicted order ``R(a) < R(b)``; charged unless an operand is a sentinel."""
    if is_sentinel(a) or is_sentinel(b):
        return _sentinel_less(a, b)
    ra = oracle.rank(a)
    rb = oracle.rank(b)
    ledger.dirty += 1
    return ra < rb
