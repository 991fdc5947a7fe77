"""Binary heaps with dirty-comparison insertion, plus counted baselines.

:class:`RandomizedBinaryHeap` keeps an implicit complete-above-the-leaves
tree (slot ``s`` has children ``2s`` and ``2s + 1``).  The leaf level is
filled at random positions: an insertion picks a uniformly random empty leaf
slot, locates its key on the slot's root path (a sorted list) with a dirty
randomized binary search refined by a clean exponential search, and shifts
the lower part of the path down by one.

:class:`BinaryHeap` and :class:`FibonacciHeap` are textbook structures used
as baselines.  All three charge every key comparison to a ledger.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from itertools import count

from .errors import EmptyQueueError, NotFoundError
from .instrument import ComparisonLedger, DirtyOracle, Rng


def rbs_comparison_cap(k: int) -> int:
    """Worst-case comparisons of :func:`randomized_binary_search` on ``k`` keys.

    That is ``ceil(log_{4/3} k)`` for ``k >= 2``; a single key still needs
    one comparison to decide on which side the target falls.
    """
    if k <= 0:
        return 0
    if k == 1:
        return 1
    cap = 0
    while 4**cap < k * 3**cap:  # exact: smallest t with (4/3)**t >= k
        cap += 1
    return cap


def randomized_binary_search(L: Sequence, u, less: Callable, rng: Rng) -> int:
    """Position of ``u`` in sorted ``L``: the number of ``v`` with ``not less(u, v)``.

    While the candidates are ``L[i..j]`` the pivot is drawn uniformly from
    ``i + a .. j - a`` with ``a = min(ceil((j - i)/4), floor((j - i)/2))``;
    the floor only matters for two candidates, where the quarter rule alone
    would leave no pivot.
    """
    lo, hi = 0, len(L) - 1
    while lo <= hi:
        d = hi - lo
        a = min(-(-d // 4), d >> 1)
        piv = lo + a + rng.randbelow(d - 2 * a + 1)
        if less(u, L[piv]):
            hi = piv - 1
        else:
            lo = piv + 1
    return lo


def exponential_search(L: Sequence, start: int, u, less: Callable) -> int:
    """Position of ``u`` in sorted ``L`` by galloping outward from ``start``.

    Probes at distances 1, 2, 4, ... from ``start`` until the position is
    bracketed, then bisects the bracket.  A correct ``start`` costs at most
    two comparisons.
    """
    k = len(L)
    start = min(max(start, 0), k)
    if start < k and not less(u, L[start]):
        lo = start + 1  # the answer lies in [lo, hi]
        step = 1
        hi = k
        while start + step < k:
            probe = start + step
            if less(u, L[probe]):
                hi = probe
                break
            lo = probe + 1
            step <<= 1
    elif start > 0 and less(u, L[start - 1]):
        hi = start - 1
        step = 2
        lo = 0
        while start - step >= 0:
            probe = start - step
            if not less(u, L[probe]):
                lo = probe + 1
                break
            hi = probe
            step <<= 1
    else:
        return start
    while lo < hi:
        mid = (lo + hi) >> 1
        if less(u, L[mid]):
            hi = mid
        else:
            lo = mid + 1
    return lo


class _Stats:
    """Counters shared by the heaps; same snapshot shape as the skip-list queue."""

    def _init_stats(self, ledger: ComparisonLedger | None) -> None:
        self.ledger = ledger if ledger is not None else ComparisonLedger()
        self.inserts = 0
        self.extracts = 0
        self.last_cost = (0, 0)

    def stats(self) -> dict:
        return {
            "clean": self.ledger.clean,
            "dirty": self.ledger.dirty,
            "inserts": self.inserts,
            "extracts": self.extracts,
            "fallbacks": 0,
        }


class RandomizedBinaryHeap(_Stats):
    """Min-heap whose insertions use dirty comparisons along a random root path.

    ``oracle`` supplies predicted ranks of key values; dirty order is
    ``R(a) < R(b)``.  Without an oracle, :meth:`insert` falls back to a clean
    binary search of the path.
    """

    def __init__(
        self,
        rng: Rng | None = None,
        ledger: ComparisonLedger | None = None,
        oracle: DirtyOracle | None = None,
    ) -> None:
        self.rng = rng if rng is not None else Rng(0)
        self._init_stats(ledger)
        self.oracle = oracle
        self._key: list = [None, None]  # slot 0 unused
        self._item: list = [None, None]
        self.depth = 1  # the leaf level; slots 2**(depth-1) .. 2**depth - 1
        self._empty = [1]  # empty leaf slots
        self._occ: list[int] = []  # occupied leaf slots
        self._where = [0]  # leaf slot offset -> index in _empty or _occ
        self.slot_of: dict = {}  # item -> slot; empty slots hold item None
        self._ids = count()

    def __len__(self) -> int:
        return len(self.slot_of)

    def __contains__(self, item) -> bool:
        return item in self.slot_of

    # -- leaf bookkeeping -------------------------------------------------

    def _leaf_lo(self) -> int:
        return 1 << (self.depth - 1)

    def _move_leaf(self, s: int, src: list, dst: list) -> None:
        where = self._where
        off = s - self._leaf_lo()
        idx = where[off]
        last = src.pop()
        if last != s:
            src[idx] = last
            where[last - self._leaf_lo()] = idx
        where[off] = len(dst)
        dst.append(s)

    def _open_level(self) -> None:
        self.depth += 1
        lo = self._leaf_lo()
        self._key.extend([None] * lo)
        self._item.extend([None] * lo)
        self._empty = list(range(lo, 2 * lo))
        self._occ = []
        self._where = list(range(lo))

    def _close_level(self) -> None:
        # the leaf level is empty; the level above becomes the leaf level
        lo = self._leaf_lo()
        del self._key[lo:]
        del self._item[lo:]
        self.depth -= 1
        lo >>= 1
        self._empty, self._occ, self._where = [], [], [0] * lo
        for s in range(lo, 2 * lo):
            lst = self._occ if self._item[s] is not None else self._empty
            self._where[s - lo] = len(lst)
            lst.append(s)

    def _place(self, s: int, key, item) -> None:
        self._key[s] = key
        self._item[s] = item
        self.slot_of[item] = s

    # -- insertion ---------------------------------------------------------

    def _new_item(self, item):
        if item is None:
            return next(self._ids)
        if item in self.slot_of:
            raise ValueError(f"item {item!r} is already in the heap")
        return item

    def _path(self) -> tuple[int, list[int]]:
        if not self._empty:
            self._open_level()
        empty = self._empty
        s = empty[self.rng.randbelow(len(empty))]
        top = self.depth - 1  # ancestors of a leaf slot, root first
        return s, [s >> (top - i) for i in range(top)]

    def _settle(self, s: int, path: list[int], r: int, key, item) -> None:
        # shift path[r:] one step down the path (ending in s), put key at path[r]
        keys, items, slot_of = self._key, self._item, self.slot_of
        dest = s
        for i in range(len(path) - 1, r - 1, -1):
            src = path[i]
            keys[dest] = keys[src]
            it = items[dest] = items[src]
            slot_of[it] = dest
            dest = src
        self._place(dest, key, item)
        self._move_leaf(s, self._empty, self._occ)

    def insert(self, key, item=None, oracle: DirtyOracle | None = None):
        """Insert; uses the dirty search whenever an oracle is available."""
        oracle = oracle if oracle is not None else self.oracle
        if oracle is not None:
            return self.insert_dirty(key, item, oracle)
        led = self.ledger
        c0, d0 = led.clean, led.dirty
        item = self._new_item(item)
        s, path = self._path()
        keys = self._key
        lo, hi, c = 0, len(path), 0
        while lo < hi:
            mid = (lo + hi) >> 1
            c += 1
            if key < keys[path[mid]]:
                hi = mid
            else:
                lo = mid + 1
        led.clean += c
        self._settle(s, path, lo, key, item)
        self.inserts += 1
        self.last_cost = (led.clean - c0, led.dirty - d0)
        return item

    def insert_dirty(self, key, item=None, oracle: DirtyOracle | None = None):
        """Dirty randomized binary search on a random path, then clean exponential search."""
        oracle = oracle if oracle is not None else self.oracle
        if oracle is None:
            raise ValueError("insert_dirty needs a dirty oracle")
        led = self.ledger
        c0, d0 = led.clean, led.dirty
        item = self._new_item(item)
        s, path = self._path()
        keys = self._key
        table = oracle.table
        rank = oracle.rank
        ru = table[key] if key in table else rank(key)
        # dirty randomized binary search; same pivots as randomized_binary_search
        randbelow = self.rng.randbelow
        lo, hi, dc = 0, len(path) - 1, 0
        while lo <= hi:
            d = hi - lo
            a = (d + 3) >> 2 if d != 1 else 0  # ceil(d/4), but both ends when d == 1
            piv = lo + a + randbelow(d - 2 * a + 1)
            v = keys[path[piv]]
            dc += 1
            if ru < (table[v] if v in table else rank(v)):
                hi = piv - 1
            else:
                lo = piv + 1
        # clean exponential search from the estimate (as exponential_search)
        L = [keys[t] for t in path]
        cc = 0
        k = len(L)
        start = lo
        if start < k and not key < L[start]:
            cc += 1
            lo = start + 1
            step = 1
            hi = k
            while start + step < k:
                probe = start + step
                cc += 1
                if key < L[probe]:
                    hi = probe
                    break
                lo = probe + 1
                step <<= 1
        else:
            if start < k:
                cc += 1
            if start > 0 and key < L[start - 1]:
                cc += 1
                hi = start - 1
                step = 2
                lo = 0
                while start - step >= 0:
                    probe = start - step
                    cc += 1
                    if not key < L[probe]:
                        lo = probe + 1
                        break
                    hi = probe
                    step <<= 1
            else:
                if start > 0:
                    cc += 1
                lo = hi = start
        while lo < hi:
            mid = (lo + hi) >> 1
            cc += 1
            if key < L[mid]:
                hi = mid
            else:
                lo = mid + 1
        r = lo
        led.dirty += dc
        led.clean += cc
        self._settle(s, path, r, key, item)
        self.inserts += 1
        self.last_cost = (led.clean - c0, led.dirty - d0)
        return item

    # -- removal -----------------------------------------------------------

    def find_min(self):
        if not self.slot_of:
            raise EmptyQueueError("find_min on empty heap")
        return self._key[1], self._item[1]

    def _sift_up(self, x: int) -> int:
        keys, items, slot_of = self._key, self._item, self.slot_of
        key, item = keys[x], items[x]
        c = 0
        while x > 1:
            p = x >> 1
            c += 1
            if not key < keys[p]:
                break
            keys[x] = keys[p]
            it = items[x] = items[p]
            slot_of[it] = x
            x = p
        keys[x] = key
        items[x] = item
        slot_of[item] = x
        return c

    def extract_min(self):
        """Remove the root; the hole moves down by promoting the smaller child."""
        led = self.ledger
        c0, d0 = led.clean, led.dirty
        if not self.slot_of:
            raise EmptyQueueError("extract_min on empty heap")
        keys, items, slot_of = self._key, self._item, self.slot_of
        key, item = keys[1], items[1]
        del slot_of[item]
        c = 0
        hole = 1
        while True:
            leaf_lo = 1 << (self.depth - 1)
            if hole >= leaf_lo:
                keys[hole] = items[hole] = None
                self._move_leaf(hole, self._occ, self._empty)
                break
            a = hole << 1
            b = a + 1
            if a < leaf_lo:
                # both children sit on full levels
                c += 1
                child = b if keys[b] < keys[a] else a
            else:
                fa = items[a] is not None
                fb = items[b] is not None
                if fa and fb:
                    c += 1
                    child = b if keys[b] < keys[a] else a
                elif fa or fb:
                    child = a if fa else b
                else:
                    # hole above two empty leaves: refill it from a random leaf
                    occ = self._occ
                    if not occ:
                        keys[hole] = items[hole] = None
                        self._close_level()
                        break
                    s = occ[self.rng.randbelow(len(occ))]
                    keys[hole], items[hole] = keys[s], items[s]
                    keys[s] = items[s] = None
                    self._move_leaf(s, occ, self._empty)
                    c += self._sift_up(hole)
                    break
            keys[hole] = keys[child]
            it = items[hole] = items[child]
            slot_of[it] = hole
            hole = child
        led.clean += c
        self.extracts += 1
        self.last_cost = (led.clean - c0, led.dirty - d0)
        return key, item

    def key(self, item):
        try:
            return self._key[self.slot_of[item]]
        except KeyError:
            raise NotFoundError(item) from None

    def decrease_key(self, item, new_key, prediction=None) -> None:
        """Lower ``item``'s key and sift it up; ``prediction`` is ignored."""
        led = self.ledger
        c0, d0 = led.clean, led.dirty
        old = self.key(item)
        if not new_key < old:
            raise ValueError(f"decrease_key needs new_key < key ({new_key!r} >= {old!r})")
        x = self.slot_of[item]
        self._key[x] = new_key
        led.clean += self._sift_up(x)
        self.last_cost = (led.clean - c0, led.dirty - d0)

    def drain(self) -> list:
        out = []
        while self.slot_of:
            out.append(self.extract_min()[0])
        return out

    def check(self) -> None:
        keys, items = self._key, self._item
        d = self.depth
        leaf_lo = 1 << (d - 1)
        assert len(keys) == len(items) == 2 * leaf_lo
        for s in range(1, leaf_lo):
            assert items[s] is not None, f"hole at {s}"
        occupied = [s for s in range(1, 2 * leaf_lo) if items[s] is not None]
        assert len(occupied) == len(self.slot_of)
        for s in occupied:
            assert self.slot_of[items[s]] == s
            if s > 1:
                assert not keys[s] < keys[s >> 1], f"heap order broken at {s}"
        leaves = set(range(leaf_lo, 2 * leaf_lo))
        assert set(self._occ) | set(self._empty) == leaves
        assert not set(self._occ) & set(self._empty)
        assert set(self._occ) == {s for s in occupied if s >= leaf_lo}
        for lst in (self._occ, self._empty):
            for i, s in enumerate(lst):
                assert self._where[s - leaf_lo] == i


class BinaryHeap(_Stats):
    """Array binary min-heap with an item -> index map for decrease_key."""

    def __init__(self, ledger: ComparisonLedger | None = None) -> None:
        self._init_stats(ledger)
        self._key: list = []
        self._item: list = []
        self.pos: dict = {}
        self._ids = count()

    def __len__(self) -> int:
        return len(self._key)

    def __contains__(self, item) -> bool:
        return item in self.pos

    def _sift_up(self, i: int) -> int:
        keys, items, pos = self._key, self._item, self.pos
        key, item = keys[i], items[i]
        c = 0
        while i > 0:
            p = (i - 1) >> 1
            c += 1
            if not key < keys[p]:
                break
            keys[i] = keys[p]
            it = items[i] = items[p]
            pos[it] = i
            i = p
        keys[i] = key
        items[i] = item
        pos[item] = i
        return c

    def insert(self, key, item=None, prediction=None):
        led = self.ledger
        c0 = led.clean
        if item is None:
            item = next(self._ids)
        elif item in self.pos:
            raise ValueError(f"item {item!r} is already in the heap")
        self._key.append(key)
        self._item.append(item)
        led.clean += self._sift_up(len(self._key) - 1)
        self.inserts += 1
        self.last_cost = (led.clean - c0, 0)
        return item

    def find_min(self):
        if not self._key:
            raise EmptyQueueError("find_min on empty heap")
        return self._key[0], self._item[0]

    def extract_min(self):
        led = self.ledger
        c0 = led.clean
        keys, items, pos = self._key, self._item, self.pos
        if not keys:
            raise EmptyQueueError("extract_min on empty heap")
        top_key, top_item = keys[0], items[0]
        del pos[top_item]
        key, item = keys.pop(), items.pop()
        n = len(keys)
        c = 0
        if n:
            i = 0
            while True:
                a = 2 * i + 1
                if a >= n:
                    break
                b = a + 1
                child = a
                if b < n:
                    c += 1
                    if keys[b] < keys[a]:
                        child = b
                c += 1
                if not keys[child] < key:
                    break
                keys[i] = keys[child]
                it = items[i] = items[child]
                pos[it] = i
                i = child
            keys[i] = key
            items[i] = item
            pos[item] = i
        led.clean += c
        self.extracts += 1
        self.last_cost = (led.clean - c0, 0)
        return top_key, top_item

    def key(self, item):
        try:
            return self._key[self.pos[item]]
        except KeyError:
            raise NotFoundError(item) from None

    def decrease_key(self, item, new_key, prediction=None) -> None:
        led = self.ledger
        c0 = led.clean
        old = self.key(item)
        if not new_key < old:
            raise ValueError(f"decrease_key needs new_key < key ({new_key!r} >= {old!r})")
        i = self.pos[item]
        self._key[i] = new_key
        led.clean += self._sift_up(i)
        self.last_cost = (led.clean - c0, 0)

    def drain(self) -> list:
        out = []
        while self._key:
            out.append(self.extract_min()[0])
        return out

    def check(self) -> None:
        keys = self._key
        for i in range(1, len(keys)):
            assert not keys[i] < keys[(i - 1) >> 1]
        assert all(self.pos[it] == i for i, it in enumerate(self._item))
        assert len(self.pos) == len(keys)


class _FibNode:
    __slots__ = ("key", "item", "parent", "child", "left", "right", "degree", "mark")

    def __init__(self, key, item) -> None:
        self.key = key
        self.item = item
        self.parent: _FibNode | None = None
        self.child: _FibNode | None = None
        self.left = self
        self.right = self
        self.degree = 0
        self.mark = False


def _splice_in(anchor: _FibNode, x: _FibNode) -> None:
    # put x right of anchor in anchor's circular list
    x.left = anchor
    x.right = anchor.right
    anchor.right.left = x
    anchor.right = x


def _unsplice(x: _FibNode) -> None:
    x.left.right = x.right
    x.right.left = x.left
    x.left = x.right = x


def _siblings(x: _FibNode) -> list[_FibNode]:
    out = [x]
    y = x.right
    while y is not x:
        out.append(y)
        y = y.right
    return out


class FibonacciHeap(_Stats):
    """Textbook Fibonacci heap (lazy melding, consolidation, cascading cuts)."""

    def __init__(self, ledger: ComparisonLedger | None = None) -> None:
        self._init_stats(ledger)
        self.min: _FibNode | None = None
        self.nodes: dict = {}
        self._ids = count()

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, item) -> bool:
        return item in self.nodes

    def insert(self, key, item=None, prediction=None):
        led = self.ledger
        c0 = led.clean
        if item is None:
            item = next(self._ids)
        elif item in self.nodes:
            raise ValueError(f"item {item!r} is already in the heap")
        x = _FibNode(key, item)
        self.nodes[item] = x
        m = self.min
        if m is None:
            self.min = x
        else:
            _splice_in(m, x)
            led.clean += 1
            if key < m.key:
                self.min = x
        self.inserts += 1
        self.last_cost = (led.clean - c0, 0)
        return item

    def find_min(self):
        if self.min is None:
            raise EmptyQueueError("find_min on empty heap")
        return self.min.key, self.min.item

    def extract_min(self):
        led = self.ledger
        c0 = led.clean
        z = self.min
        if z is None:
            raise EmptyQueueError("extract_min on empty heap")
        if z.child is not None:
            for x in _siblings(z.child):
                x.parent = None
                x.mark = False
                _unsplice(x)
                _splice_in(z, x)
            z.child = None
        if z.right is z:
            self.min = None
        else:
            start = z.right
            _unsplice(z)
            led.clean += self._consolidate(start)
        del self.nodes[z.item]
        self.extracts += 1
        self.last_cost = (led.clean - c0, 0)
        return z.key, z.item

    def _consolidate(self, start: _FibNode) -> int:
        c = 0
        by_degree: dict[int, _FibNode] = {}
        for w in _siblings(start):
            x = w
            d = x.degree
            while d in by_degree:
                y = by_degree.pop(d)
                c += 1
                if y.key < x.key:
                    x, y = y, x
                # link y below x
                _unsplice(y)
                y.parent = x
                y.mark = False
                if x.child is None:
                    x.child = y
                else:
                    _splice_in(x.child, y)
                x.degree += 1
                d = x.degree
            by_degree[d] = x
        roots = list(by_degree.values())
        m = roots[0]
        for r in roots[1:]:
            c += 1
            if r.key < m.key:
                m = r
        self.min = m
        return c

    def key(self, item):
        try:
            return self.nodes[item].key
        except KeyError:
            raise NotFoundError(item) from None

    def _cut(self, x: _FibNode, p: _FibNode) -> None:
        if x.right is x:
            p.child = None
        else:
            if p.child is x:
                p.child = x.right
            _unsplice(x)
        p.degree -= 1
        x.parent = None
        x.mark = False
        _splice_in(self.min, x)  # type: ignore[arg-type]

    def decrease_key(self, item, new_key, prediction=None) -> None:
        led = self.ledger
        c0 = led.clean
        old = self.key(item)
        if not new_key < old:
            raise ValueError(f"decrease_key needs new_key < key ({new_key!r} >= {old!r})")
        x = self.nodes[item]
        x.key = new_key
        c = 0
        p = x.parent
        if p is not None:
            c += 1
            if new_key < p.key:
                self._cut(x, p)
                while True:  # cascading cut
                    q = p.parent
                    if q is None:
                        break
                    if not p.mark:
                        p.mark = True
                        break
                    self._cut(p, q)
                    p = q
        m = self.min
        if x is not m:
            c += 1
            if new_key < m.key:  # type: ignore[union-attr]
                self.min = x
        led.clean += c
        self.last_cost = (led.clean - c0, 0)

    def drain(self) -> list:
        out = []
        while self.min is not None:
            out.append(self.extract_min()[0])
        return out

    def check(self) -> None:
        seen = 0

        def walk(x: _FibNode, parent: _FibNode | None) -> None:
            nonlocal seen
            for y in _siblings(x):
                seen += 1
                assert y.parent is parent
                if parent is not None:
                    assert not y.key < parent.key
                assert self.nodes[y.item] is y
                if y.child is not None:
                    assert len(_siblings(y.child)) == y.degree
                    walk(y.child, y)
                else:
                    assert y.degree == 0

        if self.min is not None:
            walk(self.min, None)
            assert all(not r.key < self.min.key for r in _siblings(self.min))
        assert seen == len(self.nodes)
