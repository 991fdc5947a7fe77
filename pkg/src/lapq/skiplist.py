"""Doubly linked skip list with exponential-search insertion.

Each distinct key lives in one :class:`SkipNode`; elements sharing a key are
kept in the node's FIFO bucket.  ``head`` (-inf) and ``nil`` (+inf) are
sentinel nodes whose height always equals the tallest node.  Tests against
sentinels are identity checks and cost nothing; every other key test adds
one to the ledger.

All searches remember the nearest node already known to lie beyond the
target and never compare against it twice.
"""

from __future__ import annotations

from collections.abc import Iterator
from itertools import count

from .errors import EmptyQueueError, NotFoundError
from .instrument import ComparisonLedger, DirtyOracle, Rng


class SkipNode:
    __slots__ = ("key", "next", "prev", "bucket")

    def __init__(self, key, next: list, prev: list, bucket: list) -> None:
        self.key = key
        self.next: list[SkipNode] = next
        self.prev: list[SkipNode] = prev
        # items in arrival order; buckets hold one item except for duplicate keys
        self.bucket = bucket

    @property
    def height(self) -> int:
        return len(self.next)

    def __repr__(self) -> str:
        return f"SkipNode({self.key!r}, h={len(self.next)}, n={len(self.bucket)})"


class SkipList:
    """Sorted multiset of keys with handles to elements.

    ``p`` is the geometric parameter of node heights:
    ``Pr[h = k] = (1 - p)**(k - 1) * p``.
    """

    def __init__(
        self,
        rng: Rng | None = None,
        ledger: ComparisonLedger | None = None,
        p: float = 0.5,
    ) -> None:
        if not 0.0 < p < 1.0:
            raise ValueError("p must lie in (0, 1)")
        self.rng = rng if rng is not None else Rng(0)
        self.ledger = ledger if ledger is not None else ComparisonLedger()
        self.p = p
        self.head = SkipNode(None, [None], [None], [])
        self.nil = SkipNode(None, [None], [None], [])
        self.head.next[0] = self.nil
        self.nil.prev[0] = self.head
        self.index: dict = {}  # key -> node
        self._size = 0  # element count
        self._ids = count()
        self._heights: list[int] = []  # pre-drawn heights, next one last

    # -- inspection -------------------------------------------------------

    def __len__(self) -> int:
        return self._size

    @property
    def distinct(self) -> int:
        return len(self.index)

    @property
    def level(self) -> int:
        return len(self.head.next)

    def node(self, key) -> SkipNode:
        try:
            return self.index[key]
        except KeyError:
            raise NotFoundError(key) from None

    def __contains__(self, key) -> bool:
        return key in self.index

    def nodes(self, level: int = 1) -> Iterator[SkipNode]:
        x = self.head.next[level - 1]
        nil = self.nil
        while x is not nil:
            yield x
            x = x.next[level - 1]

    def keys(self) -> list:
        return [x.key for x in self.nodes()]

    def elements(self) -> list:
        """All (key, item) pairs in extraction order."""
        return [(x.key, it) for x in self.nodes() for it in x.bucket]

    def check(self) -> None:
        """Verify every structural invariant; raises AssertionError."""
        head, nil = self.head, self.nil
        top = len(head.next)
        assert len(nil.next) == top
        prev_level: set | None = None
        for lv in range(top):
            seen = []
            x = head
            while x is not nil:
                y = x.next[lv]
                assert y.prev[lv] is x
                if x is not head and y is not nil:
                    assert x.key < y.key
                x = y
                if x is not nil:
                    assert len(x.next) > lv
                    seen.append(id(x))
            s = set(seen)
            if prev_level is not None:
                assert s <= prev_level
            prev_level = s
        keys = self.keys()
        assert len(keys) == len(self.index)
        assert all(self.index[k].key == k for k in keys)
        assert all(len(n.bucket) > 0 for n in self.nodes())
        assert sum(len(n.bucket) for n in self.nodes()) == self._size
        top_h = max((len(n.next) for n in self.nodes()), default=1)
        assert top >= top_h

    # -- heights ----------------------------------------------------------

    def sample_height(self) -> int:
        """Next node height; heights are drawn from ``rng`` in batches of 64."""
        hb = self._heights
        if not hb:
            hb.extend(reversed(self.rng.geometric_many(64, self.p)))
        return hb.pop()

    def _grow(self, h: int) -> None:
        head, nil = self.head, self.nil
        while len(head.next) < h:
            head.next.append(nil)
            head.prev.append(None)  # type: ignore[arg-type]
            nil.prev.append(head)
            nil.next.append(None)  # type: ignore[arg-type]

    # -- insertion --------------------------------------------------------

    def new_item(self) -> int:
        return next(self._ids)

    def insert_after(self, w: SkipNode, key, item=None) -> SkipNode:
        """Splice ``key`` right after its known predecessor ``w``; no comparisons.

        A key that is already stored joins the existing bucket instead.
        """
        if item is None:
            item = next(self._ids)
        node = self.index.get(key)
        if node is not None:
            node.bucket.append(item)
            self._size += 1
            return node
        return self._splice(w, key, item)

    def _splice(self, w: SkipNode, key, item) -> SkipNode:
        # key is not stored and w is its level-1 predecessor
        hb = self._heights
        if not hb:
            hb.extend(reversed(self.rng.geometric_many(64, self.p)))
        h = hb.pop()
        if h == 1:
            y = w.next[0]
            node = SkipNode(key, [y], [w], [item])
            w.next[0] = node
            y.prev[0] = node
        else:
            if h > len(self.head.next):
                self._grow(h)
            nxt = []
            prv = []
            x = w
            top = len(x.next)
            for lv in range(h):
                while top <= lv:
                    x = x.prev[top - 1]
                    top = len(x.next)
                prv.append(x)
                nxt.append(x.next[lv])
            node = SkipNode(key, nxt, prv, [item])
            for lv in range(h):
                prv[lv].next[lv] = node
                nxt[lv].prev[lv] = node
        self.index[key] = node
        self._size += 1
        return node

    def locate_from(self, source: SkipNode, key) -> SkipNode:
        """Predecessor node of ``key`` by exponential search from ``source``.

        ``key`` must not be stored.  Searches right when ``source < key`` and
        left otherwise.  Clean comparisons are charged to the ledger.
        """
        nil, head = self.nil, self.head
        c = 0
        w = source
        if w is not head:
            c += 1
            if key < w.key:
                # mirrored search along prev links
                bound = None
                while True:
                    prv = w.prev[len(w.prev) - 1]
                    if prv is head:
                        break
                    c += 1
                    if key < prv.key:
                        w = prv
                    else:
                        bound = prv
                        break
                for lv in range(len(w.prev) - 1, -1, -1):
                    prv = w.prev[lv]
                    while prv is not head and prv is not bound:
                        c += 1
                        if key < prv.key:
                            w = prv
                            prv = w.prev[lv]
                        else:
                            bound = prv
                            break
                self.ledger.clean += c
                return w.prev[0]
        bound = None
        while True:
            nxt = w.next[len(w.next) - 1]
            if nxt is nil:
                break
            c += 1
            if nxt.key < key:
                w = nxt
            else:
                bound = nxt
                break
        for lv in range(len(w.next) - 1, -1, -1):
            nxt = w.next[lv]
            while nxt is not nil and nxt is not bound:
                c += 1
                if nxt.key < key:
                    w = nxt
                    nxt = w.next[lv]
                else:
                    bound = nxt
                    break
        self.ledger.clean += c
        return w

    def exp_search_insert(self, source: SkipNode, key, item=None) -> SkipNode:
        """Insert ``key`` by exponential search starting at ``source``.

        Equal keys are detected through the key index and appended to their
        bucket without any comparison.
        """
        if item is None:
            item = next(self._ids)
        node = self.index.get(key)
        if node is not None:
            node.bucket.append(item)
            self._size += 1
            return node
        return self._splice(self.locate_from(source, key), key, item)

    def insert(self, key, item=None) -> SkipNode:
        """Classical insertion: exponential search from the head."""
        return self.exp_search_insert(self.head, key, item)

    def search_top_down(self, key, oracle: DirtyOracle | None = None) -> SkipNode:
        """Top-down search from the head.

        Returns the last node whose key is ``<= key`` under the clean order,
        or under the dirty order when ``oracle`` is given (the head if none).
        """
        nil = self.nil
        w = self.head
        bound = None
        c = 0
        if oracle is None:
            for lv in range(len(w.next) - 1, -1, -1):
                nxt = w.next[lv]
                while nxt is not nil and nxt is not bound:
                    c += 1
                    if key < nxt.key:
                        bound = nxt
                        break
                    w = nxt
                    nxt = w.next[lv]
            self.ledger.clean += c
            return w
        table = oracle.table
        rk = oracle.rank(key)
        for lv in range(len(w.next) - 1, -1, -1):
            nxt = w.next[lv]
            while nxt is not nil and nxt is not bound:
                c += 1
                try:
                    r = table[nxt.key]
                except KeyError:
                    r = oracle.rank(nxt.key)
                if rk < r:
                    bound = nxt
                    break
                w = nxt
                nxt = w.next[lv]
        self.ledger.dirty += c
        return w

    # -- removal ----------------------------------------------------------

    def _unlink(self, node: SkipNode) -> None:
        nxt, prv = node.next, node.prev
        for lv in range(len(nxt)):
            a, b = prv[lv], nxt[lv]
            a.next[lv] = b
            b.prev[lv] = a
        del self.index[node.key]

    def find_min(self):
        """(key, item) of the first element, without removing it."""
        x = self.head.next[0]
        if x is self.nil:
            raise EmptyQueueError("find_min on empty skip list")
        return x.key, x.bucket[0]

    def extract_min(self):
        """Remove and return the first (key, item); FIFO among equal keys."""
        x = self.head.next[0]
        if x is self.nil:
            raise EmptyQueueError("extract_min on empty skip list")
        bucket = x.bucket
        item = bucket.pop(0)
        if not bucket:
            self._unlink(x)
        self._size -= 1
        return x.key, item

    def remove(self, key, item=None) -> SkipNode:
        """Remove one element of ``key`` (the oldest unless ``item`` is given).

        Returns the node that preceded the removed element at level 1: the
        node itself when its bucket is still non-empty, else its predecessor.
        """
        node = self.index.get(key)
        if node is None:
            raise NotFoundError(key)
        bucket = node.bucket
        if item is None:
            item = bucket[0]
        elif item not in bucket:
            raise NotFoundError((key, item))
        bucket.remove(item)
        self._size -= 1
        if bucket:
            return node
        self._unlink(node)
        return node.prev[0]

    def delete(self, key, item=None):
        """Remove one element of ``key`` and return its item."""
        node = self.index.get(key)
        if node is None:
            raise NotFoundError(key)
        if item is None:
            item = node.bucket[0]
        self.remove(key, item)
        return item

    def decrease_key(self, key, new_key, item=None):
        """Move one element from ``key`` to ``new_key < key``.

        The reinsertion runs the exponential search from the removed element's
        former level-1 predecessor.  The argument check is not charged.
        """
        if not new_key < key:
            raise ValueError(f"decrease_key needs new_key < key ({new_key!r} >= {key!r})")
        node = self.index.get(key)
        if node is None:
            raise NotFoundError(key)
        if item is None:
            item = node.bucket[0]
        start = self.remove(key, item)
        if start is node:
            start = node.prev[0]
        self.exp_search_insert(start, new_key, item)
        return item

    def clear(self) -> None:
        """Remove every element.

        Back links are cut first so the dropped nodes are reclaimed by
        reference counting instead of waiting for the cycle collector.
        """
        x = self.head.next[0]
        nil = self.nil
        while x is not nil:
            y = x.next[0]
            x.prev = None  # type: ignore[assignment]
            x = y
        self.head = SkipNode(None, [None], [None], [])
        self.nil = SkipNode(None, [None], [None], [])
        self.head.next[0] = self.nil
        self.nil.prev[0] = self.head
        self.index = {}
        self._size = 0

    def __iter__(self) -> Iterator:
        return iter(self.keys())
