"""van Emde Boas trees over integer keys, static and capacity-doubling.

The recursive key set uses the min/max-caching layout: a node over a
universe of ``2**bits`` values keeps its minimum out of the clusters, splits
the remaining keys on the high/low halves of their bits, and records the
non-empty clusters in a summary node.  ``bits`` is always a power of two, so
both halves have equal width.  Clusters are allocated lazily, and clusters
over at most 256 values are single integer bitmasks, so the smallest tree
spans 16 bits.

Elements are kept in per-key buckets next to the key set, in insertion order.
"""

from __future__ import annotations

from .errors import EmptyQueueError, NotFoundError


LEAF_BITS = 8  # universes of at most 2**LEAF_BITS values are bitmasks
_MIN_BITS = 2 * LEAF_BITS


def _low(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class _Node:
    __slots__ = ("lb", "mask", "leafkids", "min", "max", "summary", "clusters")

    def __init__(self, bits: int) -> None:
        lb = bits >> 1
        self.lb = lb
        self.mask = (1 << lb) - 1
        # children over 2**LEAF_BITS values are plain int bitmasks
        self.leafkids = lb <= LEAF_BITS
        self.min: int | None = None
        self.max: int | None = None
        self.summary = 0 if self.leafkids else None
        self.clusters: dict = {}


def _insert(node: _Node, x: int) -> None:
    # x is not yet stored; each level does O(1) work and descends once
    while True:
        if node.min is None:
            node.min = node.max = x
            return
        if x < node.min:
            x, node.min = node.min, x
        if x > node.max:
            node.max = x
        lb = node.lb
        h = x >> lb
        low = x & node.mask
        clusters = node.clusters
        c = clusters.get(h)
        if node.leafkids:
            if c is None:
                clusters[h] = 1 << low
                node.summary |= 1 << h
            else:
                clusters[h] = c | (1 << low)
            return
        if c is None:
            c = clusters[h] = _Node(lb)
            c.min = c.max = low
            if node.summary is None:
                node.summary = _Node(lb)
            node = node.summary
            x = h
        else:
            node = c
            x = low


def _insert_pred(node: _Node, x: int) -> int | None:
    """Insert ``x`` (not stored) and return the largest value below it, in one descent."""
    base = 0
    while True:
        mn = node.min
        if mn is None:
            node.min = node.max = x
            return None
        if x < mn:
            node.min = x
            _insert(node, mn)
            return None
        mx = node.max
        if x > mx:
            _insert(node, x)
            return base + mx
        # mn < x < mx
        lb = node.lb
        h = x >> lb
        low = x & node.mask
        clusters = node.clusters
        c = clusters.get(h)
        if node.leafkids:
            if c is None:
                clusters[h] = 1 << low
                s = node.summary
                node.summary = s | (1 << h)
            else:
                clusters[h] = c | (1 << low)
                t = c & ((1 << low) - 1)
                if t:
                    return base + (h << lb) + t.bit_length() - 1
                s = node.summary
            t = s & ((1 << h) - 1)
            if t:
                p = t.bit_length() - 1
                return base + (p << lb) + clusters[p].bit_length() - 1
            return base + mn
        if c is None:
            c = clusters[h] = _Node(lb)
            c.min = c.max = low
            summary = node.summary
            if summary is None:
                summary = node.summary = _Node(lb)
                summary.min = summary.max = h
                return base + mn
            p = _insert_pred(summary, h)
            return base + (mn if p is None else (p << lb) | clusters[p].max)
        if low > c.min:
            base += h << lb
            node = c
            x = low
            continue
        # x becomes the cluster's minimum; its predecessor lies further left
        _insert(c, low)
        p = _predecessor(node.summary, h)
        return base + (mn if p is None else (p << lb) | clusters[p].max)


def _successor(node: _Node, x: int) -> int | None:
    """Smallest stored value strictly greater than ``x``."""
    # descents into clusters are looped; only summary queries recurse
    base = 0
    while True:
        mn = node.min
        if mn is None:
            return None
        if x < mn:
            return base + mn
        lb = node.lb
        h = x >> lb
        low = x & node.mask
        c = node.clusters.get(h)
        if node.leafkids:
            if c is not None:
                t = c >> (low + 1)
                if t:
                    return base + (h << lb) + low + 1 + _low(t)
            t = node.summary >> (h + 1)
            if not t:
                return None
            s = h + 1 + _low(t)
            return base + (s << lb) + _low(node.clusters[s])
        if c is not None and low < c.max:
            base += h << lb
            node = c
            x = low
            continue
        summary = node.summary
        if summary is None:
            return None
        s = _successor(summary, h)
        if s is None:
            return None
        return base + ((s << lb) | node.clusters[s].min)


def _predecessor(node: _Node, x: int) -> int | None:
    """Largest stored value strictly smaller than ``x``."""
    base = 0
    while True:
        mx = node.max
        if mx is None:
            return None
        if x > mx:
            return base + mx
        lb = node.lb
        h = x >> lb
        low = x & node.mask
        c = node.clusters.get(h)
        if node.leafkids:
            if c is not None:
                t = c & ((1 << low) - 1)
                if t:
                    return base + (h << lb) + t.bit_length() - 1
            t = node.summary & ((1 << h) - 1)
            if t:
                p = t.bit_length() - 1
                return base + (p << lb) + node.clusters[p].bit_length() - 1
            mn = node.min
            return base + mn if x > mn else None
        if c is not None and low > c.min:
            base += h << lb
            node = c
            x = low
            continue
        summary = node.summary
        p = _predecessor(summary, h) if summary is not None else None
        if p is None:
            mn = node.min
            return base + mn if x > mn else None
        return base + ((p << lb) | node.clusters[p].max)


def _delete(node: _Node, x: int) -> None:
    # x is stored
    if node.min == node.max:
        node.min = node.max = None
        return
    lb = node.lb
    clusters = node.clusters
    if node.leafkids:
        if x == node.min:
            first = _low(node.summary)
            x = (first << lb) | _low(clusters[first])
            node.min = x
        h = x >> lb
        c = clusters[h] & ~(1 << (x & node.mask))
        if c:
            clusters[h] = c
            if x == node.max:
                node.max = (h << lb) | (c.bit_length() - 1)
            return
        del clusters[h]
        node.summary &= ~(1 << h)
        if x == node.max:
            s = node.summary
            if s:
                top = s.bit_length() - 1
                node.max = (top << lb) | (clusters[top].bit_length() - 1)
            else:
                node.max = node.min
        return
    summary = node.summary
    if x == node.min:
        first = summary.min
        x = (first << lb) | clusters[first].min
        node.min = x
    h = x >> lb
    c = clusters[h]
    _delete(c, x & node.mask)
    if c.min is None:
        del clusters[h]
        _delete(summary, h)
        if x == node.max:
            smax = summary.max
            if smax is None:
                node.max = node.min
            else:
                node.max = (smax << lb) | clusters[smax].max
    elif x == node.max:
        node.max = (h << lb) | c.max


def _depth(node) -> int:
    if node is None:
        return 0
    if isinstance(node, int):
        return 1  # bitmask leaf
    below = [_depth(node.summary)] + [_depth(c) for c in node.clusters.values()]
    return 1 + max(below)


def universe_bits(m: int) -> int:
    """Smallest power of two ``b >= 16`` with ``2**b >= m``."""
    b = _MIN_BITS
    while (1 << b) < m:
        b <<= 1
    return b


class VebTree:
    """vEB tree over keys ``1..m`` holding elements in per-key buckets."""

    def __init__(self, m: int) -> None:
        if m < 1:
            raise ValueError("universe size must be >= 1")
        self.m = m
        self.bits = universe_bits(m)
        self._root = _Node(self.bits)
        self._buckets: dict[int, list] = {}
        self._size = 0

    def __len__(self) -> int:
        return self._size

    @property
    def distinct(self) -> int:
        return len(self._buckets)

    def _check_key(self, k: int) -> None:
        if not 1 <= k <= self.m:
            raise ValueError(f"key {k} outside universe [1, {self.m}]")

    def insert(self, x, k: int) -> None:
        self._check_key(k)
        bucket = self._buckets.get(k)
        if bucket is None:
            self._buckets[k] = [x]
            _insert(self._root, k - 1)
        else:
            bucket.append(x)
        self._size += 1

    def delete(self, x, k: int) -> None:
        bucket = self._buckets.get(k)
        if bucket is None or x not in bucket:
            raise NotFoundError((x, k))
        bucket.remove(x)
        self._size -= 1
        if not bucket:
            del self._buckets[k]
            _delete(self._root, k - 1)

    def insert_with_predecessor(self, x, k: int):
        """Insert ``x`` at ``k`` and return the predecessor element other than ``x``.

        That is the newest element already stored at ``k`` if any, else the
        newest element of the largest smaller key, else None.
        """
        if not 1 <= k <= self.m:
            raise ValueError(f"key {k} outside universe [1, {self.m}]")
        self._size += 1
        buckets = self._buckets
        bucket = buckets.get(k)
        if bucket is not None:
            other = bucket[-1]
            bucket.append(x)
            return other
        buckets[k] = [x]
        p = _insert_pred(self._root, k - 1)
        if p is None:
            return None
        return buckets[p + 1][-1]

    def lookup(self, k: int) -> tuple:
        """Elements stored at key ``k`` in insertion order."""
        bucket = self._buckets.get(k)
        return tuple(bucket) if bucket else ()

    def __contains__(self, k: int) -> bool:
        return k in self._buckets

    def _newest(self, k: int):
        return k, self._buckets[k][-1]

    def predecessor_key(self, k: int) -> int | None:
        """Largest stored key ``<= k``."""
        if k in self._buckets:
            return k
        if k < 1:
            return None
        if k > self.m:
            return self.max_key()
        p = _predecessor(self._root, k - 1)
        return None if p is None else p + 1

    def successor_key(self, k: int) -> int | None:
        """Smallest stored key ``>= k``."""
        if k in self._buckets:
            return k
        if k > self.m:
            return None
        if k < 1:
            return self.min_key()
        s = _successor(self._root, k - 1)
        return None if s is None else s + 1

    def predecessor(self, k: int):
        """(key, element) with the largest key ``<= k``; newest element of that key."""
        p = self.predecessor_key(k)
        return None if p is None else self._newest(p)

    def successor(self, k: int):
        """(key, element) with the smallest key ``>= k``; newest element of that key."""
        s = self.successor_key(k)
        return None if s is None else self._newest(s)

    def min_key(self) -> int | None:
        r = self._root.min
        return None if r is None else r + 1

    def max_key(self) -> int | None:
        r = self._root.max
        return None if r is None else r + 1

    def find_min(self):
        """(key, element): oldest element of the smallest key."""
        k = self.min_key()
        if k is None:
            raise EmptyQueueError("find_min on empty vEB tree")
        return k, self._buckets[k][0]

    def extract_min(self):
        k, x = self.find_min()
        self.delete(x, k)
        return k, x

    def depth(self) -> int:
        """Number of node levels on the deepest allocated path."""
        return _depth(self._root)

    def keys(self) -> list[int]:
        out = []
        k = self.min_key()
        while k is not None:
            out.append(k)
            s = _successor(self._root, k - 1)
            k = None if s is None else s + 1
        return out


class DynamicVeb:
    """vEB tree whose capacity doubles (``R0 * 2**i``) to admit larger keys.

    Doubling migrates every element into a fresh tree by repeated
    extract-min / insert; ``resize_work`` counts the migrated elements.  A
    doubling that still fits the current tree's power-of-two universe only
    widens the admitted key range, unless ``always_migrate`` is set.
    """

    def __init__(self, r0: int = 64, always_migrate: bool = False) -> None:
        if r0 < 1:
            raise ValueError("initial capacity must be >= 1")
        self.r0 = r0
        self.always_migrate = always_migrate
        self.capacity = r0
        self.inner = VebTree(r0)
        self.resize_work = 0
        self.doublings = 0

    def __len__(self) -> int:
        return len(self.inner)

    def _double(self) -> None:
        old = self.inner
        if not self.always_migrate and self.capacity * 2 <= 1 << old.bits:
            old.m = self.capacity * 2
            self.capacity *= 2
            self.doublings += 1
            return
        new = VebTree(self.capacity * 2)
        while len(old):
            k, x = old.extract_min()
            new.insert(x, k)
            self.resize_work += 1
        self.inner = new
        self.capacity *= 2
        self.doublings += 1

    def grow_to(self, k: int) -> None:
        """Double until keys up to ``k`` are admitted."""
        while k > self.capacity:
            self._double()

    def insert(self, x, k: int) -> None:
        if k < 1:
            raise ValueError(f"key {k} must be >= 1")
        while k > self.capacity:
            self._double()
        self.inner.insert(x, k)

    dyn_insert = insert

    def insert_with_predecessor(self, x, k: int):
        if k < 1:
            raise ValueError(f"key {k} must be >= 1")
        while k > self.capacity:
            self._double()
        return self.inner.insert_with_predecessor(x, k)

    def delete(self, x, k: int) -> None:
        self.inner.delete(x, k)

    def lookup(self, k: int) -> tuple:
        return self.inner.lookup(k) if 1 <= k <= self.capacity else ()

    def predecessor(self, k: int):
        return self.inner.predecessor(k)

    def successor(self, k: int):
        return self.inner.successor(k)

    def predecessor_key(self, k: int) -> int | None:
        return self.inner.predecessor_key(k)

    def find_min(self):
        return self.inner.find_min()

    def extract_min(self):
        return self.inner.extract_min()

    def keys(self) -> list[int]:
        return self.inner.keys()
