"""Learning-augmented priority queue (LAPQ).

One skip list holds the elements in true sorted order; predictions only
choose where the clean exponential search starts:

* ``pointer`` -- the caller names the predicted predecessor key;
* ``dirty``   -- a dirty top-down search from the head picks the start;
* ``rank``    -- an auxiliary :class:`DynamicVeb` keyed by predicted ranks
  returns the element with the nearest predicted rank below.

Elements are identified by hashable items (an insertion number when none is
given) and must be unique among live elements.
"""

from __future__ import annotations

from .errors import EmptyQueueError, NotFoundError
from .instrument import NEG_INF, ComparisonLedger, DirtyOracle, Rng
from .skiplist import SkipList
from .veb import DynamicVeb
from .veb import _insert_pred as _veb_insert_pred

MODES = ("pointer", "dirty", "rank")


class Lapq:
    def __init__(
        self,
        mode: str = "pointer",
        *,
        oracle: DirtyOracle | None = None,
        rng: Rng | None = None,
        ledger: ComparisonLedger | None = None,
        p: float = 0.5,
        r0: int = 64,
    ) -> None:
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
        self.mode = mode
        self.ledger = ledger if ledger is not None else ComparisonLedger()
        self.list = SkipList(rng if rng is not None else Rng(0), self.ledger, p)
        self.oracle = oracle if oracle is not None else DirtyOracle()
        self.aux = DynamicVeb(r0) if mode == "rank" else None
        self.rank_of: dict = {}  # item -> predicted rank (rank mode)
        self.key_of: dict = {}  # item -> key
        self.inserts = 0
        self.extracts = 0
        self.fallbacks = 0
        self.last_cost = (0, 0)

    def __len__(self) -> int:
        return len(self.key_of)

    def __contains__(self, item) -> bool:
        return item in self.key_of

    def _new_item(self, item):
        if item is None:
            return self.list.new_item()
        if item in self.key_of:
            raise ValueError(f"item {item!r} is already in the queue")
        return item

    # -- insertion entry points ------------------------------------------

    def insert_pointer(self, u, predicted_pred=NEG_INF, item=None):
        """Insert with a predicted predecessor key (``NEG_INF``/None: the head)."""
        led = self.ledger
        c0, d0 = led.clean, led.dirty
        key_of = self.key_of
        lst = self.list
        if item is None:
            item = next(lst._ids)
        elif item in key_of:
            raise ValueError(f"item {item!r} is already in the queue")
        index = lst.index
        node = index.get(u)
        if node is not None:
            node.bucket.append(item)
            lst._size += 1
        else:
            if predicted_pred is NEG_INF or predicted_pred is None:
                source = lst.head
            else:
                source = index.get(predicted_pred)
                if source is None:
                    source = lst.head
                    self.fallbacks += 1
            lst._splice(lst.locate_from(source, u), u, item)
        key_of[item] = u
        self.inserts += 1
        self.last_cost = (led.clean - c0, led.dirty - d0)
        return item

    def insert_dirty(self, u, item=None, oracle: DirtyOracle | None = None):
        """Dirty top-down search for a start node, then clean exponential search."""
        led = self.ledger
        c0, d0 = led.clean, led.dirty
        item = self._new_item(item)
        lst = self.list
        if u in lst.index:
            lst.insert_after(lst.index[u], u, item)
        else:
            start = lst.search_top_down(u, oracle if oracle is not None else self.oracle)
            lst.insert_after(lst.locate_from(start, u), u, item)
        self.key_of[item] = u
        self.inserts += 1
        self.last_cost = (led.clean - c0, led.dirty - d0)
        return item

    def insert_rank(self, u, predicted_rank: int, item=None):
        """Insert with a predicted rank among all keys of the run."""
        led = self.ledger
        c0, d0 = led.clean, led.dirty
        key_of = self.key_of
        lst = self.list
        if item is None:
            item = next(lst._ids)
        elif item in key_of:
            raise ValueError(f"item {item!r} is already in the queue")
        if predicted_rank < 1:
            raise ValueError("predicted rank must be >= 1")
        # aux.insert_with_predecessor, inlined
        aux = self.aux
        if predicted_rank > aux.capacity:
            aux.grow_to(predicted_rank)
        tree = aux.inner
        tree._size += 1
        buckets = tree._buckets
        bucket = buckets.get(predicted_rank)
        if bucket is not None:
            other = bucket[-1]
            bucket.append(item)
        else:
            buckets[predicted_rank] = [item]
            p = _veb_insert_pred(tree._root, predicted_rank - 1)
            other = None if p is None else buckets[p + 1][-1]
        index = lst.index
        node = index.get(u)
        if node is not None:
            node.bucket.append(item)
            lst._size += 1
        else:
            source = lst.head if other is None else index[key_of[other]]
            lst._splice(lst.locate_from(source, u), u, item)
        key_of[item] = u
        self.rank_of[item] = predicted_rank
        self.inserts += 1
        self.last_cost = (led.clean - c0, led.dirty - d0)
        return item

    def insert(self, u, prediction=None, item=None):
        """Dispatch on the queue mode (``prediction`` is a key or a rank)."""
        if self.mode == "pointer":
            return self.insert_pointer(u, prediction, item)
        if self.mode == "dirty":
            return self.insert_dirty(u, item)
        return self.insert_rank(u, prediction, item)

    # -- queries and removal ---------------------------------------------

    def find_min(self):
        if not self.key_of:
            raise EmptyQueueError("find_min on empty queue")
        return self.list.find_min()

    def extract_min(self):
        """Remove and return ``(key, item)`` of the minimum."""
        led = self.ledger
        c0, d0 = led.clean, led.dirty
        if not self.key_of:
            raise EmptyQueueError("extract_min on empty queue")
        key, item = self.list.extract_min()
        del self.key_of[item]
        if self.aux is not None:
            self.aux.delete(item, self.rank_of.pop(item))
        self.extracts += 1
        self.last_cost = (led.clean - c0, led.dirty - d0)
        return key, item

    def key(self, item):
        try:
            return self.key_of[item]
        except KeyError:
            raise NotFoundError(item) from None

    def delete(self, item):
        """Remove ``item``; returns its key."""
        key = self.key(item)
        self.list.remove(key, item)
        del self.key_of[item]
        if self.aux is not None:
            self.aux.delete(item, self.rank_of.pop(item))
        return key

    def decrease_key(self, item, new_key, prediction=None) -> None:
        """Delete and reinsert ``item`` with ``new_key`` under the active mode.

        ``prediction`` is a predecessor key (pointer mode; default: the
        element's former predecessor) or a rank (rank mode; default: its old
        predicted rank).  Ignored in dirty mode.
        """
        led = self.ledger
        c0, d0 = led.clean, led.dirty
        key = self.key(item)
        if not new_key < key:
            raise ValueError(f"decrease_key needs new_key < key ({new_key!r} >= {key!r})")
        if self.mode == "pointer":
            if prediction is None:
                self.list.decrease_key(key, new_key, item)
                self.key_of[item] = new_key
            else:
                self.delete(item)
                self.insert_pointer(new_key, prediction, item)
        elif self.mode == "dirty":
            self.delete(item)
            self.insert_dirty(new_key, item)
        else:
            old_rank = self.rank_of[item]
            self.delete(item)
            self.insert_rank(new_key, old_rank if prediction is None else prediction, item)
        self.last_cost = (led.clean - c0, led.dirty - d0)

    def drain(self) -> list:
        """Extract every element; returns the keys in extraction order."""
        out = []
        while self.key_of:
            out.append(self.extract_min()[0])
        return out

    def clear(self) -> None:
        """Remove every element; counters are kept."""
        self.list.clear()
        self.key_of.clear()
        self.rank_of.clear()
        if self.aux is not None:
            self.aux = DynamicVeb(self.aux.r0, self.aux.always_migrate)

    def stats(self) -> dict:
        return {
            "clean": self.ledger.clean,
            "dirty": self.ledger.dirty,
            "inserts": self.inserts,
            "extracts": self.extracts,
            "fallbacks": self.fallbacks,
        }

    def check(self) -> None:
        self.list.check()
        assert len(self.list) == len(self.key_of)
        if self.aux is not None:
            assert len(self.aux) == len(self.key_of) == len(self.rank_of)
            for item, r in self.rank_of.items():
                assert item in self.aux.lookup(r)
