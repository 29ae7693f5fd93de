"""Memoization strategies for browsing-state updates.

Two cache layouts over the same update algorithm:

* the query-indexed cache keys on the set of active tags and stores
  both derived sets, so revisiting the same tag combination (in any
  selection order) skips all set computation;
* the resource-indexed cache keys on the filtered-resource set and
  stores only the selectable tags; the filtered set itself is always
  recomputed, but distinct tag combinations that filter the same
  resources share one entry.

Both are exposed behind one strategy interface next to the plain
un-cached strategy, with hit/miss/store accounting.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import asdict, dataclass

from .collection import Collection
from .engine import (
    BrowsingState,
    UserAction,
    advance_membership,
    apply_action_uncached,
    filtered_after,
    init_state,
    selectable_after,
)
from .idset import IdSet


def canonical_key(s: IdSet) -> bytes:
    """Cache key for a set: equal sets, equal keys; distinct sets, distinct keys.

    The encoding is injective and the mapping stores the full key, so a
    lookup can never surface another set's entry. The empty set's key is
    the fixed value b"".
    """
    return s.canonical_bytes()


@dataclass
class CacheStats:
    lookups: int = 0
    hits: int = 0
    stores: int = 0
    entries: int = 0

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


class _KeyedCache:
    """Exact-key map with optional LRU bound, shared by both cache layouts."""

    def __init__(self, max_entries: int | None = None) -> None:
        if max_entries is not None and max_entries < 1:
            raise ValueError("max_entries must be >= 1")
        self._map: OrderedDict[bytes, object] = OrderedDict()
        self._max_entries = max_entries
        self.stats = CacheStats()

    def _retrieve(self, key: bytes):
        self.stats.lookups += 1
        value = self._map.get(key)
        if value is not None:
            self.stats.hits += 1
            if self._max_entries is not None:
                self._map.move_to_end(key)
        return value

    def _store(self, key: bytes, value: object) -> None:
        self._map[key] = value
        self.stats.stores += 1
        if self._max_entries is not None:
            self._map.move_to_end(key)
            while len(self._map) > self._max_entries:
                self._map.popitem(last=False)
        self.stats.entries = len(self._map)

    def __len__(self) -> int:
        return len(self._map)


class QueryCache(_KeyedCache):
    """Map from active-tag set to the (filtered, selectable) pair."""

    def store(self, active: IdSet, filtered: IdSet, selectable: IdSet) -> None:
        self._store(canonical_key(active), (filtered, selectable))

    def retrieve(self, active: IdSet) -> tuple[IdSet, IdSet] | None:
        return self._retrieve(canonical_key(active))


class ResourceCache(_KeyedCache):
    """Map from filtered-resource set to the selectable-tag set."""

    def store(self, filtered: IdSet, selectable: IdSet) -> None:
        self._store(canonical_key(filtered), selectable)

    def retrieve(self, filtered: IdSet) -> IdSet | None:
        return self._retrieve(canonical_key(filtered))


class Strategy:
    """One browsing session's update strategy.

    ``begin`` produces the initial state (pre-storing it in the cache,
    for the cached strategies); ``apply`` executes one action and
    reports whether the cache answered it. Instances are bound to a
    single session and are not thread-safe.
    """

    name: str = "?"

    def __init__(self) -> None:
        self.stats = CacheStats()

    def begin(self, c: Collection) -> BrowsingState:
        raise NotImplementedError

    def apply(self, c: Collection, s: BrowsingState,
              a: UserAction) -> tuple[BrowsingState, bool]:
        raise NotImplementedError


class UncachedStrategy(Strategy):
    """No memoization: every update recomputes both derived sets."""

    name = "none"

    def begin(self, c: Collection) -> BrowsingState:
        return init_state(c)

    def apply(self, c: Collection, s: BrowsingState,
              a: UserAction) -> tuple[BrowsingState, bool]:
        return apply_action_uncached(c, s, a), False


class QueryCachedStrategy(Strategy):
    """Consult the query-indexed cache right after updating the active set."""

    name = "query"

    def __init__(self, max_entries: int | None = None) -> None:
        super().__init__()
        self.cache = QueryCache(max_entries)
        self.stats = self.cache.stats

    def begin(self, c: Collection) -> BrowsingState:
        s = init_state(c)
        self.cache.store(s.active, s.filtered, s.selectable)
        return s

    def apply(self, c: Collection, s: BrowsingState,
              a: UserAction) -> tuple[BrowsingState, bool]:
        active, order = advance_membership(s, a)
        cached = self.cache.retrieve(active)
        if cached is not None:
            filtered, selectable = cached
            return BrowsingState(active, order, filtered, selectable), True
        filtered = filtered_after(c, s, a, active)
        selectable, counts = selectable_after(c, s, a, active, filtered)
        self.cache.store(active, filtered, selectable)
        return BrowsingState(active, order, filtered, selectable, counts), False


class ResourceCachedStrategy(Strategy):
    """Always recompute the filtered set, then consult the resource-indexed cache."""

    name = "resource"

    def __init__(self, max_entries: int | None = None) -> None:
        super().__init__()
        self.cache = ResourceCache(max_entries)
        self.stats = self.cache.stats

    def begin(self, c: Collection) -> BrowsingState:
        s = init_state(c)
        self.cache.store(s.filtered, s.selectable)
        return s

    def apply(self, c: Collection, s: BrowsingState,
              a: UserAction) -> tuple[BrowsingState, bool]:
        active, order = advance_membership(s, a)
        filtered = filtered_after(c, s, a, active)
        cached = self.cache.retrieve(filtered)
        if cached is not None:
            return BrowsingState(active, order, filtered, cached), True
        selectable, counts = selectable_after(c, s, a, active, filtered)
        self.cache.store(filtered, selectable)
        return BrowsingState(active, order, filtered, selectable, counts), False


STRATEGY_NAMES = ("none", "query", "resource")

_ALIASES = {"n": "none", "q": "query", "r": "resource"}


def resolve_strategy_name(name: str) -> str:
    """Normalize a strategy name, accepting the q/r/n short forms."""
    resolved = _ALIASES.get(name, name)
    if resolved not in STRATEGY_NAMES:
        raise ValueError(f"unknown strategy: {name!r} (expected one of {', '.join(STRATEGY_NAMES)})")
    return resolved


def make_strategy(name: str, max_entries: int | None = None) -> Strategy:
    resolved = resolve_strategy_name(name)
    if resolved == "none":
        return UncachedStrategy()
    if resolved == "query":
        return QueryCachedStrategy(max_entries)
    return ResourceCachedStrategy(max_entries)
