"""Browsing-state updates over a tag-annotated collection.

The browsing state is fully determined by the set of active tags: it
carries the filtered resources (those annotated with every active tag)
and the selectable tags (those annotating some, but not all, of the
filtered resources). This module implements the un-cached update rule;
the cache strategies reuse its building blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .collection import Collection
from .idset import IdSet

ADD = "add"
REMOVE = "remove"


class UnknownTagError(ValueError):
    """Raised when a tag id is outside the collection's id space."""


class InvalidActionError(ValueError):
    """Raised for an add of a non-selectable tag or a remove of a non-active tag."""


@dataclass(frozen=True)
class UserAction:
    op: str
    tag: int

    @classmethod
    def add(cls, tag: int) -> "UserAction":
        return cls(ADD, tag)

    @classmethod
    def remove(cls, tag: int) -> "UserAction":
        return cls(REMOVE, tag)


@dataclass(frozen=True)
class BrowsingState:
    """One browsing state: active tags, filtered resources, selectable tags.

    ``active_order`` lists active tags in addition order (most recent
    last). ``selectable_counts`` holds, when the state was produced by a
    full selectable-tag scan, the per-tag count of filtered resources
    annotated with each selectable tag; it is derived data and excluded
    from equality.
    """

    active: IdSet
    active_order: tuple[int, ...]
    filtered: IdSet
    selectable: IdSet
    selectable_counts: tuple[tuple[int, int], ...] | None = field(
        default=None, compare=False, repr=False)


def _check_tag(c: Collection, t: int) -> None:
    if not 0 <= t < c.n_tags:
        raise UnknownTagError(f"unknown tag id: {t}")


def _scan_selectable(inverted_bits: list[int], r_bits: int, cand_bits: int,
                     r_size: int) -> tuple[int, list[tuple[int, int]]]:
    """Selectable tags among candidates, with per-tag counts.

    A candidate is selectable when it annotates some but not all of the
    filtered resources: 0 < |R & inverted[t]| < |R|. Counts fall out of
    the same cardinality-only intersections.
    """
    sel = 0
    counts: list[tuple[int, int]] = []
    bits = cand_bits
    while bits:
        low = bits & -bits
        bits ^= low
        t = low.bit_length() - 1
        n = (inverted_bits[t] & r_bits).bit_count()
        if 0 < n < r_size:
            sel |= low
            counts.append((t, n))
    return sel, counts


def filter_resources(c: Collection, r: IdSet, t: int) -> IdSet:
    """Resources in ``r`` annotated with tag ``t``."""
    _check_tag(c, t)
    return IdSet.from_bits(r.bits & c.inverted_bits[t])


def query(c: Collection, active: IdSet) -> IdSet:
    """Resources annotated with every tag in ``active``.

    The empty conjunction is the whole collection. Entries are
    intersected in ascending size order to keep intermediates small.
    """
    return IdSet.from_bits(_query_bits(c, active))


def _query_bits(c: Collection, active: IdSet) -> int:
    ids = list(active)
    if not ids:
        return c.all_resources.bits
    for t in ids:
        _check_tag(c, t)
    sizes = c.tag_sizes
    ids.sort(key=lambda t: (sizes[t], t))
    inv = c.inverted_bits
    r = inv[ids[0]]
    for t in ids[1:]:
        r &= inv[t]
    return r


def selectable_tags(c: Collection, r: IdSet, candidates: IdSet) -> IdSet:
    """Tags among ``candidates`` annotating some, but not all, of ``r``."""
    sel, _ = _scan_selectable(c.inverted_bits, r.bits, candidates.bits, len(r))
    return IdSet.from_bits(sel)


def selectable_tag_counts(c: Collection, r: IdSet,
                          candidates: IdSet) -> list[tuple[int, int]]:
    """(tag, |r & inverted[tag]|) for each selectable candidate, ascending tag id."""
    _, counts = _scan_selectable(c.inverted_bits, r.bits, candidates.bits, len(r))
    return counts


def init_state(c: Collection) -> BrowsingState:
    """Initial state: no active tags, all resources, all narrowing tags selectable."""
    r = c.all_resources
    sel, counts = _scan_selectable(c.inverted_bits, r.bits, c.all_tags.bits, len(r))
    return BrowsingState(IdSet(), (), r, IdSet.from_bits(sel), tuple(counts))


def advance_membership(s: BrowsingState, a: UserAction) -> tuple[IdSet, tuple[int, ...]]:
    """Validate an action and update the active-tag set and addition order.

    This is the first step of every update strategy: adds must name a
    currently selectable tag, removes a currently active one.
    """
    t = a.tag
    if a.op == ADD:
        if t not in s.selectable:
            raise InvalidActionError(f"tag {t} is not selectable")
        return s.active.add(t), s.active_order + (t,)
    if a.op == REMOVE:
        if t not in s.active:
            raise InvalidActionError(f"tag {t} is not active")
        return s.active.remove(t), tuple(x for x in s.active_order if x != t)
    raise InvalidActionError(f"unknown action op: {a.op!r}")


def filtered_after(c: Collection, s: BrowsingState, a: UserAction,
                   active: IdSet) -> IdSet:
    """Recompute the filtered resources for the updated active set.

    Adds narrow the current set through the inverted index; removes
    re-evaluate the conjunction over the surviving active tags.
    """
    if a.op == ADD:
        return IdSet.from_bits(s.filtered.bits & c.inverted_bits[a.tag])
    return IdSet.from_bits(_query_bits(c, active))


def selectable_after(c: Collection, s: BrowsingState, a: UserAction,
                     active: IdSet, filtered: IdSet,
                     ) -> tuple[IdSet, tuple[tuple[int, int], ...]]:
    """Recompute the selectable tags for the updated state.

    After an add, every tag selectable now was already selectable
    before, so the candidate pool is the previous selectable set minus
    the added tag. After a remove, candidates are all non-active tags.
    """
    if a.op == ADD:
        cand = s.selectable.bits & ~(1 << a.tag)
    else:
        cand = c.all_tags.bits & ~active.bits
    sel, counts = _scan_selectable(c.inverted_bits, filtered.bits, cand, len(filtered))
    return IdSet.from_bits(sel), tuple(counts)


def apply_action_uncached(c: Collection, s: BrowsingState,
                          a: UserAction) -> BrowsingState:
    """One un-cached state update: both derived sets are recomputed."""
    active, order = advance_membership(s, a)
    filtered = filtered_after(c, s, a, active)
    selectable, counts = selectable_after(c, s, a, active, filtered)
    return BrowsingState(active, order, filtered, selectable, counts)
