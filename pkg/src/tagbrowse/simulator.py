"""Seeded random browsing sessions: generation, serialization, replay.

The random walk picks, whenever both kinds of action are legal, an add
or a remove with equal probability. Adds favor the most significant
selectable tags (top of the frequency ranking); removes favor the most
recently added active tags through a truncated geometric law. Traces
serialize to JSON lines with tags stored by label, so replay never
re-derives any randomness.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from .caches import Strategy, make_strategy
from .collection import Collection
from .engine import (
    ADD,
    REMOVE,
    BrowsingState,
    UserAction,
    apply_action_uncached,
    init_state,
    selectable_tag_counts,
)

TOP_SEGMENT_SIZE = 20
TOP_SEGMENT_PROB = 0.8
ADD_PROB = 0.5
REMOVAL_SUCCESS_PROB = 0.2


class TraceError(ValueError):
    """Raised for a trace that is malformed or not valid for the collection."""


@dataclass(frozen=True)
class SessionTrace:
    collection_fingerprint: str
    seed: int
    requested_length: int
    actions: tuple[UserAction, ...]
    ended_early: bool = False

    def __len__(self) -> int:
        return len(self.actions)


def rank_selectable(c: Collection, s: BrowsingState) -> list[tuple[int, int]]:
    """Selectable tags by significance: descending in-context resource count.

    Ties break on ascending tag id, so the ranking is deterministic.
    Reuses the counts computed as a by-product of the state update when
    the state carries them.
    """
    counts = s.selectable_counts
    if counts is None:
        counts = selectable_tag_counts(c, s.filtered, s.selectable)
    return sorted(counts, key=lambda tc: (-tc[1], tc[0]))


def removal_depth_weights(n_active: int,
                          p: float = REMOVAL_SUCCESS_PROB) -> list[float]:
    """Renormalized truncated geometric weights over depths 1..n_active.

    Depth k (the k-th most recently added tag) carries raw weight
    (1-p)^(k-1) * p before renormalization.
    """
    raw = [(1.0 - p) ** (k - 1) * p for k in range(1, n_active + 1)]
    total = sum(raw)
    return [w / total for w in raw]


def _draw_removal_depth(rng: random.Random, n_active: int) -> int:
    q = 1.0 - REMOVAL_SUCCESS_PROB
    total = 1.0 - q ** n_active
    u = rng.random() * total
    acc = 0.0
    w = REMOVAL_SUCCESS_PROB
    for k in range(1, n_active + 1):
        acc += w
        if u < acc:
            return k
        w *= q
    return n_active


def sample_next_action(c: Collection, s: BrowsingState,
                       rng: random.Random) -> UserAction | None:
    """Draw the next action for the current state, or None at a dead end.

    The 0.5 add/remove coin is consumed only when both kinds are legal;
    a forced choice takes no draw. The add branch spends one draw on the
    top-segment/tail split (falling back to the top segment when fewer
    than 21 tags are selectable) and one on the uniform pick inside the
    segment.
    """
    can_add = bool(s.selectable)
    can_remove = bool(s.active_order)
    if not can_add and not can_remove:
        return None
    if can_add and can_remove:
        do_add = rng.random() < ADD_PROB
    else:
        do_add = can_add

    if do_add:
        ranked = rank_selectable(c, s)
        top = ranked[:TOP_SEGMENT_SIZE]
        tail = ranked[TOP_SEGMENT_SIZE:]
        segment = top if rng.random() < TOP_SEGMENT_PROB or not tail else tail
        i = min(int(rng.random() * len(segment)), len(segment) - 1)
        return UserAction.add(segment[i][0])

    k = _draw_removal_depth(rng, len(s.active_order))
    return UserAction.remove(s.active_order[-k])


def generate_session(c: Collection, seed: int, n_actions: int) -> SessionTrace:
    """Generate a valid trace of up to ``n_actions`` actions.

    Deterministic per (collection, seed, n_actions). A walk that reaches
    a state with no legal action (possible only on degenerate
    collections) stops early and the trace records that explicitly.
    """
    if n_actions < 1:
        raise ValueError("n_actions must be >= 1")
    rng = random.Random(seed)
    state = init_state(c)
    actions: list[UserAction] = []
    ended_early = False
    for _ in range(n_actions):
        action = sample_next_action(c, state, rng)
        if action is None:
            ended_early = True
            break
        state = apply_action_uncached(c, state, action)
        actions.append(action)
    return SessionTrace(c.fingerprint(), seed, n_actions, tuple(actions), ended_early)


def write_trace(c: Collection, trace: SessionTrace, path: str | Path) -> None:
    """Serialize a trace as JSON lines, tags by label."""
    with open(path, "w", encoding="utf-8") as fh:
        header = {"collection": trace.collection_fingerprint,
                  "seed": trace.seed, "n": trace.requested_length}
        fh.write(json.dumps(header) + "\n")
        for a in trace.actions:
            fh.write(json.dumps({"op": a.op, "tag": c.tag_label(a.tag)}) + "\n")
        if trace.ended_early:
            fh.write(json.dumps({"op": "end"}) + "\n")


def read_trace(c: Collection, path: str | Path) -> SessionTrace:
    """Parse a trace file and resolve tag labels against the collection."""
    with open(path, encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]
    if not lines:
        raise TraceError("empty trace file")
    header = json.loads(lines[0])
    if not isinstance(header, dict) or "seed" not in header:
        raise TraceError("missing trace header")
    fingerprint = header.get("collection", "")
    if fingerprint != c.fingerprint():
        raise TraceError("trace was generated for a different collection")
    actions: list[UserAction] = []
    ended_early = False
    for i, line in enumerate(lines[1:], start=2):
        rec = json.loads(line)
        op = rec.get("op")
        if op == "end":
            ended_early = True
            if i != len(lines):
                raise TraceError("actions after end marker")
            break
        if op not in (ADD, REMOVE):
            raise TraceError(f"line {i}: unknown op {op!r}")
        label = rec.get("tag")
        tag_id = c.tag_id_by_label.get(label)
        if tag_id is None:
            raise TraceError(f"line {i}: unknown tag label {label!r}")
        actions.append(UserAction(op, tag_id))
    return SessionTrace(fingerprint, int(header["seed"]), int(header["n"]),
                        tuple(actions), ended_early)


@dataclass(frozen=True)
class ReplayStep:
    """Digest of one browsing state plus whether the cache answered the step."""

    filtered_key: bytes
    selectable_key: bytes
    hit: bool

    @property
    def digest(self) -> tuple[bytes, bytes]:
        return (self.filtered_key, self.selectable_key)


def replay(c: Collection, trace: SessionTrace,
           strategy: str | Strategy) -> list[ReplayStep]:
    """Apply every trace action under a strategy; digest each state.

    The first step is the initial state. Identical digest sequences
    across strategies witness their observational equivalence.
    """
    strat = make_strategy(strategy) if isinstance(strategy, str) else strategy
    state = strat.begin(c)
    steps = [ReplayStep(state.filtered.canonical_bytes(),
                        state.selectable.canonical_bytes(), False)]
    for action in trace.actions:
        state, hit = strat.apply(c, state, action)
        steps.append(ReplayStep(state.filtered.canonical_bytes(),
                                state.selectable.canonical_bytes(), hit))
    return steps
