"""Tag-annotated collection model: ingestion, export, synthesis, indexing.

A collection is an immutable corpus of resources annotated with
descriptive tags. Both resources and tags get dense integer ids in
first-appearance order, and the collection owns the inverted index
mapping each tag id to the set of resources annotated with it.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .idset import IdSet


class CollectionError(ValueError):
    """Raised when a collection document is malformed."""


@dataclass(frozen=True)
class Tag:
    id: int
    label: str


@dataclass(frozen=True)
class Resource:
    id: int
    external_id: str
    label: str
    uri: str | None
    tags: IdSet


class Collection:
    """Immutable indexed corpus: tags, resources, and the inverted index.

    Safe to share across threads after construction; nothing here
    mutates. Built through :func:`ingest_collection` or
    :func:`generate_synthetic_collection`.
    """

    def __init__(self, name: str, tags: list[Tag], resources: list[Resource],
                 untagged_resource_ids: tuple[int, ...] = ()) -> None:
        self.name = name
        self.tags = tags
        self.resources = resources
        self.tag_id_by_label = {t.label: t.id for t in tags}
        self.untagged_resource_ids = untagged_resource_ids

        inverted_bits = [0] * len(tags)
        for r in resources:
            rbit = 1 << r.id
            for t in r.tags:
                inverted_bits[t] |= rbit
        for t in tags:
            if inverted_bits[t.id] == 0:
                raise CollectionError(f"tag annotates no resource: {t.label!r}")
        self.inverted_bits = inverted_bits
        self.inverted = [IdSet.from_bits(b) for b in inverted_bits]
        self.tag_sizes = [b.bit_count() for b in inverted_bits]
        self.all_resources = IdSet.full(len(resources))
        self.all_tags = IdSet.full(len(tags))
        self._fingerprint: str | None = None

    @property
    def n_resources(self) -> int:
        return len(self.resources)

    @property
    def n_tags(self) -> int:
        return len(self.tags)

    def tag_label(self, tag_id: int) -> str:
        return self.tags[tag_id].label

    def export_document(self) -> dict:
        """Document form with stable ordering.

        Resources appear by dense id, tag labels alphabetically within
        each resource, so exporting the same collection always yields
        the same document.
        """
        return {
            "name": self.name,
            "resources": [
                {
                    "id": r.external_id,
                    "label": r.label,
                    "uri": r.uri,
                    "tags": sorted(self.tags[t].label for t in r.tags),
                }
                for r in self.resources
            ],
        }

    def export_json(self) -> str:
        return json.dumps(self.export_document(), indent=2, ensure_ascii=False) + "\n"

    def fingerprint(self) -> str:
        """Hex digest identifying the collection's content."""
        if self._fingerprint is None:
            canon = json.dumps(self.export_document(), separators=(",", ":"),
                               sort_keys=True, ensure_ascii=False)
            self._fingerprint = hashlib.sha256(canon.encode("utf-8")).hexdigest()
        return self._fingerprint

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Collection):
            return NotImplemented
        return (self.name == other.name and self.tags == other.tags
                and self.resources == other.resources)

    def __repr__(self) -> str:
        return f"Collection({self.name!r}, {self.n_resources} resources, {self.n_tags} tags)"


def ingest_collection(doc: Mapping) -> Collection:
    """Build a collection from a parsed document.

    Tag and resource ids are assigned in first-appearance order. Tags
    are deduplicated within a resource; labels compare exactly
    (case-sensitive). A resource with no tags is accepted but recorded
    in ``untagged_resource_ids`` (it is only ever reachable in the
    initial browsing state).
    """
    if not isinstance(doc, Mapping):
        raise CollectionError("document must be a JSON object")
    name = doc.get("name")
    if not isinstance(name, str):
        raise CollectionError("missing or non-string collection name")
    raw_resources = doc.get("resources")
    if not isinstance(raw_resources, list):
        raise CollectionError("missing resource list")
    if not raw_resources:
        raise CollectionError("empty collection")

    tags: list[Tag] = []
    tag_ids: dict[str, int] = {}
    resources: list[Resource] = []
    seen_external: set[str] = set()
    untagged: list[int] = []

    for idx, entry in enumerate(raw_resources):
        if not isinstance(entry, Mapping):
            raise CollectionError(f"resource #{idx} is not an object")
        external_id = entry.get("id")
        if not isinstance(external_id, str) or not external_id:
            raise CollectionError(f"resource #{idx} has no string id")
        if external_id in seen_external:
            raise CollectionError(f"duplicate resource identifier: {external_id!r}")
        seen_external.add(external_id)

        label = entry.get("label", "")
        if not isinstance(label, str):
            raise CollectionError(f"resource {external_id!r}: label must be a string")
        uri = entry.get("uri")
        if uri is not None and not isinstance(uri, str):
            raise CollectionError(f"resource {external_id!r}: uri must be a string or null")
        raw_tags = entry.get("tags", [])
        if not isinstance(raw_tags, list):
            raise CollectionError(f"resource {external_id!r}: tags must be a list")

        ids: list[int] = []
        seen_here: set[int] = set()
        for lbl in raw_tags:
            if not isinstance(lbl, str):
                raise CollectionError(f"resource {external_id!r}: tag labels must be strings")
            if lbl == "":
                raise CollectionError(f"resource {external_id!r}: empty tag label")
            tid = tag_ids.get(lbl)
            if tid is None:
                tid = len(tags)
                tag_ids[lbl] = tid
                tags.append(Tag(tid, lbl))
            if tid not in seen_here:
                seen_here.add(tid)
                ids.append(tid)
        if not ids:
            untagged.append(idx)
        resources.append(Resource(idx, external_id, label, uri, IdSet(ids)))

    return Collection(name, tags, resources, tuple(untagged))


def load_collection(path: str | Path) -> Collection:
    """Read and ingest a collection document file."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CollectionError(f"invalid JSON in {path}: {exc}") from exc
    return ingest_collection(doc)


def _poisson(rng: random.Random, lam: float) -> int:
    # Knuth's method; fine for the moderate means used here.
    if lam <= 0:
        return 0
    limit = math.exp(-lam)
    k = 0
    p = 1.0
    while True:
        p *= rng.random()
        if p <= limit:
            return k
        k += 1


def generate_synthetic_collection(n_resources: int, n_tags: int,
                                  mean_tags_per_resource: float = 6.0,
                                  skew: float = 1.0,
                                  seed: int = 0) -> Collection:
    """Deterministic stand-in corpus with heavy-tailed tag popularity.

    Each resource receives ``1 + Poisson(mean - 1)`` distinct tags drawn
    from a Zipf-like popularity law with the given exponent (``skew=0``
    is uniform). Tags that end up annotating no resource simply never
    enter the vocabulary, so ids stay dense. The same arguments always
    produce a byte-identical collection.
    """
    if n_resources < 1:
        raise ValueError("n_resources must be >= 1")
    if n_tags < 1:
        raise ValueError("n_tags must be >= 1")
    if mean_tags_per_resource <= 0:
        raise ValueError("mean_tags_per_resource must be positive")
    if skew < 0:
        raise ValueError("skew must be non-negative")

    rng = random.Random(seed)
    width = max(4, len(str(n_tags - 1)))
    labels = [f"tag-{i:0{width}d}" for i in range(n_tags)]

    # Cumulative Zipf weights over popularity ranks 1..n_tags.
    cum: list[float] = []
    total = 0.0
    for rank in range(1, n_tags + 1):
        total += rank ** -skew
        cum.append(total)

    entries = []
    for i in range(n_resources):
        k = min(n_tags, 1 + _poisson(rng, mean_tags_per_resource - 1.0))
        chosen: set[int] = set()
        attempts = 0
        while len(chosen) < k:
            u = rng.random() * total
            t = bisect_right(cum, u)
            if t >= n_tags:
                t = n_tags - 1
            if t not in chosen:
                chosen.add(t)
            attempts += 1
            if attempts > 64 * k:
                # Extreme skew can make rejection slow; deterministically
                # top up with the most popular tags not yet chosen.
                for t in range(n_tags):
                    if len(chosen) >= k:
                        break
                    chosen.add(t)
        entries.append({
            "id": f"r{i}",
            "label": f"resource {i}",
            "uri": None,
            "tags": sorted(labels[t] for t in chosen),
        })

    doc = {"name": f"synthetic-{n_resources}x{n_tags}-s{seed}", "resources": entries}
    return ingest_collection(doc)
