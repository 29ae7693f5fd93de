"""Shared test data and naive oracles.

The six-resource art collection is the worked example used throughout
the tests; the oracle functions answer browsing questions by scanning
its annotation table directly, independently of the indexed engine.
"""

import itertools

from scipy.stats import rankdata

from tagbrowse import Collection, IdSet

ART_ANNOTATIONS: dict[str, tuple[str, ...]] = {
    "r1": ("Cave-Painting", "Cantabrian", "Prehistoric"),
    "r2": ("Cave-Painting", "Levant", "Prehistoric"),
    "r3": ("Megalithic", "Cantabrian", "Prehistoric"),
    "r4": ("Tartesian", "Plateau", "Protohistoric"),
    "r5": ("Phoenician", "Penibaetic", "Protohistoric"),
    "r6": ("Punic", "Levant", "Protohistoric"),
}

ART_TAG_LABELS = sorted({t for ts in ART_ANNOTATIONS.values() for t in ts})


def art_document() -> dict:
    return {
        "name": "spanish-early-art",
        "resources": [
            {"id": rid, "label": f"artifact {rid}", "uri": None, "tags": list(tags)}
            for rid, tags in ART_ANNOTATIONS.items()
        ],
    }


def oracle_filter(resource_ids: set[str], label: str) -> set[str]:
    return {r for r in resource_ids if label in ART_ANNOTATIONS[r]}


def oracle_query(labels: set[str]) -> set[str]:
    return {r for r, ts in ART_ANNOTATIONS.items()
            if all(lbl in ts for lbl in labels)}


def oracle_selectable(resource_ids: set[str], candidates: set[str]) -> set[str]:
    out = set()
    for lbl in candidates:
        n = sum(1 for r in resource_ids if lbl in ART_ANNOTATIONS[r])
        if 0 < n < len(resource_ids):
            out.add(lbl)
    return out


def tag_ids(c: Collection, labels) -> IdSet:
    return IdSet(c.tag_id_by_label[lbl] for lbl in labels)


def tag_labels(c: Collection, tags: IdSet) -> set[str]:
    return {c.tag_label(t) for t in tags}


def resource_ids(c: Collection, external_ids) -> IdSet:
    by_external = {r.external_id: r.id for r in c.resources}
    return IdSet(by_external[e] for e in external_ids)


def external_ids(c: Collection, resources: IdSet) -> set[str]:
    return {c.resources[r].external_id for r in resources}


def exact_wilcoxon_two_tailed_p(diffs) -> float:
    """Signed-rank oracle: full enumeration of the 2^n sign assignments.

    Conditions on the observed ranks (average ranks on ties) and counts
    the assignments whose min(W+, W-) is at most the observed one.
    """
    ranks = rankdata([abs(d) for d in diffs])
    total = sum(ranks)
    w_obs = min(sum(r for r, d in zip(ranks, diffs) if d > 0),
                sum(r for r, d in zip(ranks, diffs) if d < 0))
    hits = 0
    for signs in itertools.product((False, True), repeat=len(diffs)):
        w_plus = sum(r for r, s in zip(ranks, signs) if s)
        if min(w_plus, total - w_plus) <= w_obs + 1e-9:
            hits += 1
    return hits / 2 ** len(diffs)
