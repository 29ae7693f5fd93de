import pytest
from fastapi.testclient import TestClient

from tagbrowse.service import create_app


@pytest.fixture()
def client(art, synth_small):
    app = create_app({"spanish-early-art": art, "synthetic": synth_small})
    with TestClient(app) as tc:
        yield tc


def _create(client, strategy="none", collection="spanish-early-art"):
    resp = client.post("/api/sessions",
                       json={"collection": collection, "strategy": strategy})
    assert resp.status_code == 201
    return resp.json()


def test_list_collections(client):
    resp = client.get("/api/collections")
    assert resp.status_code == 200
    names = {c["name"]: c for c in resp.json()["collections"]}
    assert names["spanish-early-art"]["resources"] == 6
    assert names["spanish-early-art"]["tags"] == 11


def test_create_session_initial_view(client):
    view = _create(client)
    assert view["totalResources"] == 6
    assert len(view["selectableTags"]) == 11
    assert view["activeTags"] == []
    assert view["strategy"] == "none"
    assert view["lastActionMicros"] is None
    assert set(view["cacheStats"]) == {"lookups", "hits", "stores", "entries"}


def test_create_session_unknown_collection(client):
    resp = client.post("/api/sessions",
                       json={"collection": "nope", "strategy": "none"})
    assert resp.status_code == 404
    body = resp.json()
    assert body["error"] == "unknown_collection"
    assert "message" in body


def test_add_action_updates_view(client):
    view = _create(client)
    resp = client.post(f"/api/sessions/{view['id']}/actions",
                       json={"op": "add", "tag": "Levant"})
    assert resp.status_code == 200
    view = resp.json()
    assert view["totalResources"] == 2
    assert view["activeTags"] == ["Levant"]
    assert {"label": "Punic", "count": 1} in view["selectableTags"]
    assert view["lastActionMicros"] >= 0
    assert view["lastActionHit"] is False


def test_invalid_action_leaves_state_unchanged(client):
    view = _create(client)
    sid = view["id"]
    client.post(f"/api/sessions/{sid}/actions", json={"op": "add", "tag": "Levant"})
    before = client.get(f"/api/sessions/{sid}").json()

    resp = client.post(f"/api/sessions/{sid}/actions",
                       json={"op": "add", "tag": "Cantabrian"})
    assert resp.status_code == 409
    body = resp.json()
    assert body["error"] == "invalid_action"
    assert body["detail"]["reason"] == "not_applicable"

    resp = client.post(f"/api/sessions/{sid}/actions",
                       json={"op": "add", "tag": "NoSuchTag"})
    assert resp.status_code == 409
    assert resp.json()["detail"]["reason"] == "unknown_tag"

    after = client.get(f"/api/sessions/{sid}").json()
    assert after["activeTags"] == before["activeTags"]
    assert after["totalResources"] == before["totalResources"]


def test_remove_restores_prior_view(client):
    view = _create(client)
    sid = view["id"]
    initial = client.get(f"/api/sessions/{sid}").json()
    client.post(f"/api/sessions/{sid}/actions", json={"op": "add", "tag": "Levant"})
    resp = client.post(f"/api/sessions/{sid}/actions",
                       json={"op": "remove", "tag": "Levant"})
    view = resp.json()
    assert view["totalResources"] == initial["totalResources"]
    assert view["activeTags"] == []
    assert view["selectableTags"] == initial["selectableTags"]


def test_malformed_body_rejected(client):
    view = _create(client)
    resp = client.post(f"/api/sessions/{view['id']}/actions",
                       json={"op": "grow", "tag": "Levant"})
    assert resp.status_code == 400
    assert resp.json()["error"] == "invalid_request"


def test_unknown_session_404(client):
    assert client.get("/api/sessions/deadbeef").status_code == 404
    resp = client.post("/api/sessions/deadbeef/actions",
                       json={"op": "add", "tag": "Levant"})
    assert resp.status_code == 404


def test_idempotent_reads(client):
    sid = _create(client)["id"]
    client.post(f"/api/sessions/{sid}/actions", json={"op": "add", "tag": "Prehistoric"})
    a = client.get(f"/api/sessions/{sid}").json()
    b = client.get(f"/api/sessions/{sid}").json()
    assert a == b


def test_pagination_partitions_resources(client):
    sid = _create(client)["id"]
    seen = []
    page = 1
    while True:
        view = client.get(f"/api/sessions/{sid}",
                          params={"page": page, "page_size": 2}).json()
        seen.extend(r["id"] for r in view["resources"])
        if page >= view["totalPages"]:
            break
        page += 1
    assert seen == ["r1", "r2", "r3", "r4", "r5", "r6"]
    assert view["totalResources"] == 6


def test_resource_strategy_reports_cache_hit(client):
    view = _create(client, strategy="resource")
    sid = view["id"]
    moves = [("add", "Cave-Painting"), ("remove", "Cave-Painting"),
             ("add", "Prehistoric"), ("add", "Cave-Painting")]
    hits = []
    for op, tag in moves:
        resp = client.post(f"/api/sessions/{sid}/actions",
                           json={"op": op, "tag": tag})
        assert resp.status_code == 200
        view = resp.json()
        hits.append(view["lastActionHit"])
    # the final tag set filters the same resources the first add produced
    assert hits == [False, True, False, True]
    assert view["totalResources"] == 2
    assert view["cacheStats"]["hits"] == 2


def test_delete_session(client):
    sid = _create(client)["id"]
    assert client.delete(f"/api/sessions/{sid}").status_code == 204
    assert client.get(f"/api/sessions/{sid}").status_code == 404
    assert client.delete(f"/api/sessions/{sid}").status_code == 404


def test_session_expiry(art):
    app = create_app({"spanish-early-art": art}, session_ttl_seconds=0.0)
    with TestClient(app) as tc:
        resp = tc.post("/api/sessions",
                       json={"collection": "spanish-early-art", "strategy": "none"})
        sid = resp.json()["id"]
        assert tc.get(f"/api/sessions/{sid}").status_code == 404
