"""HTTP API: endpoint contracts, schema validation, error codes."""

import threading
import time
from pathlib import Path

import jsonschema
import pytest
from fastapi.testclient import TestClient
from jsonschema import Draft202012Validator

import pathwise.service as service_mod
from pathwise.corpus import PostStore, SourceKind
from pathwise.pathways import graph_from_json
from pathwise.pipeline import PipelineConfig, analyze_entity
from pathwise.service import create_app, load_schema

DATA = Path(__file__).parent / "data"

SCHEMA_NAMES = ("healthz", "entities", "pathways", "insights", "posts", "run_summary", "error")


def make_config(model_dir) -> PipelineConfig:
    return PipelineConfig(
        vectors=model_dir / "vectors.txt",
        aspect_checkpoint=model_dir / "aspect.json",
        sentiment_checkpoint=model_dir / "sentiment.json",
        emotion_checkpoint=model_dir / "emotion.json",
    )


@pytest.fixture(scope="module")
def served(tmp_path_factory, model_dir):
    """A data dir with one completed run, plus a client over it."""
    data_dir = tmp_path_factory.mktemp("service-data")
    store = PostStore(data_dir / "store")
    store.ingest_file(
        DATA / "stream_blue_lagoon.jsonl", SourceKind.TWITTER, default_entity="blue-lagoon-hotel"
    )
    store.ingest_file(
        DATA / "stream_cafe_aurora.jsonl", SourceKind.TWITTER, default_entity="cafe-aurora"
    )
    config = make_config(model_dir)
    analyze_entity(data_dir, "blue-lagoon-hotel", config)
    app = create_app(data_dir, config)
    return data_dir, TestClient(app)


@pytest.fixture()
def client(served):
    return served[1]


def check(response, schema_name, status=200):
    assert response.status_code == status, (response.status_code, response.text)
    body = response.json()
    jsonschema.validate(body, load_schema(schema_name))
    return body


class TestSchemas:
    @pytest.mark.parametrize("name", SCHEMA_NAMES)
    def test_bundled_schema_is_valid(self, name):
        Draft202012Validator.check_schema(load_schema(name))


class TestReads:
    def test_healthz(self, client):
        body = check(client.get("/healthz"), "healthz")
        assert body == {"ok": True}

    def test_entities(self, client):
        body = check(client.get("/entities"), "entities")
        by_id = {row["id"]: row for row in body}
        assert by_id["blue-lagoon-hotel"]["post_count"] == 19
        assert by_id["blue-lagoon-hotel"]["latest_run"] is not None
        assert by_id["cafe-aurora"]["post_count"] == 6
        assert by_id["cafe-aurora"]["latest_run"] is None
        assert [row["id"] for row in body] == sorted(row["id"] for row in body)

    def test_pathways_latest(self, client):
        body = check(client.get("/entities/blue-lagoon-hotel/pathways"), "pathways")
        assert body["entity"] == "blue-lagoon-hotel"
        assert len(body["layers"]) == 3
        assert body["edges"]
        # the document round-trips through the graph model
        graph = graph_from_json(body)
        assert len(graph.layers) == 3

    def test_pathways_explicit_run(self, client):
        latest = client.get("/entities/blue-lagoon-hotel/pathways").json()["run"]
        body = check(
            client.get("/entities/blue-lagoon-hotel/pathways", params={"run": latest}),
            "pathways",
        )
        assert body["run"] == latest

    def test_pathways_unknown_run(self, client):
        check(
            client.get("/entities/blue-lagoon-hotel/pathways", params={"run": "run-9999"}),
            "error",
            status=404,
        )

    def test_unknown_entity(self, client):
        check(client.get("/entities/ghost/pathways"), "error", status=404)

    def test_entity_without_runs(self, client):
        body = check(client.get("/entities/cafe-aurora/pathways"), "error", status=404)
        assert "no completed runs" in body["detail"]

    def test_time_filter(self, client):
        full = client.get("/entities/blue-lagoon-hotel/pathways").json()
        cut = full["layers"][0]["window"]["end"]
        body = check(
            client.get("/entities/blue-lagoon-hotel/pathways", params={"from": cut}),
            "pathways",
        )
        assert [l["index"] for l in body["layers"]] == [1, 2]
        kept = {c["id"] for l in body["layers"] for c in l["clusters"]}
        assert all(e["from"] in kept and e["to"] in kept for e in body["edges"])
        assert len(body["edges"]) < len(full["edges"])

    def test_time_filter_bad_timestamp(self, client):
        check(
            client.get("/entities/blue-lagoon-hotel/pathways", params={"from": "yesterday"}),
            "error",
            status=400,
        )

    def test_aspects(self, client):
        body = check(client.get("/entities/blue-lagoon-hotel/aspects"), "insights")
        assert body["aspects"], "expected at least one aspect row"
        assert body["top_emotions"]

    def test_posts_all(self, client):
        body = check(client.get("/entities/blue-lagoon-hotel/posts"), "posts")
        assert body["cluster"] is None
        assert len(body["posts"]) == 19
        stamps = [p["timestamp"] for p in body["posts"]]
        assert stamps == sorted(stamps)

    def test_posts_cluster_filter_matches_graph(self, client):
        graph = client.get("/entities/blue-lagoon-hotel/pathways").json()
        cluster = graph["layers"][1]["clusters"][2]
        body = check(
            client.get(
                "/entities/blue-lagoon-hotel/posts", params={"cluster": cluster["id"]}
            ),
            "posts",
        )
        assert sorted(p["id"] for p in body["posts"]) == sorted(cluster["member_post_ids"])

    def test_posts_unknown_cluster(self, client):
        check(
            client.get("/entities/blue-lagoon-hotel/posts", params={"cluster": "L9C9"}),
            "error",
            status=404,
        )


class TestRuns:
    def test_wait_run_completes(self, client):
        body = check(
            client.post(
                "/runs", json={"entity": "blue-lagoon-hotel", "config": {}},
                params={"wait": "true"},
            ),
            "run_summary",
        )
        assert body["status"] == "completed"
        assert body["counts"]["posts"] == 19
        seen = check(
            client.get(
                "/entities/blue-lagoon-hotel/pathways", params={"run": body["run_id"]}
            ),
            "pathways",
        )
        assert seen["run"] == body["run_id"]

    def test_config_override_applies(self, client):
        body = check(
            client.post(
                "/runs",
                json={"entity": "blue-lagoon-hotel", "config": {"window": "12h"}},
                params={"wait": "true"},
            ),
            "run_summary",
        )
        assert body["config"]["window"] == "12h"
        graph = client.get(
            "/entities/blue-lagoon-hotel/pathways", params={"run": body["run_id"]}
        ).json()
        assert len(graph["layers"]) > 3

    def test_async_run_becomes_visible(self, client):
        body = check(client.post("/runs", json={"entity": "cafe-aurora"}), "run_summary", 202)
        assert body["status"] == "running"
        deadline = time.monotonic() + 10.0
        while time.monotonic() < deadline:
            r = client.get(
                "/entities/cafe-aurora/pathways", params={"run": body["run_id"]}
            )
            if r.status_code == 200:
                break
            assert r.status_code == 404, "must never see a partial run"
            time.sleep(0.02)
        else:
            pytest.fail("async run never completed")
        check(r, "pathways")

    def test_conflict_while_running(self, served, model_dir, monkeypatch):
        data_dir, client = served
        release = threading.Event()
        started = threading.Event()
        real = service_mod.run_pipeline

        def slow(*args, **kwargs):
            started.set()
            assert release.wait(timeout=10.0)
            return real(*args, **kwargs)

        monkeypatch.setattr(service_mod, "run_pipeline", slow)
        first = client.post("/runs", json={"entity": "blue-lagoon-hotel"})
        assert first.status_code == 202
        assert started.wait(timeout=10.0)
        second = client.post("/runs", json={"entity": "blue-lagoon-hotel"})
        check(second, "error", status=409)
        release.set()
        deadline = time.monotonic() + 10.0
        while time.monotonic() < deadline:
            if client.get(
                "/entities/blue-lagoon-hotel/pathways",
                params={"run": first.json()["run_id"]},
            ).status_code == 200:
                break
            time.sleep(0.02)
        else:
            pytest.fail("blocked run never finished after release")

    @pytest.mark.parametrize(
        "body",
        [
            {"config": {}},
            {"entity": ""},
            {"entity": "blue-lagoon-hotel", "config": {"wibble": 1}},
            {"entity": "blue-lagoon-hotel", "config": {"tau": 2.0}},
            {"entity": "blue-lagoon-hotel", "config": {"window": "soon"}},
            {"entity": "blue-lagoon-hotel", "config": {"top_k": "three"}},
        ],
    )
    def test_malformed_bodies(self, client, body):
        check(client.post("/runs", json=body), "error", status=400)

    def test_unknown_entity_run(self, client):
        check(client.post("/runs", json={"entity": "ghost"}), "error", status=404)
