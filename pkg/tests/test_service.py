"""HTTP service tests: project lifecycle, optimistic concurrency,
persistence, and byte-equivalence with the command-line exports."""

import json

import pytest
from fastapi.testclient import TestClient

from simkit.geojson_export import (
    StyleConfig,
    dumps_geojson,
    export_feature_collection,
    validate_document,
)
from simkit.georef.register import georegister, load_anchors
from simkit.mesh import save_mesh
from simkit.simio import write_sim
from simkit.service import create_app
from simkit.tracing.script import replay_script
from room_fixture import scene_mesh


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "projects")
    with TestClient(app) as c:
        yield c


@pytest.fixture()
def project(client):
    r = client.post("/v1/projects", json={"width": 600, "height": 400})
    assert r.status_code == 200
    return r.json()["id"]


@pytest.fixture()
def traced_project(client, project, four_rooms_script):
    ops = [l for l in four_rooms_script.splitlines() if l.strip()]
    r = client.post(f"/v1/projects/{project}/ops", json={"base_version": 0, "ops": ops})
    assert r.status_code == 200, r.text
    return project


class TestProjects:
    def test_create_and_state(self, client, project):
        r = client.get(f"/v1/projects/{project}/state")
        assert r.status_code == 200
        state = r.json()
        assert state["version"] == 0
        assert state["spaces"] == []

    def test_unknown_project(self, client):
        assert client.get("/v1/projects/nope/state").status_code == 404

    def test_post_ops_four_rooms(self, client, traced_project):
        state = client.get(f"/v1/projects/{traced_project}/state").json()
        assert len(state["spaces"]) == 4
        assert len(state["corners"]) == 9

    def test_stale_base_version_conflict(self, client, traced_project):
        r = client.post(
            f"/v1/projects/{traced_project}/ops",
            json={"base_version": 0, "ops": ["add_line horizontal 350"]},
        )
        assert r.status_code == 409
        assert r.json()["error"] == "version_conflict"

    def test_batch_atomic(self, client, project):
        before = client.get(f"/v1/projects/{project}/state").json()
        r = client.post(
            f"/v1/projects/{project}/ops",
            json={
                "base_version": 0,
                "ops": ["add_line horizontal 100", "add_line horizontal 100"],
            },
        )
        assert r.status_code == 422
        after = client.get(f"/v1/projects/{project}/state").json()
        assert after == before  # nothing from the failed batch persisted

    def test_incremental_batches(self, client, project, four_rooms_script):
        ops = [l for l in four_rooms_script.splitlines() if l.strip()]
        mid = len(ops) // 2
        r = client.post(
            f"/v1/projects/{project}/ops", json={"base_version": 0, "ops": ops[:mid]}
        )
        assert r.status_code == 200
        v = r.json()["version"]
        r = client.post(
            f"/v1/projects/{project}/ops", json={"base_version": v, "ops": ops[mid:]}
        )
        assert r.status_code == 200
        assert len(r.json()["spaces"]) == 4


class TestExports:
    def test_sim_matches_direct_replay(self, client, traced_project, four_rooms_script):
        model, _ = replay_script(four_rooms_script, 600, 400)
        r = client.get(f"/v1/projects/{traced_project}/export/sim")
        assert r.status_code == 200
        assert r.content == write_sim(model)

    def test_geojson_requires_anchors(self, client, traced_project):
        r = client.get(f"/v1/projects/{traced_project}/export/geojson")
        assert r.status_code == 422
        assert r.json()["error"] == "unregistered_model"

    def test_geojson_matches_direct_export(
        self, client, traced_project, four_rooms_script, four_rooms_anchors
    ):
        r = client.post(
            f"/v1/projects/{traced_project}/anchors", content=four_rooms_anchors
        )
        assert r.status_code == 200
        r = client.get(f"/v1/projects/{traced_project}/export/geojson")
        assert r.status_code == 200
        model, _ = replay_script(four_rooms_script, 600, 400)
        geo = georegister(model, load_anchors(four_rooms_anchors))
        expected = dumps_geojson(export_feature_collection(model, geo, StyleConfig()))
        assert r.content == expected

    def test_crash_recovery(self, tmp_path, four_rooms_script):
        root = tmp_path / "projects"
        app1 = create_app(root)
        with TestClient(app1) as c1:
            pid = c1.post("/v1/projects", json={"width": 600, "height": 400}).json()["id"]
            ops = [l for l in four_rooms_script.splitlines() if l.strip()]
            c1.post(f"/v1/projects/{pid}/ops", json={"base_version": 0, "ops": ops})
            state1 = c1.get(f"/v1/projects/{pid}/state").json()
        # fresh app over the same directory: op log is the source of truth
        with TestClient(create_app(root)) as c2:
            state2 = c2.get(f"/v1/projects/{pid}/state").json()
        assert state2 == state1


class TestMeshStages:
    @pytest.fixture()
    def mesh_project(self, client, traced_project, four_rooms_anchors):
        client.post(f"/v1/projects/{traced_project}/anchors", content=four_rooms_anchors)
        r = client.post(
            f"/v1/projects/{traced_project}/mesh",
            files={"file": ("scene.ply", save_mesh(scene_mesh()))},
        )
        assert r.status_code == 200, r.text
        assert r.json()["faces"] == scene_mesh().n_faces
        return traced_project

    def _stage(self, client, pid, name, params=None):
        return client.post(f"/v1/projects/{pid}/stages/{name}", json=params or {})

    def test_stage_order_enforced(self, client, mesh_project):
        r = self._stage(client, mesh_project, "rectify")
        assert r.status_code == 422

    def test_unknown_stage(self, client, mesh_project):
        assert self._stage(client, mesh_project, "bogus").status_code == 422

    def test_register_without_rotation_suggests(self, client, mesh_project):
        self._stage(client, mesh_project, "reorient")
        self._stage(client, mesh_project, "fitwalls")
        self._stage(client, mesh_project, "rectify")
        r = self._stage(client, mesh_project, "register", {"space": "s1"})
        assert r.status_code == 422
        assert "suggestion" in r.json()["message"]

    def test_full_pipeline_and_populated_export(self, client, mesh_project):
        pid = mesh_project
        r = self._stage(client, pid, "reorient")
        assert r.status_code == 200
        assert abs(r.json()["theta_deg"] % 90.0) < 0.5
        assert self._stage(client, pid, "fitwalls").status_code == 200
        assert self._stage(client, pid, "rectify").status_code == 200
        r = self._stage(client, pid, "register", {"space": "s1", "rotation": 90})
        assert r.status_code == 200
        r = self._stage(client, pid, "superpixel", {"k": 0.05, "min_size": 1})
        assert r.status_code == 200

        png = client.get(f"/v1/projects/{pid}/superpixels/topdown")
        assert png.status_code == 200
        assert png.content[:8] == b"\x89PNG\r\n\x1a\n"
        legend = client.get(f"/v1/projects/{pid}/superpixels/legend").json()
        assert legend["colors"]

        # the table's 12 faces are the last faces of the scene mesh, and
        # every stage preserves face order
        labels = client.get(f"/v1/projects/{pid}/superpixels/labels").json()["labels"]
        table_labels = sorted(set(labels[-12:]))
        r = client.post(
            f"/v1/projects/{pid}/assignments",
            content=json.dumps([{"name": "table", "superpixels": table_labels}]),
        )
        assert r.status_code == 200
        r = self._stage(client, pid, "boxes")
        assert r.status_code == 200
        boxes = r.json()["boxes"]
        assert len(boxes) == 1
        assert boxes[0]["height_m"] == pytest.approx(0.75)

        r = client.get(f"/v1/projects/{pid}/export/populated")
        assert r.status_code == 200
        doc = json.loads(r.content)
        assert validate_document(doc) == []
        assert len(doc["features"]) == 5  # 4 rooms + 1 object
        names = {f["properties"]["name"] for f in doc["features"]}
        assert "table" in names

    def test_boxes_requires_assignments(self, client, mesh_project):
        pid = mesh_project
        self._stage(client, pid, "reorient")
        self._stage(client, pid, "fitwalls")
        self._stage(client, pid, "rectify")
        self._stage(client, pid, "register", {"space": "s1", "rotation": 90})
        self._stage(client, pid, "superpixel", {"k": 0.05, "min_size": 1})
        r = self._stage(client, pid, "boxes")
        assert r.status_code == 422
        assert "assignments" in r.json()["message"]
