import json

import pytest
from fastapi.testclient import TestClient

from wrangle.service import create_app


@pytest.fixture
def client():
    return TestClient(create_app())


class TestAssistants:
    def test_listing(self, client):
        listed = client.get("/assistants").json()
        ids = {a["id"] for a in listed}
        assert "datadiff" in ids and "csv-dialect" in ids
        datadiff = next(a for a in listed if a["id"] == "datadiff")
        assert datadiff["input_slots"] == ["input", "reference"]


class TestSessionFlow:
    def test_create_with_paths(self, client, toy_paths):
        response = client.post(
            "/sessions", json={"assistant": "datadiff", "bindings": toy_paths}
        )
        assert response.status_code == 201
        body = response.json()
        assert body["status"] == "active"
        assert body["history"] == []
        assert body["expression_script"].startswith("delete(3)")
        assert body["choices"][0] == {"index": 0, "label": "Don't transform column 2"}
        assert body["preview"]["header"] == ["Name", "City"]

    def test_create_with_upload(self, client, toy_paths):
        with open(toy_paths["input"], "rb") as fi, open(toy_paths["reference"], "rb") as fr:
            response = client.post(
                "/sessions",
                data={"assistant": "datadiff"},
                files={
                    "input": ("input.csv", fi, "text/csv"),
                    "reference": ("reference.csv", fr, "text/csv"),
                },
            )
        assert response.status_code == 201
        assert response.json()["expression_script"].startswith("delete(3)")

    def test_choice_then_get(self, client, toy_paths):
        created = client.post(
            "/sessions", json={"assistant": "datadiff", "bindings": toy_paths}
        ).json()
        sid = created["session_id"]
        updated = client.post(f"/sessions/{sid}/choice", json={"index": 0}).json()
        assert len(updated["history"]) == 1
        fetched = client.get(f"/sessions/{sid}").json()
        assert fetched["history"] == updated["history"]
        assert "recode" not in fetched["expression_script"]

    def test_accept_and_result(self, client, toy_paths):
        created = client.post(
            "/sessions", json={"assistant": "datadiff", "bindings": toy_paths}
        ).json()
        sid = created["session_id"]
        accepted = client.post(f"/sessions/{sid}/accept").json()
        assert accepted["status"] == "accepted"
        result = client.get(f"/sessions/{sid}/result")
        assert result.status_code == 200
        assert result.text.startswith("Name,City\n")

    def test_accept_then_choice_conflict(self, client, toy_paths):
        created = client.post(
            "/sessions", json={"assistant": "datadiff", "bindings": toy_paths}
        ).json()
        sid = created["session_id"]
        client.post(f"/sessions/{sid}/accept")
        response = client.post(f"/sessions/{sid}/choice", json={"index": 0})
        assert response.status_code == 409

    def test_result_before_accept(self, client, toy_paths):
        created = client.post(
            "/sessions", json={"assistant": "datadiff", "bindings": toy_paths}
        ).json()
        response = client.get(f"/sessions/{created['session_id']}/result")
        assert response.status_code == 409

    def test_initial_constraints(self, client, toy_paths):
        created = client.post(
            "/sessions",
            json={
                "assistant": "datadiff",
                "bindings": toy_paths,
                "constraints": ["notransform(2)"],
            },
        ).json()
        assert "recode" not in created["expression_script"]


class TestErrors:
    def test_unknown_session(self, client):
        assert client.get("/sessions/zzz").status_code == 404

    def test_unknown_assistant(self, client, toy_paths):
        response = client.post(
            "/sessions", json={"assistant": "nope", "bindings": toy_paths}
        )
        assert response.status_code == 404

    def test_missing_binding(self, client, toy_paths):
        response = client.post(
            "/sessions",
            json={"assistant": "datadiff", "bindings": {"input": toy_paths["input"]}},
        )
        assert response.status_code == 400

    def test_out_of_range_choice(self, client, toy_paths):
        created = client.post(
            "/sessions", json={"assistant": "datadiff", "bindings": toy_paths}
        ).json()
        response = client.post(
            f"/sessions/{created['session_id']}/choice", json={"index": 999}
        )
        assert response.status_code == 409

    def test_conflicting_constraints(self, client, toy_paths):
        response = client.post(
            "/sessions",
            json={
                "assistant": "datadiff",
                "bindings": toy_paths,
                "constraints": ["match(1,2)", "nomatch(1,2)"],
            },
        )
        assert response.status_code == 400


class TestIsolation:
    def test_sessions_do_not_share_state(self, client, toy_paths):
        first = client.post(
            "/sessions", json={"assistant": "datadiff", "bindings": toy_paths}
        ).json()
        second = client.post(
            "/sessions", json={"assistant": "datadiff", "bindings": toy_paths}
        ).json()
        client.post(f"/sessions/{first['session_id']}/choice", json={"index": 0})
        other = client.get(f"/sessions/{second['session_id']}").json()
        assert other["history"] == []
        assert "recode" in other["expression_script"]

    def test_type_infer_session(self, client, data_dir):
        created = client.post(
            "/sessions",
            json={
                "assistant": "type-infer",
                "bindings": {"input": str(data_dir / "esa_amperage.csv")},
            },
        ).json()
        assert created["expression_script"].startswith("type=boolean")
        assert created["choices"][0]["label"] == "column is not boolean"
        updated = client.post(
            f"/sessions/{created['session_id']}/choice", json={"index": 0}
        ).json()
        assert updated["expression_script"].startswith("type=float")


class TestPersistence:
    def test_replay_file_written(self, toy_paths, tmp_path):
        client = TestClient(create_app(data_dir=str(tmp_path)))
        created = client.post(
            "/sessions", json={"assistant": "datadiff", "bindings": toy_paths}
        ).json()
        sid = created["session_id"]
        client.post(f"/sessions/{sid}/choice", json={"index": 0})
        saved = json.loads((tmp_path / f"{sid}.replay.json").read_text())
        assert saved["assistant"] == "datadiff"
        assert saved["constraints"] == ["notransform(2)"]
