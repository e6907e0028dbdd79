"""HTTP surface of the board service."""

import pytest
from fastapi.testclient import TestClient

from maestro.board.service import create_app

REF_FGSM = {"kind": "reference", "method": "fgsm"}


@pytest.fixture
def client(arena):
    return TestClient(create_app(arena)), arena


def submit(http, submitter="alice", phase="attack", payload=REF_FGSM):
    response = http.post(
        "/api/submissions",
        json={"submitter_id": submitter, "phase": phase, "payload": payload},
    )
    assert response.status_code == 201, response.text
    return response.json()


class TestEndpoints:
    def test_unknown_phase_404(self, client):
        http, _ = client
        assert http.get("/api/boards/nope").status_code == 404
        assert http.get("/api/boards/nope/errors").status_code == 404
        assert http.get("/api/boards/nope/csv").status_code == 404

    def test_unknown_submitter_history_404(self, client):
        http, _ = client
        assert http.get("/api/boards/attack/history/nobody").status_code == 404

    def test_bad_sort_key_400(self, client):
        http, _ = client
        submit(http)
        assert http.get("/api/boards/attack?sort=bogus").status_code == 400

    def test_phases_listing(self, client):
        http, _ = client
        doc = http.get("/api/phases").json()
        assert [p["name"] for p in doc["phases"]] == ["attack", "defense", "war"]
        assert doc["phases"][0]["kind"] == "attack"

    def test_submission_lifecycle(self, client):
        http, _ = client
        doc = submit(http)
        assert doc["status"] == "evaluated"
        rows = http.get("/api/boards/attack").json()["rows"]
        assert len(rows) == 1
        assert rows[0]["submitter_id"] == "alice"
        assert rows[0]["metrics"]["overall_score"] > 0

    def test_post_after_deadline_422_names_deadline(self, client):
        http, arena = client
        arena.clock.advance(10_000.0)
        response = http.post(
            "/api/submissions",
            json={"submitter_id": "alice", "phase": "attack", "payload": REF_FGSM},
        )
        assert response.status_code == 422
        assert response.json()["deadline"] == 1700000600.0

    def test_csv_equals_export(self, client):
        http, arena = client
        submit(http)
        response = http.get("/api/boards/attack/csv")
        assert response.text == arena.export_csv("attack")
        assert "text/csv" in response.headers["content-type"]

    def test_error_board_carries_crash(self, client, tmp_path):
        import sys

        http, _ = client
        script = tmp_path / "crash.py"
        script.write_text("import sys; sys.exit(5)")
        doc = submit(http, payload={"kind": "external", "command": [sys.executable, str(script)]})
        assert doc["status"] == "error" and doc["error_category"] == "crash"
        errors = http.get("/api/boards/attack/errors").json()["rows"]
        assert len(errors) == 1 and "status 5" in errors[0]["message"]
        assert http.get("/api/boards/attack").json()["rows"] == []

    def test_history_endpoint_chronological(self, client):
        http, _ = client
        for _ in range(3):
            submit(http)
        rows = http.get("/api/boards/attack/history/alice").json()["rows"]
        assert len(rows) == 3
        stamps = [r["eval_timestamp"] for r in rows]
        assert stamps == sorted(stamps)

    def test_board_query_params(self, client):
        http, _ = client
        submit(http, submitter="alice")
        submit(http, submitter="bob", payload={"kind": "reference", "method": "pgd"})
        rows = http.get("/api/boards/attack?sort=overall_score&dir=asc").json()["rows"]
        scores = [r["metrics"]["overall_score"] for r in rows]
        assert scores == sorted(scores)
        rows = http.get("/api/boards/attack?search=ali").json()["rows"]
        assert {r["submitter_id"] for r in rows} == {"alice"}
        rows = http.get("/api/boards/attack?metrics=clean_acc").json()["rows"]
        assert list(rows[0]["metrics"]) == ["clean_acc"]

    def test_reads_are_pure(self, client):
        http, _ = client
        submit(http)
        a = http.get("/api/boards/attack").content
        b = http.get("/api/boards/attack").content
        assert a == b

    def test_limit_offset_params(self, client):
        http, _ = client
        submit(http, submitter="alice")
        submit(http, submitter="bob")
        rows = http.get("/api/boards/attack?limit=1").json()["rows"]
        assert len(rows) == 1
        rest = http.get("/api/boards/attack?limit=5&offset=1").json()["rows"]
        assert len(rest) == 1
        assert rows[0]["submitter_id"] != rest[0]["submitter_id"]
        assert http.get("/api/boards/attack?limit=-1").status_code == 400

    def test_config_endpoint(self, client):
        http, _ = client
        doc = http.get("/api/config").json()
        assert doc["config_version"] == 1
        assert set(doc["boards"]) == {"attack", "defense", "war"}
        assert abs(sum(doc["attack_weights"].values()) - 1.0) < 1e-9
        column_names = [c["name"] for c in doc["boards"]["attack"]]
        assert "overall_score" in column_names

    def test_colors_served_with_rows(self, client):
        http, _ = client
        submit(http)
        row = http.get("/api/boards/attack").json()["rows"][0]
        cell = row["colors"]["overall_score"]
        assert cell["band"] in ("green", "red", "neutral")
        assert 0.0 <= cell["intensity"] <= 1.0
