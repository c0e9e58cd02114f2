"""API dispatch and the HTTP wrapper around it."""

from __future__ import annotations

import http.client
import json
import threading

import httpx
import pytest

from confprop import parse_case, query
from confprop.caseformat import document_to_dict
from confprop.service import ServiceState, create_server, handle_api
from helpers import CASES_DIR


@pytest.fixture(scope="module")
def stat_state():
    doc = parse_case((CASES_DIR / "statistical_testing.cp.json").read_text())
    return ServiceState.from_document(doc)


@pytest.fixture(scope="module")
def testing_state():
    doc = parse_case((CASES_DIR / "testing_evidence.cp.json").read_text())
    return ServiceState.from_document(doc)


@pytest.fixture(scope="module")
def modes_state():
    doc = parse_case((CASES_DIR / "modes_table.cp.json").read_text())
    return ServiceState.from_document(doc)


def get(state, path, **params):
    return handle_api(state, "GET", path, params)


def post(state, path, body):
    return handle_api(state, "POST", path, {}, body)


class TestHealthAndCase:
    def test_health(self, stat_state):
        assert get(stat_state, "/api/health") == (200, {"status": "ok"})

    def test_health_rejects_post(self, stat_state):
        status, payload = post(stat_state, "/api/health", None)
        assert status == 405
        assert "error" in payload

    def test_case_returns_document_and_baseline(self, stat_state):
        status, payload = get(stat_state, "/api/case")
        assert status == 200
        assert payload["document"] == document_to_dict(stat_state.document)
        assert payload["baseline"]["top_confidence"] == 0.765
        assert payload["baseline"]["nodes"]["G"] == 0.9

    def test_unknown_route(self, stat_state):
        status, payload = get(stat_state, "/api/nope")
        assert status == 404
        assert "/api/nope" in payload["error"]


class TestWhatif:
    def test_override_applies(self, stat_state):
        status, payload = post(
            stat_state, "/api/whatif", {"overrides": {"SC1": 0.999}}
        )
        assert status == 200
        assert payload["nodes"]["C1"] == 0.8991
        assert payload["overrides"] == {"SC1": 0.999}

    def test_empty_overrides_reproduce_baseline(self, stat_state):
        status, payload = post(stat_state, "/api/whatif", {"overrides": {}})
        assert status == 200
        assert payload["nodes"] == {"C1": 0.765, "G": 0.9, "SC1": 0.85}

    def test_get_not_allowed(self, stat_state):
        assert get(stat_state, "/api/whatif")[0] == 405

    @pytest.mark.parametrize(
        "body",
        [None, [], {"overrides": 3}, {"pins": {}}],
    )
    def test_malformed_body(self, stat_state, body):
        assert post(stat_state, "/api/whatif", body)[0] == 400

    def test_unknown_node(self, stat_state):
        status, payload = post(
            stat_state, "/api/whatif", {"overrides": {"ghost": 0.5}}
        )
        assert status == 404
        assert "ghost" in payload["error"]

    def test_non_leaf_rejected(self, stat_state):
        status, payload = post(
            stat_state, "/api/whatif", {"overrides": {"C1": 0.5}}
        )
        assert status == 400
        assert "leaf" in payload["error"]

    @pytest.mark.parametrize("value", [True, "0.5", None, 1.5, -0.1])
    def test_bad_values_rejected(self, stat_state, value):
        status, _ = post(
            stat_state, "/api/whatif", {"overrides": {"SC1": value}}
        )
        assert status == 400

    def test_requests_leave_baseline_alone(self, stat_state):
        before = get(stat_state, "/api/case")
        post(stat_state, "/api/whatif", {"overrides": {"SC1": 0.001}})
        post(stat_state, "/api/whatif", {"overrides": {"G": 0.001}})
        assert get(stat_state, "/api/case") == before


class TestSensitivityRoute:
    def test_default_delta(self, stat_state):
        status, payload = get(stat_state, "/api/sensitivity")
        assert status == 200
        assert payload["delta"] == 0.01
        by_leaf = {e["leaf"]: e for e in payload["entries"]}
        assert by_leaf["G"]["derivative"] == pytest.approx(0.85, abs=1e-9)

    def test_delta_param(self, stat_state):
        status, payload = get(stat_state, "/api/sensitivity", delta="0.02")
        assert status == 200
        assert payload["delta"] == 0.02

    @pytest.mark.parametrize("delta", ["abc", "0", "0.2", "-0.01"])
    def test_bad_delta(self, stat_state, delta):
        status, payload = get(stat_state, "/api/sensitivity", delta=delta)
        assert status == 400
        assert "delta" in payload["error"]


class TestBoundsRoute:
    def test_all_blocks(self, modes_state):
        status, payload = get(modes_state, "/api/bounds")
        assert status == 200
        assert len(payload["blocks"]) == 8
        for entry in payload["blocks"]:
            assert entry["low"] - 1e-9 <= entry["point"] <= entry["high"] + 1e-9

    def test_one_block(self, modes_state):
        status, payload = get(modes_state, "/api/bounds", block="blk_diversity")
        assert status == 200
        assert [b["block"] for b in payload["blocks"]] == ["blk_diversity"]

    def test_unknown_block(self, modes_state):
        assert get(modes_state, "/api/bounds", block="ghost")[0] == 404

    def test_single_subclaim_block(self, stat_state):
        status, payload = get(stat_state, "/api/bounds", block="B1")
        assert status == 400
        assert "B1" in payload["error"]


class TestLintRoute:
    def test_findings_shape(self, stat_state):
        status, payload = get(stat_state, "/api/lint")
        assert status == 200
        assert payload == {"findings": []}


class TestBbnRoute:
    def test_query_matches_library(self, testing_state):
        status, payload = post(
            testing_state,
            "/api/bbn/query",
            {"network": "testing", "target": "system",
             "evidence": {"tests": "pass"}},
        )
        assert status == 200
        expected = query(
            testing_state.document.networks["testing"], "system", {"tests": "pass"}
        )
        assert payload["distribution"] == expected

    def test_prior_marginal(self, testing_state):
        status, payload = post(
            testing_state,
            "/api/bbn/query",
            {"network": "testing", "target": "system"},
        )
        assert status == 200
        assert payload["distribution"]["correct"] == pytest.approx(
            0.9851, abs=1e-12
        )

    def test_unknown_network(self, testing_state):
        status, payload = post(
            testing_state, "/api/bbn/query", {"network": "x", "target": "system"}
        )
        assert status == 404

    def test_unknown_target(self, testing_state):
        status, _ = post(
            testing_state, "/api/bbn/query", {"network": "testing", "target": "x"}
        )
        assert status == 404

    def test_unknown_evidence_state(self, testing_state):
        status, _ = post(
            testing_state,
            "/api/bbn/query",
            {"network": "testing", "target": "system",
             "evidence": {"tests": "maybe"}},
        )
        assert status == 404

    def test_target_fixed_by_evidence(self, testing_state):
        status, payload = post(
            testing_state,
            "/api/bbn/query",
            {"network": "testing", "target": "tests",
             "evidence": {"tests": "pass"}},
        )
        assert status == 400
        assert "fixed" in payload["error"]

    @pytest.mark.parametrize(
        "body",
        [None, {"network": "testing"}, {"target": "system"},
         {"network": 3, "target": "system"},
         {"network": "testing", "target": "system", "evidence": {"tests": 1}}],
    )
    def test_malformed_body(self, testing_state, body):
        assert post(testing_state, "/api/bbn/query", body)[0] == 400

    def test_impossible_evidence(self, testing_state):
        # tests=fail has probability zero when system and oracle are correct.
        status, payload = post(
            testing_state,
            "/api/bbn/query",
            {"network": "testing", "target": "specification",
             "evidence": {"system": "correct", "oracle": "correct",
                          "tests": "fail"}},
        )
        assert status == 422
        assert "error" in payload


@pytest.fixture(scope="module")
def live_server(tmp_path_factory):
    ui = tmp_path_factory.mktemp("ui")
    (ui / "index.html").write_text("<!doctype html><title>ui</title>")
    (ui.parent / "outside.txt").write_text("secret")
    doc = parse_case((CASES_DIR / "statistical_testing.cp.json").read_text())
    server = create_server(doc, host="127.0.0.1", port=0, ui_dir=ui)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield server
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)


def server_url(server):
    host, port = server.server_address[:2]
    return f"http://{host}:{port}"


class TestHttpTransport:
    def test_health(self, live_server):
        response = httpx.get(f"{server_url(live_server)}/api/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok"}

    def test_whatif_round_trip(self, live_server):
        response = httpx.post(
            f"{server_url(live_server)}/api/whatif",
            json={"overrides": {"SC1": 0.999}},
        )
        assert response.status_code == 200
        assert response.json()["nodes"]["C1"] == 0.8991

    def test_status_codes_pass_through(self, live_server):
        response = httpx.post(
            f"{server_url(live_server)}/api/whatif",
            json={"overrides": {"ghost": 0.5}},
        )
        assert response.status_code == 404

    def test_query_string_parsing(self, live_server):
        response = httpx.get(
            f"{server_url(live_server)}/api/sensitivity", params={"delta": "0.02"}
        )
        assert response.status_code == 200
        assert response.json()["delta"] == 0.02

    def test_invalid_json_body(self, live_server):
        response = httpx.post(
            f"{server_url(live_server)}/api/whatif",
            content=b"{not json",
            headers={"Content-Type": "application/json"},
        )
        assert response.status_code == 400

    def test_serves_index(self, live_server):
        response = httpx.get(f"{server_url(live_server)}/")
        assert response.status_code == 200
        assert "ui" in response.text

    def test_missing_asset(self, live_server):
        assert httpx.get(f"{server_url(live_server)}/nope.js").status_code == 404

    def test_post_to_static_path(self, live_server):
        assert httpx.post(f"{server_url(live_server)}/index.html").status_code == 405

    def test_traversal_blocked(self, live_server):
        # Raw connection; a client would normalize the path before sending.
        host, port = live_server.server_address[:2]
        conn = http.client.HTTPConnection(host, port, timeout=10)
        try:
            conn.request("GET", "/../outside.txt")
            response = conn.getresponse()
            body = response.read()
            assert response.status == 404
            assert b"secret" not in body
        finally:
            conn.close()

    def test_concurrent_whatifs_agree(self, live_server):
        url = f"{server_url(live_server)}/api/whatif"
        results = []
        errors = []

        def hit(value):
            try:
                response = httpx.post(
                    url, json={"overrides": {"SC1": value}}, timeout=10
                )
                results.append((value, response.json()["nodes"]["C1"]))
            except Exception as exc:  # noqa: BLE001 - surface in assertion
                errors.append(exc)

        threads = [
            threading.Thread(target=hit, args=(v,))
            for v in (0.1, 0.2, 0.3, 0.4, 0.5) * 4
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join(timeout=10)
        assert not errors
        assert len(results) == 20
        for value, top in results:
            assert top == pytest.approx(0.9 * value, abs=1e-12)


def test_create_server_drops_missing_ui_dir(tmp_path):
    doc = parse_case((CASES_DIR / "statistical_testing.cp.json").read_text())
    server = create_server(doc, port=0, ui_dir=tmp_path / "absent")
    try:
        assert server.ui_dir is None
    finally:
        server.server_close()
