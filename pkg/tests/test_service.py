"""HTTP API behavior: validation, caching, budgets, health."""

import json

import pytest
from fastapi.testclient import TestClient

from fundsim import __version__
from fundsim.experiments import PRESETS
from fundsim.service import create_app

FAST_PLAN = {
    "portfolio_sizes": [10],
    "bounds": [None],
    "reserve_fractions": [0.0],
    "n_funds": 2000,
    "n_replicates": 2,
    "pool_size": 1000,
    "master_seed": 7,
}


@pytest.fixture
def client():
    with TestClient(create_app(max_cells=64, max_concurrent=2)) as c:
        yield c


class TestSimulateEndpoint:
    def test_runs_plan_and_reports_metrics(self, client):
        resp = client.post("/api/v1/simulate", json={"plan": FAST_PLAN})
        assert resp.status_code == 200
        body = resp.json()
        assert body["cache_hit"] is False
        assert body["engine_version"] == __version__
        row = body["result"]["rows"][0]
        assert row["portfolio_size"] == 10
        assert 0.0 <= row["metrics"]["p_loss"]["mean"] <= 1.0

    def test_identical_request_hits_cache_with_identical_payload(self, client):
        first = client.post("/api/v1/simulate", json={"plan": FAST_PLAN})
        second = client.post("/api/v1/simulate", json={"plan": FAST_PLAN})
        assert second.json()["cache_hit"] is True
        assert json.dumps(first.json()["result"], sort_keys=True) == json.dumps(
            second.json()["result"], sort_keys=True
        )

    def test_cache_opt_out(self, client):
        client.post("/api/v1/simulate", json={"plan": FAST_PLAN, "cache": False})
        resp = client.post("/api/v1/simulate", json={"plan": FAST_PLAN, "cache": False})
        assert resp.json()["cache_hit"] is False

    def test_seedless_plan_gets_default_seed_echoed(self, client):
        plan = {k: v for k, v in FAST_PLAN.items() if k != "master_seed"}
        resp = client.post("/api/v1/simulate", json={"plan": plan})
        assert resp.status_code == 200
        assert resp.json()["result"]["plan"]["master_seed"] == 0

    def test_invalid_alpha_names_invariant(self, client):
        plan = dict(FAST_PLAN, world_alpha=0.5)
        resp = client.post("/api/v1/simulate", json={"plan": plan})
        assert resp.status_code == 400
        assert "alpha" in resp.json()["detail"]

    def test_missing_plan_rejected(self, client):
        resp = client.post("/api/v1/simulate", json={})
        assert resp.status_code == 400

    def test_oversized_grid_rejected_413(self, client):
        plan = dict(FAST_PLAN, portfolio_sizes=list(range(1, 100)))
        resp = client.post("/api/v1/simulate", json={"plan": plan})
        assert resp.status_code == 413
        assert "budget" in resp.json()["detail"]

    def test_exhausted_concurrency_budget_gets_503(self):
        with TestClient(create_app(max_cells=64, max_concurrent=0)) as busy:
            resp = busy.post("/api/v1/simulate", json={"plan": FAST_PLAN})
            assert resp.status_code == 503
            assert resp.headers["Retry-After"]

    def test_provenance_echoes_request_plan(self, client):
        resp = client.post("/api/v1/simulate", json={"plan": FAST_PLAN})
        plan = resp.json()["result"]["plan"]
        for key, value in FAST_PLAN.items():
            assert plan[key] == value


class TestStatsEndpoint:
    def test_mean_example(self, client):
        resp = client.post("/api/v1/stats", json={"alpha": 2.5, "x_min": 0.35})
        assert resp.status_code == 200
        assert resp.json()["mean"] == pytest.approx(1.05)

    def test_divergent_mean_with_median(self, client):
        resp = client.post("/api/v1/stats", json={"alpha": 2.0, "x_min": 1.0})
        body = resp.json()
        assert body["mean"] is None and body["mean_finite"] is False
        assert body["median"] == 2.0

    def test_second_moment(self, client):
        resp = client.post("/api/v1/stats", json={"alpha": 3.5, "x_min": 1.0, "k": 2})
        assert resp.json()["moment_value"] == 5.0

    def test_invalid_params_rejected(self, client):
        resp = client.post("/api/v1/stats", json={"alpha": 0.5, "x_min": 0.35})
        assert resp.status_code == 400
        assert "alpha" in resp.json()["detail"]

    def test_missing_fields_rejected(self, client):
        resp = client.post("/api/v1/stats", json={"alpha": 2.5})
        assert resp.status_code == 400


class TestPresetsEndpoint:
    def test_catalog_contents(self, client):
        resp = client.get("/api/v1/presets")
        assert resp.status_code == 200
        catalog = {p["name"]: p for p in resp.json()["presets"]}
        assert len(catalog) == len(PRESETS)
        assert "average_world" in catalog
        assert catalog["bad_world"]["plan"]["world_alpha"] == 2.3
        assert catalog["average_world"]["plan"]["n_funds"] == 100_000


class TestHealth:
    def test_fresh_server_is_ok(self, client):
        resp = client.get("/api/v1/health")
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "ok"
        assert body["engine_version"] == __version__

    def test_draining_server_returns_503(self, client):
        # flip the drain flag the way the shutdown hook does
        client.app.state.draining = True
        try:
            assert client.get("/api/v1/health").status_code == 503
        finally:
            client.app.state.draining = False

    def test_cors_allows_cross_origin_ui(self, client):
        resp = client.get("/api/v1/health", headers={"Origin": "http://localhost:5173"})
        assert resp.headers.get("access-control-allow-origin") == "*"
