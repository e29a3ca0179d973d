from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from oracle_service.app import create_app
from oracle_service.config import ServiceConfig


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(ServiceConfig(max_batch=8)))


class TestHealth:
    def test_health_shape(self, client):
        body = client.get("/health").json()
        assert body["status"] == "ok"
        assert set(body["properties"]) == {"qed", "sa"}
        assert set(body["versions"]) == {"qed", "sa"}


class TestScore:
    def test_scores_aligned_with_request(self, client):
        smiles = ["CCO", "CC(=O)Oc1ccccc1C(=O)O", "c1ccccc1"]
        body = client.post("/score", json={"property": "qed", "smiles": smiles}).json()
        assert len(body["scores"]) == len(smiles)
        assert len(body["errors"]) == len(smiles)
        assert all(e is None for e in body["errors"])
        singles = [
            client.post("/score", json={"property": "qed", "smiles": [s]}).json()["scores"][0]
            for s in smiles
        ]
        assert body["scores"] == singles  # order preserved, stateless

    def test_invalid_smiles_isolated(self, client):
        smiles = ["CCO", "((broken", "c1ccccc1"]
        body = client.post("/score", json={"property": "sa", "smiles": smiles}).json()
        assert body["scores"][0] is not None
        assert body["scores"][1] is None
        assert body["scores"][2] is not None
        assert body["errors"][1] is not None
        assert body["errors"][0] is None and body["errors"][2] is None

    def test_empty_batch(self, client):
        body = client.post("/score", json={"property": "qed", "smiles": []}).json()
        assert body == {"scores": [], "errors": []}

    def test_unknown_property_is_400(self, client):
        response = client.post(
            "/score", json={"property": "telepathy", "smiles": ["CCO"]}
        )
        assert response.status_code == 400
        assert "telepathy" in response.json()["error"]

    def test_batch_cap_enforced(self, client):
        response = client.post(
            "/score", json={"property": "qed", "smiles": ["CCO"] * 9}
        )
        assert response.status_code == 400
        assert "max_batch" in response.json()["error"]

    def test_determinism(self, client):
        payload = {"property": "qed", "smiles": ["CC(=O)Nc1ccc(O)cc1"]}
        first = client.post("/score", json=payload).json()
        second = client.post("/score", json=payload).json()
        assert first == second
