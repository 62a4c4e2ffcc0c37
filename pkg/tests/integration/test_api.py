import pytest
from fastapi.testclient import TestClient

from app.core.startup import self_check
from app.main import app


@pytest.fixture
def client():
    # no context manager: the startup self-check is covered separately
    return TestClient(app)


def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    assert response.json()["endpoints"]["character"] == "/api/v1/qchar/character"


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


# ========== CHARACTERS ==========

def test_character(client):
    response = client.get("/api/v1/qchar/character", params={"type": "A2-2", "node": 0, "k": 2})
    assert response.status_code == 200
    body = response.json()
    assert body["dimension"] == 6
    assert body["engine"] == "tsys"
    assert len(body["dominant"]) == 1


def test_character_with_engine(client):
    response = client.get("/api/v1/qchar/character", params={"type": "D4-3", "node": 1, "engine": "tableaux"})
    assert response.status_code == 200
    assert response.json()["dimension"] == 8


@pytest.mark.parametrize("params", [
    {"type": "Q9-2"},
    {"type": "A2-2", "node": 3},
    {"type": "A2-2", "engine": "magic"},
])
def test_bad_requests(client, params):
    assert client.get("/api/v1/qchar/character", params=params).status_code == 400


def test_negative_k_is_rejected(client):
    assert client.get("/api/v1/qchar/character", params={"type": "A2-2", "k": -1}).status_code == 422


def test_tsystem(client):
    response = client.get("/api/v1/qchar/tsystem", params={"type": "A4-2", "node": 1, "k": 1})
    assert response.status_code == 200
    assert response.json()["ok"] is True


def test_dominants(client):
    response = client.get("/api/v1/qchar/dominants", params={"type": "A2-2", "k": 1})
    assert response.status_code == 200
    assert response.json()["matches_ladder"] is True


# ========== FINITE TYPE ==========

def test_branch(client):
    response = client.get("/api/v1/finite/branch", params={"type": "A4-2", "node": 0})
    assert response.status_code == 200
    body = response.json()
    assert body["ok"] is True
    assert [term["weight"] for term in body["computed"]] == [[1, 0], [0, 1], [0, 0]]


def test_qsystem(client):
    response = client.get("/api/v1/finite/qsystem", params={"type": "D4-3", "node": 1})
    assert response.status_code == 200
    assert response.json()["ok"] is True


def test_fermionic(client):
    response = client.get("/api/v1/finite/fermionic", params={"type": "A2-2", "nu": ["0:1:1"], "mode": "unrestricted"})
    assert response.status_code == 200
    body = response.json()
    assert body["ok"] is True
    assert body["nu"] == [[0, 1, 1]]


def test_fermionic_bad_nu(client):
    response = client.get("/api/v1/finite/fermionic", params={"type": "A2-2", "nu": ["zero"]})
    assert response.status_code == 400
    assert response.json()["error"] == "ParseError"


# ========== TABLEAUX ==========

def test_tableaux(client):
    response = client.get("/api/v1/tableaux", params={"type": "D4-3", "node": 2})
    assert response.status_code == 200
    assert response.json()["count"] == 29


def test_tableaux_unsupported(client):
    response = client.get("/api/v1/tableaux", params={"type": "E6-2", "node": 1})
    assert response.status_code == 400
    assert response.json()["error"] == "UnsupportedNode"


# ========== STARTUP ==========

def test_self_check():
    report = self_check()
    assert report["ok"] is True
    assert all(report["phases"].values())
