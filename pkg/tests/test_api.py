import inspect

import pytest
from fastapi.testclient import TestClient

from main import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_api_handlers_are_synchronous():
    routes = [route for route in app.routes if getattr(route, "path", "").startswith("/api")]
    assert routes
    for route in routes:
        assert not inspect.iscoroutinefunction(route.endpoint), route.path


def test_polygon(client):
    response = client.post("/api/geometry/polygon", json={"f": "x^2*y^3 + x*y + 1"})
    assert response.status_code == 200
    body = response.json()
    assert body["trapezoid"]["passed"] is True
    assert len(body["polygon"]["vertices"]) == 3


def test_polytope_uses_face_class_alias(client):
    response = client.post("/api/geometry/polytope", json={"f": "F^3 + G^2 + x + 1"})
    assert response.status_code == 200
    body = response.json()
    assert body["shape"]["ceiling_kind"] == "vertex"
    assert {face["class"] for face in body["polytope"]["faces"]} >= {"floor", "slanted-plane"}


def test_polytope_of_pair_is_degenerate(client):
    response = client.post("/api/geometry/polytope", json={"f": "y^2", "g": "y^3 + y"})
    assert response.status_code == 200
    assert response.json()["shape_error"]["stage"] == "polytope"


def test_puiseux_branches(client):
    response = client.post("/api/puiseux/branches", json={"f": "(y - x)^2 - x^3", "order": "4"})
    assert response.status_code == 200
    body = response.json()
    assert body["direction"] == "increasing"
    assert [b["terms"][1]["exp"] for b in body["branches"]] == ["3/2", "3/2"]
    assert all(b["ram"] == 2 for b in body["branches"])


def test_expand(client):
    response = client.post("/api/series/expand", json={"f": "x + y^2", "g": "y"})
    assert response.status_code == 200
    assert response.json()["lambdas"] == ["1/2"]


def test_expand_without_jacobian_check(client):
    response = client.post("/api/series/expand", json={"f": "y^2", "g": "y^3", "check_jacobian": False})
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "terminated-zero"
    assert body["lambdas"] == ["3/2"]


def test_dependence(client):
    response = client.post("/api/dependence", json={"f": "x + y^2", "g": "y"})
    assert response.status_code == 200
    body = response.json()
    assert body["P"] == "G^2 - F + x"
    assert body["extension_degree"] == 1


def test_bounds_and_charpair(client):
    response = client.post("/api/audit/bounds", json={"m": 1, "n": 4, "a0": 2, "b0": 3})
    assert response.status_code == 200
    assert response.json()["rho_upper"] == "1/3"
    response = client.post("/api/audit/charpair", json={"a": 2, "b": 3, "a0": 3, "b0": 4})
    assert response.status_code == 200
    assert response.json()["rho_upper"] == "3/20"


def test_audit_is_saved_and_listed(client):
    response = client.post("/api/audit", json={"f": "x + y^2", "g": "y", "name": "parabola"})
    assert response.status_code == 201
    body = response.json()
    assert body["passed"] is False
    record_id = body["record_id"]
    assert record_id is not None

    records = client.get("/api/audit/records").json()
    assert any(r["id"] == record_id and r["name"] == "parabola" for r in records)

    detail = client.get(f"/api/audit/records/{record_id}").json()
    assert detail["report"]["dependence"]["P"] == "G^2 - F + x"
    assert detail["error_count"] == len(body["errors"])


def test_audit_without_saving(client):
    response = client.post("/api/audit", json={"f": "x + y^2", "g": "y", "shift": ["1", "1"], "save": False})
    assert response.status_code == 201
    body = response.json()
    assert body["record_id"] is None
    assert body["dependence"]["P"] == "G^2 + 2*G - F + x"


def test_missing_record(client):
    assert client.get("/api/audit/records/999999").status_code == 404


@pytest.mark.parametrize("url, payload, stage", [
    ("/api/geometry/polygon", {"f": "x + z"}, "parse"),
    ("/api/series/expand", {"f": "y^2", "g": "y^3"}, "expand"),
    ("/api/audit/bounds", {"m": 3, "n": 3, "a0": 2, "b0": 3}, "bounds"),
    ("/api/puiseux/branches", {"f": "y - x", "direction": "sideways"}, "puiseux"),
])
def test_errors_are_structured(client, url, payload, stage):
    response = client.post(url, json=payload)
    assert response.status_code == 400
    assert response.json()["detail"]["stage"] == stage
