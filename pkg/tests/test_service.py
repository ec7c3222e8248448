import math
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from starlette.testclient import TestClient

from ncmetric.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def two_point_doc(k=1.0):
    return {
        "algebra": [{"kind": "complex_line"}, {"kind": "complex_line"}],
        "slots": [{"block": 0, "mode": "scalar"}, {"block": 1, "mode": "scalar"}],
        "dirac": [[0, k], [k, 0]],
        "states": {"a": {"block": 0}, "b": {"block": 1}},
    }


def m2_doc():
    return {
        "algebra": [{"kind": "matrix", "size": 2}],
        "slots": [{"block": 0, "mode": "fundamental"}],
        "dirac": [[0.0, 0.0], [0.0, 1.0]],
        "states": {
            "north": {"block": 0, "vector": [1, 0]},
            "plus": {"block": 0, "vector": [[0.7071067811865476, 0], [0.7071067811865476, 0]]},
            "minus": {"block": 0, "vector": [[0.7071067811865476, 0], [-0.7071067811865476, 0]]},
        },
    }


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}


def test_distance_closed_form(client):
    r = client.post("/distance", json={"document": two_point_doc(2.0), "state_a": "a", "state_b": "b"})
    body = r.json()
    assert r.status_code == 200
    assert body["value"] == pytest.approx(0.5)
    assert body["method"] == "closed-form:two-point"
    assert not body["infinite"]


def test_distance_kernel_test_reports_infinite(client):
    r = client.post("/distance", json={"document": m2_doc(), "state_a": "north", "state_b": "plus"})
    body = r.json()
    assert body["infinite"] and body["value"] is None
    assert body["method"] == "kernel-test"


def test_distance_methods_agree(client):
    for method in ("auto", "oracle", "closed-form"):
        r = client.post("/distance", json={
            "document": m2_doc(), "state_a": "plus", "state_b": "minus", "method": method,
        })
        assert r.json()["value"] == pytest.approx(2.0, abs=1e-4)


def _commutative_doc(dirac, n):
    return {
        "algebra": [{"kind": "complex_line"}] * n,
        "slots": [{"block": i, "mode": "scalar"} for i in range(n)],
        "dirac": dirac,
        "states": {f"p{i}": {"block": i} for i in range(n)},
    }


def test_methods_agree_on_every_closed_form(client):
    # oracle and closed form agree within 1e-4 on each supported pattern
    docs = [
        _commutative_doc([[0, 1.7], [1.7, 0]], 2),
        _commutative_doc([[0, 0.9, 1.2], [0.9, 0, 0.6], [1.2, 0.6, 0]], 3),
        _commutative_doc([[0 if i == j else 1.1 for j in range(4)] for i in range(4)], 4),
        _commutative_doc([
            [0, 1.0, 0, 0.8],
            [1.0, 0, 1.3, 0],
            [0, 1.3, 0, 0.7],
            [0.8, 0, 0.7, 0],
        ], 4),
    ]
    for doc in docs:
        names = list(doc["states"])
        for a in names:
            for b in names:
                if a >= b:
                    continue
                values = {}
                for method in ("closed-form", "oracle"):
                    r = client.post("/distance", json={
                        "document": doc, "state_a": a, "state_b": b, "method": method,
                    })
                    assert r.status_code == 200, r.text
                    values[method] = r.json()["value"]
                assert values["oracle"] == pytest.approx(
                    values["closed-form"], abs=1e-4 * max(1.0, values["closed-form"])
                )


def test_distance_unknown_state(client):
    r = client.post("/distance", json={"document": two_point_doc(), "state_a": "a", "state_b": "zz"})
    assert r.status_code == 404
    assert r.json()["detail"]["code"] == "unknown-state"


def test_distance_parse_error(client):
    doc = two_point_doc()
    doc["dirac"] = [[0, "bad"], ["bad", 0]]
    r = client.post("/distance", json={"document": doc, "state_a": "a", "state_b": "b"})
    assert r.status_code == 400
    assert r.json()["detail"]["code"] == "parse-error"


def test_distance_witness_payload(client):
    r = client.post("/distance", json={
        "document": two_point_doc(1.0), "state_a": "a", "state_b": "b",
        "method": "oracle", "witness": True,
    })
    body = r.json()
    assert body["witness"] is not None
    assert len(body["witness"]) == 2  # one coordinate per block


def test_matrix_with_mask(client):
    r = client.post("/matrix", json={"document": m2_doc()})
    body = r.json()
    assert body["states"] == ["north", "plus", "minus"]
    values = body["values"]
    mask = body["infinite_mask"]
    assert values[1][2] == pytest.approx(2.0, abs=1e-4)
    assert mask[0][1] == 1 and values[0][1] is None
    assert mask[1][2] == 0
    assert values[0][0] == 0.0


def test_matrix_parallel_matches_serial(client):
    doc = two_point_doc(1.3)
    a = client.post("/matrix", json={"document": doc}).json()
    b = client.post("/matrix", json={"document": doc, "parallel": 2}).json()
    assert a["values"] == b["values"]


def test_matrix_no_states(client):
    doc = two_point_doc()
    doc.pop("states")
    r = client.post("/matrix", json={"document": doc})
    assert r.status_code == 404


def test_invert3_and_violation(client):
    r = client.post("/invert3", json={"a": 1.0, "b": 1.0, "c": 1.0})
    body = r.json()
    assert body["couplings"] == pytest.approx([math.sqrt(2 / 3)] * 3)
    assert body["deleted_links"] == []

    r = client.post("/invert3", json={"a": 3.0, "b": 1.0, "c": 1.0})
    assert r.status_code == 422
    assert r.json()["detail"]["code"] == "squared-triangle-violation"
    assert "b^2 + c^2 >= a^2" in r.json()["detail"]["message"]


def test_invert3_deleted_link(client):
    a = math.sqrt(2.0)
    r = client.post("/invert3", json={"a": a, "b": 1.0, "c": 1.0})
    body = r.json()
    assert body["deleted_links"] == ["D12"]
    assert body["couplings"][0] == 0.0


def test_realize_round_trip(client):
    r = client.post("/realize", json={"metric": [[0, 2.0], [2.0, 0]]})
    doc = r.json()["document"]
    r2 = client.post("/distance", json={"document": doc, "state_a": "p0", "state_b": "p1"})
    assert r2.json()["value"] == pytest.approx(2.0, abs=1e-4)


def test_realize_inf_entries(client):
    metric = [[0, 1.0, "inf"], [1.0, 0, "inf"], ["inf", "inf", 0]]
    r = client.post("/realize", json={"metric": metric})
    doc = r.json()["document"]
    r2 = client.post("/distance", json={"document": doc, "state_a": "p0", "state_b": "p2"})
    assert r2.json()["infinite"]


def test_realize_triangle_violation(client):
    r = client.post("/realize", json={"metric": [[0, 5.0, 1.0], [5.0, 0, 1.0], [1.0, 1.0, 0]]})
    assert r.status_code == 422
    assert r.json()["detail"]["code"] == "triangle-violation"


def test_sm_endpoint(client):
    config = {"up": [172.0, 1.27, 0.002], "down": [4.18, 0.095, 0.005], "lepton": [1.77, 0.105, 0.0005]}
    r = client.post("/sm", json={"config": config, "h1": [0, 0], "h2": [0, 0], "verify": True})
    body = r.json()
    assert body["gtt"] == pytest.approx(172.0**2)
    assert body["distance"] == pytest.approx(1 / 172.0)
    assert body["residual"] <= 1e-10

    r = client.post("/sm", json={"config": config, "h1": [-1, 0], "h2": [0, 0]})
    body = r.json()
    assert body["infinite"] and body["distance"] is None


def test_sm_invalid_config(client):
    r = client.post("/sm", json={"config": {"up": [1], "down": [1], "lepton": [-1]},
                                 "h1": [0, 0], "h2": [0, 0]})
    assert r.status_code == 422
    assert r.json()["detail"]["code"] == "invalid-config"


def test_graph_endpoint(client):
    r = client.post("/graph", json={"document": two_point_doc(2.0)})
    body = r.json()
    assert body["n"] == 2
    assert body["edges"] == [[0.0, 1.0, 0.5]]
    assert body["geodesics"][0][1] == pytest.approx(0.5)


def test_graph_disconnected_mask(client):
    doc = two_point_doc(0.0)
    r = client.post("/graph", json={"document": doc})
    body = r.json()
    assert body["infinite_mask"][0][1] == 1
    assert body["geodesics"][0][1] is None
