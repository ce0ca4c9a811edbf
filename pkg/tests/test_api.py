from __future__ import annotations

RB3_REQUEST = {
    "generators": ["alpha", "beta", "gamma"],
    "relators": ["alpha gamma beta^-1 gamma^-1", "beta gamma alpha^-1 gamma^-1"],
    "degree": 3,
    "images": {"alpha": [[2, 3]], "beta": [[1, 2]], "gamma": [[1, 3]]},
    "transversal": ["1", "alpha", "beta", "gamma", "alpha beta", "beta alpha"],
}


def test_health(client, settings):
    response = client.get("/api/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "app_name": settings.app_name}


def test_builtins(client):
    names = client.get("/api/builtins").json()["names"]
    assert "gamma3" in names and "lift_commutator" in names


def test_member_points(client):
    response = client.post("/api/member", json={"points": ["0", "1", "2"]})
    assert response.status_code == 200
    assert response.json()["in_qf"] is False
    assert response.json()["witness"] == "S_13"


def test_member_polynomial(client):
    body = client.post("/api/member", json={"polynomial": "X^3 - 3*X"}).json()
    assert body["in_c"] and body["in_qc"] and body["in_rc"]
    assert body["cubic_gap"] == "9"


def test_member_rejects_bad_input(client):
    assert client.post("/api/member", json={}).status_code == 422
    assert client.post("/api/member", json={"polynomial": "X^2 + t"}).status_code == 400
    assert client.post("/api/member", json={"points": ["0", "1.5", "2"]}).status_code == 400


def test_sij(client):
    response = client.get("/api/sij", params={"m": 3, "i": 1, "j": 2})
    assert response.json()["polynomial"] == "2*z1 + 2*z2 - 4*z3"
    assert client.get("/api/sij", params={"m": 3, "i": 1, "j": 1}).status_code == 400
    assert client.get("/api/sij", params={"m": 2, "i": 1, "j": 2}).status_code == 422


def test_trace_builtin(client):
    body = client.post("/api/trace", json={"builtin": "alpha3"}).json()
    assert body["permutation"] == [0, 2, 1]
    assert body["crossings"] >= 1


def test_trace_loop_text(client):
    body = client.post("/api/trace", json={"loop": "loop n=3 space=RC { [0,1]: X^3 - 3*E(2t)*X }"}).json()
    assert body["permutation"] == [2, 1, 0]


def test_trace_rejects_ambiguous_source(client):
    response = client.post("/api/trace", json={"builtin": "gamma3", "loop": "loop n=1 { [0,1]: X }"})
    assert response.status_code == 400
    assert client.post("/api/trace", json={"loop": "loop n=1 { [0,1]: Y }"}).status_code == 400


def test_present_rb3(client):
    body = client.post("/api/present", json=RB3_REQUEST).json()
    assert (body["raw_generators"], body["raw_relators"]) == (13, 12)
    assert len(body["generators"]) == 5 and len(body["relators"]) == 4
    assert body["definitions"]["s[gamma,gamma]"] == "gamma gamma"
    assert not body["partial"]


def test_present_raw(client):
    body = client.post("/api/present", json={**RB3_REQUEST, "simplify": False}).json()
    assert len(body["generators"]) == 13


def test_present_rejects_bad_transversal(client):
    response = client.post("/api/present", json={**RB3_REQUEST, "transversal": ["1", "alpha"]})
    assert response.status_code == 400


def test_realfib_endpoints(client):
    minmax = client.post("/api/realfib/minmax", json={"polynomial": "3*X^2 - 3"}).json()
    assert (minmax["m"], minmax["M"], minmax["in_qc_real"]) == ("-2", "2", True)
    ev0 = client.post("/api/realfib/ev0", json={"polynomial": "X^3 - 3*X"}).json()
    assert ev0["value"] == "1/2"
    assert client.post("/api/realfib/ev0", json={"polynomial": "X^2 + 1"}).status_code == 400


def test_realfib_counterexample(client):
    body = client.post("/api/realfib/counterexample", json={"degree": 4}).json()
    assert body["gap"] > 7
    assert client.post("/api/realfib/counterexample", json={"degree": 3}).status_code == 422


def test_trace_collision_is_unprocessable(client):
    response = client.post("/api/trace", json={"loop": "loop n=2 { [0,1]: X^2 - 1/2 - 1/2*E(2t) }"})
    assert response.status_code == 422
