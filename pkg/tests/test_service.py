import json
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from starlette.testclient import TestClient

from cknlab.service import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app, raise_server_exceptions=False) as c:
        yield c


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "ok"
    assert body["version"]


def test_constants_ckn(client):
    response = client.post(
        "/constants",
        json={"kind": "ckn_radial", "d": 3, "a": 0.0, "p": 4.0, "theta": 0.75},
    )
    assert response.status_code == 200
    assert response.json()["value"] == pytest.approx(0.26596152026762179, rel=1e-12)


def test_constants_error_tag(client):
    response = client.post(
        "/constants",
        json={"kind": "ckn_radial", "d": 3, "a": 0.9, "p": 4.0, "theta": 0.75},
    )
    assert response.status_code == 422
    assert response.json()["tag"] == "weight-range"


def test_constants_thresholds(client):
    response = client.post(
        "/constants", json={"kind": "thresholds", "d": 2, "a": -1.0, "p": 4.0}
    )
    assert response.status_code == 200
    body = response.json()["thresholds"]
    assert body["a_star"] is None
    assert body["a_bar_sb"] == pytest.approx(-0.57735026918962576)


def test_ground_state_endpoint(client):
    response = client.post("/ground-state", json={"p": 4.0, "d": 3})
    assert response.status_code == 200
    body = response.json()
    assert 4.3 < body["u0"] < 4.4
    assert body["gn_constant"] == pytest.approx(0.20183186597707245, rel=1e-8)
    assert len(body["r_grid"]) == len(body["u_values"])
    assert max(body["identity_residuals"].values()) < 1e-6


def test_minimize_endpoint(client):
    response = client.post(
        "/minimize",
        json={
            "family": "ckn_radial",
            "d": 3,
            "a": 0.0,
            "p": 4.0,
            "theta": 0.8,
            "grid_spec": {"n_xi": 1},
            "include_field": True,
        },
    )
    assert response.status_code == 200
    body = response.json()
    assert body["converged"]
    assert body["constant_estimate"] == pytest.approx(0.27955, rel=1e-3)
    assert body["field"]["xi_grid"] is None
    assert len(body["field"]["s_grid"]) == 801


def test_minimize_rejects_boundary(client):
    response = client.post(
        "/minimize",
        json={"family": "ckn_radial", "d": 3, "a": 0.0, "p": 2.0, "theta": 0.5},
    )
    assert response.status_code == 422
    assert response.json()["tag"] == "domain"


def test_regions_endpoint(client):
    config = {
        "mode": "wlh",
        "d": 3,
        "a": {"min": -1.0, "max": 0.0, "count": 2},
        "gamma": {"min": 1.0, "max": 1.0, "count": 1},
    }
    response = client.post("/regions", json=config)
    assert response.status_code == 200
    body = response.json()
    assert body["mode"] == "wlh"
    assert len(body["rows"]) == 2
    assert body["rows"][0]["existence_guaranteed"] == "true"


def test_verify_endpoint(client):
    response = client.post("/verify", json={"suite": "closed-forms"})
    assert response.status_code == 200
    body = response.json()
    assert body["all_passed"]
    assert len(body["results"]) == 5


def test_openapi_lists_endpoints(client):
    spec = client.get("/openapi.json").json()
    for path in ("/health", "/constants", "/ground-state", "/minimize", "/regions", "/verify"):
        assert path in spec["paths"]


def test_cli_verify_and_regions(tmp_path):
    from click.testing import CliRunner

    from cknlab.cli import main

    runner = CliRunner()
    result = runner.invoke(
        main,
        ["constants", json.dumps({"kind": "gross_ls", "d": 3})],
        catch_exceptions=False,
    )
    assert result.exit_code == 0
    assert "0.078066" in result.output

    config = {
        "mode": "wlh",
        "d": 3,
        "a": {"min": -1.0, "max": 0.0, "count": 2},
        "gamma": {"min": 1.0, "max": 1.0, "count": 1},
        "output_path": str(tmp_path / "out.csv"),
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    result = runner.invoke(main, ["regions", str(path)], catch_exceptions=False)
    assert result.exit_code == 0
    text = (tmp_path / "out.csv").read_text()
    assert text.splitlines()[0] == "# cknlab-region-csv v1"
    assert len(text.splitlines()) == 4


def test_cli_error_reporting():
    from click.testing import CliRunner

    from cknlab.cli import main

    runner = CliRunner()
    result = runner.invoke(
        main,
        ["constants", json.dumps({"kind": "ckn_radial", "d": 3, "a": 2.0, "p": 4.0, "theta": 0.8})],
    )
    assert result.exit_code == 1
