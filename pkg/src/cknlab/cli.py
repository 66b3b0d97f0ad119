"""Command-line front end.

The CLI is a thin client of the HTTP service.  By default it talks to an
in-process instance over an ASGI transport (no server needed); ``--url``
points it at a remote server instead.  File outputs (CSV, run records)
are always written client-side so their bytes do not depend on transport.
"""

from __future__ import annotations

import csv
import json
import sys

import click
import httpx

from . import __version__, regions as regions_mod

DEFAULT_TIMEOUT = 3600.0


def _client(url: str | None) -> httpx.Client:
    if url:
        return httpx.Client(base_url=url, timeout=DEFAULT_TIMEOUT)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient
    from .service import app

    return TestClient(app, raise_server_exceptions=False)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    response = client.post(path, json=payload)
    if response.status_code != 200:
        try:
            body = response.json()
        except ValueError:
            body = {"message": response.text}
        click.echo(
            f"error [{body.get('tag', response.status_code)}]: "
            f"{body.get('message', body)}",
            err=True,
        )
        sys.exit(1)
    return response.json()


@click.group()
@click.version_option(version=__version__)
@click.option("--url", default=None, help="Base URL of a running service; in-process by default.")
@click.pass_context
def main(ctx: click.Context, url: str | None) -> None:
    """Numerical toolkit for weighted interpolation inequalities."""
    ctx.ensure_object(dict)
    ctx.obj["url"] = url


@main.command()
@click.argument("json_params")
@click.pass_context
def constants(ctx: click.Context, json_params: str) -> None:
    """Evaluate a closed-form constant; JSON_PARAMS like '{"kind": "ckn_radial", ...}'."""
    payload = json.loads(json_params)
    with _client(ctx.obj["url"]) as client:
        result = _post(client, "/constants", payload)
    click.echo(json.dumps(result, indent=2, sort_keys=True))


@main.command("ground-state")
@click.option("--p", "p", type=float, required=True)
@click.option("--d", "d", type=int, required=True)
@click.option("--tol", type=float, default=1e-12, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the profile as CSV (columns r, u).")
@click.pass_context
def ground_state_cmd(ctx: click.Context, p: float, d: int, tol: float, out: str | None) -> None:
    """Solve the radial ground state and report its moments and constant."""
    with _client(ctx.obj["url"]) as client:
        result = _post(client, "/ground-state", {"p": p, "d": d, "tol": tol})
    if out:
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["r", "u"])
            for rr, uu in zip(result["r_grid"], result["u_values"]):
                writer.writerow([format(rr, ".17g"), format(uu, ".17g")])
    summary = {k: v for k, v in result.items() if k not in ("r_grid", "u_values")}
    summary["n_samples"] = len(result["r_grid"])
    click.echo(json.dumps(summary, indent=2, sort_keys=True))


@main.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the run record as JSON.")
@click.option("--field-out", type=click.Path(dir_okay=False), default=None, help="Write the extremal field as CSV (columns s, xi, value).")
@click.pass_context
def minimize(ctx: click.Context, config: str, out: str | None, field_out: str | None) -> None:
    """Run one minimization described by a JSON config file."""
    with open(config) as fh:
        payload = json.load(fh)
    if field_out:
        payload["include_field"] = True
    with _client(ctx.obj["url"]) as client:
        result = _post(client, "/minimize", payload)
    field = result.pop("field", None)
    if field_out:
        if field is None:
            click.echo("error: service returned no field data", err=True)
            sys.exit(1)
        xi = field["xi_grid"] if field["xi_grid"] is not None else [0.0]
        with open(field_out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["s", "xi", "value"])
            for i, s in enumerate(field["s_grid"]):
                for j, x in enumerate(xi):
                    writer.writerow(
                        [format(s, ".17g"), format(x, ".17g"), format(field["values"][i][j], ".17g")]
                    )
    record = {"request": payload, "result": result}
    text = json.dumps(record, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    click.echo(text)


@main.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Override the config's output_path.")
@click.pass_context
def regions(ctx: click.Context, config: str, out: str | None) -> None:
    """Sweep a parameter plane and write the region report CSV."""
    with open(config) as fh:
        payload = json.load(fh)
    with _client(ctx.obj["url"]) as client:
        result = _post(client, "/regions", payload)
    report = regions_mod.RegionReport(
        mode=result["mode"],
        columns=result["columns"],
        rows=[regions_mod.RegionRow(values=row) for row in result["rows"]],
    )
    path = out or payload.get("output_path")
    text = regions_mod.report_to_csv(report)
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
        click.echo(f"wrote {len(report.rows)} rows to {path}")
    else:
        click.echo(text, nl=False)


@main.command()
@click.argument("suite", type=click.Choice(["identities", "closed-forms", "minimizer", "all"]))
@click.pass_context
def verify(ctx: click.Context, suite: str) -> None:
    """Run a named cross-check suite; exit code 0 iff every check passes."""
    with _client(ctx.obj["url"]) as client:
        result = _post(client, "/verify", {"suite": suite})
    for check in result["results"]:
        status = "PASS" if check["passed"] else "FAIL"
        click.echo(
            f"{status}  {check['name']}  worst={check['worst_residual']:.3e}  {check['detail']}"
        )
    passed = sum(c["passed"] for c in result["results"])
    click.echo(f"{passed}/{len(result['results'])} checks passed")
    if not result["all_passed"]:
        sys.exit(1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("cknlab.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
