"""Command-line client of the distance service.

Every subcommand builds an HTTP request against the FastAPI app; with no
--server option the app runs in-process, so the CLI works offline while
exercising exactly the service code path.  Exit codes: 2 parse error,
3 unknown state, 4 triangle/squared-triangle violation.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click

EXIT_PARSE = 2
EXIT_UNKNOWN_STATE = 3
EXIT_VIOLATION = 4

_EXIT_FOR_CODE = {
    "parse-error": EXIT_PARSE,
    "invalid-config": EXIT_PARSE,
    "invalid-metric": EXIT_PARSE,
    "not-commutative": EXIT_PARSE,
    "no-closed-form": EXIT_PARSE,
    "dimension-cap": EXIT_PARSE,
    "unknown-state": EXIT_UNKNOWN_STATE,
    "triangle-violation": EXIT_VIOLATION,
    "squared-triangle-violation": EXIT_VIOLATION,
}


class _Client:
    """POSTs either to a remote server or to the in-process app."""

    def __init__(self, server: str | None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server.rstrip("/"), timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from starlette.testclient import TestClient

            from .service.app import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> dict:
        resp = self._client.post(path, json=payload)
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail")
            except Exception:
                detail = None
            if isinstance(detail, dict) and "code" in detail:
                code = detail["code"]
                click.echo(f"error ({code}): {detail.get('message', '')}", err=True)
                sys.exit(_EXIT_FOR_CODE.get(code, 1))
            click.echo(f"error: HTTP {resp.status_code}: {resp.text}", err=True)
            sys.exit(1)
        return resp.json()


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        click.echo(f"error (parse-error): no such file: {path}", err=True)
        sys.exit(EXIT_PARSE)
    except json.JSONDecodeError as exc:
        click.echo(f"error (parse-error): {path}:{exc.lineno}:{exc.colno}: {exc.msg}", err=True)
        sys.exit(EXIT_PARSE)


def _fmt(v: float | None) -> str:
    return "inf" if v is None else f"{v:.10g}"


@click.group()
@click.option("--server", envvar="NCMETRIC_SERVER", default=None,
              help="Base URL of a running service; default runs in-process.")
@click.pass_context
def main(ctx, server):
    """Spectral distances on finite noncommutative geometries."""
    ctx.obj = _Client(server)


@main.command()
@click.argument("file", type=click.Path())
@click.argument("state_a")
@click.argument("state_b")
@click.option("--method", type=click.Choice(["auto", "oracle", "closed-form"]), default="auto")
@click.option("--tol", type=float, default=None, help="Oracle relative tolerance.")
@click.option("--seed", type=int, default=0)
@click.option("--witness", is_flag=True, help="Print the optimizing element's coordinates.")
@click.pass_obj
def distance(client, file, state_a, state_b, method, tol, seed, witness):
    """Distance between two named states of a triple document."""
    payload = {
        "document": _load_json(file),
        "state_a": state_a,
        "state_b": state_b,
        "method": method,
        "tol": tol,
        "seed": seed,
        "witness": witness,
    }
    out = client.post("/distance", payload)
    click.echo(f"{_fmt(out['value'])}  method={out['method']}")
    if not out.get("converged", True):
        click.echo("warning: oracle did not certify convergence; value is a lower bound", err=True)
    if witness and out.get("witness") is not None:
        click.echo("witness: " + json.dumps(out["witness"]))


@main.command()
@click.argument("file", type=click.Path())
@click.option("--method", type=click.Choice(["auto", "oracle", "closed-form"]), default="auto")
@click.option("--tol", type=float, default=None)
@click.option("--seed", type=int, default=0)
@click.option("--format", "fmt", type=click.Choice(["table", "csv"]), default="table")
@click.option("--parallel", type=int, default=1)
@click.pass_obj
def matrix(client, file, method, tol, seed, fmt, parallel):
    """Pairwise distance matrix over all declared states."""
    payload = {
        "document": _load_json(file),
        "method": method,
        "tol": tol,
        "seed": seed,
        "parallel": parallel,
    }
    out = client.post("/matrix", payload)
    names = out["states"]
    values = out["values"]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow([""] + names)
        for name, row in zip(names, values):
            writer.writerow([name] + ["" if v is None else f"{v:.12g}" for v in row])
        click.echo(buf.getvalue().rstrip("\n"))
        click.echo("# infinite-mask")
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow([""] + names)
        for name, row in zip(names, out["infinite_mask"]):
            writer.writerow([name] + row)
        click.echo(buf.getvalue().rstrip("\n"))
        return
    width = max(len(n) for n in names) + 2
    header = " " * width + "".join(f"{n:>14}" for n in names)
    click.echo(header)
    for name, row in zip(names, values):
        cells = "".join(f"{_fmt(v):>14}" for v in row)
        click.echo(f"{name:<{width}}{cells}")


@main.command()
@click.argument("a", type=float)
@click.argument("b", type=float)
@click.argument("c", type=float)
@click.pass_obj
def invert3(client, a, b, c):
    """Couplings of a three-point space realizing distances (a, b, c)."""
    out = client.post("/invert3", {"a": a, "b": b, "c": c})
    for name, value in zip(["D12", "D13", "D23"], out["couplings"]):
        note = "  (deleted-link)" if name in out["deleted_links"] else ""
        click.echo(f"{name} = {value:.12g}{note}")


@main.command()
@click.argument("metric_csv", type=click.Path())
@click.option("--output", "-o", type=click.Path(), default=None,
              help="Write the triple document here (default: stdout).")
@click.pass_obj
def realize(client, metric_csv, output):
    """Build a triple document whose distances reproduce a metric CSV."""
    try:
        with open(metric_csv, newline="") as fh:
            rows = [[cell.strip() for cell in row if cell.strip() != ""]
                    for row in csv.reader(fh) if row]
    except FileNotFoundError:
        click.echo(f"error (parse-error): no such file: {metric_csv}", err=True)
        sys.exit(EXIT_PARSE)
    out = client.post("/realize", {"metric": rows})
    text = json.dumps(out["document"], indent=2)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
        click.echo(f"wrote {output}")
    else:
        click.echo(text)


def _parse_complex(text: str) -> list[float]:
    text = text.strip()
    if "," in text:
        re_, im = text.split(",", 1)
        return [float(re_), float(im)]
    try:
        z = complex(text.replace(" ", ""))
    except ValueError:
        click.echo(f"error (parse-error): cannot read complex number {text!r}", err=True)
        sys.exit(EXIT_PARSE)
    return [z.real, z.imag]


@main.command()
@click.argument("config", type=click.Path())
@click.argument("h1")
@click.argument("h2")
@click.option("--verify", is_flag=True, help="Also compare against the direct ||Phi M||^2.")
@click.pass_obj
def sm(client, config, h1, h2, verify):
    """Standard-model g^tt and fiber distance for a Higgs doublet value.

    H1 and H2 are complex, written as "re,im" or a Python literal like
    "0.3+0.2j"; put "--" before negative values so they are not read as
    options.
    """
    payload = {
        "config": _load_json(config),
        "h1": _parse_complex(h1),
        "h2": _parse_complex(h2),
        "verify": verify,
    }
    out = client.post("/sm", payload)
    click.echo(f"gtt = {out['gtt']:.12g}")
    click.echo(f"distance = {_fmt(out['distance'])}")
    if verify and out.get("residual") is not None:
        click.echo(f"verify-residual = {out['residual']:.3e}")
    for note in out.get("warnings", []):
        click.echo(f"note: {note}", err=True)


@main.command()
@click.argument("file", type=click.Path())
@click.pass_obj
def graph(client, file):
    """Dirac graph of a commutative document plus geodesic bounds."""
    out = client.post("/graph", {"document": _load_json(file)})
    click.echo(f"{out['n']} points, {len(out['edges'])} links")
    for i, j, length in out["edges"]:
        click.echo(f"  {int(i)} -- {int(j)}  length {length:.12g}")
    click.echo("geodesic lengths:")
    for i, row in enumerate(out["geodesics"]):
        cells = "  ".join(_fmt(v) for v in row)
        click.echo(f"  [{i}] {cells}")


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("ncmetric.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
