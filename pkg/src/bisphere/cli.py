"""Command-line front end.

Thin client over the service handlers: by default each subcommand calls
the handler in process; with --server (or BISPHERE_SERVER) the same
request goes to a running instance over HTTP.  Reports are UTF-8 JSON,
wavefunction tables are CSV with a theta,phi,value header, and the Gram
matrix ships as CSV next to a JSON summary.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage or parameter
error.
"""

from __future__ import annotations

import json
import sys
from typing import Optional

import click
from fastapi import HTTPException
from pydantic import BaseModel, ValidationError

from . import service


_ROUTES = {
    "/verify/s2": (service.verify_s2, service.S2Request),
    "/spectrum": (service.spectrum, service.SpectrumRequest),
    "/verify/racah": (service.verify_racah, service.RacahRequest),
    "/verify/tilde": (service.verify_tilde, service.TildeRequest),
    "/verify/plane": (service.verify_plane, service.PlaneRequest),
    "/verify/contraction": (service.verify_contraction, service.ContractionRequest),
    "/wavefunction": (service.wavefunction, service.WavefunctionRequest),
    "/orthogonality": (service.orthogonality, service.OrthogonalityRequest),
    "/matrix": (service.matrix, service.MatrixRequest),
    "/suite": (service.full_suite, service.FullSuiteRequest),
}


def _call(ctx: click.Context, path: str, body: dict) -> dict:
    server = ctx.obj.get("server")
    if server:
        import httpx

        resp = httpx.post(server.rstrip("/") + path, json=body, timeout=None)
        if resp.status_code == 422:
            detail = resp.json().get("detail", "invalid request")
            raise click.UsageError(
                detail if isinstance(detail, str) else json.dumps(detail)
            )
        resp.raise_for_status()
        return resp.json()
    handler, request_cls = _ROUTES[path]
    try:
        req = request_cls(**body)
        out = handler(req)
    except ValidationError as exc:
        raise click.UsageError(str(exc))
    except HTTPException as exc:
        raise click.UsageError(str(exc.detail))
    return out.model_dump(mode="json") if isinstance(out, BaseModel) else out


def _emit_report(report: dict, out: Optional[str]) -> int:
    text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        counts = {"pass": 0, "fail": 0, "skipped": 0}
        for check in report["checks"]:
            counts[check["status"]] += 1
        click.echo(
            f"{report['kind']}: {report['overall']} "
            f"({counts['pass']} passed, {counts['fail']} failed, "
            f"{counts['skipped']} skipped) -> {out}"
        )
    else:
        click.echo(text, nl=False)
    return 0 if report["overall"] == "pass" else 1


def _mu_options(fn):
    for name, default in (("--mu3", "1/7"), ("--mu2", "1/5"), ("--mu1", "1/3")):
        fn = click.option(
            name, default=default, show_default=True, help="rational p/q"
        )(fn)
    return fn


_out_option = click.option(
    "--out", default=None, type=click.Path(dir_okay=False), help="output path"
)


@click.group()
@click.option(
    "--server",
    default=None,
    envvar="BISPHERE_SERVER",
    help="base URL of a running service; default runs in process",
)
@click.pass_context
def main(ctx: click.Context, server: Optional[str]):
    """Exact verification and spectral tools for the reflection sphere model."""
    ctx.obj = {"server": server}


@main.group()
def verify():
    """Verification suites producing JSON reports."""


@verify.command("s2")
@_mu_options
@click.option("--degree", default=6, show_default=True, type=int)
@click.option("--seed", default=None, type=int)
@click.option("--random-params", "random_params", default=0, show_default=True, type=int)
@_out_option
@click.pass_context
def verify_s2(ctx, mu1, mu2, mu3, degree, seed, random_params, out):
    """Exact symmetry-algebra identities on the sphere."""
    body = {
        "mu1": mu1,
        "mu2": mu2,
        "mu3": mu3,
        "degree": degree,
        "random_params": random_params,
    }
    if seed is not None:
        body["seed"] = seed
    sys.exit(_emit_report(_call(ctx, "/verify/s2", body), out))


@verify.command("racah")
@_mu_options
@click.option("--degree", default=4, show_default=True, type=int)
@click.option(
    "--mode",
    default="both",
    show_default=True,
    type=click.Choice(["diff", "ladder", "both"]),
)
@click.option("--cutoff", default=12, show_default=True, type=int)
@_out_option
@click.pass_context
def verify_racah(ctx, mu1, mu2, mu3, degree, mode, cutoff, out):
    """Coupled-oscillator Casimir identities; records the measured signs."""
    body = {
        "mu1": mu1,
        "mu2": mu2,
        "mu3": mu3,
        "degree": degree,
        "mode": mode,
        "cutoff": cutoff,
    }
    report = _call(ctx, "/verify/racah", body)
    code = _emit_report(report, out)
    if out:
        for check in report["checks"]:
            if check["id"].startswith("pair.casimir."):
                click.echo(f"{check['id']}: {check['residual']}")
    sys.exit(code)


@verify.command("tilde")
@_mu_options
@click.option("--degree", default=6, show_default=True, type=int)
@_out_option
@click.pass_context
def verify_tilde(ctx, mu1, mu2, mu3, degree, out):
    """Bare rotation-flow bracket relations on the sphere."""
    body = {"mu1": mu1, "mu2": mu2, "mu3": mu3, "degree": degree}
    sys.exit(_emit_report(_call(ctx, "/verify/tilde", body), out))


@verify.command("plane")
@click.option("--mu1", default="1/3", show_default=True, help="rational p/q")
@click.option("--mu2", default="1/5", show_default=True, help="rational p/q")
@click.option("--cutoff", default=14, show_default=True, type=int)
@_out_option
@click.pass_context
def verify_plane(ctx, mu1, mu2, cutoff, out):
    """Planar two-mode model conservation checks."""
    body = {"mu1": mu1, "mu2": mu2, "cutoff": cutoff}
    sys.exit(_emit_report(_call(ctx, "/verify/plane", body), out))


@verify.command("contraction")
@click.option("--mu1", default="1/3", show_default=True, help="rational p/q")
@click.option("--mu2", default="1/5", show_default=True, help="rational p/q")
@click.option("--N", "level", default=3, show_default=True, type=int)
@click.option("--e3", default=None, type=int, help="polar parity label 0/1; default both")
@click.option("--r", "radii", default="10,100,1000", show_default=True, help="comma list")
@_out_option
@click.pass_context
def verify_contraction(ctx, mu1, mu2, level, e3, radii, out):
    """Exact large-radius contraction identity."""
    body = {
        "mu1": mu1,
        "mu2": mu2,
        "level": level,
        "radii": [r.strip() for r in radii.split(",") if r.strip()],
    }
    if e3 is not None:
        body["e3"] = e3
    sys.exit(_emit_report(_call(ctx, "/verify/contraction", body), out))


@main.command()
@_mu_options
@click.option("--degree", default=6, show_default=True, type=int)
@_out_option
@click.pass_context
def spectrum(ctx, mu1, mu2, mu3, degree, out):
    """Spectrum certificate plus both separation certificates."""
    body = {"mu1": mu1, "mu2": mu2, "mu3": mu3, "degree": degree}
    sys.exit(_emit_report(_call(ctx, "/spectrum", body), out))


@main.command()
@_mu_options
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--random-params", "random_params", default=2, show_default=True, type=int)
@click.option("--degree", default=6, show_default=True, type=int)
@click.option("--cutoff", default=12, show_default=True, type=int)
@click.option("--plane-cutoff", "plane_cutoff", default=14, show_default=True, type=int)
@click.option("--nodes", default=200, show_default=True, type=int)
@_out_option
@click.pass_context
def suite(ctx, mu1, mu2, mu3, seed, random_params, degree, cutoff, plane_cutoff, nodes, out):
    """Every suite at the given parameters plus seeded random triples."""
    body = {
        "mu1": mu1,
        "mu2": mu2,
        "mu3": mu3,
        "seed": seed,
        "random_params": random_params,
        "degree": degree,
        "cutoff": cutoff,
        "plane_cutoff": plane_cutoff,
        "nodes": nodes,
    }
    sys.exit(_emit_report(_call(ctx, "/suite", body), out))


@main.command()
@_mu_options
@click.option("--N", "level", required=True, type=int)
@click.option("--n", "n", required=True, type=int)
@click.option("--e1", required=True, type=int)
@click.option("--e2", required=True, type=int)
@click.option("--e3", required=True, type=int)
@click.option(
    "--coords",
    default="standard",
    show_default=True,
    type=click.Choice(["standard", "alt"]),
)
@click.option("--grid", default=64, show_default=True, type=int)
@_out_option
@click.pass_context
def wavefunction(ctx, mu1, mu2, mu3, level, n, e1, e2, e3, coords, grid, out):
    """Evaluate one closed-form state on a theta x phi grid as CSV."""
    body = {
        "mu1": mu1,
        "mu2": mu2,
        "mu3": mu3,
        "level": level,
        "n": n,
        "e1": e1,
        "e2": e2,
        "e3": e3,
        "coords": coords,
        "grid": grid,
    }
    data = _call(ctx, "/wavefunction", body)
    lines = ["theta,phi,value"]
    for i, theta in enumerate(data["theta"]):
        for j, phi in enumerate(data["phi"]):
            lines.append(f"{theta!r},{phi!r},{data['values'][i][j]!r}")
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        click.echo(f"wrote {len(data['theta']) * len(data['phi'])} samples -> {out}")
    else:
        click.echo(text, nl=False)
    sys.exit(0)


@main.command()
@_mu_options
@click.option("--Nmax", "max_level", default=4, show_default=True, type=int)
@click.option("--nodes", default=200, show_default=True, type=int)
@_out_option
@click.pass_context
def orthogonality(ctx, mu1, mu2, mu3, max_level, nodes, out):
    """Gram matrix of all states up to a level: CSV plus JSON summary."""
    body = {
        "mu1": mu1,
        "mu2": mu2,
        "mu3": mu3,
        "max_level": max_level,
        "nodes": nodes,
    }
    data = _call(ctx, "/orthogonality", body)
    lines = ["state," + ",".join(data["states"])]
    for label, row in zip(data["states"], data["gram"]):
        lines.append(label + "," + ",".join(repr(v) for v in row))
    csv_text = "\n".join(lines) + "\n"
    summary = json.dumps(data["summary"], indent=2, ensure_ascii=False) + "\n"
    if out:
        base = out[:-4] if out.endswith(".csv") else out
        with open(base + ".csv", "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        with open(base + ".json", "w", encoding="utf-8") as fh:
            fh.write(summary)
        click.echo(f"wrote {base}.csv and {base}.json")
        click.echo(summary, nl=False)
    else:
        click.echo(csv_text, nl=False)
        click.echo(summary, err=True, nl=False)
    sys.exit(0 if data["summary"]["overall"] == "pass" else 1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run(service.app, host=host, port=port)


if __name__ == "__main__":
    main()
