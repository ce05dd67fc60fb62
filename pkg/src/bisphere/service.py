"""HTTP service over the verification suites and spectral tools.

Each endpoint accepts exact rational parameters as "p/q" strings and
returns either a verification report (suites) or plain numerical data
(wavefunction tables, Gram matrices).  The command line drives these
same handler functions in process; `uvicorn bisphere.service:app`
serves them over HTTP.  Handlers reject out-of-range parameters with
422 before any computation starts.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .bases import FullPoly3, SphereQuotient
from .closedform import (
    QuadratureGrid,
    SphereState,
    admissible_states,
    gram_defect,
    gram_matrix,
    has_negative_weight,
    sphere_wave,
    wavefunction_suite,
)
from .laurent import ModelParams, format_rational
from .linop import build_matrix
from .plane import (
    contraction_checks,
    contraction_suite,
    plane_suite,
    rotation_suite,
)
from .racah import differential_suite, ladder_suite
from .reporting import Recorder, TOOL_VERSION, VerificationReport
from .sphere import (
    ParameterCollisionError,
    invariance_suite,
    separation_certificate,
    spectrum_certificate,
)

Rational = str | int

app = FastAPI(title="bisphere", version=TOOL_VERSION)


def _params(mu1: Rational, mu2: Rational, mu3: Rational) -> ModelParams:
    try:
        return ModelParams(mu1, mu2, mu3)
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


def random_triples(seed: int, count: int) -> List[ModelParams]:
    """Seeded rational parameter triples p/q with 1 <= p, q <= 9, each
    value in (0, 2]; the draw is deterministic for a fixed seed."""
    rng = random.Random(seed)
    triples = []
    while len(triples) < count:
        values = []
        while len(values) < 3:
            f = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            if f <= 2:
                values.append(f)
        triples.append(ModelParams(*values))
    return triples


class SuiteParams(BaseModel):
    mu1: Rational = "1/3"
    mu2: Rational = "1/5"
    mu3: Rational = "1/7"


class S2Request(SuiteParams):
    degree: int = Field(6, ge=1, le=16)
    seed: Optional[int] = None
    random_params: int = Field(0, ge=0, le=8)


class SpectrumRequest(SuiteParams):
    degree: int = Field(6, ge=1, le=16)


class RacahRequest(SuiteParams):
    degree: int = Field(4, ge=1, le=10)
    mode: Literal["diff", "ladder", "both"] = "both"
    cutoff: int = Field(12, ge=3, le=16)


class TildeRequest(SuiteParams):
    degree: int = Field(6, ge=1, le=16)


class PlaneRequest(BaseModel):
    mu1: Rational = "1/3"
    mu2: Rational = "1/5"
    cutoff: int = Field(14, ge=3, le=40)


class ContractionRequest(BaseModel):
    mu1: Rational = "1/3"
    mu2: Rational = "1/5"
    level: int = Field(3, ge=0, le=50)
    e3: Optional[int] = Field(None, ge=0, le=1)
    radii: List[Rational] = ["10", "100", "1000"]


class WavefunctionRequest(SuiteParams):
    level: int = Field(..., ge=0, le=40)
    n: int = Field(..., ge=0)
    e1: int = Field(..., ge=0, le=1)
    e2: int = Field(..., ge=0, le=1)
    e3: int = Field(..., ge=0, le=1)
    coords: Literal["standard", "alt"] = "standard"
    grid: int = Field(64, ge=2, le=512)


class OrthogonalityRequest(SuiteParams):
    max_level: int = Field(4, ge=0, le=8)
    nodes: int = Field(200, ge=10, le=2000)


class MatrixRequest(SuiteParams):
    expr: str
    basis: Literal["sphere", "full"] = "sphere"
    degree: int = Field(4, ge=0, le=16)


class FullSuiteRequest(BaseModel):
    mu1: Rational = "1/3"
    mu2: Rational = "1/5"
    mu3: Rational = "1/7"
    seed: int = 42
    random_params: int = Field(2, ge=0, le=8)
    degree: int = Field(6, ge=2, le=10)
    cutoff: int = Field(12, ge=3, le=16)
    plane_cutoff: int = Field(14, ge=3, le=40)
    nodes: int = Field(200, ge=10, le=2000)


class WavefunctionResponse(BaseModel):
    state: Dict[str, int]
    coords: str
    theta: List[float]
    phi: List[float]
    values: List[List[float]]


class OrthogonalitySummary(BaseModel):
    max_off_diagonal: float
    max_diagonal_deviation: float
    nodes: int
    tolerance: float
    flagged: bool
    overall: Literal["pass", "fail"]


class OrthogonalityResponse(BaseModel):
    states: List[str]
    gram: List[List[float]]
    summary: OrthogonalitySummary


class MatrixResponse(BaseModel):
    basis: str
    size: int
    rows: List[List[str]]


def _report_or_422(fn):
    try:
        return fn()
    except ParameterCollisionError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


def state_label(state: SphereState) -> str:
    return f"N{state.level}n{state.n}e{state.e1}{state.e2}{state.e3}"


@app.get("/health")
def health() -> Dict[str, str]:
    return {"status": "ok"}


@app.get("/version")
def version() -> Dict[str, str]:
    return {"tool": "bisphere", "version": TOOL_VERSION}


@app.post("/verify/s2")
def verify_s2(req: S2Request) -> VerificationReport:
    base = _params(req.mu1, req.mu2, req.mu3)
    sets = [base]
    if req.random_params:
        if req.seed is None:
            raise HTTPException(
                status_code=422, detail="random parameter sets need a seed"
            )
        sets += random_triples(req.seed, req.random_params)
    rec = Recorder()
    for k, params in enumerate(sets):
        sub = Recorder(prefix=f"p{k}." if len(sets) > 1 else "")
        invariance_suite(params, req.degree, sub)
        rec.checks.extend(sub.checks)
    return VerificationReport.build(
        kind="s2-invariance",
        param_sets=sets,
        checks=rec.checks,
        basis=f"sphere quotient, degree {req.degree}",
        seed=req.seed,
    )


@app.post("/spectrum")
def spectrum(req: SpectrumRequest) -> VerificationReport:
    params = _params(req.mu1, req.mu2, req.mu3)

    def run():
        rec = Recorder()
        spectrum_certificate(params, req.degree, rec)
        separation_certificate("Z", params, req.degree, rec)
        separation_certificate("Y", params, req.degree, rec)
        return rec

    rec = _report_or_422(run)
    return VerificationReport.build(
        kind="spectrum",
        param_sets=[params],
        checks=rec.checks,
        basis=f"sphere quotient, degree {req.degree}",
    )


@app.post("/verify/racah")
def verify_racah(req: RacahRequest) -> VerificationReport:
    params = _params(req.mu1, req.mu2, req.mu3)
    rec = Recorder()
    if req.mode in ("diff", "both"):
        differential_suite(
            params, req.degree, rec, descent_degree=req.degree + 2
        )
    if req.mode in ("ladder", "both"):
        ladder_suite(params, req.cutoff, rec)
    basis_bits = []
    if req.mode in ("diff", "both"):
        basis_bits.append(f"polynomials of degree <= {req.degree + 2}")
    if req.mode in ("ladder", "both"):
        basis_bits.append(f"occupation cutoff {req.cutoff}")
    return VerificationReport.build(
        kind="racah",
        param_sets=[params],
        checks=rec.checks,
        basis="; ".join(basis_bits),
    )


@app.post("/verify/tilde")
def verify_tilde(req: TildeRequest) -> VerificationReport:
    params = _params(req.mu1, req.mu2, req.mu3)
    rec, _ = rotation_suite(params, req.degree)
    return VerificationReport.build(
        kind="tilde-rotations",
        param_sets=[params],
        checks=rec.checks,
        basis=f"sphere quotient, degree {req.degree}",
    )


@app.post("/verify/plane")
def verify_plane(req: PlaneRequest) -> VerificationReport:
    params = _params(req.mu1, req.mu2, 0)
    rec, _ = plane_suite(params, req.cutoff)
    return VerificationReport.build(
        kind="plane",
        param_sets=[params],
        checks=rec.checks,
        basis=f"two-mode occupation cutoff {req.cutoff}",
    )


@app.post("/verify/contraction")
def verify_contraction(req: ContractionRequest) -> VerificationReport:
    params = _params(req.mu1, req.mu2, 0)
    try:
        radii = [Fraction(str(r)) for r in req.radii]
        if any(r <= 0 for r in radii):
            raise ValueError("radii must be positive")
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    rec = Recorder()
    labels = (0, 1) if req.e3 is None else (req.e3,)
    for e3 in labels:
        contraction_checks(params, radii, req.level, e3, rec)
    return VerificationReport.build(
        kind="contraction",
        param_sets=[params],
        checks=rec.checks,
        basis="exact rational energies",
    )


@app.post("/wavefunction")
def wavefunction(req: WavefunctionRequest) -> WavefunctionResponse:
    params = _params(req.mu1, req.mu2, req.mu3)
    state = SphereState(req.level, req.n, req.e1, req.e2, req.e3)
    if state not in admissible_states(req.level):
        raise HTTPException(
            status_code=422,
            detail=f"state {state_label(state)} is not admissible",
        )
    frame = "standard" if req.coords == "standard" else "alternative"
    k = req.grid
    theta = (np.arange(k) + 0.5) * (np.pi / k)
    phi = (np.arange(k) + 0.5) * (2.0 * np.pi / k)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    values = sphere_wave(
        params, state, tt.ravel(), pp.ravel(), frame=frame
    ).reshape(k, k)
    return WavefunctionResponse(
        state={
            "level": state.level,
            "n": state.n,
            "e1": state.e1,
            "e2": state.e2,
            "e3": state.e3,
        },
        coords=req.coords,
        theta=[float(t) for t in theta],
        phi=[float(p) for p in phi],
        values=[[float(v) for v in row] for row in values],
    )


@app.post("/orthogonality")
def orthogonality(req: OrthogonalityRequest) -> OrthogonalityResponse:
    params = _params(req.mu1, req.mu2, req.mu3)
    grid = QuadratureGrid.for_params(params, n_theta=req.nodes, n_phi=req.nodes)
    gram, states = gram_matrix(params, req.max_level, grid)
    off = gram - np.diag(np.diag(gram))
    max_off = float(np.max(np.abs(off))) if gram.size else 0.0
    max_diag = float(np.max(np.abs(np.diag(gram) - 1.0))) if gram.size else 0.0
    flagged = has_negative_weight(params)
    tol = 1e-6 if flagged else 1e-10
    ok = max(max_off, max_diag) < tol
    return OrthogonalityResponse(
        states=[state_label(s) for s in states],
        gram=[[float(v) for v in row] for row in gram],
        summary=OrthogonalitySummary(
            max_off_diagonal=max_off,
            max_diagonal_deviation=max_diag,
            nodes=req.nodes,
            tolerance=tol,
            flagged=flagged,
            overall="pass" if ok else "fail",
        ),
    )


@app.post("/matrix")
def matrix(req: MatrixRequest) -> MatrixResponse:
    params = _params(req.mu1, req.mu2, req.mu3)
    basis = (
        SphereQuotient(req.degree)
        if req.basis == "sphere"
        else FullPoly3(req.degree)
    )
    try:
        m = build_matrix(req.expr, basis, params)
    except Exception as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return MatrixResponse(
        basis=basis.name, size=basis.size, rows=m.entry_strings()
    )


def _one_suite(params: ModelParams, req: FullSuiteRequest, rec: Recorder):
    invariance_suite(params, req.degree, rec)
    spectrum_certificate(params, req.degree, rec)
    separation_certificate("Z", params, req.degree, rec)
    separation_certificate("Y", params, req.degree, rec)
    differential_suite(
        params, req.degree - 2, rec, descent_degree=req.degree
    )
    ladder_suite(params, req.cutoff, rec)
    rotation_suite(params, req.degree, rec)
    plane_suite(params, req.plane_cutoff, rec)
    contraction_suite(params, [10, 100, 1000], 3, rec)
    wavefunction_suite(params, rec, nodes=req.nodes)


@app.post("/suite")
def full_suite(req: FullSuiteRequest) -> VerificationReport:
    base = _params(req.mu1, req.mu2, req.mu3)
    sets = [base] + random_triples(req.seed, req.random_params)

    def run():
        rec = Recorder()
        for k, params in enumerate(sets):
            sub = Recorder(prefix=f"p{k}.")
            _one_suite(params, req, sub)
            rec.checks.extend(sub.checks)
        return rec

    rec = _report_or_422(run)
    return VerificationReport.build(
        kind="suite",
        param_sets=sets,
        checks=rec.checks,
        basis=(
            f"sphere quotient degree {req.degree}; ladder cutoffs "
            f"{req.cutoff} and {req.plane_cutoff}; {req.nodes}-node grid"
        ),
        seed=req.seed,
    )
