"""Check records and verification reports.

Every verification suite produces a flat list of checks.  A check is one
verified identity: its id is unique inside a report, its statement is the
identity in plain mathematical notation, and its residual records what was
actually measured ("0" for an exact zero, a max-abs value for floating
point checks, rank counts for rank checks).  Reports serialize to JSON
with checks sorted by id, so two runs with the same inputs produce
byte-identical output apart from the timing fields.
"""

from __future__ import annotations

import time
from importlib import metadata
from typing import Callable, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel

from .laurent import ModelParams, format_rational
from .linop import LinOp

try:
    TOOL_VERSION = metadata.version("bisphere")
except metadata.PackageNotFoundError:
    TOOL_VERSION = "0.0.0"


class ParamSet(BaseModel):
    mu1: str
    mu2: str
    mu3: str

    @classmethod
    def from_params(cls, p: ModelParams) -> "ParamSet":
        return cls(
            mu1=format_rational(p.mu1),
            mu2=format_rational(p.mu2),
            mu3=format_rational(p.mu3),
        )

    def to_params(self) -> ModelParams:
        return ModelParams(self.mu1, self.mu2, self.mu3)


class CheckResult(BaseModel):
    id: str
    statement: str
    status: Literal["pass", "fail", "skipped"]
    residual: str
    elapsed_ms: float


class VerificationReport(BaseModel):
    tool: str = "bisphere"
    version: str = TOOL_VERSION
    kind: str
    basis: Optional[str] = None
    seed: Optional[int] = None
    param_sets: List[ParamSet]
    checks: List[CheckResult]
    overall: Literal["pass", "fail"]

    @classmethod
    def build(
        cls,
        kind: str,
        param_sets: Sequence[ModelParams],
        checks: Sequence[CheckResult],
        basis: Optional[str] = None,
        seed: Optional[int] = None,
    ) -> "VerificationReport":
        ordered = sorted(checks, key=lambda c: c.id)
        ids = [c.id for c in ordered]
        for a, b in zip(ids, ids[1:]):
            if a == b:
                raise ValueError(f"duplicate check id {a!r}")
        overall = "pass" if all(c.status != "fail" for c in ordered) else "fail"
        return cls(
            kind=kind,
            basis=basis,
            seed=seed,
            param_sets=[ParamSet.from_params(p) for p in param_sets],
            checks=list(ordered),
            overall=overall,
        )


def residual_text(m: LinOp, limit: int = 4) -> str:
    """Describe how a matrix fails to vanish, or '0' when it does."""
    entries = m.nonzero_entries(limit + 1)
    if not entries:
        return "0"
    parts = [f"({i},{j})={format_rational(v)}" for i, j, v in entries[:limit]]
    suffix = ", ..." if len(entries) > limit else ""
    return "nonzero: " + ", ".join(parts) + suffix


class Recorder:
    """Collects check results, timing each one as it runs."""

    def __init__(self, prefix: str = "", suffix: str = ""):
        self.prefix = prefix
        self.suffix = suffix
        self.checks: List[CheckResult] = []

    def _record(self, cid: str, statement: str, status: str, residual: str, dt: float):
        self.checks.append(
            CheckResult(
                id=f"{self.prefix}{cid}{self.suffix}",
                statement=statement,
                status=status,
                residual=residual,
                elapsed_ms=round(dt * 1000.0, 3),
            )
        )

    def zero(self, cid: str, statement: str, residual_op: Callable[[], LinOp]):
        """Exact check: the operator built by residual_op must vanish."""
        t0 = time.perf_counter()
        m = residual_op()
        ok = m.is_zero()
        self._record(
            cid,
            statement,
            "pass" if ok else "fail",
            "0" if ok else residual_text(m),
            time.perf_counter() - t0,
        )
        return ok

    def claim(self, cid: str, statement: str, fn: Callable[[], Tuple[bool, str]]):
        """General check: fn returns (ok, measured-residual text)."""
        t0 = time.perf_counter()
        ok, residual = fn()
        self._record(
            cid,
            statement,
            "pass" if ok else "fail",
            residual,
            time.perf_counter() - t0,
        )
        return ok

    def near_zero(self, cid: str, statement: str, fn: Callable[[], float], tol: float):
        """Floating point check: fn returns a max-abs residual."""
        t0 = time.perf_counter()
        value = float(fn())
        ok = value < tol
        self._record(
            cid,
            statement,
            "pass" if ok else "fail",
            f"max|.|={value:.3e} (tol {tol:.1e})",
            time.perf_counter() - t0,
        )
        return ok

    def skipped(self, cid: str, statement: str, reason: str):
        self._record(cid, statement, "skipped", reason, 0.0)
