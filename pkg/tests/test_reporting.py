"""Recorder behavior and the report JSON schema contract."""

import jsonschema
import pytest

from bisphere.bases import SphereQuotient
from bisphere.laurent import ModelParams
from bisphere.linop import LinOp, build_matrix
from bisphere.reporting import (
    CheckResult,
    Recorder,
    VerificationReport,
    residual_text,
)

STANDARD = ModelParams("1/3", "1/5", "1/7")


def _zero_op():
    return LinOp.identity(3) - LinOp.identity(3)


def test_recorder_statuses_and_residuals():
    rec = Recorder()
    assert rec.zero("a", "zero matrix", _zero_op) is True
    assert rec.zero("b", "identity is not zero", lambda: LinOp.identity(2)) is False
    assert rec.claim("c", "two claims", lambda: (True, "42 of 42")) is True
    assert rec.near_zero("d", "small float", lambda: 3e-13, 1e-12) is True
    assert rec.near_zero("e", "not small", lambda: 5.0, 1e-12) is False
    rec.skipped("f", "not applicable here", "below the ground state")
    by_id = {c.id: c for c in rec.checks}
    assert by_id["a"].status == "pass" and by_id["a"].residual == "0"
    assert by_id["b"].status == "fail"
    assert by_id["b"].residual.startswith("nonzero: (0,0)=1")
    assert by_id["c"].residual == "42 of 42"
    assert "3.000e-13" in by_id["d"].residual
    assert by_id["e"].status == "fail"
    assert by_id["f"].status == "skipped"


def test_recorder_prefix_and_suffix():
    rec = Recorder(prefix="p1.", suffix="@x")
    rec.claim("inner", "statement", lambda: (True, "ok"))
    assert rec.checks[0].id == "p1.inner@x"


def test_residual_text_truncates():
    m = LinOp.identity(10)
    text = residual_text(m, limit=2)
    assert text.endswith(", ...")
    assert text.count("=") == 2


def test_report_sorts_and_rejects_duplicate_ids():
    checks = [
        CheckResult(id="z", statement="s", status="pass", residual="0", elapsed_ms=0),
        CheckResult(id="a", statement="s", status="pass", residual="0", elapsed_ms=0),
    ]
    report = VerificationReport.build("demo", [STANDARD], checks)
    assert [c.id for c in report.checks] == ["a", "z"]
    assert report.overall == "pass"
    with pytest.raises(ValueError, match="duplicate"):
        VerificationReport.build("demo", [STANDARD], checks + checks[:1])


def test_overall_fail_and_skip_semantics():
    ok = CheckResult(id="a", statement="s", status="pass", residual="0", elapsed_ms=0)
    sk = CheckResult(id="b", statement="s", status="skipped", residual="r", elapsed_ms=0)
    bad = CheckResult(id="c", statement="s", status="fail", residual="x", elapsed_ms=0)
    assert VerificationReport.build("demo", [STANDARD], [ok, sk]).overall == "pass"
    assert VerificationReport.build("demo", [STANDARD], [ok, bad]).overall == "fail"


def test_report_validates_against_published_schema():
    rec = Recorder()
    rec.zero(
        "demo.zero",
        "difference of builds vanishes",
        lambda: build_matrix("R1", SphereQuotient(1), STANDARD)
        - build_matrix("R1", SphereQuotient(1), STANDARD),
    )
    report = VerificationReport.build(
        "demo", [STANDARD], rec.checks, basis="sphere quotient, degree 1"
    )
    schema = VerificationReport.model_json_schema()
    jsonschema.validate(report.model_dump(mode="json"), schema)


def test_params_round_trip_through_report():
    report = VerificationReport.build("demo", [STANDARD], [])
    back = report.param_sets[0].to_params()
    assert (back.mu1, back.mu2, back.mu3) == (
        STANDARD.mu1,
        STANDARD.mu2,
        STANDARD.mu3,
    )
