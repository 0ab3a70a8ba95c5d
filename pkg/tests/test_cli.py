import json
from pathlib import Path

import pytest

from polycartan.cli import run
from polycartan.model import ModelError, load_model, parse_model

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


# -- model loading ----------------------------------------------------------------


def test_load_canonical_model():
    model = load_model(str(FIXTURES / "canonical_r2.model"))
    assert model.poisson is not None
    assert model.poisson.r == 2 and model.poisson.k == 3
    assert len(model.sample_points) == 2


def test_model_rejects_non_integer_degree():
    text = "chart\n  gen x one\nend\n"
    with pytest.raises(ModelError) as err:
        parse_model(text)
    assert "integer" in str(err.value) and err.value.line == 2


def test_model_rejects_count_mismatch():
    text = (
        "chart\n  gen x 0\nend\n"
        "polypoisson\n  section dx\n  section dx\n"
        "  anchor 1\n  anchor 1\n  anchor 1\nend\n"
    )
    with pytest.raises(ModelError) as err:
        parse_model(text)
    assert "anchor" in str(err.value) or "frame" in str(err.value)


def test_model_rejects_bad_expression():
    text = "chart\n  gen x 0\nend\npolypoisson\n  section dq\n  anchor 1\nend\n"
    with pytest.raises(ModelError) as err:
        parse_model(text)
    assert "dq" in str(err.value)


def test_model_rejects_unclosed_block():
    with pytest.raises(ModelError):
        parse_model("chart\n  gen x 0\n")


def test_model_requires_chart():
    with pytest.raises(ModelError):
        parse_model("source\n  vertex v0\nend\n")


# -- exit-code contract -------------------------------------------------------------


def test_check_poisson_passes(capsys):
    code, out = invoke(
        capsys, "check-poisson", "--input", str(FIXTURES / "canonical_r2.model")
    )
    assert code == 0
    assert "axiom-i-skew-pairing: PASS" in out


def test_check_poisson_broken_anchor_witness(capsys):
    code, out = invoke(
        capsys, "check-poisson", "--input", str(FIXTURES / "broken_anchor.model")
    )
    assert code == 1
    assert "(2, 0)" in out


def test_check_poisson_missing_input_is_usage_error(capsys):
    code, _ = invoke(capsys, "check-poisson", "--input", "no-such-file.model")
    assert code == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        run(["check-poisson"])  # missing --input
    assert err.value.code == 2


def test_schema_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.model"
    bad.write_text("chart\n  gen x one\nend\n", encoding="utf-8")
    code, _ = invoke(capsys, "check-poisson", "--input", str(bad))
    assert code == 2


@pytest.mark.parametrize(
    "command,fixture,expected",
    [
        ("check-poisson", "so3.model", 0),
        ("check-poisson", "missing_sections.model", 1),
        ("check-poisson", "broken_jacobi.model", 1),
        ("check-poisson", "symplectic_r1.model", 0),
        ("check-poisson", "degenerate_kernel.model", 1),
        ("check-symplectic", "canonical22.model", 0),
        ("schwarz", "twisted22.model", 0),
        ("algebroid-cme", "so3.model", 0),
        ("algebroid-cme", "broken_jacobi.model", 1),
        ("transgress", "circle3_cme.model", 0),
        ("cme", "circle3_cme.model", 0),
        ("cme", "so3_circle_cme.model", 0),
        ("action", "disk_action.model", 0),
        ("gauge", "interval_gauge.model", 0),
        ("gauge", "so3.model", 0),
    ],
)
def test_fixture_exit_codes(capsys, command, fixture, expected):
    code, _ = invoke(capsys, command, "--input", str(FIXTURES / fixture))
    assert code == expected


def test_action_value_reported(capsys):
    _, out = invoke(
        capsys, "action", "--input", str(FIXTURES / "disk_action.model")
    )
    assert "(-11/2, -3/2)" in out


def test_selftest_deterministic(capsys):
    code, out1 = invoke(capsys, "selftest", "--seed", "7", "--samples", "25")
    assert code == 0
    _, out2 = invoke(capsys, "selftest", "--seed", "7", "--samples", "25")
    # text output carries timing; compare the json form instead
    code, json1 = invoke(
        capsys, "selftest", "--seed", "7", "--samples", "25", "--format", "json"
    )
    assert code == 0
    _, json2 = invoke(
        capsys, "selftest", "--seed", "7", "--samples", "25", "--format", "json"
    )
    assert json1 == json2


def test_json_report_shape_and_stability(capsys):
    args = (
        "check-poisson",
        "--input",
        str(FIXTURES / "canonical_r2.model"),
        "--format",
        "json",
    )
    code, out1 = invoke(capsys, *args)
    assert code == 0
    payload = json.loads(out1)
    assert payload["schema"] == "polycartan-report/1"
    assert payload["command"] == "check-poisson"
    assert payload["passed"] is True
    assert [c["name"] for c in payload["checks"]] == [
        "axiom-i-skew-pairing",
        "axiom-ii-nondegenerate",
        "axiom-iii-closure",
        "axiom-iii-jacobi",
    ]
    _, out2 = invoke(capsys, *args)
    assert out1 == out2


def test_json_failure_carries_witness(capsys):
    code, out = invoke(
        capsys,
        "check-poisson",
        "--input",
        str(FIXTURES / "broken_anchor.model"),
        "--format",
        "json",
    )
    assert code == 1
    payload = json.loads(out)
    failing = [c for c in payload["checks"] if not c["passed"]]
    assert failing and failing[0]["witness"]


def test_convention_flag_accepted(capsys):
    code, _ = invoke(
        capsys,
        "cme",
        "--input",
        str(FIXTURES / "circle3_cme.model"),
        "--convention",
        "target",
    )
    assert code == 0


def test_gauge_jacobian_flag(capsys):
    code, out = invoke(
        capsys,
        "gauge",
        "--input",
        str(FIXTURES / "so3.model"),
        "--jacobian-at",
        "target",
    )
    assert code == 1
    assert "moment-map-residual: FAIL" in out
