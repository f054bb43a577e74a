import io
import json
import subprocess
import sys

import numpy as np
import pytest

from g2gz import cli
from g2gz.exact_field import SQRT3, parse_field


def run(*argv, environ=None):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out, err, environ={} if environ is None else environ)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize(
    "argv",
    [
        ("polytope", "--lambda", "-1/1"),
        ("polytope", "--lambda", "0"),
        ("polytope", "--lambda", "abc"),
        ("polytope", "--lambda", "1/0"),
        ("sample", "--tolerance", "0"),
        ("sample", "--tolerance", "0.01"),
        ("sample", "--seed", "-3"),
        ("sample", "--seed", str(2**64)),
        ("sample", "--samples", "0"),
        ("polytope", "--format", "xml"),
        ("frobnicate",),
        (),
    ],
)
def test_usage_errors(argv):
    code, _, err = run(*argv)
    assert code == cli.EXIT_USAGE
    assert "usage error" in err


def test_bad_env_seed_is_usage_error():
    assert run("sample", environ={"GZ_WIDTH_SEED": "x"})[0] == cli.EXIT_USAGE


def test_verify_table1_flags_unlisted_rows():
    # published rows 8-13 are not points of the polytope, so the comparison fails
    code, out, err = run("polytope", "--lambda", "0/1+1/1*sqrt3", "--verify-table1")
    assert code == cli.EXIT_VERIFY
    assert "vertices = 13" in out
    assert "7/13 rows" in err and "[8, 9, 10, 11, 12, 13]" in err


def test_polytope_without_table_check():
    code, out, _ = run("polytope", "--lambda", "0/1+1/1*sqrt3")
    assert code == 0 and "vertices = 13, edges = 38" in out and "dimension = 5" in out


def test_polytope_json_scaling():
    code, out, _ = run("polytope", "--lambda", "7/2", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert len(d["vertices"]) == 13 and d["f_vector"] == {"vertices": 13, "edges": 38}
    _, out3, _ = run("polytope", "--lambda", "0/1+1/1*sqrt3", "--format", "json")
    base = json.loads(out3)["vertices"]
    c = parse_field("7/2") / SQRT3
    assert {tuple(parse_field(t) for t in v) for v in d["vertices"]} == {
        tuple(c * parse_field(t) for t in v) for v in base
    }
    assert parse_field(d["lambda"]) == parse_field("7/2")


def test_polytope_csv():
    code, out, _ = run("polytope", "--lambda", "1", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "x1,x2,x3,x4,x5" and len(lines) == 14


@pytest.mark.parametrize("fmt", ["plain", "json", "csv"])
def test_edges(fmt):
    code, out, _ = run("edges", "--lambda", "1", "--format", fmt)
    assert code == 0
    if fmt == "json":
        assert len(json.loads(out)) == 38
    elif fmt == "csv":
        assert len(out.splitlines()) == 39
    else:
        assert "38 edges" in out


@pytest.mark.parametrize("lam, lower", [("0/1+1/1*sqrt3", "1/1"), ("1", "0/1+1/3*sqrt3")])
def test_width(lam, lower):
    code, out, _ = run("width", "--lambda", lam)
    assert code == 0
    assert f"lower bound  = {lower}" in out and f"upper bound  = {lower}" in out
    assert "verdict      = tight" in out and "accepted" in out


def test_width_printed_lattice_fails():
    code, _, err = run("width", "--lattice", "printed")
    assert code == cli.EXIT_VERIFY and "no smooth vertex" in err


@pytest.fixture()
def cert_file(tmp_path):
    code, out, _ = run("width", "--lambda", "2+sqrt3", "--format", "json")
    assert code == 0
    p = tmp_path / "cert.json"
    p.write_text(out, encoding="utf-8")
    return p


def test_recheck_accepts(cert_file):
    code, out, _ = run("width", "--recheck", str(cert_file))
    assert code == 0 and "certificate accepted" in out


def test_recheck_certificate_only(cert_file, tmp_path):
    d = json.loads(cert_file.read_text(encoding="utf-8"))
    p = tmp_path / "c.json"
    p.write_text(json.dumps(d["certificate"]), encoding="utf-8")
    assert run("width", "--lambda", "2+sqrt3", "--recheck", str(p))[0] == 0
    assert run("width", "--lambda", "1", "--recheck", str(p))[0] == cli.EXIT_VERIFY


def test_recheck_rejects_edited_direction(cert_file, tmp_path):
    d = json.loads(cert_file.read_text(encoding="utf-8"))
    d["certificate"]["directions"][2][3] += 1
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(d), encoding="utf-8")
    code, out, _ = run("width", "--recheck", str(p))
    assert code == cli.EXIT_VERIFY and "REJECTED" in out


def test_recheck_bad_files(tmp_path):
    assert run("width", "--recheck", str(tmp_path / "missing.json"))[0] == cli.EXIT_USAGE
    p = tmp_path / "junk.json"
    p.write_text("{not json", encoding="utf-8")
    assert run("width", "--recheck", str(p))[0] == cli.EXIT_VERIFY
    p.write_text("[1, 2]", encoding="utf-8")
    assert run("width", "--recheck", str(p))[0] == cli.EXIT_VERIFY


def test_report():
    code, out, _ = run("report", "--lambda", "7/2")
    assert code == 0
    d = json.loads(out)
    assert parse_field(d["lower_bound"]) == parse_field("7/6*sqrt3") == parse_field(d["upper_bound"])
    assert d["tight"] is True and d["dimension"] == 5
    assert d["published_table"]["missing_rows"] == [8, 9, 10, 11, 12, 13]
    assert all(d["certificate"]["checks"].values()) and all(d["recheck"].values())
    assert "not computed" in d["upper_bound_citation"] and d["note"]


def test_sample_deterministic():
    args = ("sample", "--lambda", "0/1+1/1*sqrt3", "--samples", "1000", "--seed", "7")
    a = run(*args)
    b = run(*args)
    assert a[0] == 0 and a[1] == b[1]
    lines = a[1].splitlines()
    assert lines[0] == "x1,x2,x3,x4,x5,casimir" and len(lines) == 1001
    summary = dict(line.split(": ") for line in a[2].splitlines())
    assert float(summary["max_violation"]) <= 1e-7 * np.sqrt(3)
    assert float(summary["kirwan_fraction"]) == 1.0


def test_sample_env_seed():
    explicit = run("sample", "--samples", "20", "--seed", "99")[1]
    from_env = run("sample", "--samples", "20", environ={"GZ_WIDTH_SEED": "99"})[1]
    other = run("sample", "--samples", "20", environ={"GZ_WIDTH_SEED": "98"})[1]
    assert explicit == from_env != other
    # explicit flag wins over the environment
    assert run("sample", "--samples", "20", "--seed", "99", environ={"GZ_WIDTH_SEED": "1"})[1] == explicit


def test_sample_json():
    code, out, _ = run("sample", "--samples", "50", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["samples"] == 50 and d["interlacing_fraction"] == 1.0


def test_sample_model_failure(monkeypatch):
    from g2gz import g2_model

    def broken(*a, **k):
        raise g2_model.ModelConstructionError("dim g2 = 13, expected 14")

    monkeypatch.setattr(g2_model, "build_model", broken)
    code, _, err = run("sample", "--samples", "5")
    assert code == cli.EXIT_MODEL and "dim g2" in err


def test_sample_inclusion_failure(monkeypatch):
    from g2gz import g2_model

    real = g2_model.gz_value
    monkeypatch.setattr(g2_model, "gz_value", lambda m, xi: real(m, xi) + [0, 1.0, 0, 0, 0])
    assert run("sample", "--samples", "5")[0] == cli.EXIT_VERIFY


def group_lines(out):
    return dict(line.split(": ", 1)[0].split(" ")[::-1] for line in out.splitlines())


@pytest.mark.parametrize("lam", ["0/1+1/1*sqrt3", "2/1+1/1*sqrt3"])
def test_verify_groups(lam):
    code, out, err = run("verify", "--lambda", lam)
    groups = group_lines(out)
    assert list(groups) == ["field", "interlacing", "table1", "edges", "smoothness", "certificate", "model"]
    # every group except the published-table comparison passes
    assert {g for g, v in groups.items() if v == "FAIL"} == {"table1"}
    assert code == cli.EXIT_VERIFY and "first failing group: table1" in err


def test_verify_wrong_lattice_hook():
    code, out, _ = run("verify", "--lattice", "printed", "--format", "json")
    d = json.loads(out)
    assert code == cli.EXIT_VERIFY
    assert d["smoothness"]["pass"] is False and d["certificate"]["pass"] is False
    assert d["field"]["pass"] and d["model"]["pass"]


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "g2gz", "width", "--lambda", "0/1+1/1*sqrt3", "--format", "json"],
        capture_output=True,
        check=False,
    )
    assert r.returncode == 0
    assert json.loads(r.stdout.decode("utf-8"))["lower_bound"] == "1/1"
