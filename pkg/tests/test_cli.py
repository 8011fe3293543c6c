import json

import pytest

from trapsurf import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_classify_trapped_sphere(tmp_path, capsys):
    out_json = tmp_path / "report.json"
    out_csv = tmp_path / "report.csv"
    code, out, _ = run(
        capsys, "classify", "--embedding", "ef_sphere:radius=1",
        "--grid", "8,16", "--out-json", str(out_json),
        "--out-csv", str(out_csv),
    )
    assert code == 0
    assert "verdict:   FutureTrapped" in out
    report = json.loads(out_json.read_text())
    assert report["schema"] == "report_v1"
    assert report["kind"] == "classification"
    assert report["verdict"] == "FutureTrapped"
    assert report["grid"] == {"points_per_axis": [8, 16], "rule": "auto"}
    assert len(report["points"]) == 128
    lines = out_csv.read_text().strip().splitlines()
    assert lines[0].split(",") == ["u1", "u2", "h_norm2", "label", "margin"]
    assert len(lines) == 129
    assert all("Timelike/Future" in line for line in lines[1:])


def test_classify_is_deterministic(tmp_path, capsys):
    blobs = []
    for i in range(2):
        path = tmp_path / f"run{i}.json"
        code, _, _ = run(capsys, "classify", "--embedding", "round_sphere",
                         "--grid", "8,8", "--out-json", str(path))
        assert code == 0
        blobs.append(path.read_bytes())
    assert blobs[0] == blobs[1]


def test_classify_with_config_and_overrides(tmp_path, capsys):
    cfg = {
        "schema_version": 1,
        "embedding": {"catalog": "ef_sphere", "params": {"radius": 3.0}},
        "grid": {"points_per_axis": [8, 8]},
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "classify", "--config", str(path),
                       "--tol", "null_band=1e-6")
    assert code == 0
    assert "verdict:   AbsolutelyNonTrapped" in out


def test_classify_errors(tmp_path, capsys):
    # malformed config: unknown key, exit 64, error JSON names the key
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema_version": 1, "gird": {},
                               "embedding": {"catalog": "round_sphere"}}))
    code, _, err = run(capsys, "classify", "--config", str(bad))
    assert code == 64
    report = json.loads(err)
    assert report["kind"] == "error"
    assert report["error"]["type"] == "ConfigError"
    assert "gird" in report["error"]["message"]

    # unknown catalog entry: exit 65
    code, _, err = run(capsys, "classify", "--embedding", "no_such_surface")
    assert code == 65
    assert json.loads(err)["error"]["type"] == "UnknownEntry"

    # parameter out of range: exit 64
    code, _, err = run(capsys, "classify", "--embedding",
                       "round_sphere:radius=-1")
    assert code == 64
    assert json.loads(err)["error"]["type"] == "ParamOutOfRange"

    # grid axes must match the parameter dimension
    code, _, err = run(capsys, "classify", "--embedding", "round_sphere",
                       "--grid", "8,8,8")
    assert code == 64

    # bad tolerance syntax
    code, _, err = run(capsys, "classify", "--embedding", "round_sphere",
                       "--grid", "4,4", "--tol", "null_band")
    assert code == 64


def test_catalog_commands(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0
    assert "round_sphere" in out and "schwarzschild_ef" in out

    code, out, _ = run(capsys, "catalog", "show", "ef_sphere")
    assert code == 0
    assert "radius" in out and "expected results" in out

    code, _, err = run(capsys, "catalog", "show", "nope")
    assert code == 65
    assert json.loads(err)["error"]["type"] == "UnknownEntry"

    code, _, err = run(capsys, "catalog", "show")
    assert code == 64


def test_verify_eq3(tmp_path, capsys):
    out_json = tmp_path / "eq3.json"
    code, out, _ = run(capsys, "verify", "eq3", "--triples", "20",
                       "--out-json", str(out_json))
    assert code == 0
    report = json.loads(out_json.read_text())
    assert report["kind"] == "eq3"
    assert report["passed"] is True
    assert report["max_residual"] < 1e-6


def test_verify_eq3_finite_difference(capsys):
    code, out, _ = run(capsys, "verify", "eq3", "--triples", "20", "--fd")
    assert code == 0
    assert "max residual" in out


def test_verify_killing(tmp_path, capsys):
    out_json = tmp_path / "killing.json"
    code, out, _ = run(capsys, "verify", "killing", "--grid", "16,16",
                       "--out-json", str(out_json))
    assert code == 0
    report = json.loads(out_json.read_text())
    assert report["passed"] is True
    assert {c["psi_sign"] for c in report["cases"]} == {"positive", "zero"}


def test_verify_variation(tmp_path, capsys):
    out_json = tmp_path / "variation.json"
    code, _, _ = run(capsys, "verify", "variation", "--pairs", "2",
                     "--grid", "12,12", "--out-json", str(out_json))
    assert code == 0
    report = json.loads(out_json.read_text())
    assert report["passed"] is True
    for case in report["cases"]:
        assert case["relative_difference"] < 1e-4


def test_verify_variation_flow_leaves_chart(tmp_path, capsys):
    cfg = {
        "schema_version": 1,
        "metric": {"catalog": "schwarzschild_ef"},
        "embedding": {"catalog": "ef_sphere", "params": {"radius": 1.0}},
        "fields": [{
            "inline": {"coordinates": ["v", "r", "th", "ph"],
                       "components": ["0", "-1", "0", "0"]}
        }],
        "grid": {"points_per_axis": [4, 4]},
    }
    path = tmp_path / "flow.json"
    path.write_text(json.dumps(cfg))
    code, _, err = run(capsys, "verify", "variation", "--config", str(path),
                       "--tau", "2.0")
    assert code == 1
    assert json.loads(err)["error"]["type"] == "FlowLeftChart"


def test_missing_embedding_is_config_error(capsys):
    code, _, err = run(capsys, "classify")
    assert code == 64
    assert json.loads(err)["error"]["type"] == "ConfigError"
