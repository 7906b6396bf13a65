import csv
import json

import pytest

from detmethod.cli import main, parse_point


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, (json.loads(out) if out.strip() else None)


def test_parse_point():
    assert parse_point("1:2:3").coords == (1, 2, 3)
    assert parse_point("[16,4,1]").coords == (16, 4, 1)


def test_heights(capsys):
    rc, out = run(capsys, "heights", "--point", "3:4:0", "--variety", "x*z - y^2")
    assert rc == 0 and out["naive_form_height"] == 0
    assert out["points"][0]["arakelov_log_height"] == pytest.approx(1.6094, abs=1e-4)


def test_points(capsys):
    rc, out = run(capsys, "points", "enumerate", "--variety", "x*z - y^2", "--bound", "2")
    assert rc == 0 and out["count"] == 4
    rc, out = run(capsys, "points", "classes", "--variety", "x*z - y^2", "--bound", "5",
                  "--prime", "3")
    assert rc == 0 and sum(len(c["members"]) for c in out["classes"]) == 8


def test_jets_profile_with_plot(capsys, tmp_path):
    png = tmp_path / "k.png"
    rc, out = run(capsys, "jets", "profile", "--variety", "x*z - y^2", "--point", "0:0:1",
                  "--degree", "2", "--plot", str(png))
    assert rc == 0 and out["dims"] == [4, 3, 2, 1, 0] and out["R"] == 10
    assert png.stat().st_size > 0


def test_slope(capsys):
    rc, out = run(capsys, "slope", "--variety", "x*z - y^2", "--degree", "1")
    assert rc == 0 and out["mu_sym"] == 0 and out["r1"] == 3


def test_bounds(capsys):
    rc, out = run(capsys, "bounds", "--variety", "x*z - y^2", "--B", "50", "--epsilon", "1")
    assert rc == 0 and "C_3" in out and out["r_param"]["formula"] == "CLI default 1"


def test_bounds_regime_error(capsys):
    assert main(["bounds", "--variety", "x*z - y^2", "--B", "2", "--epsilon", "1"]) == 2


def test_run_writes_report(capsys, tmp_path):
    out_json = tmp_path / "conic.json"
    rc, out = run(capsys, "run", "--variety", "x*z - y^2", "--bound", "20", "--epsilon", "1",
                  "--out", str(out_json))
    assert rc == 0 and out["success"]
    report = json.loads(out_json.read_text())
    assert report["num_points"] == 20
    with open(tmp_path / "conic.csv") as fh:
        rows = list(csv.DictReader(fh))
    # one row per class plus the singular-locus cover
    assert len(rows) == len(report["classes"]) + 1 and rows[-1]["class"] == "singular"
    assert {r["status"] for r in rows} == {"covered"}
    assert (tmp_path / "conic.points.png").exists() and (tmp_path / "conic.degrees.png").exists()


def test_check_det(capsys, tmp_path):
    pts = tmp_path / "pts.json"
    pts.write_text(json.dumps([[1, 1, 1], [16, 4, 1], [4, -2, 1]]))
    rc, out = run(capsys, "check-det", "--variety", "x*z - y^2", "--points", str(pts),
                  "--prime", "3", "--degree", "1")
    assert rc == 0 and out == {"determinant": "-54", "valuation": 3, "R": 3, "holds": True}


def test_variety_json_file(capsys, tmp_path):
    path = tmp_path / "cusp.json"
    path.write_text(json.dumps({"equation": "y^2*z - x^3", "n": 2}))
    rc, out = run(capsys, "points", "enumerate", "--variety", str(path), "--bound", "3")
    assert rc == 0 and [0, 0, 1] in out["points"]
