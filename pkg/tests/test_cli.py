"""Command-line interface and figure emission."""

import csv
import json
import xml.etree.ElementTree as ET

import pytest

from jetgeo import figure_data
from jetgeo.cli import main


class TestClassify:
    def test_soliton(self, capsys):
        assert main(["classify", "--poly", "[1,0,-2]",
                     "--window", "-2", "2"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert [o["interval"] for o in out] == [[-1.0, 0.0], [0.0, 1.0]]
        assert out[1]["class"] == "Homoclinic"


class TestTrace:
    def test_writes_rfc4180_csv(self, tmp_path, capsys):
        path = tmp_path / "trace.csv"
        assert main(["trace", "--poly", "[1,0,-2]", "--pencil", "0", "1",
                     "--start", "1", "0", "0", "--span", "-1", "1",
                     "--out", str(path)]) == 0
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "x", "y", "z"]
        assert len(rows) > 100
        # Every cell parses as a float with "." decimal separator.
        for cell in rows[1]:
            float(cell)


class TestPeriods:
    def test_soliton_report(self, capsys):
        assert main(["periods", "--poly", "[1,0,-2]", "--pencil", "0", "1",
                     "--interval", "0", "1"]) == 0
        rep = json.loads(capsys.readouterr().out.replace("Infinity", "1e999"))
        assert rep["finite"]["L"] is False
        assert rep["theta1"] == pytest.approx(2.0, abs=1e-8)
        assert rep["theta2"] == pytest.approx(-2.0 / 3.0, abs=1e-8)


class TestThetaScan:
    def test_homoclinic_csv(self, tmp_path, capsys):
        path = tmp_path / "scan.csv"
        assert main(["theta-scan", "--family", "homoclinic", "--n", "1",
                     "--grid", "0.5,1.0,2.0", "--out", str(path)]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["monotonic"] is True
        assert data["fitted_exponent"] == pytest.approx(-1.5, abs=1e-3)
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["s", "theta2", "err"]
        assert len(rows) == 4


class TestCounterexample:
    def test_small_grid(self, capsys):
        assert main(["counterexample", "--m", "1", "--n-grid", "1,4"]) == 0
        reports = json.loads(capsys.readouterr().out)
        assert reports[0]["verdict"] is False
        assert reports[1]["verdict"] is True


class TestConnect:
    def test_cheap_search(self, capsys):
        assert main(["--seed", "1", "connect", "--poly", "[0,0,1]",
                     "--start", "0", "0", "0", "--target", "0", "2", "0",
                     "--grid-n", "7", "--t-max", "3"]) == 0
        data = json.loads(capsys.readouterr().out)
        kinds = [c["kind"] for c in data["candidates"]]
        assert "abnormal" in kinds


class TestFigure:
    @pytest.mark.parametrize("kind", ["x-periodic", "homoclinic",
                                      "turn-back", "direct-type"])
    def test_emits_csv_and_svg(self, tmp_path, kind, capsys):
        assert main(["figure", "--kind", kind, "--out", str(tmp_path)]) == 0
        paths = capsys.readouterr().out.split()
        assert any(p.endswith(".csv") for p in paths)
        svgs = [p for p in paths if p.endswith(".svg")]
        assert svgs
        root = ET.parse(svgs[0]).getroot()
        assert root.tag.endswith("svg")
        assert any(child.tag.endswith("polyline") for child in root)

    def test_figure_data_api(self, tmp_path):
        written = figure_data("homoclinic", str(tmp_path))
        with open(written[0], newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "x", "y", "z"]

    def test_unknown_kind(self, tmp_path):
        with pytest.raises(ValueError):
            figure_data("spiral", str(tmp_path))
