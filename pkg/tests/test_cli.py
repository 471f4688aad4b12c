import csv
import re

import numpy as np
import pytest

from padeloc.cli import main, parse_config, read_config_file
from padeloc.errors import UsageError
from padeloc.report import emit_csv, emit_svg, format_value, read_points_csv
from padeloc.sim import CSV_FIELDS, DEFAULT_SNR_GRID, ExperimentConfig, PowerRow, run_power_experiment


def row(snr, power, stat="pole", test="pole_score"):
    return PowerRow(2.0, snr, 0.7, 0.7, 10, 100, 0.05, stat, test, "interdirection", power, 0.01, 0, 0)


class TestParseConfig:
    def test_empty(self):
        assert parse_config([]) == ExperimentConfig()

    def test_file_then_flag(self, tmp_path):
        f = tmp_path / "c.cfg"
        f.write_text("m = 50\nalpha=1.5  # heavy\nsnr-grid = 0.1, 1\n")
        cfg = parse_config(["--m", "100"], config_file=str(f))
        assert cfg.m == 100 and cfg.alpha == 1.5 and cfg.snr_grid == (0.1, 1.0)

    def test_unknown_key(self, tmp_path):
        f = tmp_path / "c.cfg"
        f.write_text("reps = 5\nwidth = 3\n")
        with pytest.raises(UsageError) as exc:
            read_config_file(str(f))
        assert exc.value.key == "width"

    def test_zero_with_p1(self):
        with pytest.raises(UsageError):
            parse_config(["--statistic", "zero"])

    def test_bad_value(self, tmp_path):
        f = tmp_path / "c.cfg"
        f.write_text("m = many\n")
        with pytest.raises(UsageError) as exc:
            parse_config([], config_file=str(f))
        assert exc.value.key == "m"

    def test_seed_hex(self):
        assert parse_config(["--seed", "0xff"]).seed == 255


class TestReport:
    def test_format(self):
        assert format_value(0.1) == "0.1"
        assert format_value(True) == "true"
        assert format_value(3) == "3"

    def test_csv_header_and_determinism(self, tmp_path):
        rows = run_power_experiment(ExperimentConfig(snr_grid=(0.0, 1.0), m=20, reps=10, seed=1))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_csv(rows, a)
        emit_csv(run_power_experiment(ExperimentConfig(snr_grid=(0.0, 1.0), m=20, reps=10, seed=1)), b)
        assert a.read_bytes() == b.read_bytes()
        lines = a.read_text().splitlines()
        assert lines[0] == ",".join(CSV_FIELDS)
        assert len(lines) == 3

    def test_csv_empty(self, tmp_path):
        with pytest.raises(ValueError):
            emit_csv([], tmp_path / "x.csv")

    def test_csv_unwritable(self, tmp_path):
        with pytest.raises(OSError):
            emit_csv([row(1.0, 0.5)], tmp_path / "missing" / "x.csv")

    def test_svg_y_extent(self, tmp_path):
        out = tmp_path / "p.svg"
        emit_svg([row(0.01, 0.0), row(1.0, 1.0), row(0.1, 0.5, test="vdw")], out, title="t")
        text = out.read_text()
        assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
        ys = [float(y) for pts in re.findall(r'points="([^"]+)"', text) for y in re.findall(r",([\d.]+)", pts)]
        # power 1 maps to the top margin, power 0 to the bottom of the plot
        assert min(ys) == pytest.approx(30.0) and max(ys) == pytest.approx(360.0)
        assert text.count("<polyline") == 2

    def test_read_points(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text("re,im\n1,2\n\n-0.5,3e-2\n")
        assert read_points_csv(f) == [(1.0, 2.0), (-0.5, 0.03)]

    def test_read_points_bad_row(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text("1,2\nx,y\n")
        with pytest.raises(ValueError):
            read_points_csv(f)


class TestMain:
    def test_power_csv_and_svg(self, tmp_path):
        out, svg = tmp_path / "o.csv", tmp_path / "o.svg"
        rc = main(["power", "--m", "20", "--reps", "8", "--snr-grid", "0,1", "--also", "original:vdw",
                   "--theory", "--out", str(out), "--svg", str(svg)])
        assert rc == 0
        recs = list(csv.DictReader(out.open()))
        assert len(recs) == 6
        assert {r["test"] for r in recs} == {"pole_score", "vdw", "hotelling_theory"}
        assert svg.exists()

    def test_power_stdout(self, capsys):
        assert main(["power", "--m", "10", "--reps", "4", "--snr-grid", "1"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == ",".join(CSV_FIELDS) and len(out) == 2

    def test_usage_errors(self, tmp_path, capsys):
        assert main(["power", "--statistic", "zero", "--p", "1"]) == 2
        assert main(["power", "--alpha", "3"]) == 2
        f = tmp_path / "c.cfg"
        f.write_text("bogus = 1\n")
        assert main(["power", "--config", str(f)]) == 2
        assert "bogus" in capsys.readouterr().err

    def test_argparse_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["power", "--m", "ten"])
        assert exc.value.code == 2

    def test_sample(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sample", "--reps", "3", "--p", "2", "--seed", "4", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "k,re,im,replicate"
        assert len(lines) == 1 + 3 * 4

    def test_sample_deterministic(self, capsys):
        main(["sample", "--reps", "2", "--seed", "9", "--alpha", "0.8"])
        a = capsys.readouterr().out
        main(["sample", "--reps", "2", "--seed", "9", "--alpha", "0.8"])
        assert capsys.readouterr().out == a

    def test_test_command(self, tmp_path, capsys):
        f = tmp_path / "pts.csv"
        pts = np.random.default_rng(0).standard_normal((40, 2)) + 2.0
        f.write_text("re,im\n" + "\n".join(f"{x:.17g},{y:.17g}" for x, y in pts) + "\n")
        assert main(["test", "--input", str(f), "--test", "vdw"]) == 0
        out = capsys.readouterr().out
        assert "reject=true" in out
        assert main(["test", "--input", str(f), "--test", "hotelling"]) == 0

    def test_test_degenerate(self, tmp_path, capsys):
        f = tmp_path / "pts.csv"
        f.write_text("1,1\n2,2\n3,3\n")
        assert main(["test", "--input", str(f), "--test", "hotelling"]) == 3
        assert main(["test", "--input", str(f)]) == 3

    def test_pade(self, capsys):
        assert main(["pade", "--series", "3,0,0.375,0.09375"]) == 0
        out = capsys.readouterr().out
        assert "poles=[(0.5+0j), (-0.25+0j)]" in out
        assert "zeros=[(0.25" in out

    def test_pade_errors(self, capsys):
        assert main(["pade", "--series", "1,2,3"]) == 2
        assert main(["pade", "--series", "1,x"]) == 2
        assert main(["pade", "--series", "0,1"]) == 3

    def test_density_check(self, capsys):
        assert main(["density-check", "--alpha", "1", "--reps", "2000", "--seed", "1"]) == 0
        assert "ks_statistic=" in capsys.readouterr().out
        assert main(["density-check", "--reps", "10"]) == 2
        assert main(["density-check", "--alpha", "0"]) == 2
