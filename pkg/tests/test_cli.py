import csv
import json

import numpy as np
import pytest

from nlifo import cli
from nlifo.config import dump_config, load_preset
from nlifo.errors import QuadratureError
from nlifo.spectra import SPECTRUM_CONFIGURATIONS


def _small_config(tmp_path, preset="flat_low", opd_n=5):
    cfg = load_preset(preset).replace("sweep", n_bins=96, opd_n=opd_n)
    path = tmp_path / f"{preset}.toml"
    path.write_text(dump_config(cfg), encoding="utf-8")
    return path


@pytest.mark.parametrize("configuration", SPECTRUM_CONFIGURATIONS)
def test_spectrum_outputs(tmp_path, configuration):
    cfg = _small_config(tmp_path)
    out = tmp_path / "out"
    assert cli.main(["spectrum", "--config", str(cfg), "--configuration", configuration, "--out", str(out)]) == 0
    with open(out / f"{configuration}_spectrum.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:3] == ["lambda_m", "value", "value_raw"]
    assert len(rows) == 97
    values = np.array([float(r[1]) for r in rows[1:]])
    assert values.max() == pytest.approx(1.0)
    meta = json.loads((out / f"{configuration}_spectrum.meta.json").read_text())
    assert meta["normalization_max"] > 0
    assert (out / f"{configuration}_spectrum.svg").stat().st_size > 0


def test_spectrum_is_byte_deterministic(tmp_path):
    cfg = _small_config(tmp_path)
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / run
        assert cli.main(["spectrum", "--config", str(cfg), "--configuration", "su11", "--out", str(out)]) == 0
        outputs.append({p.name: p.read_bytes() for p in out.iterdir()})
    assert outputs[0] == outputs[1]


def test_interferogram_outputs(tmp_path):
    cfg = _small_config(tmp_path)
    out = tmp_path / "ifg"
    for name in ("su11", "ic_bbs", "dl_su11"):
        assert cli.main(["interferogram", "--config", str(cfg), "--configuration", name, "--out", str(out)]) == 0
        lines = (out / f"{name}_interferogram.csv").read_text().splitlines()
        assert lines[0] == "opd_m,lambda_m,intensity,intensity_raw" and len(lines) == 1 + 5 * 96
        vis = (out / f"{name}_visibility.csv").read_text().splitlines()
        assert len(vis) == 97
        assert (out / f"{name}_interferogram.svg").exists()


def test_single_opd_point_is_refused(tmp_path, capsys):
    cfg = _small_config(tmp_path, opd_n=1)
    assert cli.main(["interferogram", "--config", str(cfg), "--out", str(tmp_path)]) == cli.EXIT_USAGE
    assert "need ≥2 OPD points for visibility" in capsys.readouterr().err


def test_usage_errors(tmp_path, capsys):
    assert cli.main(["spectrum", "--preset", "flat_low", "--configuration", "nope"]) == cli.EXIT_USAGE
    assert "vacuum" in capsys.readouterr().err
    assert cli.main(["spectrum", "--config", str(tmp_path / "missing.toml")]) == cli.EXIT_USAGE
    assert cli.main(["spectrum"]) == cli.EXIT_USAGE
    bad = tmp_path / "bad.toml"
    bad.write_text("[gain]\nn_peak = [1\n", encoding="utf-8")
    assert cli.main(["spectrum", "--config", str(bad)]) == cli.EXIT_USAGE
    assert "TOML syntax error" in capsys.readouterr().err
    assert cli.main([]) == cli.EXIT_USAGE


def test_numerical_failure_exit_code(tmp_path, monkeypatch, capsys):
    def boom(*a, **k):
        raise QuadratureError("z-quadrature failed for 3 of 96 bins", 2e-7)

    monkeypatch.setattr(cli, "compute_spectrum", boom)
    cfg = _small_config(tmp_path)
    assert cli.main(["spectrum", "--config", str(cfg), "--out", str(tmp_path)]) == cli.EXIT_NUMERICAL
    assert "2.000e-07" in capsys.readouterr().err


def test_verify(tmp_path, monkeypatch):
    assert cli.main(["verify", "--draws", "8", "--out", str(tmp_path)]) == cli.EXIT_OK
    assert "OVERALL PASS" in (tmp_path / "verify_report.txt").read_text()
    assert (tmp_path / "verify_report.csv").read_text().startswith("check,passed")
    from nlifo import twinbeam

    real = twinbeam.psi_phase
    monkeypatch.setattr("nlifo.su11.psi_phase", lambda *a: real(*a) + 0.5)
    assert cli.main(["verify", "--draws", "8", "--out", str(tmp_path)]) == cli.EXIT_NUMERICAL


def test_version(capsys):
    assert cli.main(["--version"]) == 0
    assert "nlifo" in capsys.readouterr().out
