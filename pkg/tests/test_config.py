import math

import numpy as np
import pytest

from nlifo.config import PRESETS, build_scenario, dump_config, load_config, load_preset, parse_config
from nlifo.dispersion import pma
from nlifo.errors import ConfigError

MINIMAL = """
[source]
lambda_pump = 6.44e-7
L = 0.04

[dispersion]
model = "taylor"
inv_v_s = 7.7e-9
inv_v_i = 7.6e-9

[gain]
n_peak = 1.0
"""


@pytest.mark.parametrize("name", PRESETS)
def test_presets_roundtrip(name):
    cfg = load_preset(name)
    assert parse_config(dump_config(cfg)) == cfg


def test_preset_contents(scenarios):
    low, high = scenarios["flat_low"], scenarios["flat_high"]
    assert math.sinh(low.src.gamma_mag * low.src.L) ** 2 == pytest.approx(0.04, rel=1e-12)
    assert math.sinh(high.src.gamma_mag * high.src.L) ** 2 == pytest.approx(14.0, rel=1e-12)
    assert low.grid.n_bins == 4096 and low.opd_range.n == 200
    w = np.zeros(())
    assert float(pma(scenarios["skewed_low"].model, w) - pma(low.model, w)) == pytest.approx(-65.6)
    assert [p.transmission for p in low.loss.peaks] == [0.01, 0.30]


def test_minimal_config_uses_defaults():
    sc = build_scenario(parse_config(MINIMAL))
    assert sc.src.lambda_signal_center == 845e-9
    assert sc.loss is None
    assert sc.ic_cancel == "linear"


def test_load_from_file(tmp_path):
    path = tmp_path / "s.toml"
    path.write_text(MINIMAL, encoding="utf-8")
    assert load_config(path).gain.n_peak == 1.0
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.toml")


@pytest.mark.parametrize(
    "edit, pattern",
    [
        (("n_peak = 1.0", "n_peak = 1.0\ngamma_mag = 3.0"), r"\[gain\]: set exactly one"),
        (("inv_v_i = 7.6e-9", "inv_v_i = 7.6e-9\nbogus = 1"), r":10: \[dispersion\]\.bogus: unknown key"),
        (('model = "taylor"', 'model = "sellmeier"'), r"\[dispersion\]\.model: unknown model"),
        (("L = 0.04", 'L = "long"'), r":4: \[source\]\.L: expected a number"),
        (("[gain]", "[gains]"), r"unknown section"),
        (("n_peak = 1.0", "n_peak = 1.0\n[sweep]\nic_cancel = 'half'"), r"\[sweep\]\.ic_cancel"),
        (("n_peak = 1.0", "n_peak = "), r"TOML syntax error"),
        (("inv_v_i = 7.6e-9", ""), r"requires 'inv_v_i'"),
    ],
)
def test_diagnostics(edit, pattern):
    text = MINIMAL.replace(*edit)
    with pytest.raises(ConfigError, match=pattern):
        parse_config(text, "scn.toml")


def test_bad_peak_is_rejected():
    text = MINIMAL + "\n[loss]\nenabled = true\n[[loss.peaks]]\ncenter_wavelength = 2.75e-6\ntransmission = 0.0\nsigma_lambda = 2e-8\n"
    with pytest.raises(ConfigError, match="transmission"):
        parse_config(text)


def test_unknown_preset():
    with pytest.raises(ConfigError, match="available"):
        load_preset("nope")


def test_replace_section():
    cfg = load_preset("flat_low").replace("gain", n_peak=2.0)
    assert cfg.gain.n_peak == 2.0
    assert load_preset("flat_low").gain.n_peak == 0.04
