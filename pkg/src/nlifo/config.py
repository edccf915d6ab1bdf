"""TOML scenario files: parsing, validation, round-tripping and presets.

A scenario file has five tables::

    [source]      pump and signal carrier wavelengths, crystal length, poling period
    [dispersion]  model kind and its coefficients, phase-matching offset
    [loss]        idler absorption lines
    [sweep]       signal-wavelength window and OPD range
    [gain]        peak photon number (or coupling) and second-pass pump phase
"""

from __future__ import annotations

import dataclasses
import math
import re
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib
import tomli_w

from .dispersion import (
    FrequencyGrid,
    LossPeak,
    LossProfile,
    SourceParams,
    TaylorDispersion,
    calibrate_engineered_tau,
    calibrate_gamma,
    load_dispersion_table,
)
from .errors import ConfigError, NlifoError
from .interferometry import OpdRange

PRESETS = ("flat_low", "flat_high", "skewed_low", "skewed_high")
DISPERSION_KINDS = ("engineered", "taylor", "tabulated")
IC_CANCEL_MODES = ("linear", "full", "none")


@dataclass(frozen=True)
class SourceSection:
    lambda_pump: float = 644e-9
    lambda_signal_center: float = 845e-9
    L: float = 0.04
    Lambda_pol: float = 6.1879e-6


@dataclass(frozen=True)
class DispersionSection:
    model: str = "engineered"
    pma_offset: float = 0.0
    label: str = "representative"
    inv_v: float | None = None
    beta: float | None = None
    tau: float | None = None
    bandwidth_hz: float | None = None
    inv_v_s: float | None = None
    inv_v_i: float | None = None
    beta_s: float | None = None
    beta_i: float | None = None
    tau_s: float | None = None
    tau_i: float | None = None
    table: str | None = None
    anomalous_strength: float = 0.1
    anomalous_with_absorption: bool = False


@dataclass(frozen=True)
class PeakSection:
    center_wavelength: float
    transmission: float
    sigma_lambda: float


@dataclass(frozen=True)
class LossSection:
    enabled: bool = True
    reference_length: float | None = None
    peaks: tuple = ()


@dataclass(frozen=True)
class SweepSection:
    lambda_min: float = 800e-9
    lambda_max: float = 890e-9
    n_bins: int = 4096
    opd_start: float = -0.01e-3
    opd_stop: float = -0.05e-3
    opd_n: int = 200
    ic_cancel: str = "linear"


@dataclass(frozen=True)
class GainSection:
    n_peak: float | None = 0.04
    gamma_mag: float | None = None
    phi_p: float = 0.0


@dataclass(frozen=True)
class ScenarioConfig:
    source: SourceSection = field(default_factory=SourceSection)
    dispersion: DispersionSection = field(default_factory=DispersionSection)
    loss: LossSection = field(default_factory=LossSection)
    sweep: SweepSection = field(default_factory=SweepSection)
    gain: GainSection = field(default_factory=GainSection)
    base_dir: str = field(default=".", compare=False)

    def replace(self, section: str, **changes) -> "ScenarioConfig":
        new = dataclasses.replace(getattr(self, section), **changes)
        return dataclasses.replace(self, **{section: new})


_SECTIONS = {
    "source": SourceSection,
    "dispersion": DispersionSection,
    "loss": LossSection,
    "sweep": SweepSection,
    "gain": GainSection,
}


def _line_of(text: str, section: str, key: str | None) -> int | None:
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        head = re.match(r"^\[+\s*([\w.]+)\s*\]+", line)
        if head:
            current = head.group(1).split(".")[0]
            if key is None and current == section:
                return lineno
            continue
        if current == section and key and re.match(rf"^{re.escape(key)}\s*=", line):
            return lineno
    return None


def _err(text, source_name, section, key, message) -> ConfigError:
    line = _line_of(text, section, key) if text else None
    where = f"{source_name}:{line}: " if line else f"{source_name}: "
    target = f"[{section}]" + (f".{key}" if key else "")
    return ConfigError(f"{where}{target}: {message}")


def _coerce(value, annotation, ctx):
    kind = str(annotation)
    if "bool" in kind:
        if isinstance(value, bool):
            return value
        raise ctx("expected true or false")
    if "int" in kind:
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        raise ctx(f"expected an integer, got {value!r}")
    if "float" in kind:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
        raise ctx(f"expected a number, got {value!r}")
    if "str" in kind:
        if isinstance(value, str):
            return value
        raise ctx(f"expected a string, got {value!r}")
    return value


def _section(cls, data, text, name, section):
    if not isinstance(data, dict):
        raise _err(text, name, section, None, "expected a table")
    known = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            raise _err(text, name, section, key, f"unknown key; valid keys are {', '.join(known)}")
        if section == "loss" and key == "peaks":
            kwargs[key] = _peaks(value, text, name)
            continue

        def ctx(msg, _k=key):
            return _err(text, name, section, _k, msg)

        kwargs[key] = _coerce(value, known[key].type, ctx)
    return cls(**kwargs)


def _peaks(value, text, name):
    if not isinstance(value, list):
        raise _err(text, name, "loss", "peaks", "expected an array of tables")
    out = []
    keys = [f.name for f in dataclasses.fields(PeakSection)]
    for i, item in enumerate(value):
        if not isinstance(item, dict) or set(item) != set(keys):
            raise _err(text, name, "loss", "peaks", f"peak {i} must define exactly {', '.join(keys)}")
        try:
            out.append(PeakSection(**{k: float(item[k]) for k in keys}))
        except (TypeError, ValueError):
            raise _err(text, name, "loss", "peaks", f"peak {i} has non-numeric fields") from None
    return tuple(out)


def parse_config(text: str, name: str = "<config>", base_dir=".") -> ScenarioConfig:
    """Parse a TOML scenario string into a validated :class:`ScenarioConfig`."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{name}: TOML syntax error: {exc}") from None
    for key in data:
        if key not in _SECTIONS:
            raise _err(text, name, key, None, f"unknown section; valid sections are {', '.join(_SECTIONS)}")
    sections = {key: _section(cls, data.get(key, {}), text, name, key) for key, cls in _SECTIONS.items()}
    cfg = ScenarioConfig(**sections, base_dir=str(base_dir))
    _validate(cfg, text, name)
    return cfg


def _validate(cfg: ScenarioConfig, text, name):
    d, s, g, sw = cfg.dispersion, cfg.source, cfg.gain, cfg.sweep
    if d.model not in DISPERSION_KINDS:
        raise _err(text, name, "dispersion", "model", f"unknown model {d.model!r}; expected one of {', '.join(DISPERSION_KINDS)}")
    need = {
        "engineered": ("inv_v", "beta"),
        "taylor": ("inv_v_s", "inv_v_i"),
        "tabulated": ("table",),
    }[d.model]
    for key in need:
        if getattr(d, key) is None:
            raise _err(text, name, "dispersion", None, f"model {d.model!r} requires '{key}'")
    if d.model == "engineered" and d.tau is None and d.bandwidth_hz is None:
        raise _err(text, name, "dispersion", None, "engineered model needs 'tau' or 'bandwidth_hz'")
    if (g.n_peak is None) == (g.gamma_mag is None):
        raise _err(text, name, "gain", None, "set exactly one of 'n_peak' or 'gamma_mag'")
    if g.n_peak is not None and g.n_peak < 0:
        raise _err(text, name, "gain", "n_peak", "must be non-negative")
    if sw.ic_cancel not in IC_CANCEL_MODES:
        raise _err(text, name, "sweep", "ic_cancel", f"expected one of {', '.join(IC_CANCEL_MODES)}")
    if sw.n_bins < 2:
        raise _err(text, name, "sweep", "n_bins", "need at least 2 bins")
    if sw.opd_n < 1:
        raise _err(text, name, "sweep", "opd_n", "need at least 1 OPD point")
    if not 0 < s.lambda_pump < s.lambda_signal_center:
        raise _err(text, name, "source", "lambda_signal_center", "must exceed lambda_pump")
    for i, p in enumerate(cfg.loss.peaks):
        if not 0 < p.transmission <= 1:
            raise _err(text, name, "loss", "peaks", f"peak {i}: transmission must lie in (0, 1]")


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    return parse_config(text, str(path), path.parent)


def _strip_none(obj):
    if isinstance(obj, dict):
        return {k: _strip_none(v) for k, v in obj.items() if v is not None}
    if isinstance(obj, (list, tuple)):
        return [_strip_none(v) for v in obj]
    return obj


def dump_config(cfg: ScenarioConfig) -> str:
    """Serialize to TOML; ``parse_config(dump_config(c)) == c``."""
    data = {key: _strip_none(dataclasses.asdict(getattr(cfg, key))) for key in _SECTIONS}
    return tomli_w.dumps(data)


def preset_path(name: str):
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    return resources.files("nlifo") / "presets" / f"{name}.toml"


def load_preset(name: str) -> ScenarioConfig:
    ref = preset_path(name)
    return parse_config(ref.read_text(encoding="utf-8"), f"preset:{name}")


@dataclass(frozen=True, eq=False)
class Scenario:
    """Fully built objects for a configuration run."""

    config: ScenarioConfig
    src: SourceParams
    model: object
    loss: LossProfile | None
    grid: FrequencyGrid
    phi_p: float
    ic_cancel: str
    opd_range: OpdRange
    n_peak: float

    @property
    def anomalous_strength(self) -> float:
        return self.config.dispersion.anomalous_strength


def build_scenario(cfg: ScenarioConfig) -> Scenario:
    s, d, g, sw, lo = cfg.source, cfg.dispersion, cfg.gain, cfg.sweep, cfg.loss
    try:
        src = SourceParams(s.lambda_pump, s.lambda_signal_center, s.L, s.Lambda_pol)
        if g.n_peak is not None:
            src = src.replace(gamma_mag=calibrate_gamma(g.n_peak, s.L))
            n_peak = g.n_peak
        else:
            src = src.replace(gamma_mag=g.gamma_mag)
            n_peak = math.sinh(src.gamma_mag * s.L) ** 2
        if d.model == "engineered":
            tau = d.tau
            if tau is None:
                tau = calibrate_engineered_tau(src.with_gain(0.04), d.inv_v, d.beta, d.bandwidth_hz)
            model = TaylorDispersion.engineered(d.inv_v, d.beta, tau, d.pma_offset)
        elif d.model == "taylor":
            model = TaylorDispersion(
                d.inv_v_s, d.inv_v_i, d.beta_s or 0.0, d.beta_i or 0.0,
                d.tau_s or 0.0, d.tau_i or 0.0, d.pma_offset,
            )
        else:
            table = Path(cfg.base_dir) / d.table
            model = load_dispersion_table(table, src.omega_signal, src.omega_idler, d.pma_offset)
        loss = None
        if lo.enabled and lo.peaks:
            peaks = tuple(LossPeak(p.center_wavelength, p.transmission, p.sigma_lambda) for p in lo.peaks)
            loss = LossProfile(peaks, lo.reference_length or s.L)
        grid = FrequencyGrid.from_signal_wavelengths(src, sw.lambda_min, sw.lambda_max, sw.n_bins)
    except NlifoError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid scenario: {exc}") from exc
    return Scenario(
        cfg, src, model, loss, grid, g.phi_p, sw.ic_cancel,
        OpdRange(sw.opd_start, sw.opd_stop, sw.opd_n), n_peak,
    )
