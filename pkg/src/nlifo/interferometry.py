"""OPD sweeps, spectral interferograms and fringe visibility."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NlifoError, annotate

CONFIGURATIONS = ("su11", "ic_bbs", "dl_su11")


@dataclass(frozen=True, eq=False)
class Interferogram:
    """Intensity over (OPD rows x signal-wavelength columns).

    ``values`` is normalized by the global maximum ``scale``; ``raw`` keeps
    the photon numbers.
    """

    wavelength_axis: np.ndarray
    opd_axis: np.ndarray
    values: np.ndarray
    configuration: str
    raw: np.ndarray
    scale: float

    @classmethod
    def from_raw(cls, wavelength, opd, raw, configuration):
        raw = np.asarray(raw, dtype=float)
        peak = float(np.max(raw)) if raw.size else 0.0
        values = raw / peak if peak > 0 else np.zeros_like(raw)
        return cls(np.asarray(wavelength), np.asarray(opd), values, configuration, raw, peak)

    def row_normalized(self) -> np.ndarray:
        peak = self.raw.max(axis=1, keepdims=True)
        return np.divide(self.raw, peak, out=np.zeros_like(self.raw), where=peak > 0)


@dataclass(frozen=True, eq=False)
class VisibilityTrace:
    wavelength_axis: np.ndarray
    v: np.ndarray
    n_undefined: int = 0


@dataclass(frozen=True)
class OpdRange:
    start: float = -0.01e-3
    stop: float = -0.05e-3
    n: int = 200

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.n)


def max_workers() -> int:
    env = os.environ.get("NLIFO_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DomainError(f"NLIFO_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _row_solver(scenario, configuration):
    from . import ic, su11
    from .phases import opd_phase_fn, sum_phases

    model, src, loss, w = scenario.model, scenario.src, scenario.loss, scenario.grid.omega
    if configuration == "su11":
        return lambda opd: su11.su11_intensities(model, src, loss, opd_phase_fn(opd, src), scenario.phi_p, w)[0]
    if configuration == "ic_bbs":
        cancel = ic.cancel_linear_deltak(model, src, scenario.ic_cancel)

        def row(opd):
            phase = sum_phases(cancel, opd_phase_fn(opd, src))
            return ic.bbs_arms(model, src, loss, phase, scenario.phi_p, w)[0]

        return row
    raise DomainError(f"unknown configuration {configuration!r}; expected one of {CONFIGURATIONS}")


def sweep_opd(scenario, configuration: str, opd_range) -> Interferogram:
    """Interferogram of ``configuration`` over an idler-OPD range.

    ``scenario`` provides ``model``, ``src``, ``loss``, ``grid``, ``phi_p`` and
    ``ic_cancel``. ``opd_range`` is an :class:`OpdRange` or an explicit
    sequence of OPDs in metres.
    """
    opds = opd_range.values if isinstance(opd_range, OpdRange) else np.atleast_1d(np.asarray(opd_range, float))
    if opds.size < 1:
        raise DomainError("need at least one OPD value")
    lam = scenario.grid.signal_wavelengths(scenario.src)
    if configuration == "dl_su11":
        from .dl import dl_su11_surface

        try:
            raw = dl_su11_surface(scenario.model, scenario.src, scenario.loss, opds, scenario.phi_p, scenario.grid.omega)
        except NlifoError as exc:
            raise annotate(exc, f"dl_su11 over OPD {opds[0]:.6e}..{opds[-1]:.6e} m, {_span(scenario.grid)}") from exc
        return Interferogram.from_raw(lam, opds, raw, configuration)
    solve = _row_solver(scenario, configuration)

    def guarded(opd):
        try:
            return solve(opd)
        except NlifoError as exc:
            raise annotate(exc, f"{configuration} at OPD {opd:.6e} m, {_span(scenario.grid)}") from exc

    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        rows = list(pool.map(guarded, opds))
    return Interferogram.from_raw(lam, opds, np.array(rows), configuration)


def _span(grid):
    w = grid.omega
    return f"omega {w[0]:.6e}..{w[-1]:.6e} rad/s"


def visibility_numeric(ifg: Interferogram) -> VisibilityTrace:
    """``(max - min) / (max + min)`` over the OPD axis at each wavelength.

    Bins where ``max + min`` vanishes are reported as NaN and counted.
    """
    if ifg.raw.shape[0] < 2:
        raise DomainError("need >=2 OPD points for visibility")
    hi = ifg.raw.max(axis=0)
    lo = ifg.raw.min(axis=0)
    den = hi + lo
    bad = ~(den > 0)
    with np.errstate(invalid="ignore", divide="ignore"):
        v = np.where(bad, np.nan, (hi - lo) / np.where(bad, 1.0, den))
    return VisibilityTrace(ifg.wavelength_axis, v, int(bad.sum()))


def visibility_analytic(configuration: str, n_v, eta):
    """Closed-form SU(1,1) or IC visibility for single-pass photon number ``n_v``."""
    n_v = np.asarray(n_v, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if np.any(n_v < 0) or np.any(eta < 0) or np.any(eta > 1):
        raise DomainError("need n_v >= 0 and eta in [0, 1]")
    if configuration == "su11":
        return 2.0 * np.sqrt(eta) * (n_v + 1.0) / (2.0 + n_v * (1.0 + eta))
    if configuration == "ic":
        return 2.0 * np.sqrt(eta * (n_v + 1.0)) / (2.0 + eta * n_v)
    raise DomainError(f"visibility_analytic supports 'su11' and 'ic', got {configuration!r}")


def visibility_limits(configuration: str, eta, n_v=0.0):
    """Low- and high-gain limits of the analytic visibility."""
    eta = np.asarray(eta, dtype=float)
    low = np.sqrt(eta)
    if configuration == "su11":
        high = 2.0 * np.sqrt(eta) / (1.0 + eta)
    elif configuration == "ic":
        n_v = np.asarray(n_v, dtype=float)
        with np.errstate(divide="ignore"):
            high = np.minimum(1.0, 2.0 / np.sqrt(eta * n_v))
    else:
        raise DomainError(f"unknown configuration {configuration!r}")
    return {"low_gain": low, "high_gain": high}


def count_fringes(trace) -> int:
    """Number of full fringe periods in a 1-D intensity trace (maxima counted after mean removal)."""
    x = np.asarray(trace, dtype=float) - np.mean(trace)
    crossings = np.count_nonzero(np.diff(np.signbit(x)))
    return crossings // 2
