"""Dispersion relations, frequency grids, energy conservation and idler loss.

All frequencies passed to the dispersion models are *detunings* from the
mode's own carrier, in rad/s. Loss profiles are evaluated at *absolute*
angular frequencies, because the absorption lines are fixed in the lab frame.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import DomainError

MODES = ("signal", "idler")

DISPERSION_CSV_HEADER = ("mode", "omega_rad_per_s", "k_rad_per_m")


def wavelength_to_omega(wavelength):
    """Angular frequency (rad/s) of a vacuum wavelength (m)."""
    return 2.0 * np.pi * SPEED_OF_LIGHT / np.asarray(wavelength, dtype=float)


def omega_to_wavelength(omega):
    """Vacuum wavelength (m) of an angular frequency (rad/s)."""
    return 2.0 * np.pi * SPEED_OF_LIGHT / np.asarray(omega, dtype=float)


def conjugate_wavelength(lambda_pump: float, wavelength):
    """Return the energy-conserving partner wavelength.

    Solves ``1/lambda_pump = 1/wavelength + 1/partner`` for the partner, so the
    same call maps signal to idler and idler to signal.

    Parameters
    ----------
    lambda_pump : float
        Pump wavelength in metres.
    wavelength : float or array_like
        Signal or idler wavelength in metres, strictly longer than the pump.

    Returns
    -------
    float or numpy.ndarray
        The conjugate wavelength in metres.
    """
    lam = np.asarray(wavelength, dtype=float)
    if lambda_pump <= 0 or np.any(lam <= lambda_pump):
        raise DomainError(
            f"wavelength must exceed the pump wavelength {lambda_pump!r} m; got {wavelength!r}"
        )
    out = 1.0 / (1.0 / lambda_pump - 1.0 / lam)
    return float(out) if out.ndim == 0 else out


def calibrate_gamma(n_peak: float, length: float) -> float:
    """Interaction strength giving a phase-matched peak photon number ``n_peak``.

    Inverts ``n_peak = sinh(gamma * length)**2``.
    """
    if n_peak < 0:
        raise DomainError(f"peak photon number must be non-negative, got {n_peak}")
    if length <= 0:
        raise DomainError(f"interaction length must be positive, got {length}")
    return math.asinh(math.sqrt(n_peak)) / length


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform grid of signal detunings ``omega0 + k * delta_omega``."""

    omega0: float
    delta_omega: float
    n_bins: int

    def __post_init__(self):
        if not self.delta_omega > 0:
            raise DomainError(f"delta_omega must be positive, got {self.delta_omega}")
        if self.n_bins < 1:
            raise DomainError(f"n_bins must be at least 1, got {self.n_bins}")

    @property
    def omega(self) -> np.ndarray:
        return self.omega0 + self.delta_omega * np.arange(self.n_bins)

    @classmethod
    def symmetric(cls, half_width: float, n_bins: int) -> "FrequencyGrid":
        """Grid spanning ``[-half_width, half_width]`` inclusive."""
        if n_bins < 2:
            raise DomainError("a symmetric grid needs at least two bins")
        return cls(-half_width, 2.0 * half_width / (n_bins - 1), n_bins)

    @classmethod
    def from_signal_wavelengths(
        cls, src: "SourceParams", lambda_min: float, lambda_max: float, n_bins: int
    ) -> "FrequencyGrid":
        """Grid uniform in frequency covering a signal wavelength window."""
        if not 0 < lambda_min < lambda_max:
            raise DomainError("need 0 < lambda_min < lambda_max")
        w_hi = wavelength_to_omega(lambda_min) - src.omega_signal
        w_lo = wavelength_to_omega(lambda_max) - src.omega_signal
        return cls(float(w_lo), float(w_hi - w_lo) / (n_bins - 1), n_bins)

    def signal_wavelengths(self, src: "SourceParams") -> np.ndarray:
        return omega_to_wavelength(src.omega_signal + self.omega)


@dataclass(frozen=True)
class SourceParams:
    """Pump, carrier and crystal parameters of one squeezer.

    The idler carrier follows from energy conservation and is not stored.
    ``gamma_mag`` is usually obtained from :func:`calibrate_gamma`.
    """

    lambda_pump: float
    lambda_signal_center: float
    L: float
    Lambda_pol: float = 6.1879e-6
    gamma_mag: float = 0.0
    phi_pump: float = 0.0

    def __post_init__(self):
        if self.L <= 0:
            raise DomainError(f"L must be positive, got {self.L}")
        if self.Lambda_pol <= 0:
            raise DomainError(f"Lambda_pol must be positive, got {self.Lambda_pol}")
        if self.gamma_mag < 0:
            raise DomainError(f"gamma_mag must be non-negative, got {self.gamma_mag}")
        # raises for an unphysical signal carrier
        conjugate_wavelength(self.lambda_pump, self.lambda_signal_center)

    @property
    def lambda_idler_center(self) -> float:
        return conjugate_wavelength(self.lambda_pump, self.lambda_signal_center)

    @property
    def omega_signal(self) -> float:
        return float(wavelength_to_omega(self.lambda_signal_center))

    @property
    def omega_idler(self) -> float:
        return float(wavelength_to_omega(self.lambda_pump)) - self.omega_signal

    @property
    def gamma(self) -> complex:
        """Complex coupling ``|gamma| exp(-i phi_pump)``."""
        return self.gamma_mag * np.exp(-1j * self.phi_pump)

    def with_gain(self, n_peak: float) -> "SourceParams":
        return replace(self, gamma_mag=calibrate_gamma(n_peak, self.L))

    def replace(self, **changes) -> "SourceParams":
        return replace(self, **changes)


class DispersionModel:
    """Base class for detuned wavevectors ``Delta k_j(omega)`` of signal and idler.

    Subclasses implement ``_dk(mode, omega, deriv)`` returning the detuned
    wavevector (``deriv=0``) or its first frequency derivative (``deriv=1``).
    """

    pma_offset: float = 0.0

    def _dk(self, mode: str, omega: np.ndarray, deriv: int = 0) -> np.ndarray:
        raise NotImplementedError

    def with_offset(self, pma_offset: float) -> "DispersionModel":
        return replace(self, pma_offset=float(pma_offset))


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


@dataclass(frozen=True)
class TaylorDispersion(DispersionModel):
    """Third-order Taylor expansion of each mode's wavevector about its carrier.

    ``Delta k_j(w) = w * inv_v_j + beta_j * w**2 / 2 + tau_j * w**3 / 6``.
    """

    inv_v_s: float
    inv_v_i: float
    beta_s: float = 0.0
    beta_i: float = 0.0
    tau_s: float = 0.0
    tau_i: float = 0.0
    pma_offset: float = 0.0

    @classmethod
    def engineered(cls, inv_v: float, beta: float, tau: float, pma_offset: float = 0.0):
        """Group-velocity matched source with opposite GVDs.

        The third-order term is split as ``tau_s = -tau_i = tau / 2`` so the
        phase-matching argument is the pure cubic ``tau * w**3 / 6`` and
        ``Delta K(w) = 2 w inv_v + beta w**2`` holds exactly.
        """
        return cls(inv_v, inv_v, beta, -beta, tau / 2.0, -tau / 2.0, pma_offset)

    def _dk(self, mode, omega, deriv=0):
        w = np.asarray(omega, dtype=float)
        if mode == "signal":
            a, b, t = self.inv_v_s, self.beta_s, self.tau_s
        else:
            a, b, t = self.inv_v_i, self.beta_i, self.tau_i
        if deriv == 0:
            return w * (a + w * (b / 2.0 + w * t / 6.0))
        return a + w * (b + w * t / 2.0)


@dataclass(frozen=True, eq=False)
class TabulatedDispersion(DispersionModel):
    """Wavevectors sampled on absolute-frequency tables, natural cubic splines.

    Evaluation outside a table raises :class:`DomainError`; there is no
    extrapolation.
    """

    omega_s: np.ndarray
    k_s: np.ndarray
    omega_i: np.ndarray
    k_i: np.ndarray
    omega_center_s: float
    omega_center_i: float
    pma_offset: float = 0.0
    _splines: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        splines = {}
        for mode, w, k, w0 in (
            ("signal", self.omega_s, self.k_s, self.omega_center_s),
            ("idler", self.omega_i, self.k_i, self.omega_center_i),
        ):
            w = np.asarray(w, dtype=float)
            k = np.asarray(k, dtype=float)
            if w.ndim != 1 or w.shape != k.shape or w.size < 4:
                raise DomainError(f"{mode} table needs matching 1-D arrays of >= 4 samples")
            if np.any(np.diff(w) <= 0):
                raise DomainError(f"{mode} frequency axis must be strictly increasing")
            if not w[0] <= w0 <= w[-1]:
                raise DomainError(f"{mode} carrier {w0:.6e} rad/s lies outside its table")
            spline = CubicSpline(w, k, bc_type="natural", extrapolate=False)
            splines[mode] = (spline, float(spline(w0)), w[0], w[-1], w0)
        object.__setattr__(self, "_splines", splines)

    def _dk(self, mode, omega, deriv=0):
        spline, k0, lo, hi, w0 = self._splines[mode]
        w_abs = w0 + np.asarray(omega, dtype=float)
        if np.any(w_abs < lo) or np.any(w_abs > hi):
            raise DomainError(
                f"{mode} frequency outside table bounds [{lo:.6e}, {hi:.6e}] rad/s "
                f"(requested range [{np.min(w_abs):.6e}, {np.max(w_abs):.6e}])"
            )
        if deriv == 0:
            return spline(w_abs) - k0
        return spline(w_abs, 1)

    def with_offset(self, pma_offset):
        return TabulatedDispersion(
            self.omega_s, self.k_s, self.omega_i, self.k_i,
            self.omega_center_s, self.omega_center_i, float(pma_offset),
        )


@dataclass(frozen=True)
class ShiftedIdlerDispersion(DispersionModel):
    """Wraps a model, adding ``-strength * kappa_I`` to the idler wavevector.

    Models an analyte that changes the idler's effective index with the same
    spectral profile as its absorption, without removing photons.
    """

    base: DispersionModel
    loss: "LossProfile"
    omega_center_i: float
    strength: float = 0.1

    @property
    def pma_offset(self):
        return self.base.pma_offset

    def _dk(self, mode, omega, deriv=0):
        out = self.base._dk(mode, omega, deriv)
        if mode == "idler" and self.strength != 0.0:
            w_abs = self.omega_center_i + np.asarray(omega, dtype=float)
            out = out - self.strength * self.loss.kappa(w_abs, deriv=deriv)
        return out

    def with_offset(self, pma_offset):
        return replace(self, base=self.base.with_offset(pma_offset))


def detuned_wavevector(model: DispersionModel, mode: str, omega):
    """Detuned wavevector ``Delta k_mode(omega)`` in rad/m."""
    return model._dk(_check_mode(mode), omega)


def pma(model: DispersionModel, omega):
    """Phase-matching argument ``Delta k_S(w) + Delta k_I(-w) + offset``."""
    w = np.asarray(omega, dtype=float)
    return model._dk("signal", w) + model._dk("idler", -w) + model.pma_offset


def delta_k(model: DispersionModel, omega):
    """Signal-minus-idler mismatch ``Delta k_S(w) - Delta k_I(-w)``."""
    w = np.asarray(omega, dtype=float)
    return model._dk("signal", w) - model._dk("idler", -w)


def delta_k_slope(model: DispersionModel) -> float:
    """``d DeltaK / d omega`` at zero detuning (the summed inverse group velocities)."""
    zero = np.zeros(())
    return float(model._dk("signal", zero, 1) + model._dk("idler", zero, 1))


@dataclass(frozen=True)
class LossPeak:
    center_wavelength: float
    transmission: float
    sigma_lambda: float

    def __post_init__(self):
        if not 0 < self.transmission <= 1:
            raise DomainError(f"peak transmission must lie in (0, 1], got {self.transmission}")
        if self.center_wavelength <= 0 or self.sigma_lambda <= 0:
            raise DomainError("peak wavelength and width must be positive")

    @property
    def omega_center(self) -> float:
        return float(wavelength_to_omega(self.center_wavelength))

    @property
    def sigma_omega(self) -> float:
        # first-order conversion of a wavelength width
        return 2.0 * np.pi * SPEED_OF_LIGHT * self.sigma_lambda / self.center_wavelength**2


@dataclass(frozen=True)
class LossProfile:
    """Idler decay rate built from Gaussian absorption lines.

    Each line contributes ``-ln(T)/L * exp(-(w - w_c)**2 / (2 sigma_w**2))``
    so that the single-pass transmission at the line centre is exactly ``T``
    (for isolated lines).
    """

    peaks: tuple = ()
    L: float = 0.04

    def __post_init__(self):
        object.__setattr__(self, "peaks", tuple(self.peaks))
        if self.L <= 0:
            raise DomainError(f"reference length must be positive, got {self.L}")

    def kappa(self, omega_abs, deriv: int = 0):
        w = np.asarray(omega_abs, dtype=float)
        out = np.zeros_like(w)
        for peak in self.peaks:
            x = (w - peak.omega_center) / peak.sigma_omega
            g = (-math.log(peak.transmission) / self.L) * np.exp(-0.5 * x * x)
            out = out + (g if deriv == 0 else -g * x / peak.sigma_omega)
        return out

    def eta(self, omega_abs):
        return np.exp(-self.kappa(omega_abs) * self.L)


def kappa(profile: LossProfile, omega_abs):
    """Idler decay rate (1/m) at absolute angular frequency ``omega_abs``."""
    return profile.kappa(omega_abs)


def eta(profile: LossProfile, omega_abs):
    """Idler transmission ``exp(-kappa L)`` at absolute angular frequency."""
    return profile.eta(omega_abs)


def idler_kappa(profile: LossProfile | None, src: SourceParams, omega):
    """Decay rate seen by the idler partner of signal detuning ``omega``."""
    w = np.asarray(omega, dtype=float)
    if profile is None:
        return np.zeros_like(w)
    return profile.kappa(src.omega_idler - w)


def idler_eta(profile: LossProfile | None, src: SourceParams, omega):
    """Transmission seen by the idler partner of signal detuning ``omega``."""
    w = np.asarray(omega, dtype=float)
    if profile is None:
        return np.ones_like(w)
    return profile.eta(src.omega_idler - w)


def oh_absorption_loss(length: float = 0.04) -> LossProfile:
    """The two OH-like absorption lines used throughout the presets."""
    return LossProfile(
        (LossPeak(2750e-9, 0.01, 20e-9), LossPeak(2850e-9, 0.30, 10e-9)), length
    )


def calibrate_engineered_tau(
    src: SourceParams,
    inv_v: float,
    beta: float,
    bandwidth_hz: float,
    tau_sign: float = -1.0,
) -> float:
    """Cubic coefficient whose first intensity zeros are ``bandwidth_hz`` apart.

    Uses the flat (zero-offset) engineered model at ``src.gamma_mag``. The
    first zero of the vacuum intensity sits where ``nu * L = 2 pi``, i.e.
    ``|Sigma_K| = sqrt((2 pi / L)**2 + 4 gamma**2)``. The zero position is
    located by bracketing root search for each trial ``tau`` and ``tau`` itself
    by bisection in log-space.
    """
    target = np.pi * bandwidth_hz  # half width in rad/s
    sigma_zero = math.sqrt((2.0 * np.pi / src.L) ** 2 + 4.0 * src.gamma_mag**2)

    def first_zero(tau):
        model = TaylorDispersion.engineered(inv_v, beta, tau_sign * tau)
        return brentq(lambda w: abs(float(pma(model, w))) - sigma_zero, 0.0, 1e17)

    log_tau = brentq(lambda lt: math.log(first_zero(math.exp(lt)) / target), -100.0, -70.0)
    return tau_sign * math.exp(log_tau)


def write_dispersion_table(
    path, omega_s: Sequence[float], k_s: Sequence[float],
    omega_i: Sequence[float], k_i: Sequence[float],
) -> None:
    """Write per-mode wavevector tables in the ``mode,omega,k`` CSV layout."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(DISPERSION_CSV_HEADER)
        for mode, ws, ks in (("signal", omega_s, k_s), ("idler", omega_i, k_i)):
            for w, k in zip(ws, ks):
                writer.writerow((mode, repr(float(w)), repr(float(k))))


def load_dispersion_table(
    path, omega_center_s: float, omega_center_i: float, pma_offset: float = 0.0
) -> TabulatedDispersion:
    """Read a tabulated dispersion CSV.

    The ``omega_rad_per_s`` column holds absolute angular frequencies; the
    carriers are supplied by the caller (normally from :class:`SourceParams`).
    """
    cols = {m: ([], []) for m in MODES}
    with open(Path(path), newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(h.strip() for h in next(reader, ()))
        if header != DISPERSION_CSV_HEADER:
            raise DomainError(f"{path}: expected header {','.join(DISPERSION_CSV_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                mode, w, k = row
                cols[_check_mode(mode.strip())][0].append(float(w))
                cols[mode.strip()][1].append(float(k))
            except (ValueError, KeyError) as exc:
                raise DomainError(f"{path}:{lineno}: bad row {row!r}: {exc}") from None
    return TabulatedDispersion(
        np.array(cols["signal"][0]), np.array(cols["signal"][1]),
        np.array(cols["idler"][0]), np.array(cols["idler"][1]),
        omega_center_s, omega_center_i, pma_offset,
    )
