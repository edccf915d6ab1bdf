"""Closed-form single-pass twin-beam moments for a lossless CW squeezer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionModel, SourceParams, pma
from .errors import UnphysicalMomentsError

# below this |nu * z| the sin(nu z / 2) / nu ratio is taken from its Taylor series
SERIES_THRESHOLD = 1e-6


@dataclass(frozen=True, eq=False)
class PairMoments:
    """Second-order moments of one conjugate frequency pair.

    ``n_s`` is the signal photon number at detuning ``w``, ``n_i`` the idler
    photon number at ``-w``, and ``m`` the anomalous moment ``<a_S a_I>``.
    Fields may be scalars or equally shaped arrays.
    """

    n_s: np.ndarray
    n_i: np.ndarray
    m: np.ndarray

    def physicality_excess(self) -> np.ndarray:
        """Amount by which ``|m|**2`` exceeds ``n_s n_i + min(n_s, n_i)``."""
        n_s = np.real(self.n_s)
        n_i = np.real(self.n_i)
        return np.abs(self.m) ** 2 - (n_s * n_i + np.minimum(n_s, n_i))

    def check_physical(self, rtol: float = 1e-9) -> None:
        n_s = np.real(self.n_s)
        n_i = np.real(self.n_i)
        scale = 1.0 + n_s * n_i + n_s + n_i
        if np.any(n_s < -rtol * scale) or np.any(n_i < -rtol * scale):
            raise UnphysicalMomentsError("negative photon number")
        if np.any(self.physicality_excess() > rtol * scale):
            raise UnphysicalMomentsError("|m|^2 exceeds n_s n_i + min(n_s, n_i)")

    @classmethod
    def vacuum(cls, shape=()) -> "PairMoments":
        return cls(np.zeros(shape), np.zeros(shape), np.zeros(shape, dtype=complex))


@dataclass(frozen=True, eq=False)
class SpectrumCurve:
    """Values on a signal-wavelength axis; ``scale`` is the normalizing maximum."""

    wavelength: np.ndarray
    values: np.ndarray
    normalized: bool = False
    scale: float = 1.0


def nu(sigma_k, gamma):
    """Principal ``sqrt(Sigma_K**2 - 4 |gamma|**2)``; imaginary inside the gain band."""
    sigma_k = np.asarray(sigma_k)
    return np.sqrt(sigma_k * sigma_k - 4.0 * np.abs(gamma) ** 2 + 0j)


def sin_ratio(nu_value, z):
    """``sin(nu z / 2) / nu`` with the removable singularity at ``nu = 0`` filled in."""
    nu_value = np.asarray(nu_value, dtype=complex)
    x = 0.5 * nu_value * z
    small = np.abs(2.0 * x) < SERIES_THRESHOLD
    safe = np.where(small, 1.0, nu_value)
    direct = np.sin(x) / safe
    series = 0.5 * z * (1.0 - x * x / 6.0)
    return np.where(small, series, direct)


def _amplitudes(sigma_k, gamma_mag, length):
    """``(S, A)`` with ``S = sin(nu L/2)/nu`` and ``A = cos(nu L/2) + i Sigma S``."""
    v = nu(sigma_k, gamma_mag)
    s = sin_ratio(v, length)
    a = np.cos(0.5 * v * length) + 1j * np.asarray(sigma_k) * s
    return s, a


def moments_from_pma(sigma_k, gamma, length) -> PairMoments:
    """Vacuum-seeded moments for given phase-matching argument(s).

    ``gamma`` is the complex coupling ``|gamma| exp(-i phi_pump)``.
    """
    s, a = _amplitudes(sigma_k, np.abs(gamma), length)
    n = np.abs(2.0 * np.abs(gamma) * s) ** 2
    m = 2j * gamma * np.conj(s) * a
    return PairMoments(n, n.copy(), m)


def vacuum_moments(model: DispersionModel, src: SourceParams, omega) -> PairMoments:
    """Output moments of a single lossless pass seeded by vacuum."""
    return moments_from_pma(pma(model, omega), src.gamma, src.L)


def psi_from_pma(sigma_k, gamma_mag, length):
    _, a = _amplitudes(sigma_k, gamma_mag, length)
    return 2.0 * np.angle(a) + np.pi


def psi_phase(model: DispersionModel, src: SourceParams, omega):
    """Gain-dependent interference phase carried by ``M**2``.

    Evaluated as ``2 arg(cos(nu L/2) + i (Sigma/nu) sin(nu L/2)) + pi``, which
    is single valued for real and imaginary ``nu`` alike.
    """
    return psi_from_pma(pma(model, omega), src.gamma_mag, src.L)


def normalize(curve: SpectrumCurve) -> SpectrumCurve:
    """Scale a curve so its maximum is one."""
    values = np.asarray(curve.values, dtype=float)
    peak = float(np.max(values)) if values.size else 0.0
    if not peak > 0:
        raise ValueError("cannot normalize null spectrum")
    return SpectrumCurve(curve.wavelength, values / peak, True, curve.scale * peak)
