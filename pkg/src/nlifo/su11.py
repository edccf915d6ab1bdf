"""SU(1,1) interferometer: two identical lossless squeezers with idler loss and phase between.

The first pass is the pump-phase reference. ``phi_p`` is the pump phase of
the second pass, entering through ``Phi(w) = Phi_I(-w) - phi_p``.
"""

from __future__ import annotations

import numpy as np

from .dispersion import LossProfile, idler_eta, pma
from .phases import PhaseLike, resolve_phase
from .twinbeam import psi_phase, vacuum_moments


def _first_pass(model, src, omega):
    return vacuum_moments(model, src.replace(phi_pump=0.0), omega)


def su11_intensities(model, src, loss: LossProfile | None, phi_i: PhaseLike, phi_p: float, omega):
    """Signal and idler photon numbers at the interferometer output.

    Returns
    -------
    (n_s, n_i) : tuple of numpy.ndarray
        Signal at detuning ``w`` and idler at ``-w``.
    """
    w = np.asarray(omega, dtype=float)
    first = _first_pass(model, src, w)
    n = first.n_s
    m2 = np.abs(first.m) ** 2
    eta = idler_eta(loss, src, w)
    interference = 2.0 * np.sqrt(eta) * np.cos(resolve_phase(phi_i, w) - phi_p + psi_phase(model, src, w)) * m2
    tail = n * n * (1.0 + eta) - interference
    return 2.0 * n + tail, n * (1.0 + eta) + tail


def osc_lowgain(model, src, phi_i: PhaseLike, omega, phi_p: float = 0.0):
    """Low-gain fringe model ``cos(Phi + Sigma_K L)``."""
    w = np.asarray(omega, dtype=float)
    return np.cos(resolve_phase(phi_i, w) - phi_p + pma(model, w) * src.L)


def osc_general(model, src, phi_i: PhaseLike, phi_p: float, omega, drop_pi: bool = False):
    """Exact fringe factor ``cos(Phi + Psi)``; ``drop_pi`` removes the constant ``+pi``."""
    w = np.asarray(omega, dtype=float)
    psi = psi_phase(model, src, w) - (np.pi if drop_pi else 0.0)
    return np.cos(resolve_phase(phi_i, w) - phi_p + psi)


def gain_coefficient(src) -> float:
    """``tanh(gamma L) / gamma``, tending to ``L`` as the gain vanishes."""
    gl = src.gamma_mag * src.L
    if gl < 1e-8:
        return src.L * (1.0 - gl * gl / 3.0)
    return np.tanh(gl) / src.gamma_mag


def psi_gain_approx(model, src, omega):
    """First-order expansion of the interference phase in the phase-matching argument, ``+pi`` kept."""
    return gain_coefficient(src) * pma(model, omega) + np.pi


def osc_gain_approx(model, src, phi_i: PhaseLike, phi_p: float, omega):
    w = np.asarray(omega, dtype=float)
    return np.cos(resolve_phase(phi_i, w) - phi_p + psi_gain_approx(model, src, w))


def antisqueeze_phase(model, src, omega):
    """Second-pass pump phase that nulls the lossless output at each detuning."""
    return np.mod(psi_phase(model, src, omega), 2.0 * np.pi)
