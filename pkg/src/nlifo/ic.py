"""Induced-coherence interferometer: the second squeezer is seeded by the idler and a vacuum ancilla."""

from __future__ import annotations

import numpy as np

from .dispersion import delta_k, delta_k_slope, idler_eta
from .phases import PhaseLike, resolve_phase
from .twinbeam import psi_phase, vacuum_moments


def _single_pass(model, src, omega):
    return vacuum_moments(model, src.replace(phi_pump=0.0), omega).n_s


def ic_intensities(model, src, loss, phi_i: PhaseLike, phi_p: float, omega):
    """Signal, idler and ancilla photon numbers after the second pass.

    None of them depends on the phases; the arguments are accepted so all
    configurations share one call signature.
    """
    w = np.asarray(omega, dtype=float)
    n = _single_pass(model, src, w)
    eta = idler_eta(loss, src, w)
    return n, n + eta * n * (1.0 + n), n * (1.0 + eta * n)


def ic_cross_moment(model, src, loss, phi_i: PhaseLike, phi_p: float, omega):
    """Signal-ancilla coherence ``<a_S^dagger a_A>``."""
    w = np.asarray(omega, dtype=float)
    n = _single_pass(model, src, w)
    eta = idler_eta(loss, src, w)
    phase = (
        0.5 * delta_k(model, w) * src.L
        - (resolve_phase(phi_i, w) - phi_p)
        - 0.5 * psi_phase(model, src, w)
    )
    return np.sqrt(eta) * n * np.sqrt(1.0 + n) * np.exp(1j * phase)


def bbs_arms(model, src, loss, phi_i: PhaseLike, phi_p: float, omega):
    """Both output arms of the balanced signal-ancilla recombination, ``(n_plus, n_minus)``."""
    n_s, _, n_a = ic_intensities(model, src, loss, phi_i, phi_p, omega)
    cross = np.imag(ic_cross_moment(model, src, loss, phi_i, phi_p, omega))
    return 0.5 * (n_s + n_a + 2.0 * cross), 0.5 * (n_s + n_a - 2.0 * cross)


def cancel_linear_deltak(model, src, mode: str = "linear"):
    """Idler phase compensating the signal-ancilla walk-off term ``Delta K L / 2``.

    ``mode="linear"`` removes only the group-delay part, leaving the GVD
    residue; ``mode="full"`` removes the whole term.
    """
    if mode == "linear":
        slope = delta_k_slope(model) * src.L / 2.0
        return lambda w: slope * np.asarray(w, dtype=float)
    if mode == "full":
        return lambda w: 0.5 * src.L * delta_k(model, w)
    if mode == "none":
        return None
    raise ValueError(f"unknown cancellation mode {mode!r}")
