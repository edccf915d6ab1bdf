"""Gaussian channel algebra on the pair ``(a_S(w), a_I^dagger(-w))``.

A :class:`TransferStep` maps input operators to output operators as
``x_out = g @ x_in + f`` where ``f`` is built from vacuum bath creation
operators only. Its ``noise`` matrix is the commutator deficit
``N = g J g^dagger - J`` with ``J = diag(1, -1)``; for distributed loss it
equals ``kappa * int g(L-z) P_I g(L-z)^dagger dz``.

Moments are propagated in the normally ordered matrix
``K = [[n_s, m], [m*, n_i]]`` as ``K' = g K g^dagger + (g g^dagger - I + N) / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .dispersion import DispersionModel, SourceParams, delta_k, pma
from .errors import DomainError
from .twinbeam import PairMoments, sin_ratio

J = np.diag([1.0, -1.0]).astype(complex)


def _dagger(a):
    return np.conj(np.swapaxes(a, -1, -2))


@dataclass(frozen=True, eq=False)
class TransferStep:
    """Bogoliubov matrix and accumulated noise for one propagation segment.

    Both arrays have shape ``(..., 2, 2)``; leading axes run over frequency
    bins.
    """

    g: np.ndarray
    noise: np.ndarray

    @classmethod
    def identity(cls, shape=()) -> "TransferStep":
        eye = np.broadcast_to(np.eye(2, dtype=complex), tuple(shape) + (2, 2)).copy()
        return cls(eye, np.zeros_like(eye))

    @property
    def shape(self):
        return self.g.shape[:-2]


def commutator_defect(step: TransferStep):
    """Signal- and idler-row commutator defects ``(|g11|^2-|g12|^2-1, 1-|g22|^2+|g21|^2)``.

    For a canonical channel these equal ``noise[..., 0, 0]`` and ``noise[..., 1, 1]``.
    """
    g = step.g
    a = np.abs(g) ** 2
    return a[..., 0, 0] - a[..., 0, 1] - 1.0, 1.0 - a[..., 1, 1] + a[..., 1, 0]


def canonical_residual(step: TransferStep) -> np.ndarray:
    """``g J g^dagger - J - noise``; vanishes for commutator-preserving steps."""
    return step.g @ J @ _dagger(step.g) - J - step.noise


def compose(a: TransferStep, b: TransferStep) -> TransferStep:
    """Apply ``a`` then ``b``."""
    return TransferStep(b.g @ a.g, b.g @ a.noise @ _dagger(b.g) + b.noise)


def moments_to_matrix(moments: PairMoments) -> np.ndarray:
    n_s = np.asarray(moments.n_s, dtype=complex)
    n_i = np.asarray(moments.n_i, dtype=complex)
    m = np.asarray(moments.m, dtype=complex)
    n_s, n_i, m = np.broadcast_arrays(n_s, n_i, m)
    return np.stack(
        [np.stack([n_s, m], axis=-1), np.stack([np.conj(m), n_i], axis=-1)], axis=-2
    )


def matrix_to_moments(k: np.ndarray) -> PairMoments:
    return PairMoments(np.real(k[..., 0, 0]), np.real(k[..., 1, 1]), k[..., 0, 1])


def propagate_moments(step: TransferStep, moments_in: PairMoments, check: bool = True):
    """Push input moments through a channel with vacuum baths.

    The signal entry expands to
    ``|g11|^2 n_s + |g12|^2 (n_i + 1) + 2 Re(g12* g11 m) + noise11``.
    The vacuum part ``(g g^dagger - I + N) / 2`` is evaluated through the
    defect identity as ``[[|g12|^2 + N11, g11 g21*], [., |g21|^2]]`` so no
    entry is formed by subtracting one.
    """
    if check:
        moments_in.check_physical()
    k = moments_to_matrix(moments_in)
    g = step.g
    k_out = g @ k @ _dagger(g)
    k_out[..., 0, 0] += np.abs(g[..., 0, 1]) ** 2 + step.noise[..., 0, 0]
    k_out[..., 1, 1] += np.abs(g[..., 1, 0]) ** 2
    cross = g[..., 0, 0] * np.conj(g[..., 1, 0])
    k_out[..., 0, 1] += cross
    k_out[..., 1, 0] += np.conj(cross)
    return matrix_to_moments(k_out)


def squeezer_matrix(sigma, dk_mismatch, gamma, kappa, z):
    """Closed-form ``exp(G z)`` of the constant two-mode generator.

    ``G = [[i dk_S, i gamma], [-i gamma*, -i dk_I - kappa/2]]`` split into its
    trace ``i dk_mismatch - kappa/2`` and a traceless part whose square is
    ``-(nu~/2)**2``, with ``nu~ = sqrt((sigma - i kappa/2)**2 - 4 |gamma|**2)``.
    """
    sigma = np.asarray(sigma, dtype=float)
    kappa = np.asarray(kappa, dtype=float)
    sig_t = sigma - 0.5j * kappa
    v = np.sqrt(sig_t * sig_t - 4.0 * np.abs(gamma) ** 2 + 0j)
    s = sin_ratio(v, z)
    cs = np.cos(0.5 * v * z)
    phase = np.exp((0.5j * np.asarray(dk_mismatch) - 0.25 * kappa) * z)
    g = np.empty(np.broadcast(sigma, kappa, phase).shape + (2, 2), dtype=complex)
    g[..., 0, 0] = phase * (cs + 1j * sig_t * s)
    g[..., 0, 1] = phase * 2j * gamma * s
    g[..., 1, 0] = -phase * 2j * np.conj(gamma) * s
    g[..., 1, 1] = phase * (cs - 1j * sig_t * s)
    return g


def generator(model: DispersionModel, src: SourceParams, omega, kappa=0.0, gamma=None):
    """The spatial generator of the coupled equations for ``(a_S, a_I^dagger)``.

    The quasi-phase-matching offset is split evenly between the two diagonal
    entries so that it shifts the sum and leaves the difference untouched.
    """
    w = np.asarray(omega, dtype=float)
    gamma = src.gamma if gamma is None else gamma
    half = 0.5 * model.pma_offset
    dks = model._dk("signal", w) + half
    dki = model._dk("idler", -w) + half
    kappa = np.broadcast_to(np.asarray(kappa, dtype=float), w.shape)
    out = np.empty(w.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 1j * dks
    out[..., 0, 1] = 1j * gamma
    out[..., 1, 0] = -1j * np.conj(gamma)
    out[..., 1, 1] = -1j * dki - 0.5 * kappa
    return out


def lossless_transfer(model: DispersionModel, src: SourceParams, omega, z=None, gamma=None):
    """Transfer step of a lossless squeezer of length ``z`` (default ``src.L``)."""
    z = src.L if z is None else z
    if z < 0:
        raise DomainError(f"propagation length must be non-negative, got {z}")
    gamma = src.gamma if gamma is None else gamma
    g = squeezer_matrix(pma(model, omega), delta_k(model, omega), gamma, 0.0, z)
    return TransferStep(g, np.zeros_like(g))


def beamsplitter_step(eta, phi_i) -> TransferStep:
    """Idler-only loss ``eta`` and phase ``phi_i`` as a channel.

    The idler annihilator picks up ``sqrt(eta) exp(i phi_i)``; the creation
    operator in the transfer basis therefore carries the conjugate phase.
    """
    eta = np.asarray(eta, dtype=float)
    if np.any(eta < 0) or np.any(eta > 1):
        raise DomainError("transmission must lie in [0, 1]")
    eta, phi_i = np.broadcast_arrays(eta, np.asarray(phi_i, dtype=float))
    g = np.zeros(eta.shape + (2, 2), dtype=complex)
    g[..., 0, 0] = 1.0
    g[..., 1, 1] = np.sqrt(eta) * np.exp(-1j * phi_i)
    noise = np.zeros_like(g)
    noise[..., 1, 1] = 1.0 - eta
    return TransferStep(g, noise)


def apply_idler_loss_phase(moments: PairMoments, eta, phi_i) -> PairMoments:
    """Beamsplitter update of the idler: ``n_i -> eta n_i``, ``m -> sqrt(eta) e^{i phi} m``."""
    eta = np.asarray(eta, dtype=float)
    if np.any(eta < 0) or np.any(eta > 1):
        raise DomainError("transmission must lie in [0, 1]")
    return PairMoments(
        moments.n_s,
        eta * moments.n_i,
        np.sqrt(eta) * np.exp(1j * np.asarray(phi_i)) * moments.m,
    )


def opd_phase(opd, omega, omega_idler_center):
    """Idler phase ``(w_I - w) * opd / c`` of an optical path delay, carrier included."""
    return (omega_idler_center - np.asarray(omega, dtype=float)) * opd / SPEED_OF_LIGHT


def vacuum_output(step: TransferStep) -> PairMoments:
    """Moments produced by ``step`` from vacuum inputs."""
    shape = step.shape
    return propagate_moments(step, PairMoments.vacuum(shape), check=False)
