"""Distributed idler loss inside the nonlinear region.

The idler decays at rate ``kappa_I`` while it is generated. The signal output
is the attenuated coherent build-up (``bare``) plus bath noise injected along
the crystal and re-amplified (``added_noise``); the idler output equals the
bare term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import TransferStep, beamsplitter_step, compose, squeezer_matrix, vacuum_output
from .dispersion import (
    ShiftedIdlerDispersion,
    delta_k,
    idler_eta,
    idler_kappa,
    pma,
)
from .errors import QuadratureError
from .phases import opd_phase_fn
from .twinbeam import SpectrumCurve, nu, sin_ratio, vacuum_moments

QUAD_ORDER = 64
QUAD_RTOL = 1e-10
QUAD_MAX_LEVEL = 5

_nodes, _weights = np.polynomial.legendre.leggauss(QUAD_ORDER)


@dataclass(frozen=True, eq=False)
class DlContributions:
    bare: np.ndarray
    added_noise: np.ndarray

    @property
    def total(self):
        return self.bare + self.added_noise


def _panel_nodes(length, panels):
    edges = np.linspace(0.0, length, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    s = (mid[:, None] + half[:, None] * _nodes[None, :]).ravel()
    w = (half[:, None] * _weights[None, :]).ravel()
    return s, w


def integrate_z(integrand, length, n_items, rtol=QUAD_RTOL):
    """Integrate ``integrand(s, idx)`` over ``s`` in ``[0, length]`` for many items.

    ``integrand`` receives node positions ``s`` (shape ``(q,)``) and an index
    array selecting items; it returns values of shape ``(len(idx), q, ...)``.
    A 64-point Gauss-Legendre rule is compared against its two-panel
    refinement; items that disagree by more than ``rtol`` are refined further
    by panel doubling until they agree.
    """
    idx = np.arange(n_items)
    s, w = _panel_nodes(length, 1)
    prev = _apply(integrand, s, w, idx)
    result = np.empty_like(prev)
    pending = idx
    worst = np.inf
    for level in range(1, QUAD_MAX_LEVEL + 1):
        s, w = _panel_nodes(length, 2**level)
        cur = _apply(integrand, s, w, pending)
        err = _rel_err(cur, prev)
        done = err <= rtol
        result[pending[done]] = cur[done]
        if np.all(done):
            return result
        worst = float(np.max(err))
        pending = pending[~done]
        prev = cur[~done]
    raise QuadratureError(f"z-quadrature failed for {pending.size} of {n_items} bins", worst)


def _apply(integrand, s, w, idx):
    vals = integrand(s, idx)
    return np.einsum("iq...,q->i...", vals, w)


def _rel_err(cur, prev):
    diff = np.abs(cur - prev).reshape(cur.shape[0], -1).max(axis=1)
    scale = np.abs(cur).reshape(cur.shape[0], -1).max(axis=1)
    return diff / np.maximum(scale, 1e-300)


def nu_tilde(model, src, loss, omega, gamma=None):
    """Loss-matched ``sqrt((Sigma_K - i kappa/2)**2 - 4 gamma**2)``."""
    gamma = src.gamma_mag if gamma is None else gamma
    sig_t = pma(model, omega) - 0.5j * idler_kappa(loss, src, omega)
    return nu(sig_t, gamma)


def _bare_from(sigma, kappa, gamma_mag, z):
    sig_t = sigma - 0.5j * kappa
    v = nu(sig_t, gamma_mag)
    return np.exp(-0.5 * kappa * z) * np.abs(2.0 * gamma_mag * sin_ratio(v, z)) ** 2


def dl_bare(model, src, loss, omega, z=None):
    """Vacuum-seeded photon number after propagating ``z`` through the lossy squeezer."""
    z = src.L if z is None else z
    w = np.asarray(omega, dtype=float)
    return _bare_from(pma(model, w), idler_kappa(loss, src, w), src.gamma_mag, z)


def dl_signal(model, src, loss, omega) -> DlContributions:
    """Signal photon number split into bare and added-noise parts."""
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    sigma = pma(model, w)
    kap = idler_kappa(loss, src, w)
    bare = _bare_from(sigma, kap, src.gamma_mag, src.L)
    lossy = kap > 0
    added = np.zeros_like(bare)
    if np.any(lossy):
        sig_l, kap_l = sigma[lossy], kap[lossy]

        def integrand(s, idx):
            return _bare_from(sig_l[idx, None], kap_l[idx, None], src.gamma_mag, s[None, :])

        added[lossy] = kap_l * integrate_z(integrand, src.L, sig_l.size)
    shape = np.shape(omega)
    return DlContributions(bare.reshape(shape), added.reshape(shape))


def dl_idler(model, src, loss, omega):
    """Idler photon number at ``-w``; no added-noise contribution."""
    return dl_bare(model, src, loss, omega, src.L)


def anomalous_dispersion_model(model, src, loss, strength: float = 0.1):
    """Model whose idler wavevector is shifted by ``-strength * kappa_I``, without loss."""
    if strength == 0.0 or loss is None:
        return model
    return ShiftedIdlerDispersion(model, loss, src.omega_idler, strength)


def dl_transfer(model, src, loss, omega, length=None, gamma=None) -> TransferStep:
    """Transfer step of the lossy squeezer, noise matrix by z-quadrature."""
    length = src.L if length is None else length
    gamma = src.gamma if gamma is None else gamma
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    sigma = pma(model, w)
    dkm = delta_k(model, w)
    kap = idler_kappa(loss, src, w)
    g = squeezer_matrix(sigma, dkm, gamma, kap, length)
    noise = np.zeros_like(g)
    lossy = kap > 0
    if np.any(lossy):
        sig_l, dk_l, kap_l = sigma[lossy], dkm[lossy], kap[lossy]

        def integrand(s, idx):
            gs = squeezer_matrix(sig_l[idx, None], dk_l[idx, None], gamma, kap_l[idx, None], s[None, :])
            col = gs[..., :, 1]
            return col[..., :, None] * np.conj(col[..., None, :])

        noise[lossy] = kap_l[:, None, None] * integrate_z(integrand, length, sig_l.size)
    shape = np.shape(omega)
    return TransferStep(g.reshape(shape + (2, 2)), noise.reshape(shape + (2, 2)))


def dl_su11_surface(model, src, loss, opd_list, phi_p, omega):
    """Raw signal photon numbers of an SU(1,1) built from two lossy squeezers.

    Returns an array of shape ``(len(opd_list), len(omega))``. The second
    squeezer's coupling phase is ``+phi_p`` so the lossless limit coincides
    with :func:`nlifo.su11.su11_intensities`.
    """
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    first = dl_transfer(model, src, loss, w, gamma=src.gamma_mag)
    second = dl_transfer(model, src, loss, w, gamma=src.gamma_mag * np.exp(1j * phi_p))
    opds = np.atleast_1d(np.asarray(opd_list, dtype=float))
    rows = []
    chunk = max(1, 2**18 // max(w.size, 1))
    for start in range(0, opds.size, chunk):
        batch = opds[start:start + chunk]
        phases = np.stack([opd_phase_fn(o, src)(w) for o in batch])
        mid = beamsplitter_step(np.ones_like(phases), phases)
        step = compose(compose(first, mid), second)
        rows.append(vacuum_output(step).n_s)
    return np.concatenate(rows, axis=0)


def dl_su11_scan(model, src, loss, opd_list, phi_p, grid):
    """2-D interferogram of the DL-SU(1,1) configuration over an OPD list."""
    from .interferometry import Interferogram

    raw = dl_su11_surface(model, src, loss, opd_list, phi_p, grid.omega)
    return Interferogram.from_raw(grid.signal_wavelengths(src), np.asarray(opd_list, float), raw, "dl_su11")


def loss_compare(model, src, loss, omega):
    """Idler photon number under distributed loss versus a beamsplitter after a lossless pass."""
    w = np.asarray(omega, dtype=float)
    n_v = vacuum_moments(model, src, w).n_s
    return {"dl_idler": dl_idler(model, src, loss, w), "bs_idler": idler_eta(loss, src, w) * n_v}


def dl_contributions_report(model, src, loss, grid):
    """Bare, added-noise and total signal curves on a grid (raw values)."""
    contrib = dl_signal(model, src, loss, grid.omega)
    lam = grid.signal_wavelengths(src)
    return {
        "bare": SpectrumCurve(lam, contrib.bare),
        "added_noise": SpectrumCurve(lam, contrib.added_noise),
        "total": SpectrumCurve(lam, contrib.total),
    }


def high_gain_exponent(gamma, kappa):
    """Growth-rate penalty ``sqrt(4 g^2 + (k/2)^2) - 2 g - k/2`` of the phase-matched lossy squeezer."""
    return np.sqrt(4.0 * gamma**2 + 0.25 * kappa**2) - 2.0 * gamma - 0.5 * kappa


def added_noise_prefactor(gamma, kappa):
    """Asymptotic ratio of added noise to ``exp(A L)`` times the normalized bare term's prefactor.

    From the phase-matched closed form at large ``gamma L``:
    ``added / sinh(gamma L)**2 -> (kappa/2) (kappa + 2 G) / G**2 * exp(A L)``
    with ``G = sqrt(4 gamma**2 + kappa**2 / 4)``.
    """
    big_g2 = 4.0 * gamma**2 + 0.25 * kappa**2
    return 0.5 * kappa * (kappa + 2.0 * np.sqrt(big_g2)) / big_g2
