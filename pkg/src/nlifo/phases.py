"""Idler phase functions ``Phi_I(-w)`` evaluated on signal detunings."""

from __future__ import annotations

from typing import Callable, Union

import numpy as np

from .channels import opd_phase
from .dispersion import SourceParams

PhaseLike = Union[None, float, np.ndarray, Callable[[np.ndarray], np.ndarray]]


def resolve_phase(phi_i: PhaseLike, omega) -> np.ndarray:
    """Evaluate a phase given as ``None``, a constant, an array or a callable."""
    w = np.asarray(omega, dtype=float)
    if phi_i is None:
        return np.zeros_like(w)
    if callable(phi_i):
        return np.broadcast_to(np.asarray(phi_i(w), dtype=float), w.shape)
    return np.broadcast_to(np.asarray(phi_i, dtype=float), w.shape)


def opd_phase_fn(opd: float, src: SourceParams):
    """Callable idler phase of a free-space delay ``opd`` (m)."""
    omega_i = src.omega_idler
    return lambda w: opd_phase(opd, w, omega_i)


def sum_phases(*phases: PhaseLike):
    """Callable returning the pointwise sum of several phase arguments."""
    return lambda w: sum(resolve_phase(p, w) for p in phases)
