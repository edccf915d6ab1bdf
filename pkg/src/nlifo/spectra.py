"""Per-configuration spectrum evaluation on a scenario grid."""

from __future__ import annotations

import numpy as np

from . import dl, ic, su11, twinbeam
from .errors import DomainError
from .phases import sum_phases

SPECTRUM_CONFIGURATIONS = ("vacuum", "su11", "ic", "ic_ancilla", "dl", "dl_anomalous")

# columns that are already normalized cosines and are never rescaled
OSCILLATION_COLUMNS = ("osc_general", "osc_general_no_pi", "osc_gain_approx", "osc_gain_approx_no_pi", "osc_lowgain")


def anomalous_setup(scenario):
    """Model and loss used by the anomalous-dispersion configuration."""
    loss = scenario.loss
    model = dl.anomalous_dispersion_model(scenario.model, scenario.src, loss, scenario.anomalous_strength)
    with_abs = scenario.config.dispersion.anomalous_with_absorption
    return model, (loss if with_abs else None)


def compute_spectrum(scenario, configuration: str, omega=None, phi_i=None) -> dict:
    """Raw photon numbers for ``configuration``.

    Returns a dict whose ``"value"`` entry is the headline curve; the other
    entries are companion curves on the same axis. ``phi_i`` is the idler
    phase between passes (default zero).
    """
    w = scenario.grid.omega if omega is None else np.asarray(omega, dtype=float)
    model, src, loss, phi_p = scenario.model, scenario.src, scenario.loss, scenario.phi_p
    if configuration == "vacuum":
        vac = twinbeam.vacuum_moments(model, src, w)
        return {"value": vac.n_s, "idler": vac.n_i}
    if configuration == "su11":
        n_s, n_i = su11.su11_intensities(model, src, loss, phi_i, phi_p, w)
        return {
            "value": n_s,
            "idler": n_i,
            "osc_general": su11.osc_general(model, src, phi_i, phi_p, w),
            "osc_general_no_pi": su11.osc_general(model, src, phi_i, phi_p, w, drop_pi=True),
            "osc_gain_approx": su11.osc_gain_approx(model, src, phi_i, phi_p, w),
            "osc_gain_approx_no_pi": -su11.osc_gain_approx(model, src, phi_i, phi_p, w),
            "osc_lowgain": su11.osc_lowgain(model, src, phi_i, w, phi_p),
        }
    if configuration in ("ic", "ic_ancilla"):
        cancel = ic.cancel_linear_deltak(model, src, scenario.ic_cancel)
        phase = sum_phases(cancel, phi_i)
        n_s, n_i, n_a = ic.ic_intensities(model, src, loss, phase, phi_p, w)
        if configuration == "ic_ancilla":
            return {"value": n_a, "idler": n_i, "signal": n_s}
        plus, minus = ic.bbs_arms(model, src, loss, phase, phi_p, w)
        return {"value": plus, "minus": minus, "signal": n_s, "ancilla": n_a, "idler": n_i}
    if configuration == "dl":
        contrib = dl.dl_signal(model, src, loss, w)
        return {
            "value": contrib.total,
            "bare": contrib.bare,
            "added_noise": contrib.added_noise,
            "idler": dl.dl_idler(model, src, loss, w),
        }
    if configuration == "dl_anomalous":
        a_model, a_loss = anomalous_setup(scenario)
        contrib = dl.dl_signal(a_model, src, a_loss, w)
        return {"value": contrib.total, "idler": dl.dl_idler(a_model, src, a_loss, w)}
    raise DomainError(
        f"unknown configuration {configuration!r}; valid names: {', '.join(SPECTRUM_CONFIGURATIONS)}"
    )
