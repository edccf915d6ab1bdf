"""scikit-learn style wrappers around the spectrum solvers.

``fit`` builds the scenario (calibrating the coupling from the requested peak
photon number) and records the normalizing maximum over the fitted
wavelengths; ``transform`` and ``predict`` then evaluate any signal
wavelengths against that fixed scale.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .config import ScenarioConfig, build_scenario, load_preset
from .dispersion import wavelength_to_omega
from .errors import DomainError
from .interferometry import visibility_analytic
from .spectra import SPECTRUM_CONFIGURATIONS, compute_spectrum


def _wavelength_column(X):
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single wavelength column, got shape {X.shape}")
        X = X[:, 0]
    if np.any(X <= 0):
        raise ValueError("wavelengths must be positive (metres)")
    return X


class SpectrumEstimator(TransformerMixin, BaseEstimator):
    """Normalized spectrum of one configuration as a function of signal wavelength.

    Parameters
    ----------
    configuration : str
        One of ``vacuum``, ``su11``, ``ic``, ``ic_ancilla``, ``dl``, ``dl_anomalous``.
    preset : str
        Shipped scenario used as the base.
    n_peak : float or None
        Overrides the preset's phase-matched peak photon number.
    pma_offset : float or None
        Overrides the phase-matching offset (rad/m).
    phi_p : float
        Second-pass pump phase (rad).
    normalize : bool
        Scale outputs by the maximum recorded in ``fit``.

    Attributes
    ----------
    gamma_ : float
        Calibrated coupling (1/m).
    scale_ : float
        Normalizing maximum over the wavelengths seen in ``fit``.
    scenario_ : Scenario
    """

    def __init__(self, configuration="vacuum", preset="flat_low", n_peak=None, pma_offset=None,
                 phi_p=0.0, normalize=True):
        self.configuration = configuration
        self.preset = preset
        self.n_peak = n_peak
        self.pma_offset = pma_offset
        self.phi_p = phi_p
        self.normalize = normalize

    def _config(self) -> ScenarioConfig:
        cfg = load_preset(self.preset)
        if self.n_peak is not None:
            cfg = cfg.replace("gain", n_peak=float(self.n_peak), gamma_mag=None)
        if self.pma_offset is not None:
            cfg = cfg.replace("dispersion", pma_offset=float(self.pma_offset))
        return cfg.replace("gain", phi_p=float(self.phi_p))

    def _omega(self, lam):
        return wavelength_to_omega(lam) - self.scenario_.src.omega_signal

    def fit(self, X=None, y=None):
        if self.configuration not in SPECTRUM_CONFIGURATIONS:
            raise DomainError(f"unknown configuration {self.configuration!r}")
        self.scenario_ = build_scenario(self._config())
        self.gamma_ = self.scenario_.src.gamma_mag
        if X is None:
            lam = self.scenario_.grid.signal_wavelengths(self.scenario_.src)
        else:
            lam = _wavelength_column(X)
        values = compute_spectrum(self.scenario_, self.configuration, self._omega(lam))["value"]
        self.scale_ = float(np.max(values))
        if not self.scale_ > 0:
            raise ValueError("cannot normalize null spectrum")
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        """Headline curve and companions, one column each, in ``columns_`` order."""
        check_is_fitted(self, "scale_")
        lam = _wavelength_column(X)
        out = compute_spectrum(self.scenario_, self.configuration, self._omega(lam))
        self.columns_ = tuple(out)
        cols = [np.asarray(v, dtype=float) for v in out.values()]
        if self.normalize:
            cols[0] = cols[0] / self.scale_
        return np.column_stack(cols)

    def predict(self, X):
        return self.transform(X)[:, 0]


class VisibilityModel(BaseEstimator):
    """Analytic fringe visibility from single-pass photon number and idler transmission.

    ``predict`` takes an ``(n, 2)`` array of ``(n_v, eta)`` rows.
    """

    def __init__(self, configuration="su11"):
        self.configuration = configuration

    def fit(self, X=None, y=None):
        if self.configuration not in ("su11", "ic"):
            raise DomainError(f"visibility model supports 'su11' and 'ic', got {self.configuration!r}")
        self.n_features_in_ = 2
        return self

    def predict(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError("expected columns (n_v, eta)")
        return visibility_analytic(self.configuration, X[:, 0], X[:, 1])
