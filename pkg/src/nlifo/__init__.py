"""Spectra and interferograms of broadband twin-beam sources in nonlinear interferometers."""

from .dispersion import (
    FrequencyGrid,
    LossPeak,
    LossProfile,
    SourceParams,
    TabulatedDispersion,
    TaylorDispersion,
    calibrate_gamma,
    conjugate_wavelength,
)
from .errors import ConfigError, DomainError, NlifoError, QuadratureError, UnphysicalMomentsError
from .twinbeam import PairMoments, SpectrumCurve

__version__ = "0.1.0"

__all__ = [
    "FrequencyGrid",
    "LossPeak",
    "LossProfile",
    "SourceParams",
    "TabulatedDispersion",
    "TaylorDispersion",
    "calibrate_gamma",
    "conjugate_wavelength",
    "ConfigError",
    "DomainError",
    "NlifoError",
    "QuadratureError",
    "UnphysicalMomentsError",
    "PairMoments",
    "SpectrumCurve",
]
