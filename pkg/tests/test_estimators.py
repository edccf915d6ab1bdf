import numpy as np
import pytest
from sklearn.base import clone

from nlifo.errors import DomainError
from nlifo.estimators import SpectrumEstimator, VisibilityModel
from nlifo.interferometry import visibility_analytic

LAM = np.linspace(820e-9, 870e-9, 33)[:, None]


def test_params_and_clone():
    est = SpectrumEstimator(configuration="su11", n_peak=2.0)
    params = est.get_params()
    assert params["configuration"] == "su11" and params["n_peak"] == 2.0
    twin = clone(est)
    assert twin.get_params() == params and not hasattr(twin, "scale_")


def test_fit_transform_vacuum():
    est = SpectrumEstimator().fit(LAM)
    y = est.predict(LAM)
    assert y.max() == pytest.approx(1.0)
    assert est.gamma_ * 0.04 == pytest.approx(np.arcsinh(0.2), rel=1e-12)
    cols = est.transform(LAM)
    assert cols.shape == (33, 2) and est.columns_ == ("value", "idler")


def test_gain_override_changes_scale():
    low = SpectrumEstimator(n_peak=0.04).fit(LAM)
    high = SpectrumEstimator(n_peak=14.0).fit(LAM)
    assert high.scale_ > 100 * low.scale_


def test_unfitted_and_bad_input():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        SpectrumEstimator().predict(LAM)
    with pytest.raises(DomainError):
        SpectrumEstimator(configuration="xyz").fit(LAM)
    with pytest.raises(ValueError):
        SpectrumEstimator().fit(-LAM)


def test_visibility_model():
    X = np.array([[0.04, 0.3], [14.0, 0.01]])
    for cfg in ("su11", "ic"):
        v = VisibilityModel(cfg).fit().predict(X)
        np.testing.assert_allclose(v, visibility_analytic(cfg, X[:, 0], X[:, 1]))
    with pytest.raises(DomainError):
        VisibilityModel("dl").fit()
