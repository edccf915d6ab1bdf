import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlifo.dispersion import LossPeak, LossProfile, SourceParams, TaylorDispersion, delta_k, omega_to_wavelength
from nlifo.ic import bbs_arms, cancel_linear_deltak, ic_cross_moment, ic_intensities
from nlifo.oracle import ic_pipeline
from nlifo.twinbeam import vacuum_moments

L = 0.04


def _flat_eta(src, eta, w0):
    centre = omega_to_wavelength(src.omega_idler - w0)
    return LossProfile((LossPeak(centre, eta, 1e-3),), L)


@given(
    st.floats(0.01, 3.0), st.floats(-3 * np.pi, 3 * np.pi), st.floats(-2 * np.pi, 2 * np.pi),
    st.floats(0.05, 1.0), st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi),
)
def test_closed_form_matches_pipeline(gl, sl, dl, eta, phi_i, phi_p):
    src = SourceParams(644e-9, 845e-9, L, gamma_mag=gl / L)
    s, d = sl / L, dl / L
    model = TaylorDispersion((s + d) / 2e12, (d - s) / 2e12)
    w = np.array([1e12])
    loss = _flat_eta(src, eta, 1e12)
    n_s, n_i, n_a = ic_intensities(model, src, loss, phi_i, phi_p, w)
    cross = ic_cross_moment(model, src, loss, phi_i, phi_p, w)
    ref = ic_pipeline(model, src, eta, phi_i, phi_p, w)
    scale = n_s + n_i + n_a
    for got, want in ((n_s, ref.n_s), (n_i, ref.n_i), (n_a, ref.n_a), (cross, ref.cross)):
        assert np.abs(got - want)[0] / scale[0] < 1e-10


@given(st.floats(0.01, 3.0), st.floats(0.01, 1.0), st.floats(0, 2 * np.pi))
def test_balance_identities(gl, eta, phi):
    src = SourceParams(644e-9, 845e-9, L, gamma_mag=gl / L)
    model = TaylorDispersion(1e-8, 1e-8)
    w = np.array([1e12])
    loss = _flat_eta(src, eta, 1e12)
    n_s, n_i, n_a = ic_intensities(model, src, loss, phi, 0.0, w)
    n_v = vacuum_moments(model, src, w).n_s
    plus, minus = bbs_arms(model, src, loss, phi, 0.0, w)
    assert (n_i - n_a)[0] == pytest.approx(eta * n_v[0], rel=1e-12, abs=1e-15)
    assert (plus + minus)[0] == pytest.approx((n_s + n_a)[0], rel=1e-12)


def test_cross_moment_saturates_physical_bound(src, taylor):
    w = np.linspace(-2e13, 2e13, 9)
    loss = _flat_eta(src, 0.5, 0.0)
    n_s, _, n_a = ic_intensities(taylor, src, loss, 0.0, 0.0, w)
    cross = ic_cross_moment(taylor, src, loss, 0.0, 0.0, w)
    assert np.all(np.abs(cross) ** 2 <= n_s * n_a * (1 + 1e-12))


def test_cancellation_modes(src, taylor):
    w = np.linspace(-3e13, 3e13, 7)
    full = cancel_linear_deltak(taylor, src, "full")(w)
    lin = cancel_linear_deltak(taylor, src, "linear")(w)
    np.testing.assert_allclose(full, 0.5 * L * delta_k(taylor, w))
    np.testing.assert_allclose(full - lin, 0.5 * L * 3.5e-25 * w**2, rtol=1e-9)
    assert cancel_linear_deltak(taylor, src, "none") is None
    with pytest.raises(ValueError):
        cancel_linear_deltak(taylor, src, "bogus")


def test_full_cancellation_flattens_cross_phase(src, taylor):
    w = np.linspace(-3e13, 3e13, 41)
    cancel = cancel_linear_deltak(taylor, src, "full")
    cross = ic_cross_moment(taylor, src, None, cancel, 0.0, w)
    # the residual is half the gain-dependent phase, odd in w for a cubic mismatch
    centre = np.angle(cross[20])
    lhs = np.angle(cross * cross[::-1] * np.exp(-2j * centre))
    np.testing.assert_allclose(lhs, 0.0, atol=1e-9)
