import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlifo.errors import UnphysicalMomentsError
from nlifo.twinbeam import (
    PairMoments,
    SpectrumCurve,
    moments_from_pma,
    normalize,
    nu,
    psi_from_pma,
    sin_ratio,
    vacuum_moments,
)

L = 0.04
sigmas = st.floats(-500.0, 500.0)
gammas = st.floats(0.0, 80.0)


@given(sigmas, gammas)
def test_pure_state_identity(sigma, gamma):
    mom = moments_from_pma(sigma, gamma, L)
    n = float(mom.n_s)
    assert abs(mom.m) ** 2 == pytest.approx(n * (n + 1), rel=1e-12, abs=1e-300)
    assert float(mom.n_i) == n


@given(gammas)
def test_phase_matched_peak_is_sinh_squared(gamma):
    assert float(moments_from_pma(0.0, gamma, L).n_s) == pytest.approx(np.sinh(gamma * L) ** 2, rel=1e-12, abs=1e-300)


def test_low_gain_sinc_limit():
    gamma = 1e-3
    sigma = np.linspace(-300, 300, 41)
    n = moments_from_pma(sigma, gamma, L).n_s
    np.testing.assert_allclose(n, (gamma * L) ** 2 * np.sinc(sigma * L / (2 * np.pi)) ** 2, rtol=1e-5)


def test_sin_ratio_continuous_through_zero():
    z = 0.04
    eps = np.array([0.0, 1e-9, 1e-6, 1e-3])
    vals = sin_ratio(eps + 0j, z)
    assert vals[0] == pytest.approx(z / 2)
    np.testing.assert_allclose(vals, np.sin(eps * z / 2) / np.where(eps == 0, 1, eps) * (eps != 0) + (eps == 0) * z / 2, rtol=1e-12)


def test_nu_branch():
    assert nu(0.0, 10.0) == pytest.approx(20j)
    assert nu(50.0, 20.0) == pytest.approx(30.0)


def test_psi_low_gain_limit():
    sigma = np.linspace(-200, 200, 21)
    psi = psi_from_pma(sigma, 1e-4, L)
    wrapped = np.angle(np.exp(1j * (psi - np.pi - sigma * L)))
    np.testing.assert_allclose(wrapped, 0.0, atol=1e-9)


def test_pump_phase_rotates_anomalous_moment():
    a = moments_from_pma(30.0, 20.0, L)
    b = moments_from_pma(30.0, 20.0 * np.exp(-1j * 0.7), L)
    assert b.m == pytest.approx(a.m * np.exp(-1j * 0.7))
    assert b.n_s == pytest.approx(a.n_s)


def test_physicality_check():
    PairMoments(np.array(1.0), np.array(1.0), np.array(np.sqrt(2.0) + 0j)).check_physical()
    with pytest.raises(UnphysicalMomentsError):
        PairMoments(np.array(1.0), np.array(1.0), np.array(2.0 + 0j)).check_physical()
    with pytest.raises(UnphysicalMomentsError):
        PairMoments(np.array(-1.0), np.array(0.0), np.array(0j)).check_physical()


def test_vacuum_moments_symmetric_for_engineered_model(src, taylor):
    w = np.linspace(0, 5e13, 101)
    a = vacuum_moments(taylor, src, w).n_s
    b = vacuum_moments(taylor, src, -w).n_s
    np.testing.assert_allclose(a, b, rtol=1e-9)


def test_normalize():
    c = normalize(SpectrumCurve(np.arange(3.0), np.array([1.0, 4.0, 2.0])))
    np.testing.assert_allclose(c.values, [0.25, 1.0, 0.5])
    assert c.normalized and c.scale == 4.0
    with pytest.raises(ValueError):
        normalize(SpectrumCurve(np.arange(2.0), np.zeros(2)))
