import dataclasses

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlifo.dispersion import FrequencyGrid
from nlifo.errors import DomainError, QuadratureError
from nlifo.interferometry import (
    Interferogram,
    OpdRange,
    count_fringes,
    max_workers,
    sweep_opd,
    visibility_analytic,
    visibility_limits,
    visibility_numeric,
)


@pytest.fixture(scope="module")
def small(scenarios):
    sc = scenarios["flat_low"]
    return dataclasses.replace(sc, grid=FrequencyGrid.from_signal_wavelengths(sc.src, 820e-9, 870e-9, 64))


def test_visibility_of_pure_cosine():
    phase = np.linspace(0, 4 * np.pi, 401)
    raw = (2.0 + np.cos(phase))[:, None] * np.ones((1, 3))
    ifg = Interferogram.from_raw(np.arange(3.0), phase, raw, "su11")
    np.testing.assert_allclose(visibility_numeric(ifg).v, 0.5, rtol=1e-12)
    assert count_fringes(raw[:, 0]) == 2


def test_visibility_needs_two_rows():
    ifg = Interferogram.from_raw(np.arange(2.0), np.zeros(1), np.ones((1, 2)), "su11")
    with pytest.raises(DomainError, match=">=2 OPD"):
        visibility_numeric(ifg)


def test_visibility_undefined_bins_are_nan():
    raw = np.zeros((4, 2))
    raw[:, 1] = [1, 2, 1, 2]
    trace = visibility_numeric(Interferogram.from_raw(np.arange(2.0), np.arange(4.0), raw, "su11"))
    assert np.isnan(trace.v[0]) and trace.n_undefined == 1
    assert trace.v[1] == pytest.approx(1 / 3)


@given(st.floats(0, 1e3), st.floats(0.001, 1.0))
def test_analytic_visibility_bounds(n, eta):
    for cfg in ("su11", "ic"):
        v = float(visibility_analytic(cfg, n, eta))
        assert 0 <= v <= 1 + 1e-12


def test_analytic_limits():
    eta = np.array([0.3, 0.01])
    lim = visibility_limits("su11", eta)
    np.testing.assert_allclose(lim["low_gain"], np.sqrt(eta))
    np.testing.assert_allclose(visibility_analytic("su11", 1e9, eta), lim["high_gain"], rtol=1e-8)
    np.testing.assert_allclose(visibility_analytic("ic", 1e-9, eta), lim["low_gain"], rtol=1e-8)
    with pytest.raises(DomainError):
        visibility_analytic("dl", 1.0, 0.5)
    with pytest.raises(DomainError):
        visibility_analytic("su11", -1.0, 0.5)


def test_opd_range():
    r = OpdRange()
    assert r.values[0] == -1e-5 and r.values[-1] == -5e-5 and r.values.size == 200


def test_thread_count_is_irrelevant(small, monkeypatch):
    opds = OpdRange(-1e-5, -2e-5, 6)
    monkeypatch.setenv("NLIFO_THREADS", "1")
    a = sweep_opd(small, "su11", opds)
    monkeypatch.setenv("NLIFO_THREADS", "3")
    b = sweep_opd(small, "su11", opds)
    assert np.array_equal(a.raw, b.raw)
    monkeypatch.setenv("NLIFO_THREADS", "x")
    with pytest.raises(DomainError):
        max_workers()


def test_sweep_shapes_and_normalization(small):
    for cfg in ("su11", "ic_bbs", "dl_su11"):
        ifg = sweep_opd(small, cfg, [-1e-5, -1.5e-5, -2e-5])
        assert ifg.values.shape == (3, 64)
        assert ifg.values.max() == pytest.approx(1.0)
        np.testing.assert_allclose(ifg.values * ifg.scale, ifg.raw)
        assert np.all(ifg.row_normalized().max(axis=1) == pytest.approx(1.0))
    with pytest.raises(DomainError):
        sweep_opd(small, "bogus", [-1e-5])


def test_errors_carry_location(small, monkeypatch):
    from nlifo import dl

    def boom(*a, **k):
        raise QuadratureError("did not converge", 3e-6)

    monkeypatch.setattr(dl, "dl_su11_surface", boom)
    with pytest.raises(QuadratureError) as info:
        sweep_opd(small, "dl_su11", [-1e-5, -2e-5])
    msg = str(info.value)
    assert "OPD" in msg and "omega" in msg and info.value.achieved == 3e-6
