"""Brute-force cross-checks for the analytic modules.

The integrators here only use the dispersion model and the raw generator
from :mod:`nlifo.channels`; none of the closed forms under test are reused.
The pipelines compose channel steps (squeezer, beamsplitter, squeezer) and
are compared against the interferometer formulas by
:func:`verify_identity_suite`.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .channels import (
    TransferStep,
    beamsplitter_step,
    compose,
    generator,
    lossless_transfer,
    propagate_moments,
    vacuum_output,
)
from .dispersion import (
    LossPeak,
    LossProfile,
    SourceParams,
    TaylorDispersion,
    idler_kappa,
    omega_to_wavelength,
)
from .twinbeam import PairMoments

_P_S = np.diag([1.0, 0.0]).astype(complex)


def _dag(a):
    return np.conj(np.swapaxes(a, -1, -2))


def _rk4(rhs, y0, length, steps):
    h = length / steps
    y = y0
    for _ in range(steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


def integrate_lossless(model, src: SourceParams, omega, steps: int = 2000, gamma=None) -> TransferStep:
    """Fixed-step RK4 of ``dg/dz = G g`` from ``g(0) = I`` over the crystal."""
    if steps < 100:
        raise ValueError("RK4 oracle needs at least 100 steps")
    gen = generator(model, src, omega, gamma=gamma)
    eye = np.broadcast_to(np.eye(2, dtype=complex), gen.shape).copy()
    g = _rk4(lambda y: gen @ y, eye, src.L, steps)
    return TransferStep(g, np.zeros_like(g))


def integrate_dl(model, src: SourceParams, loss, omega, steps: int = 4000) -> PairMoments:
    """RK4 of the normally ordered moment matrix under idler decay.

    With ``C = <x x^dagger>`` for ``x = (a_S, a_I^dagger)``, a vacuum bath
    contributes nothing to ``dC/dz = G C + C G^dagger``. Writing
    ``C = K + P_S`` keeps the small photon numbers free of cancellation.
    """
    if steps < 100:
        raise ValueError("RK4 oracle needs at least 100 steps")
    kap = idler_kappa(loss, src, omega)
    gen = generator(model, src, omega, kappa=kap)
    source = gen @ _P_S + _P_S @ _dag(gen)
    k0 = np.zeros(gen.shape, dtype=complex)
    k = _rk4(lambda y: gen @ y + y @ _dag(gen) + source, k0, src.L, steps)
    return PairMoments(np.real(k[..., 0, 0]), np.real(k[..., 1, 1]), k[..., 0, 1])


def dl_added_noise_closed_form(gamma_mag, kappa, length):
    """``kappa * int_0^L exp(-kappa s/2) (2 gamma/G)^2 sinh^2(G s/2) ds`` at phase matching."""
    big_g = np.sqrt(4.0 * gamma_mag**2 + 0.25 * kappa**2)
    a = big_g - 0.5 * kappa
    b = big_g + 0.5 * kappa
    h = 0.5 * kappa
    grow = np.expm1(a * length) / a
    decay = -np.expm1(-b * length) / b
    flat = -np.expm1(-h * length) / h if h > 0 else length
    return kappa * (2.0 * gamma_mag / big_g) ** 2 * 0.25 * (grow + decay - 2.0 * flat)


def su11_pipeline(model, src, eta, phi_i, phi_p, omega) -> PairMoments:
    """Squeezer, idler beamsplitter, squeezer; vacuum in, signal/idler out.

    The second squeezer's coupling carries ``exp(+i phi_p)``.
    """
    first = lossless_transfer(model, src, omega, gamma=src.gamma_mag)
    mid = beamsplitter_step(eta, phi_i)
    second = lossless_transfer(model, src, omega, gamma=src.gamma_mag * np.exp(1j * phi_p))
    return vacuum_output(compose(compose(first, mid), second))


@dataclass(frozen=True, eq=False)
class IcOutputs:
    n_s: np.ndarray
    n_i: np.ndarray
    n_a: np.ndarray
    cross: np.ndarray

    def arms(self):
        im = np.imag(self.cross)
        total = self.n_s + self.n_a
        return 0.5 * (total + 2.0 * im), 0.5 * (total - 2.0 * im)


def ic_pipeline(model, src, eta, phi_i, phi_p, omega) -> IcOutputs:
    """Two-pass induced coherence through the pair algebra.

    The second squeezer acts on ``(a_A, a_I^dagger)``; the signal only enters
    through ``<a_S^dagger a_A> = g12 <a_S a_I>^*``. The ancilla arm carries a
    fixed quarter-wave reference, ``a_A -> -i a_A``.
    """
    first = vacuum_output(lossless_transfer(model, src, omega, gamma=src.gamma_mag))
    eta = np.asarray(eta, dtype=float)
    m_si = np.sqrt(eta) * np.exp(1j * np.asarray(phi_i)) * first.m
    seeded = PairMoments(np.zeros_like(first.n_s), eta * first.n_i, np.zeros_like(first.m))
    second = lossless_transfer(model, src, omega, gamma=src.gamma_mag * np.exp(1j * phi_p))
    out = propagate_moments(second, seeded, check=False)
    cross = -1j * second.g[..., 0, 1] * np.conj(m_si)
    return IcOutputs(first.n_s, out.n_i, out.n_s, cross)


# --- randomized identity battery -------------------------------------------------

_LAMBDA_P = 644e-9
_LAMBDA_S = 841e-9
_OMEGA0 = 1e12


@dataclass(frozen=True)
class Draw:
    gamma_l: float
    sigma_l: float
    dk_l: float
    kappa_l: float
    eta: float
    phi_i: float
    phi_p: float
    length: float = 0.04

    def source(self) -> SourceParams:
        return SourceParams(_LAMBDA_P, _LAMBDA_S, self.length, gamma_mag=self.gamma_l / self.length)

    def model(self) -> TaylorDispersion:
        # linear terms only, evaluated at a single detuning _OMEGA0
        s, d = self.sigma_l / self.length, self.dk_l / self.length
        return TaylorDispersion((s + d) / (2 * _OMEGA0), (d - s) / (2 * _OMEGA0))

    def loss(self, src: SourceParams) -> LossProfile | None:
        if self.kappa_l <= 0:
            return None
        centre = omega_to_wavelength(src.omega_idler - _OMEGA0)
        return LossProfile((LossPeak(centre, float(np.exp(-self.kappa_l)), 1e-3),), self.length)

    def as_dict(self):
        return {k: getattr(self, k) for k in ("gamma_l", "sigma_l", "dk_l", "kappa_l", "eta", "phi_i", "phi_p")}


def random_draws(seed: int, draws: int):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(draws):
        out.append(
            Draw(
                gamma_l=rng.uniform(0.01, 3.0),
                sigma_l=rng.uniform(-3 * np.pi, 3 * np.pi),
                dk_l=rng.uniform(-2 * np.pi, 2 * np.pi),
                kappa_l=rng.uniform(0.0, 5.0),
                eta=rng.uniform(0.01, 1.0),
                phi_i=rng.uniform(0.0, 2 * np.pi),
                phi_p=rng.uniform(0.0, 2 * np.pi),
            )
        )
    return out


@dataclass
class CheckResult:
    name: str
    tolerance: float
    worst: float = 0.0
    count: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, deviation: float, params: dict):
        self.count += 1
        if not np.isfinite(deviation) or deviation > self.worst:
            self.worst = float(deviation) if np.isfinite(deviation) else float("inf")
        if not deviation <= self.tolerance:
            self.failures.append({"deviation": float(deviation), **params})


@dataclass
class IdentityReport:
    seed: int
    draws: int
    checks: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failed_checks(self):
        return [name for name, c in self.checks.items() if not c.passed]

    def text(self) -> str:
        lines = [f"identity suite seed={self.seed} draws={self.draws}"]
        for c in self.checks.values():
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"{status} {c.name} worst={c.worst:.3e} tol={c.tolerance:.1e} n={c.count}")
            for f in c.failures[:5]:
                detail = " ".join(f"{k}={v:.6g}" for k, v in f.items())
                lines.append(f"    {detail}")
        lines.append("OVERALL " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "passed", "worst_deviation", "tolerance", "evaluations", "failures"])
        for c in self.checks.values():
            w.writerow([c.name, int(c.passed), f"{c.worst:.17g}", f"{c.tolerance:.17g}", c.count, len(c.failures)])
        return buf.getvalue()


TOLERANCES = {
    "pure_state": 1e-10,
    "su11_pipeline": 1e-10,
    "ic_pipeline": 1e-10,
    "dl_quadrature": 1e-10,
    "visibility": 1e-3,
}

_PHASE_SWEEP = np.linspace(0.0, 2 * np.pi, 721)


def _rel(a, b, scale):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)) / scale))


def verify_identity_suite(seed: int = 42, draws: int = 256) -> IdentityReport:
    """Run the analytic-versus-pipeline battery over randomized parameter sets."""
    from . import dl, ic, interferometry, su11, twinbeam

    checks = {name: CheckResult(name, tol) for name, tol in TOLERANCES.items()}
    w = np.array([_OMEGA0])
    for d in random_draws(seed, draws):
        src, model = d.source(), d.model()
        params = d.as_dict()

        vac = twinbeam.vacuum_moments(model, src, w)
        n = vac.n_s
        checks["pure_state"].record(_rel(np.abs(vac.m) ** 2, n * (n + 1), np.maximum(n * (n + 1), 1e-300)), params)

        bs_loss = _constant_eta_loss(src, d.eta, d.length)
        n_s, n_i = su11.su11_intensities(model, src, bs_loss, d.phi_i, d.phi_p, w)
        pipe = su11_pipeline(model, src, d.eta, d.phi_i, d.phi_p, w)
        scale = 2 * n + n * n * (1 + d.eta) + 2 * np.sqrt(d.eta) * n * (n + 1)
        dev = max(_rel(n_s, pipe.n_s, scale), _rel(n_i, pipe.n_i, scale))
        checks["su11_pipeline"].record(dev, params)

        ic_s, ic_i, ic_a = ic.ic_intensities(model, src, bs_loss, d.phi_i, d.phi_p, w)
        cross = ic.ic_cross_moment(model, src, bs_loss, d.phi_i, d.phi_p, w)
        plus, minus = ic.bbs_arms(model, src, bs_loss, d.phi_i, d.phi_p, w)
        ip = ic_pipeline(model, src, d.eta, d.phi_i, d.phi_p, w)
        pp, pm = ip.arms()
        scale = n + ip.n_i + ip.n_a
        dev = max(
            _rel(ic_s, ip.n_s, scale),
            _rel(ic_i, ip.n_i, scale),
            _rel(ic_a, ip.n_a, scale),
            _rel(cross, ip.cross, scale),
            _rel(plus, pp, scale),
            _rel(minus, pm, scale),
        )
        checks["ic_pipeline"].record(dev, params)

        kap = d.kappa_l / d.length
        if kap > 0:
            flat = model.with_offset(model.pma_offset - float(model._dk("signal", w)[0] + model._dk("idler", -w)[0]))
            got = dl.dl_signal(flat, src, d.loss(src), w).added_noise
            exact = dl_added_noise_closed_form(src.gamma_mag, float(idler_kappa(d.loss(src), src, w)[0]), src.L)
            checks["dl_quadrature"].record(_rel(got, exact, abs(exact)), params)

        w_sweep = np.full(_PHASE_SWEEP.shape, _OMEGA0)
        lam = np.full(1, src.lambda_signal_center)
        rows = su11_pipeline(model, src, d.eta, _PHASE_SWEEP, d.phi_p, w_sweep).n_s[:, None]
        ifg = interferometry.Interferogram.from_raw(lam, _PHASE_SWEEP, rows, "su11")
        v_ana = interferometry.visibility_analytic("su11", n, d.eta)
        dev = _rel(interferometry.visibility_numeric(ifg).v, v_ana, v_ana)
        rows = ic_pipeline(model, src, d.eta, _PHASE_SWEEP, d.phi_p, w_sweep).arms()[0][:, None]
        ifg = interferometry.Interferogram.from_raw(lam, _PHASE_SWEEP, rows, "ic_bbs")
        v_ana = interferometry.visibility_analytic("ic", n, d.eta)
        dev = max(dev, _rel(interferometry.visibility_numeric(ifg).v, v_ana, v_ana))
        checks["visibility"].record(dev, params)
    return IdentityReport(seed, draws, checks)


def _constant_eta_loss(src, eta, length):
    """A loss profile whose transmission at the test detuning equals ``eta``."""
    if eta >= 1.0:
        return None
    centre = omega_to_wavelength(src.omega_idler - _OMEGA0)
    return LossProfile((LossPeak(centre, float(eta), 1e-3),), length)
