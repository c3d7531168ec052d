"""Single-mode Gaussian models: moments, information matrices, lossy dynamics.

Covariance convention: the vacuum has ``sigma = I`` and a thermal state
``sigma = (2N + 1) I``, so the purity is ``mu = 1 / sqrt(det sigma)``.
The five-parameter family is a displaced squeezed thermal state with
parameters ``(re_alpha, im_alpha, r, phi, n_thermal)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import estimation, serialize
from .errors import DomainError, PureStateSingular, TruncationError
from .models import ParamModel, finite_diff_derivs

OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])

PARAM_NAMES = ("re_alpha", "im_alpha", "r", "phi", "n_thermal")

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])


@dataclass(frozen=True)
class GaussianState:
    """First moments ``d = (<q>, <p>)`` and 2x2 covariance ``sigma``."""
    d: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float).reshape(2)
        sigma = np.asarray(self.sigma, dtype=float).reshape(2, 2)
        if abs(sigma[0, 1] - sigma[1, 0]) > 1e-10 * max(1.0, float(np.abs(sigma).max())):
            raise DomainError("covariance matrix must be symmetric")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "sigma", 0.5 * (sigma + sigma.T))

    @property
    def purity(self) -> float:
        det = float(np.linalg.det(self.sigma))
        if det <= 0.0:
            raise DomainError(f"covariance determinant {det} is not positive")
        return 1.0 / np.sqrt(det)

    def physicality_margin(self) -> float:
        """Smallest eigenvalue of ``sigma + i Omega``; >= 0 for physical states."""
        return float(np.linalg.eigvalsh(self.sigma + 1.0j * OMEGA)[0])

    def to_json(self) -> str:
        return serialize.dumps({"d": self.d, "sigma": self.sigma})


@dataclass(frozen=True)
class GaussianParams:
    """Displaced squeezed thermal parameters.

    ``r`` is the squeezing modulus (negative values are accepted so that
    finite-difference probes across 0 stay well defined), ``phi`` the
    squeezing phase and ``n_thermal`` the mean thermal photon number.
    """
    re_alpha: float = 0.0
    im_alpha: float = 0.0
    r: float = 0.0
    phi: float = 0.0
    n_thermal: float = 0.0

    def __post_init__(self):
        if self.n_thermal < 0:
            raise DomainError(f"thermal photon number must be >= 0, got {self.n_thermal}")

    def vector(self) -> np.ndarray:
        return np.array([self.re_alpha, self.im_alpha, self.r, self.phi, self.n_thermal])


def moments(params: GaussianParams) -> GaussianState:
    """Phase-space moments of the displaced squeezed thermal state."""
    t = 2.0 * params.n_thermal + 1.0
    s1 = -t * np.sinh(2.0 * params.r) * np.sin(params.phi)
    s2 = t * np.cosh(2.0 * params.r)
    s3 = t * np.sinh(2.0 * params.r) * np.cos(params.phi)
    sigma = s1 * _SX + s2 * np.eye(2) + s3 * _SZ
    d = np.array([np.sqrt(2.0) * params.re_alpha, np.sqrt(2.0) * params.im_alpha])
    return GaussianState(d=d, sigma=sigma)


def purity_of(params: GaussianParams) -> float:
    """Purity ``1 / (2 n_thermal + 1)``; squeezing and displacement drop out."""
    return 1.0 / (2.0 * params.n_thermal + 1.0)


def _moments_cartesian(lam: np.ndarray) -> GaussianState:
    # squeezing in Cartesian components xi = x1 + i x2; smooth at xi = 0,
    # where the polar (r, phi) chart degenerates
    re_a, im_a, x1, x2, n = lam
    if n < 0:
        raise DomainError("thermal photon number must be >= 0")
    t = 2.0 * n + 1.0
    r = float(np.hypot(x1, x2))
    c = np.cosh(2.0 * r)
    if r > 1e-6:
        k = np.sinh(2.0 * r) / r
    else:
        k = 2.0 + (4.0 / 3.0) * r * r  # series of sinh(2r)/r
    sigma = t * (c * np.eye(2) + k * (x1 * _SZ - x2 * _SX))
    d = np.array([np.sqrt(2.0) * re_a, np.sqrt(2.0) * im_a])
    return GaussianState(d=d, sigma=sigma)


def state_family(chart: str = "polar"):
    """Evaluator ``lam -> GaussianState`` for the five-parameter family.

    ``"polar"`` uses ``(re_alpha, im_alpha, r, phi, n_thermal)``;
    ``"cartesian"`` replaces the squeezing pair by ``(Re xi, Im xi)``,
    which keeps the chart regular at zero squeezing.
    """
    if chart == "polar":
        return lambda lam: moments(GaussianParams(*np.asarray(lam, dtype=float)))
    if chart == "cartesian":
        return lambda lam: _moments_cartesian(np.asarray(lam, dtype=float))
    raise DomainError(f"unknown chart {chart!r}")


def cartesian_vector(params: GaussianParams) -> np.ndarray:
    """Parameter vector of ``params`` in the Cartesian-squeezing chart."""
    return np.array([params.re_alpha, params.im_alpha,
                     params.r * np.cos(params.phi), params.r * np.sin(params.phi),
                     params.n_thermal])


# -- information matrices from moments --------------------------------------

def _fd_moments(state_fn, lam, h):
    lam = np.asarray(lam, dtype=float)
    s0 = state_fn(lam)
    dd = np.zeros((lam.size, 2))
    dsig = np.zeros((lam.size, 2, 2))
    dmu = np.zeros(lam.size)
    for a in range(lam.size):
        lp = lam.copy()
        lp[a] += h
        lm = lam.copy()
        lm[a] -= h
        sp, sm = state_fn(lp), state_fn(lm)
        dd[a] = (sp.d - sm.d) / (2.0 * h)
        dsig[a] = (sp.sigma - sm.sigma) / (2.0 * h)
        dmu[a] = (sp.purity - sm.purity) / (2.0 * h)
    return s0, dd, dsig, dmu


_PURE_TOL = 1e-9
_DMU_TOL = 1e-9


def gaussian_qfim(state_fn, lam, h: float = 1e-6) -> np.ndarray:
    """Fisher information of a Gaussian family from moment derivatives.

    Uses central differences with step ``h`` on the first moments, the
    covariance and the purity.  The purity-gradient term diverges for pure
    states: if ``mu >= 1 - 1e-9`` the term is dropped when the purity is
    stationary (all ``|d mu| <= 1e-9``, e.g. loss acting on a coherent
    state) and :class:`PureStateSingular` is raised otherwise.
    """
    s0, dd, dsig, dmu = _fd_moments(state_fn, lam, h)
    mu = s0.purity
    sig_inv = np.linalg.inv(s0.sigma)
    p = len(dmu)
    a_mats = sig_inv @ dsig  # (p, 2, 2)
    q = np.einsum("aij,bji->ab", a_mats, a_mats) / (2.0 * (1.0 + mu * mu))
    q += 2.0 * dd @ sig_inv @ dd.T
    if mu < 1.0 - _PURE_TOL:
        q += 2.0 * np.outer(dmu, dmu) / (1.0 - mu ** 4)
    elif float(np.abs(dmu).max(initial=0.0)) > _DMU_TOL:
        raise PureStateSingular(
            f"purity {mu} with non-stationary purity gradient; QFIM diverges")
    return 0.5 * (q + q.T)


def gaussian_uhlmann(state_fn, lam, h: float = 1e-6) -> np.ndarray:
    """Uhlmann curvature of a Gaussian family from moment derivatives."""
    s0, dd, dsig, _ = _fd_moments(state_fn, lam, h)
    mu = s0.purity
    sig_inv = np.linalg.inv(s0.sigma)
    b_mats = dsig @ sig_inv  # (p, 2, 2)
    so = s0.sigma @ OMEGA
    comm = np.einsum("ij,ajk,bkl->abil", so, b_mats, b_mats)
    u = np.einsum("abii->ab", comm)
    u = (u - u.T) * mu * mu / (2.0 * (mu * mu + 1.0) ** 2)
    u += 2.0 * mu * mu * (dd @ OMEGA @ dd.T)
    return 0.5 * (u - u.T)


def qfim_closed(params: GaussianParams) -> np.ndarray:
    """Closed-form 5x5 Fisher information of the displaced squeezed thermal family."""
    mu = purity_of(params)
    if mu >= 1.0 - _PURE_TOL:
        raise PureStateSingular("thermal-photon entry diverges for a pure state")
    c2, s2 = np.cosh(2.0 * params.r), np.sinh(2.0 * params.r)
    cp, sp = np.cos(params.phi), np.sin(params.phi)
    q = np.zeros((5, 5))
    q[0, 0] = 4.0 * mu * (c2 - cp * s2)
    q[1, 1] = 4.0 * mu * (c2 + cp * s2)
    q[0, 1] = q[1, 0] = 4.0 * mu * s2 * sp
    q[2, 2] = 4.0 / (1.0 + mu * mu)
    q[3, 3] = s2 * s2 / (1.0 + mu * mu)
    q[4, 4] = 4.0 * mu * mu / (1.0 - mu * mu)
    return q


def uhlmann_closed(params: GaussianParams) -> np.ndarray:
    """Closed-form 5x5 Uhlmann curvature; only (re,im) and (r,phi) couple.

    Signs follow the general moment formula (and the density-matrix
    pipeline): the coupled entries are ``U[re,im] = 4 mu^2`` and
    ``U[r,phi] = 4 mu sinh(2r) / (1 + mu^2)^2``.
    """
    mu = purity_of(params)
    s2 = np.sinh(2.0 * params.r)
    u = np.zeros((5, 5))
    u[0, 1] = 4.0 * mu * mu
    u[2, 3] = 4.0 * mu * s2 / (1.0 + mu * mu) ** 2
    u[1, 0] = -u[0, 1]
    u[3, 2] = -u[2, 3]
    return u


def ai_gaussian(mu: float) -> float:
    """AI measure of the full five-parameter model: ``2 mu / (1 + mu^2)``."""
    if not 0.0 < mu <= 1.0:
        raise DomainError(f"purity must lie in (0, 1], got {mu}")
    return 2.0 * mu / (1.0 + mu * mu)


def gaussian_report(params: GaussianParams,
                    eigval_tol: float = estimation.DEFAULT_EIGVAL_TOL) -> estimation.EstimationReport:
    """Closed-form estimation report of the five-parameter model."""
    return estimation.report_from_matrices(
        qfim_closed(params), uhlmann_closed(params), eigval_tol=eigval_tol)


# -- lossy rotation dynamics -------------------------------------------------

def evolve_lossy(initial: GaussianState, omega: float, gamma: float, t: float) -> GaussianState:
    """Moments after rotation at frequency ``omega`` with loss rate ``gamma``.

    Closed-form solution of the moment equations of a lossy rotating mode:
    ``d(t) = e^(-gamma t / 2) R(omega t) d(0)`` and
    ``sigma(t) = e^(-gamma t) R sigma(0) R^T + (1 - e^(-gamma t)) I``, with
    ``R`` the rotation by ``omega t``.
    """
    if gamma < 0:
        raise DomainError(f"loss rate must be >= 0, got {gamma}")
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    e = np.exp(-gamma * t)
    c, s = np.cos(omega * t), np.sin(omega * t)
    rot = np.array([[c, s], [-s, c]])
    d = np.sqrt(e) * rot @ initial.d
    sigma = e * rot @ initial.sigma @ rot.T + (1.0 - e) * np.eye(2)
    return GaussianState(d=d, sigma=sigma)


def lossy_moment_rhs(omega: float, gamma: float):
    """Right-hand side of the moment ODEs, for independent integration checks.

    State vector ``y = (d1, d2, s11, s12, s22)``; implements
    ``d' = A d`` and ``sigma' = A sigma + sigma A^T + gamma I`` with
    ``A = omega Omega - (gamma / 2) I``.
    """
    a = omega * OMEGA - 0.5 * gamma * np.eye(2)

    def rhs(_t, y):
        d = y[:2]
        sigma = np.array([[y[2], y[3]], [y[3], y[4]]])
        dd = a @ d
        ds = a @ sigma + sigma @ a.T + gamma * np.eye(2)
        return np.array([dd[0], dd[1], ds[0, 0], ds[0, 1], ds[1, 1]])

    return rhs


def excitation_parametrization(n_mean: float, eta: float) -> GaussianParams:
    """Initial pure state with mean excitations ``n_mean``, squeezing fraction ``eta``.

    ``sinh^2 r = eta * n_mean`` and ``|alpha|^2 = (1 - eta) * n_mean``;
    phases fixed to ``alpha`` real and ``phi = 0`` (the information
    matrices do not depend on them).
    """
    if n_mean < 0:
        raise DomainError(f"mean excitation number must be >= 0, got {n_mean}")
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"squeezing fraction must lie in [0, 1], got {eta}")
    return GaussianParams(
        re_alpha=float(np.sqrt((1.0 - eta) * n_mean)),
        im_alpha=0.0,
        r=float(np.arcsinh(np.sqrt(eta * n_mean))),
        phi=0.0,
        n_thermal=0.0,
    )


def freq_loss_model(initial_params: GaussianParams, omega: float, gamma: float,
                    t: float, h: float = 1e-6,
                    eigval_tol: float = estimation.DEFAULT_EIGVAL_TOL) -> estimation.EstimationReport:
    """Two-parameter (frequency, loss-rate) report at evolution time ``t``.

    At ``t = 0`` the state carries no information on either parameter and
    the QFIM is singular.
    """
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    s0 = moments(initial_params)

    def fn(lam):
        return evolve_lossy(s0, float(lam[0]), float(lam[1]), t)

    lam = np.array([omega, gamma], dtype=float)
    q = gaussian_qfim(fn, lam, h=h)
    u = gaussian_uhlmann(fn, lam, h=h)
    return estimation.report_from_matrices(q, u, eigval_tol=eigval_tol)


# -- Fock-space bridge -------------------------------------------------------

def _ladder(dim: int) -> np.ndarray:
    a = np.zeros((dim, dim))
    n = np.arange(1, dim)
    a[n - 1, n] = np.sqrt(n)
    return a


def _thermal_weights(n_thermal: float, dim: int) -> np.ndarray:
    if n_thermal < 0:
        raise DomainError("thermal photon number must be >= 0")
    if n_thermal == 0:
        p = np.zeros(dim)
        p[0] = 1.0
        return p
    q = n_thermal / (n_thermal + 1.0)
    return np.exp(np.arange(dim) * np.log(q) - np.log(n_thermal + 1.0))


def _fock_density(alpha: complex, xi: complex, n_thermal: float, dim: int,
                  trace_tol: float = 1e-8) -> np.ndarray:
    a = _ladder(dim)
    ad = a.T
    p = _thermal_weights(n_thermal, dim)
    squeeze = expm(0.5 * (xi * (ad @ ad) - np.conj(xi) * (a @ a)))
    displace = expm(alpha * ad - np.conj(alpha) * a)
    m = (displace @ squeeze).astype(complex)
    rho = (m * p) @ m.conj().T
    tr = float(np.trace(rho).real)
    if 1.0 - tr > trace_tol:
        raise TruncationError(
            f"trace deficit {1.0 - tr:.3e} exceeds {trace_tol:.1e}; increase n_max")
    rho /= tr
    return 0.5 * (rho + rho.conj().T)


def to_fock(params: GaussianParams, n_max: int | None = None,
            trace_tol: float = 1e-8) -> np.ndarray:
    """Number-basis density matrix of the displaced squeezed thermal state.

    Built from truncated ladder operators and matrix exponentials, then
    renormalized to unit trace.  With ``n_max=None`` the cutoff grows
    until the pre-normalization trace deficit is below ``trace_tol``.
    """
    alpha = params.re_alpha + 1.0j * params.im_alpha
    xi = params.r * np.exp(1.0j * params.phi)
    if n_max is not None:
        return _fock_density(alpha, xi, params.n_thermal, int(n_max) + 1, trace_tol)
    n_tot = (abs(alpha) ** 2 + params.n_thermal
             + (2.0 * params.n_thermal + 1.0) * np.sinh(params.r) ** 2)
    base = int(np.ceil(8.0 * n_tot + 24.0))
    last_err: TruncationError | None = None
    for dim in (base, 2 * base, 4 * base):
        try:
            return _fock_density(alpha, xi, params.n_thermal, dim, trace_tol)
        except TruncationError as err:
            last_err = err
    raise last_err


def fock_model(params: GaussianParams, n_max: int, chart: str = "cartesian",
               fd_step: float = 1e-5, trace_tol: float = 1e-8) -> ParamModel:
    """Five-parameter family evaluated in a truncated number basis.

    Bridges the Gaussian closed forms to the density-matrix estimation
    pipeline.  The ``"cartesian"`` chart parametrizes squeezing by
    ``(Re xi, Im xi)`` and stays regular at zero squeezing; ``"polar"``
    uses ``(r, phi)`` and requires ``r != 0``.
    """
    dim = int(n_max) + 1

    if chart == "cartesian":
        names = ("re_alpha", "im_alpha", "xi1", "xi2", "n_thermal")
        lam0 = cartesian_vector(params)

        def eval_rho(lam):
            return _fock_density(lam[0] + 1.0j * lam[1], lam[2] + 1.0j * lam[3],
                                 lam[4], dim, trace_tol)
    elif chart == "polar":
        names = PARAM_NAMES
        lam0 = params.vector()

        def eval_rho(lam):
            return _fock_density(lam[0] + 1.0j * lam[1],
                                 lam[2] * np.exp(1.0j * lam[3]),
                                 lam[4], dim, trace_tol)
    else:
        raise DomainError(f"unknown chart {chart!r}")

    def eval_derivs(lam):
        return finite_diff_derivs(eval_rho, lam, h=fd_step)

    return ParamModel(names, eval_rho, eval_derivs, lam0=lam0)
