"""Parametrized quantum statistical models with derivative supply.

A :class:`ParamModel` bundles an evaluator ``lam -> rho`` with a derivative
supplier ``lam -> (p, d, d)`` stack of ``d rho / d lam_a``.  Concrete
families: qubit Bloch coordinates, qudit mixture (Bloch-vector)
coordinates, and thermal (Gibbs) exponential coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .errors import DegenerateChart, DomainError, NumericalOverflow

Array = np.ndarray


@dataclass(frozen=True)
class ParamModel:
    """An immutable family ``rho(lam)`` with per-parameter derivatives.

    ``lam0`` is the anchor point the model was built at; methods default
    to it when no explicit parameter vector is given.
    """
    param_names: tuple[str, ...]
    eval_rho: Callable[[Array], Array]
    eval_derivs: Callable[[Array], Array]
    lam0: Array | None = None

    @property
    def num_params(self) -> int:
        return len(self.param_names)

    def _lam(self, lam) -> Array:
        if lam is None:
            if self.lam0 is None:
                raise DomainError("model has no anchor point; pass lam explicitly")
            return np.asarray(self.lam0, dtype=float)
        lam = np.asarray(lam, dtype=float)
        if lam.shape != (self.num_params,):
            raise DomainError(
                f"expected {self.num_params} parameters, got shape {lam.shape}")
        return lam

    def rho(self, lam=None) -> Array:
        return self.eval_rho(self._lam(lam))

    def derivs(self, lam=None) -> Array:
        return self.eval_derivs(self._lam(lam))

    def report(self, lam=None, **kwargs):
        """Estimation report at ``lam`` (or the anchor point)."""
        from .estimation import model_report
        lam = self._lam(lam)
        return model_report(self.eval_rho(lam), self.eval_derivs(lam), **kwargs)


def finite_diff_derivs(eval_rho: Callable[[Array], Array], lam, h: float = 1e-5) -> Array:
    """Central-difference state derivatives, Hermitized and trace-projected.

    The trace projection subtracts ``(Tr/d) * I`` from each derivative so the
    trace-preservation constraint holds exactly rather than to O(h^2).
    """
    lam = np.asarray(lam, dtype=float)
    if h <= 0:
        raise DomainError("finite-difference step must be positive")
    out = []
    for a in range(lam.size):
        lp = lam.copy()
        lp[a] += h
        lm = lam.copy()
        lm[a] -= h
        g = (np.asarray(eval_rho(lp), complex) - np.asarray(eval_rho(lm), complex)) / (2.0 * h)
        g = linalg.hermitize(g)
        d = g.shape[0]
        g -= (np.trace(g) / d) * np.eye(d)
        out.append(g)
    return np.stack(out)


# -- qubit Bloch chart ------------------------------------------------------

_PAULIS = np.stack([linalg.SIGMA_X, linalg.SIGMA_Y, linalg.SIGMA_Z])


def _bloch_check(lam: Array) -> None:
    r, theta = float(lam[0]), float(lam[1])
    if not 0.0 < r < 1.0:
        raise DomainError(f"Bloch radius must lie strictly in (0, 1), got {r}")
    if not 0.0 < theta < np.pi:
        raise DegenerateChart(
            f"polar angle {theta} is on the chart boundary (QFIM singular in phi)")


def _bloch_rho(lam: Array) -> Array:
    _bloch_check(lam)
    r, theta, phi = lam
    gamma = np.array([r * np.sin(theta) * np.cos(phi),
                      r * np.sin(theta) * np.sin(phi),
                      r * np.cos(theta)])
    return 0.5 * (np.eye(2, dtype=complex) + np.einsum("a,aij->ij", gamma, _PAULIS))


def _bloch_derivs(lam: Array) -> Array:
    _bloch_check(lam)
    r, theta, phi = lam
    st, ct = np.sin(theta), np.cos(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    jac = np.array([
        [st * cp, st * sp, ct],
        [r * ct * cp, r * ct * sp, -r * st],
        [-r * st * sp, r * st * cp, 0.0],
    ])
    return 0.5 * np.einsum("ab,bij->aij", jac, _PAULIS)


def bloch_qubit(r: float, theta: float, phi: float) -> ParamModel:
    """Three-parameter qubit model in spherical Bloch coordinates (r, theta, phi).

    Analytic derivatives.  The chart requires ``r`` strictly inside (0, 1)
    (full rank) and ``theta`` strictly inside (0, pi) (phi identifiable).
    """
    lam0 = np.array([r, theta, phi], dtype=float)
    _bloch_check(lam0)
    return ParamModel(("r", "theta", "phi"), _bloch_rho, _bloch_derivs, lam0=lam0)


def bloch_chart_jacobian(r: float, theta: float, phi: float) -> Array:
    """Jacobian ``d gamma_b / d (r, theta, phi)_a`` of the spherical chart."""
    st, ct = np.sin(theta), np.cos(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    return np.array([
        [st * cp, st * sp, ct],
        [r * ct * cp, r * ct * sp, -r * st],
        [-r * st * sp, r * st * cp, 0.0],
    ])


# -- qudit mixture (Bloch-vector) coordinates -------------------------------

def qudit_mixture(gamma, basis: linalg.GeneratorBasis) -> ParamModel:
    """Full-tomography model ``rho = (I + sum_a gamma_a S_a) / d``.

    The ``d^2 - 1`` mixture coordinates have constant derivatives
    ``d rho / d gamma_a = S_a / d``.  The anchor state must be positive
    definite.
    """
    d = basis.dim
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (d * d - 1,):
        raise DomainError(f"expected {d * d - 1} mixture coordinates, got {gamma.shape}")
    mats = basis.matrices
    const_derivs = mats / d

    def eval_rho(g: Array) -> Array:
        rho = (np.eye(d, dtype=complex) + np.einsum("a,aij->ij", g, mats)) / d
        if float(np.linalg.eigvalsh(rho)[0]) <= 0.0:
            raise DomainError("mixture coordinates give a non-positive state")
        return rho

    eval_rho(gamma)
    names = tuple(f"gamma{i}" for i in range(d * d - 1))
    return ParamModel(names, eval_rho, lambda g: const_derivs, lam0=gamma)


def mixture_coordinates(rho, basis: linalg.GeneratorBasis) -> Array:
    """Bloch-vector components ``gamma_a = d Tr[rho S_a] / 2`` of a state."""
    rho = np.asarray(rho, dtype=complex)
    return (basis.dim / 2.0) * np.einsum("aij,ji->a", basis.matrices, rho).real


# -- thermal (Gibbs) exponential coordinates --------------------------------

@dataclass(frozen=True)
class GibbsSpec:
    """Parameters of a Gibbs family ``rho = exp(-beta H) / Z``.

    ``H = sum_a lam_a S_a`` over the generator basis; ``beta`` is a fixed
    rescaling parameter (never estimated) that keeps the coordinates in a
    bounded box ``|lam_a| <= 1``.
    """
    beta: float
    lam: Array
    basis: linalg.GeneratorBasis

    def __post_init__(self):
        object.__setattr__(self, "lam", np.asarray(self.lam, dtype=float))
        d = self.basis.dim
        if self.beta <= 0:
            raise DomainError(f"beta must be positive, got {self.beta}")
        if self.lam.shape != (d * d - 1,):
            raise DomainError(
                f"expected {d * d - 1} exponential coordinates, got {self.lam.shape}")
        if float(np.abs(self.lam).max(initial=0.0)) > 1.0:
            raise DomainError("exponential coordinates must satisfy |lam_a| <= 1")


# exp(-beta*span) underflows past this, leaving a numerically rank-deficient state
_MAX_BETA_SPAN = 700.0


def gibbs_model(spec: GibbsSpec, fd_step: float = 1e-5) -> ParamModel:
    """Gibbs-state model over the exponential coordinates, ``beta`` fixed.

    The matrix exponential is evaluated through the eigendecomposition of
    the (Hermitian) Hamiltonian; derivatives come from central finite
    differences on the coordinates.
    """
    beta = float(spec.beta)
    mats = spec.basis.matrices

    def eval_rho(lam: Array) -> Array:
        h = np.einsum("a,aij->ij", lam, mats)
        w, v = np.linalg.eigh(h)
        span = float(w[-1] - w[0])
        if beta * span > _MAX_BETA_SPAN:
            raise NumericalOverflow(
                f"beta * spectral span = {beta * span:.3e} exceeds {_MAX_BETA_SPAN}")
        z = np.exp(-beta * (w - w[0]))
        z /= z.sum()
        return linalg.hermitize((v * z) @ v.conj().T)

    def eval_derivs(lam: Array) -> Array:
        return finite_diff_derivs(eval_rho, lam, h=fd_step)

    names = tuple(f"lam{i}" for i in range(len(mats)))
    return ParamModel(names, eval_rho, eval_derivs, lam0=spec.lam.copy())


def from_spectrum_unitary(x, umat) -> tuple[Array, float]:
    """State ``U diag(x) U†`` plus its log-spectral spread.

    Returns ``(rho, beta_delta_m)`` with
    ``beta_delta_m = log(max(x) / min(x))``, the spread of ``-log x_i``.
    """
    x = np.asarray(x, dtype=float)
    umat = np.asarray(umat, dtype=complex)
    if np.any(x <= 0.0):
        raise DomainError("spectrum entries must be strictly positive")
    if abs(float(x.sum()) - 1.0) > 1e-10:
        raise DomainError(f"spectrum must sum to 1, got {x.sum()}")
    d = x.size
    if umat.shape != (d, d):
        raise DomainError("unitary shape does not match spectrum length")
    if float(np.abs(umat.conj().T @ umat - np.eye(d)).max()) > 1e-10:
        raise DomainError("matrix is not unitary within tolerance")
    rho = linalg.hermitize((umat * x) @ umat.conj().T)
    return rho, float(np.log(x.max() / x.min()))
