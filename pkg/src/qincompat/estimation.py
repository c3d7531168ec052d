"""Core multiparameter-estimation machinery.

Given a density matrix and its per-parameter derivatives this module builds
the symmetric-logarithmic-derivative (SLD) operators, the quantum Fisher
information matrix Q, the Uhlmann curvature U, the incompatibility spectrum
of ``i Q^{-1} U`` and the asymptotic-incompatibility (AI) measure R, plus
scalar bounds, reparametrization, classical Fisher information and
submodel/compatibility bookkeeping.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import kernels, linalg, serialize
from .errors import (DomainError, InvalidPOVM, InvalidReparametrization,
                     RankDeficient, SingularQfim)

DEFAULT_EIGVAL_TOL = 1e-8


@dataclass(frozen=True)
class EstimationReport:
    """Summary of one multiparameter estimation problem.

    Attributes:
        q: ``(p, p)`` symmetric positive-definite Fisher information matrix.
        u: ``(p, p)`` antisymmetric Uhlmann curvature matrix.
        i_spectrum: eigenvalues of ``i q^{-1} u`` in descending order.
        r: AI measure, the largest eigenvalue of ``i q^{-1} u``.
        delta: number of eigenvalues strictly above the positivity tolerance.
        compat_bound: ``p - delta``, an upper bound on how many parameters
            can be estimated without asymptotic incompatibility penalty.
    """
    q: np.ndarray
    u: np.ndarray
    i_spectrum: np.ndarray
    r: float
    delta: int
    compat_bound: int

    @property
    def num_params(self) -> int:
        return self.q.shape[0]

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "u": self.u,
            "spectrum": self.i_spectrum,
            "r": self.r,
            "delta": self.delta,
            "compat_bound": self.compat_bound,
        }

    def to_json(self) -> str:
        """JSON object with keys q, u, spectrum, r, delta, compat_bound."""
        return serialize.dumps(self.to_json_dict())


def sld_set(rho, drhos, rank_tol: float = linalg.DEFAULT_RANK_TOL) -> np.ndarray:
    """SLD operators for every parameter, stacked as ``(p, d, d)``.

    Equivalent to calling :func:`qincompat.linalg.lyapunov_sld` per
    derivative but with a single eigendecomposition of ``rho``.
    """
    rho = linalg.validate_density(rho)
    drhos = np.asarray(drhos, dtype=complex)
    if drhos.ndim == 2:
        drhos = drhos[None]
    x, v = np.linalg.eigh(rho)
    if float(x[0]) <= rank_tol:
        raise RankDeficient(
            f"density matrix eigenvalue {x[0]:.3e} <= rank_tol {rank_tol:.3e}")
    dt = v.conj().T @ drhos @ v
    lt = 2.0 * dt / (x[:, None] + x[None, :])
    slds = v @ lt @ v.conj().T
    return 0.5 * (slds + np.conj(np.swapaxes(slds, 1, 2)))


def qfim(rho, slds) -> np.ndarray:
    """Fisher information ``Q_ab = Tr[rho (L_a L_b + L_b L_a)] / 2``."""
    rho = np.asarray(rho, dtype=complex)
    slds = np.asarray(slds, dtype=complex)
    rl = rho @ slds  # (p, d, d)
    q = np.einsum("aik,bki->ab", rl, slds, optimize=True).real
    return 0.5 * (q + q.T)


def uhlmann(rho, slds) -> np.ndarray:
    """Uhlmann curvature ``U_ab = -(i/2) Tr[rho [L_a, L_b]]``."""
    rho = np.asarray(rho, dtype=complex)
    slds = np.asarray(slds, dtype=complex)
    rl = rho @ slds
    u = np.einsum("aik,bki->ab", rl, slds, optimize=True).imag
    return 0.5 * (u - u.T)


def qu_from_derivs(rho, drhos, rank_tol: float = linalg.DEFAULT_RANK_TOL,
                   support_tol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Q and U directly from state derivatives, in the eigenbasis of ``rho``.

    This is the fast route used by sweeps (one eigendecomposition, one
    contraction kernel).  With ``support_tol=None`` the state must be full
    rank with respect to ``rank_tol``.  Passing a positive ``support_tol``
    instead drops eigenvalue pairs with ``x_i + x_j <= support_tol`` from
    the sums, which makes the computation well defined for numerically
    rank-deficient states such as truncated Fock representations.
    """
    rho = linalg.validate_density(rho)
    drhos = np.asarray(drhos, dtype=complex)
    x, v = np.linalg.eigh(rho)
    if support_tol is None:
        if float(x[0]) <= rank_tol:
            raise RankDeficient(
                f"density matrix eigenvalue {x[0]:.3e} <= rank_tol {rank_tol:.3e}")
        tol = 0.0
    else:
        tol = float(support_tol)
    dt = np.ascontiguousarray(v.conj().T @ drhos @ v)
    return kernels.assemble_qu(dt, x, tol)


def incompat_spectrum(q, u, sing_rtol: float = 1e-12) -> np.ndarray:
    """Eigenvalues of ``i q^{-1} u`` in descending order.

    Computed as the spectrum of the Hermitian matrix
    ``i q^{-1/2} u q^{-1/2}`` (similar to ``i q^{-1} u``), which guarantees
    real output.  Raises :class:`SingularQfim` when ``q`` is singular.
    """
    q = np.asarray(q, dtype=float)
    u = np.asarray(u, dtype=float)
    qs = 0.5 * (q + q.T)
    us = 0.5 * (u - u.T)
    w, v = np.linalg.eigh(qs)
    if float(w[0]) <= sing_rtol * max(float(w[-1]), 0.0) or float(w[0]) <= 0.0:
        raise SingularQfim(f"QFIM min eigenvalue {w[0]:.3e} is not positive")
    inv_sqrt = (v / np.sqrt(w)) @ v.T
    m = inv_sqrt @ (1.0j * us) @ inv_sqrt
    ev = np.linalg.eigvalsh(m)
    return ev[::-1].copy()


def ai_measure(q, u, sing_rtol: float = 1e-12) -> float:
    """AI measure: largest eigenvalue of ``i q^{-1} u``; 0 iff ``u = 0``."""
    return float(incompat_spectrum(q, u, sing_rtol)[0])


def delta_positive(i_spectrum, eigval_tol: float = DEFAULT_EIGVAL_TOL) -> int:
    """Count of spectrum entries strictly above ``eigval_tol``."""
    return int(np.sum(np.asarray(i_spectrum) > eigval_tol))


def compat_bound(i_spectrum, p: int, eigval_tol: float = DEFAULT_EIGVAL_TOL) -> int:
    """Upper bound ``p - delta`` on the number of compatible parameters."""
    return int(p) - delta_positive(i_spectrum, eigval_tol)


def report_from_matrices(q, u, eigval_tol: float = DEFAULT_EIGVAL_TOL) -> EstimationReport:
    """Assemble an :class:`EstimationReport` from precomputed Q and U."""
    q = np.asarray(q, dtype=float)
    u = np.asarray(u, dtype=float)
    spectrum = incompat_spectrum(q, u)
    delta = delta_positive(spectrum, eigval_tol)
    return EstimationReport(
        q=q,
        u=0.5 * (u - u.T),
        i_spectrum=spectrum,
        r=float(spectrum[0]),
        delta=delta,
        compat_bound=q.shape[0] - delta,
    )


def model_report(rho, drhos, rank_tol: float = linalg.DEFAULT_RANK_TOL,
                 eigval_tol: float = DEFAULT_EIGVAL_TOL,
                 support_tol: float | None = None) -> EstimationReport:
    """Full report (Q, U, spectrum, R, delta, bound) for one model point."""
    q, u = qu_from_derivs(rho, drhos, rank_tol=rank_tol, support_tol=support_tol)
    return report_from_matrices(q, u, eigval_tol=eigval_tol)


def submodel_report(rho, drhos, subset, rank_tol: float = linalg.DEFAULT_RANK_TOL,
                    eigval_tol: float = DEFAULT_EIGVAL_TOL) -> EstimationReport:
    """Report for the submodel keeping only the parameters in ``subset``.

    Fixing parameters leaves the SLD operators of the remaining ones
    unchanged, so the submodel's Q and U are principal submatrices of the
    full ones.
    """
    subset = _check_subset(subset, len(drhos))
    q, u = qu_from_derivs(rho, drhos, rank_tol=rank_tol)
    sub = np.ix_(subset, subset)
    return report_from_matrices(q[sub], u[sub], eigval_tol=eigval_tol)


def _check_subset(subset, p: int) -> list[int]:
    subset = [int(i) for i in subset]
    if not subset:
        raise DomainError("parameter subset must be nonempty")
    if len(set(subset)) != len(subset):
        raise DomainError("parameter subset contains duplicates")
    if any(i < 0 or i >= p for i in subset):
        raise DomainError(f"subset indices out of range for p={p}")
    return subset


def submodel_ai_scan(q, u) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """AI measure of every nonempty parameter subset, batched per size.

    Returns ``(masks, sizes, ai)`` where ``masks[k]`` is the subset bitmask
    (bit ``i`` set iff parameter ``i`` retained), ``sizes[k]`` its
    cardinality and ``ai[k]`` the submodel AI measure.  Principal
    submatrices of a positive-definite Q stay positive definite, so every
    subset is well posed.
    """
    q = np.asarray(q, dtype=float)
    iu = 1.0j * np.asarray(u, dtype=float)
    p = q.shape[0]
    masks, sizes, ais = [], [], []
    for k in range(1, p + 1):
        combos = np.array(list(itertools.combinations(range(p), k)), dtype=int)
        qs = q[combos[:, :, None], combos[:, None, :]]
        us = iu[combos[:, :, None], combos[:, None, :]]
        w, v = np.linalg.eigh(qs)
        if float(w[:, 0].min()) <= 0.0:
            raise SingularQfim("principal submatrix of QFIM not positive definite")
        inv_sqrt = np.einsum("mik,mk,mjk->mij", v, 1.0 / np.sqrt(w), v)
        m = inv_sqrt @ us @ inv_sqrt
        ev = np.linalg.eigvalsh(m)
        masks.append(np.bitwise_or.reduce(1 << combos, axis=1))
        sizes.append(np.full(len(combos), k))
        ais.append(ev[:, -1])
    return np.concatenate(masks), np.concatenate(sizes), np.concatenate(ais)


def scalar_sld_bound(q, weight) -> float:
    """Scalar Fisher bound ``Tr[W Q^{-1}]`` for a positive-definite weight."""
    q = np.asarray(q, dtype=float)
    weight = np.asarray(weight, dtype=float)
    if weight.shape != q.shape:
        raise DomainError("weight matrix shape mismatch")
    sym_err = float(np.abs(weight - weight.T).max())
    if sym_err > 1e-10 * max(1.0, float(np.abs(weight).max())):
        raise DomainError("weight matrix must be symmetric")
    if float(np.linalg.eigvalsh(0.5 * (weight + weight.T))[0]) <= 0.0:
        raise DomainError("weight matrix must be positive definite")
    w = np.linalg.eigvalsh(0.5 * (q + q.T))
    if float(w[0]) <= 1e-12 * max(float(w[-1]), 0.0) or float(w[0]) <= 0.0:
        raise SingularQfim("QFIM is singular, scalar bound undefined")
    return float(np.trace(weight @ np.linalg.inv(q)).real)


def holevo_range(cs: float, r: float) -> tuple[float, float]:
    """Bracket for the Holevo scalar bound: ``[cs, (1 + r) cs]``."""
    return float(cs), float((1.0 + r) * cs)


def reparametrize(q, u, b) -> tuple[np.ndarray, np.ndarray]:
    """Congruence transform ``(B Q B^T, B U B^T)`` for a new chart.

    ``b`` is the Jacobian of the old parameters with respect to the new
    ones; it must be invertible.
    """
    b = np.asarray(b, dtype=float)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise InvalidReparametrization("reparametrization matrix must be square")
    s = np.linalg.svd(b, compute_uv=False)
    if float(s[-1]) <= 1e-13 * float(s[0]):
        raise InvalidReparametrization("reparametrization matrix is singular")
    q = np.asarray(q, dtype=float)
    u = np.asarray(u, dtype=float)
    return b @ q @ b.T, b @ u @ b.T


def povm_probs(rho, effects) -> np.ndarray:
    """Born-rule outcome distribution ``p_k = Tr[rho Pi_k]``."""
    rho = np.asarray(rho, dtype=complex)
    effects = np.asarray(effects, dtype=complex)
    return np.einsum("kij,ji->k", effects, rho, optimize=True).real


def cfim(prob_fn, lam, h: float = 1e-5, drop_tol: float = 1e-12) -> np.ndarray:
    """Classical Fisher information of an outcome distribution.

    ``prob_fn`` maps a parameter vector to a finite outcome distribution.
    Derivatives are central finite differences with step ``h``; outcomes
    with probability below ``drop_tol`` are dropped from the sum (their
    contribution vanishes for smooth models and keeps 0/0 out).
    """
    lam = np.asarray(lam, dtype=float)
    p0 = np.asarray(prob_fn(lam), dtype=float)
    if np.any(p0 < -1e-10):
        raise InvalidPOVM(f"negative outcome probability {p0.min():.3e}")
    dps = []
    for a in range(lam.size):
        lp = lam.copy()
        lp[a] += h
        lm = lam.copy()
        lm[a] -= h
        dps.append((np.asarray(prob_fn(lp), float) - np.asarray(prob_fn(lm), float)) / (2.0 * h))
    dp = np.stack(dps)
    keep = p0 > drop_tol
    f = (dp[:, keep] / p0[keep]) @ dp[:, keep].T
    return 0.5 * (f + f.T)


def degenerate_delta(d: int, multiplicities=()) -> int:
    """Positive-pair count for full tomography with a degenerate spectrum.

    ``d(d-1)/2`` minus one pair per identical-eigenvalue pairing:
    ``sum eta_i (eta_i - 1) / 2`` over the degeneracy multiplicities.
    An empty ``multiplicities`` means a nondegenerate spectrum.
    """
    d = int(d)
    mult = [int(m) for m in multiplicities]
    if any(m < 1 for m in mult):
        raise DomainError("multiplicities must be positive")
    if mult and sum(mult) != d:
        raise DomainError(f"multiplicities {mult} do not sum to d={d}")
    return d * (d - 1) // 2 - sum(m * (m - 1) // 2 for m in mult)


def full_tomography_compat_bound(d: int, multiplicities=()) -> int:
    """Compatible-parameter bound ``d^2 - 1 - delta`` for full tomography."""
    return int(d) * int(d) - 1 - degenerate_delta(d, multiplicities)
