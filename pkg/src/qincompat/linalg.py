"""Dense complex-Hermitian linear algebra shared by all modules.

Conventions used throughout the package:

- density matrices are ``(d, d)`` complex arrays with unit trace;
- eigenvalues come back in ascending order (LAPACK convention);
- tolerances are absolute-plus-relative: a check at tolerance ``t`` compares
  against ``t * max(1, scale)`` where ``scale`` is a norm of the input.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidDimension, RankDeficient

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

DEFAULT_HERM_TOL = 1e-12
DEFAULT_RANK_TOL = 1e-10


def _scale(a: np.ndarray) -> float:
    return max(1.0, float(np.linalg.norm(a)))


def hermiticity_error(a: np.ndarray) -> float:
    """Largest absolute deviation of ``a`` from its conjugate transpose."""
    a = np.asarray(a)
    return float(np.abs(a - a.conj().T).max())


def hermitize(a: np.ndarray) -> np.ndarray:
    """Return the Hermitian part ``(a + a†)/2``."""
    return 0.5 * (a + a.conj().T)


def require_hermitian(a, tol: float = DEFAULT_HERM_TOL, name: str = "matrix") -> np.ndarray:
    """Validate a square Hermitian matrix and return it as complex ndarray."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"{name} must be square, got shape {a.shape}")
    if hermiticity_error(a) > tol * _scale(a):
        raise DomainError(f"{name} is not Hermitian within tolerance {tol}")
    return a


def validate_density(rho, herm_tol: float = DEFAULT_HERM_TOL,
                     trace_tol: float = 1e-10, psd_tol: float = 1e-10) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity of a density matrix."""
    rho = require_hermitian(rho, herm_tol, name="density matrix")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > trace_tol:
        raise DomainError(f"density matrix trace {tr} != 1")
    if float(np.linalg.eigvalsh(rho)[0]) < -psd_tol:
        raise DomainError("density matrix is not positive semidefinite")
    return rho


def hermitian_eig(a, herm_tol: float = DEFAULT_HERM_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and unitary ``v``
    such that ``a = v @ diag(w) @ v.conj().T``.  Inputs failing the
    Hermiticity tolerance are rejected with :class:`DomainError`.
    """
    a = require_hermitian(a, herm_tol)
    return np.linalg.eigh(a)


def lyapunov_sld(rho, drho, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Solve ``(L @ rho + rho @ L) / 2 = drho`` for Hermitian ``L``.

    ``rho`` must be a full-rank density matrix (every eigenvalue above
    ``rank_tol``) and ``drho`` a traceless Hermitian perturbation.  The
    solve runs in the eigenbasis of ``rho`` where the equation is diagonal:
    ``L_ij = 2 drho_ij / (x_i + x_j)``.

    Raises:
        RankDeficient: if any eigenvalue of ``rho`` is at or below ``rank_tol``.
        DomainError: if inputs violate the Hermitian/traceless contract.
    """
    rho = validate_density(rho)
    drho = require_hermitian(drho, name="drho")
    if abs(float(np.trace(drho).real)) > 1e-8 * _scale(drho):
        raise DomainError("drho must be traceless")
    x, v = np.linalg.eigh(rho)
    if float(x[0]) <= rank_tol:
        raise RankDeficient(
            f"density matrix eigenvalue {x[0]:.3e} <= rank_tol {rank_tol:.3e}")
    dt = v.conj().T @ drho @ v
    lt = 2.0 * dt / (x[:, None] + x[None, :])
    return hermitize(v @ lt @ v.conj().T)


@dataclass(frozen=True)
class GeneratorBasis:
    """Orthogonal traceless Hermitian generators of su(d).

    ``matrices`` is a ``(d*d - 1, d, d)`` complex stack normalized to
    ``Tr[S_i S_j] = 2 delta_ij``, ordered deterministically:

    1. symmetric off-diagonal pairs ``E_jk + E_kj`` for ``j < k`` in
       lexicographic order of ``(j, k)``;
    2. antisymmetric pairs ``-i E_jk + i E_kj`` in the same order;
    3. diagonal generators ``sqrt(2/(l(l+1))) diag(1, ..., 1, -l, 0, ...)``
       for ``l = 1 .. d-1``.

    For ``d = 2`` this is exactly ``(sigma_x, sigma_y, sigma_z)``.
    """
    dim: int
    matrices: np.ndarray

    def __len__(self) -> int:
        return self.matrices.shape[0]

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, i):
        return self.matrices[i]


def gellmann_basis(d: int) -> GeneratorBasis:
    """Generalized Gell-Mann basis of su(d); Pauli matrices for ``d = 2``."""
    if d < 2:
        raise InvalidDimension(f"generator basis needs d >= 2, got {d}")
    gens = []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = 1.0
            m[k, j] = 1.0
            gens.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1.0j
            m[k, j] = 1.0j
            gens.append(m)
    for l in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        m[:l, :l] = np.eye(l)
        m[l, l] = -l
        gens.append(np.sqrt(2.0 / (l * (l + 1))) * m)
    return GeneratorBasis(dim=d, matrices=np.stack(gens))


def purity(rho) -> float:
    """``Tr[rho^2]``; equals the squared Frobenius norm for Hermitian input."""
    rho = validate_density(rho)
    return float(np.sum(np.abs(rho) ** 2))
