"""Pure-numpy implementation of the hot estimation kernels.

Import-time fallback for :mod:`qincompat._kernels_c`; both expose the same
``assemble_qu`` contract and must stay numerically interchangeable.
"""
from __future__ import annotations

import numpy as np


def assemble_qu(dtilde: np.ndarray, x: np.ndarray,
                support_tol: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Fisher and curvature matrices from eigenbasis-rotated derivatives.

    Args:
        dtilde: ``(p, d, d)`` complex, ``dtilde[a] = V† (∂_a rho) V`` with
            ``V`` the eigenvector matrix of ``rho``.
        x: ``(d,)`` eigenvalues of ``rho`` in the same column order as ``V``.
        support_tol: eigenvalue pairs with ``x_i + x_j <= support_tol`` are
            dropped from the sums (kernel regularization for numerically
            rank-deficient states; ``0.0`` keeps every positive pair).

    Returns:
        ``(Q, U)`` with
        ``Q_ab = 2 sum_ij Re[g_a,ij conj(g_b,ij)] / (x_i + x_j)`` and
        ``U_ab = 2 sum_ij (x_i - x_j)/(x_i + x_j)^2 Im[g_a,ij conj(g_b,ij)]``.
    """
    dtilde = np.asarray(dtilde, dtype=complex)
    x = np.asarray(x, dtype=float)
    den = x[:, None] + x[None, :]
    keep = den > support_tol
    inv = np.zeros_like(den)
    np.divide(1.0, den, out=inv, where=keep)
    wu = (x[:, None] - x[None, :]) * inv * inv
    zq = np.einsum("aij,bij->ab", dtilde * inv, dtilde.conj(), optimize=True)
    zu = np.einsum("aij,bij->ab", dtilde * wu, dtilde.conj(), optimize=True)
    q = 2.0 * zq.real
    u = 2.0 * zu.imag
    return 0.5 * (q + q.T), 0.5 * (u - u.T)
