from __future__ import annotations

import numpy as np


def random_hermitian(d: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (z + z.conj().T)


def random_density(d: int, seed: int) -> np.ndarray:
    """Full-rank random density matrix with a flat-simplex spectrum."""
    rng = np.random.default_rng(seed)
    e = rng.exponential(1.0, size=d)
    x = e / e.sum()
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    u = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    rho = (u * x) @ u.conj().T
    return 0.5 * (rho + rho.conj().T)


def random_traceless_hermitian(d: int, seed: int) -> np.ndarray:
    a = random_hermitian(d, seed)
    return a - (np.trace(a) / d) * np.eye(d)
