"""Seeded random-state generation and sweep experiments.

The sweep draws random density matrices (flat simplex spectrum + Haar
eigenvectors), runs the full-tomography estimation pipeline in mixture
coordinates and records, per sample, the purity, the AI measure, the
log-spectral spread and the residual against ``tanh(spread / 2)``.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import estimation, kernels, linalg, serialize
from .errors import DomainError, RankDeficient

log = logging.getLogger(__name__)

SWEEP_CSV_HEADER = ["d", "seed", "purity", "ai", "beta_delta_m", "residual"]


@dataclass(frozen=True)
class SweepRecord:
    """One random-state sample of a sweep."""
    d: int
    seed: int
    purity: float
    ai: float
    beta_delta_m: float
    residual: float

    def row(self) -> tuple:
        return (self.d, self.seed, self.purity, self.ai,
                self.beta_delta_m, self.residual)

    def to_json_dict(self) -> dict:
        return {"d": self.d, "seed": self.seed, "purity": self.purity,
                "ai": self.ai, "beta_delta_m": self.beta_delta_m,
                "residual": self.residual}


def sample_simplex(d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the probability simplex via normalized exponentials."""
    if d < 2:
        raise DomainError(f"simplex sampling needs d >= 2, got {d}")
    e = rng.exponential(1.0, size=d)
    return e / e.sum()


def sample_haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary: QR of a complex Ginibre matrix, phases fixed.

    The R-diagonal phase correction makes the QR factorization unique and
    the resulting Q exactly Haar distributed.
    """
    if d < 2:
        raise DomainError(f"Haar sampling needs d >= 2, got {d}")
    z = (rng.standard_normal((d, d)) + 1.0j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def _sample_spectrum(d: int, rng: np.random.Generator,
                     min_gap: float = 1e-10) -> tuple[np.ndarray, int]:
    """Simplex draw resampled until all spectral gaps exceed ``min_gap``."""
    resamples = 0
    while True:
        x = sample_simplex(d, rng)
        s = np.sort(x)
        if float(np.diff(s).min()) > min_gap:
            return x, resamples
        resamples += 1


def random_state(d: int, rng: np.random.Generator) -> np.ndarray:
    """Random density matrix ``U diag(x) U†``; full rank almost surely."""
    x, _ = _sample_spectrum(d, rng)
    u = sample_haar_unitary(d, rng)
    return linalg.hermitize((u * x) @ u.conj().T)


def _full_tomography_ai(x: np.ndarray, u: np.ndarray,
                        gens_over_d: np.ndarray) -> tuple[float, np.ndarray]:
    """AI measure of the mixture-coordinate model of ``U diag(x) U†``.

    The eigendecomposition is the draw itself, so the pipeline reduces to
    rotating the constant derivatives and assembling Q and U.
    """
    dt = np.ascontiguousarray(u.conj().T @ gens_over_d @ u)
    q, umat = kernels.assemble_qu(dt, x, 0.0)
    spectrum = estimation.incompat_spectrum(q, umat)
    return float(spectrum[0]), spectrum


def sweep(d: int, n_samples: int, seed: int,
          rank_tol: float = linalg.DEFAULT_RANK_TOL,
          min_gap: float = 1e-10,
          n_threads: int | None = None) -> list[SweepRecord]:
    """Random full-tomography sweep; deterministic for fixed ``(d, n, seed)``.

    Per-sample RNG streams are derived from the master seed, so the result
    is independent of the thread count and ordered by sample index.
    Samples whose spectrum falls at or below ``rank_tol`` are skipped with
    a logged count; near-degenerate spectra (gap below ``min_gap``) are
    resampled inside their own stream.
    """
    if d < 2:
        raise DomainError(f"sweep needs d >= 2, got {d}")
    if n_samples < 1:
        raise DomainError(f"sweep needs at least one sample, got {n_samples}")
    gens_over_d = linalg.gellmann_basis(d).matrices / d
    master = np.random.default_rng(int(seed))
    sample_seeds = master.integers(0, 2 ** 63 - 1, size=n_samples, dtype=np.int64)

    def one(sample_seed: int) -> SweepRecord | None:
        rng = np.random.default_rng(int(sample_seed))
        x, resamples = _sample_spectrum(d, rng, min_gap)
        if resamples:
            log.debug("resampled %d near-degenerate spectra", resamples)
        u = sample_haar_unitary(d, rng)
        if float(x.min()) <= rank_tol:
            return None
        ai, _ = _full_tomography_ai(x, u, gens_over_d)
        bdm = float(np.log(x.max() / x.min()))
        return SweepRecord(
            d=d,
            seed=int(sample_seed),
            purity=float(np.sum(x * x)),
            ai=ai,
            beta_delta_m=bdm,
            residual=abs(ai - math.tanh(0.5 * bdm)),
        )

    if n_threads is not None and n_threads > 1:
        with ThreadPoolExecutor(max_workers=int(n_threads)) as pool:
            results = list(pool.map(one, sample_seeds))
    else:
        results = [one(s) for s in sample_seeds]

    skipped = sum(1 for r in results if r is None)
    if skipped:
        log.info("skipped %d rank-deficient samples", skipped)
    return [r for r in results if r is not None]


def records_to_csv(records: list[SweepRecord]) -> str:
    """CSV document with header ``d,seed,purity,ai,beta_delta_m,residual``."""
    return serialize.csv_lines(SWEEP_CSV_HEADER, (r.row() for r in records))


def records_to_jsonl(records: list[SweepRecord]) -> str:
    """JSON-lines variant of the sweep output."""
    return "\n".join(serialize.dumps(r.to_json_dict()) for r in records) + "\n"


def gibbs_curve(deltas, beta_grid) -> list[tuple[float, float]]:
    """(purity, AI) along a fixed Hamiltonian spectrum as beta varies.

    For each ``beta`` the state spectrum is ``exp(-beta delta_i)``
    normalized; the AI of full tomography is ``tanh(beta * spread / 2)``
    with ``spread = max(delta) - min(delta)``.
    """
    deltas = np.asarray(deltas, dtype=float)
    if deltas.size < 2:
        raise DomainError("need at least two Hamiltonian eigenvalues")
    if float(np.abs(deltas).max()) > 1.0:
        raise DomainError("Hamiltonian eigenvalues must satisfy |delta_i| <= 1")
    span = float(deltas.max() - deltas.min())
    out = []
    for beta in np.asarray(beta_grid, dtype=float):
        if beta < 0:
            raise DomainError(f"beta must be >= 0, got {beta}")
        w = np.exp(-beta * (deltas - deltas.min()))
        x = w / w.sum()
        out.append((float(np.sum(x * x)), float(np.tanh(0.5 * beta * span))))
    return out


def conjectured_i_spectrum(x: np.ndarray) -> np.ndarray:
    """Predicted full-tomography spectrum of ``i Q^{-1} U`` from eigenvalues.

    Pairs ``±(x_i - x_j)/(x_i + x_j)`` over all eigenvalue pairs (equal to
    ``±tanh((log x_i - log x_j)/2)``), padded with ``d - 1`` zeros to the
    ``d^2 - 1`` parameters, in descending order.
    """
    x = np.asarray(x, dtype=float)
    d = x.size
    vals = []
    for i in range(d):
        for j in range(i + 1, d):
            r = abs(x[i] - x[j]) / (x[i] + x[j])
            vals.extend((r, -r))
    vals.extend([0.0] * (d - 1))
    return np.sort(np.array(vals))[::-1].copy()


def i_spectrum_conjecture_check(rho, rank_tol: float = linalg.DEFAULT_RANK_TOL) -> float:
    """Max deviation of the pipeline spectrum from the eigenvalue-pair prediction."""
    rho = linalg.validate_density(rho)
    d = rho.shape[0]
    x, u = np.linalg.eigh(rho)
    if float(x[0]) <= rank_tol:
        raise RankDeficient(f"eigenvalue {x[0]:.3e} <= rank_tol {rank_tol:.3e}")
    gens_over_d = linalg.gellmann_basis(d).matrices / d
    _, spectrum = _full_tomography_ai(x, u, gens_over_d)
    predicted = conjectured_i_spectrum(x)
    return float(np.abs(np.sort(spectrum) - np.sort(predicted)).max())
