"""Eigendecomposition of excitation matrices and spectrum-level comparisons.

Two routes are provided:

* `eigendecompose` wraps the dense general eigensolver.  It is accurate
  whenever the matrix is not exponentially non-normal (any omega != 0, or
  periodic boundaries).
* `spectrum_via_similarity` / `modbkc_spectrum_zero_omega` diagonalize the
  gauge-transformed image instead and map back.  Under open boundaries at
  omega = 0 the matrices are similar to (anti-)Hermitian ones with condition
  numbers of the diagonal gauge as large as 1e60, and the direct eigensolver
  returns pseudospectra rather than spectra; the transformed route is exact
  because the conjugation is entrywise.

At omega = 0 every eigenvalue is exactly twofold degenerate: the transformed
matrix is i sigma_x (x) H_ssh, two decoupled copies of an SSH chain.  The
lifted eigenbasis returned here is the deterministic product basis
(sigma_x eigenvector) (x) (SSH eigenvector).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .model import (
    BKCParams,
    BoundaryCondition,
    ExcitationMatrix,
    ModBKCParams,
    SiteFields,
    flat_index_modbkc,
)
from .transform import SimilarityMatrix, a_combined, effective_ssh_matrix

__all__ = [
    "SolverError",
    "Spectrum",
    "eigendecompose",
    "spectrum_via_similarity",
    "modbkc_spectrum_zero_omega",
    "bkc_pbc_dispersion",
    "spectrum_distance",
    "zero_gap",
]

RESIDUAL_FACTOR = 1e-8


class SolverError(RuntimeError):
    """Eigensolver failure, carrying a description of the offending matrix."""


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with column-aligned unit-norm right eigenvectors.

    Sorted lexicographically by (real part, imaginary part).  ``eigenvectors``
    is None for routes that can produce eigenvalues only (singular gauge).
    """

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray]
    source: str = field(default="", compare=False)

    def __len__(self) -> int:
        return len(self.eigenvalues)


def _sorted(eigenvalues, eigenvectors, source):
    order = np.lexsort((eigenvalues.imag, eigenvalues.real))
    vals = eigenvalues[order]
    vecs = None
    if eigenvectors is not None:
        vecs = eigenvectors[:, order]
        vecs = vecs / np.linalg.norm(vecs, axis=0, keepdims=True)
    return Spectrum(eigenvalues=vals, eigenvectors=vecs, source=source)


def _check_residual(M, spec: Spectrum):
    if spec.eigenvectors is None:
        return
    res = np.linalg.norm(M @ spec.eigenvectors - spec.eigenvectors * spec.eigenvalues[None, :], axis=0)
    bound = RESIDUAL_FACTOR * np.abs(M).max() * M.shape[0]
    worst = res.max()
    if worst > bound:
        raise SolverError(f"eigenpair residual {worst:.3e} exceeds bound {bound:.3e}")


def eigendecompose(M: ExcitationMatrix) -> Spectrum:
    """Full spectrum with right eigenvectors from the dense solver."""
    if not np.all(np.isfinite(M.M)):
        raise SolverError(f"matrix contains non-finite entries ({M.source}, bc={M.bc})")
    try:
        vals, vecs = np.linalg.eig(M.M)
    except np.linalg.LinAlgError as err:
        raise SolverError(
            f"eigensolver failed for {M.source} matrix, dim={M.dim}, bc={M.bc}: {err}") from err
    spec = _sorted(vals, vecs, source=f"eig[{M.source},{M.bc.value},n={M.n_cells}]")
    _check_residual(M.M, spec)
    return spec


def spectrum_via_similarity(M: ExcitationMatrix, A: SimilarityMatrix,
                            hermitian_tol: float = 1e-10) -> Spectrum:
    """Spectrum of M obtained from the gauge image K = A^{-1} M A.

    When K is Hermitian (or anti-Hermitian) within ``hermitian_tol`` relative
    to max|K| the Hermitian solver is used, which pins the spectrum to the
    real (imaginary) axis exactly.  Eigenvectors are lifted back through A
    with log-space normalization.
    """
    K = A.conjugate(M.M)
    scale = np.abs(K).max()
    herm = np.abs(K - K.conj().T).max()
    anti = np.abs(K + K.conj().T).max()
    if herm <= hermitian_tol * scale:
        vals, vecs = np.linalg.eigh((K + K.conj().T) / 2)
        vals = vals.astype(complex)
    elif anti <= hermitian_tol * scale:
        Kh = 1j * K
        vals, vecs = np.linalg.eigh((Kh + Kh.conj().T) / 2)
        vals = -1j * vals
    else:
        vals, vecs = np.linalg.eig(K)
    lifted = A.lift(vecs)
    return _sorted(vals, lifted, source=f"similarity[{M.source},{M.bc.value},n={M.n_cells}]")


def modbkc_spectrum_zero_omega(p: Union[ModBKCParams, SiteFields],
                               bc: BoundaryCondition = BoundaryCondition.OBC,
                               with_vectors: bool = True) -> Spectrum:
    """Exact omega=0 spectrum of the two-sublattice chain via the SSH reduction.

    Eigenvalues are +-i E_m over the reduced SSH spectrum {E_m}; eigenvectors
    are the product basis lifted through the combined gauge.  With
    ``with_vectors=False`` (or at singular gauge points Delta = J) only the
    eigenvalues are returned; they remain exact there by continuity of the
    characteristic polynomial.
    """
    if isinstance(p, ModBKCParams):
        if p.omega != 0:
            raise ValueError("modbkc_spectrum_zero_omega requires omega = 0")
        n = p.N
    else:
        if np.any(p.omega_A != 0) or np.any(p.omega_B != 0):
            raise ValueError("modbkc_spectrum_zero_omega requires all onsite omega = 0")
        n = p.N
    H = effective_ssh_matrix(p, bc)
    if np.abs(H.imag).max() == 0:
        E, U = np.linalg.eigh(H.real)
        E = E.astype(complex)
        U = U.astype(complex)
    else:
        E, U = np.linalg.eig(H)
    vals = np.concatenate([1j * E, -1j * E])
    if not with_vectors:
        return _sorted(vals, None, source=f"reduced[modbkc,{bc.value},n={n}]")
    try:
        A = a_combined(p)
    except Exception:
        return _sorted(vals, None, source=f"reduced[modbkc,{bc.value},n={n}]")
    # lift (sigma_pm (x) u_m): quadrature components (1, +-1)/sqrt(2) * u
    vecs = np.zeros((4 * n, 4 * n), dtype=complex)
    ix = flat_index_modbkc
    sub = np.arange(2 * n)
    rows_x = np.array([ix(a // 2, a % 2, 0) for a in sub])
    rows_p = np.array([ix(a // 2, a % 2, 1) for a in sub])
    for m in range(2 * n):
        u = U[:, m]
        plus = np.zeros(4 * n, dtype=complex)
        plus[rows_x] = u
        plus[rows_p] = u
        minus = np.zeros(4 * n, dtype=complex)
        minus[rows_x] = u
        minus[rows_p] = -u
        vecs[:, m] = plus          # eigenvalue +i E_m
        vecs[:, 2 * n + m] = minus  # eigenvalue -i E_m
    lifted = A.lift(vecs)
    return _sorted(vals, lifted, source=f"reduced[modbkc,{bc.value},n={n}]")


def bkc_pbc_dispersion(p: BKCParams, k: float):
    """Analytic periodic-chain branches 2 J0 sin(k) +- sqrt(omega^2 - 4 Delta0^2 cos(k)^2)."""
    root = cmath.sqrt(p.omega ** 2 - 4 * p.Delta0 ** 2 * np.cos(k) ** 2)
    base = 2 * p.J0 * np.sin(k)
    return base + root, base - root


def spectrum_distance(a: Spectrum, b: Spectrum) -> float:
    """Symmetric Hausdorff distance between two eigenvalue sets."""
    ea, eb = np.asarray(a.eigenvalues), np.asarray(b.eigenvalues)
    if len(ea) == 0 or len(eb) == 0:
        raise ValueError("spectrum_distance requires non-empty spectra")
    d = np.abs(ea[:, None] - eb[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def zero_gap(s: Spectrum) -> float:
    """Smallest eigenvalue modulus, min_m |E_m|."""
    if len(s) == 0:
        raise ValueError("zero_gap requires a non-empty spectrum")
    return float(np.abs(s.eigenvalues).min())
