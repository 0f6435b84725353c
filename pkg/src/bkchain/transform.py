"""Exact diagonal similarity transformations of the excitation matrices.

The non-reciprocity of the excitation matrices can be gauged away by diagonal
rescalings of the quadrature basis (imaginary gauge transformations).  For the
single-band chain a single ratio r = (Delta0+J0)/(Delta0-J0) does the job; for
the two-sublattice chain the intracell ratio r1 and intercell ratio r2 combine
into a mapping onto an SSH chain with renormalized couplings

    dtilde1 = sqrt(Delta1^2 - J1^2),   dtilde2 = sqrt(Delta2^2 - J2^2).

Diagonal entries grow/decay like r^(j/2), which overflows double precision
near N ~ 100 for large r, so scales are stored as (log-modulus, phase) and all
products are taken entrywise in log space.  Transforms are exact entrywise
(each transformed entry is a single product), which keeps residual checks at
machine precision even when the condition number of the diagonal is 1e60+.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .model import (
    BKCParams,
    BoundaryCondition,
    ExcitationMatrix,
    ModBKCParams,
    SiteFields,
    flat_index_bkc,
    flat_index_modbkc,
)

__all__ = [
    "SingularTransformError",
    "SimilarityMatrix",
    "EffectiveSSHParams",
    "hatano_nelson_A",
    "hatano_nelson_target",
    "a1_prime",
    "a2_prime",
    "a_combined",
    "effective_ssh_params",
    "effective_ssh_matrix",
    "ssh_lift_target",
    "transform_residual",
]

_SINGULAR_TOL = 1e-12


class SingularTransformError(ValueError):
    """The requested diagonal rescaling does not exist (Delta = J somewhere)."""


@dataclass(frozen=True)
class SimilarityMatrix:
    """Diagonal similarity transform stored as exp(log_scale) * phase."""

    log_scale: np.ndarray      # real log-moduli of the diagonal
    phase: np.ndarray          # unit-modulus complex phases
    r_values: dict

    def __post_init__(self):
        if self.log_scale.shape != self.phase.shape:
            raise ValueError("log_scale and phase must have equal shapes")
        if not np.all(np.isfinite(self.log_scale)):
            raise SingularTransformError("similarity diagonal has zero or infinite entries")

    @property
    def dim(self) -> int:
        return len(self.log_scale)

    @property
    def scale(self) -> np.ndarray:
        """Explicit diagonal; may overflow for extreme condition numbers."""
        return np.exp(self.log_scale) * self.phase

    @property
    def log10_condition(self) -> float:
        return float((self.log_scale.max() - self.log_scale.min()) / np.log(10.0))

    @property
    def condition_number(self) -> float:
        return float(np.exp(self.log_scale.max() - self.log_scale.min()))

    def conjugate(self, M: np.ndarray) -> np.ndarray:
        """A^{-1} M A, computed entrywise only on the nonzero pattern of M."""
        rows, cols = np.nonzero(M)
        out = np.zeros_like(M, dtype=complex)
        ratio = np.exp(self.log_scale[cols] - self.log_scale[rows]) \
            * self.phase[cols] / self.phase[rows]
        out[rows, cols] = M[rows, cols] * ratio
        return out

    def lift(self, vectors: np.ndarray) -> np.ndarray:
        """Map eigenvectors of A^{-1} M A to unit-norm eigenvectors of M.

        Columns are vectors.  Normalization is done in log space so the
        result is finite even when the explicit diagonal would overflow.
        """
        v = np.asarray(vectors, dtype=complex)
        logmag = self.log_scale[:, None] + np.log(np.abs(v) + 1e-300)
        logmag = logmag - logmag.max(axis=0, keepdims=True)
        out = np.exp(logmag) * self.phase[:, None] * np.where(v == 0, 0, v / np.abs(np.where(v == 0, 1, v)))
        return out / np.linalg.norm(out, axis=0, keepdims=True)


def _as_log_phase(values: np.ndarray):
    values = np.asarray(values, dtype=complex)
    mag = np.abs(values)
    if np.any(mag == 0) or not np.all(np.isfinite(mag)):
        raise SingularTransformError("similarity diagonal has zero or non-finite entries")
    return np.log(mag), values / mag


def _ratio(delta: float, J: float, what: str) -> complex:
    if abs(delta - J) < _SINGULAR_TOL:
        raise SingularTransformError(
            f"{what}: |Delta - J| = {abs(delta - J):.2e} < {_SINGULAR_TOL}; transform is singular")
    r = complex(delta + J) / complex(delta - J)
    # real division can leave a signed-zero imaginary part, which would flip
    # the principal branch of log/sqrt for negative r
    if r.imag == 0:
        r = complex(r.real, 0.0)
    return r


def hatano_nelson_A(p: BKCParams) -> SimilarityMatrix:
    """Diagonal gauge for the single-band chain, r = (Delta0+J0)/(Delta0-J0).

    Scales are r^(-j/2) on x components and r^(+j/2) on p components; with
    this choice A^{-1} M A is (anti-)Hermitian, see `hatano_nelson_target`.
    """
    r = _ratio(p.Delta0, p.J0, "hatano_nelson_A")
    half_log_r = 0.5 * np.log(r)  # principal branch for negative/complex r
    diag = np.zeros(2 * p.N, dtype=complex)
    for j in range(p.N):
        diag[flat_index_bkc(j, 0)] = np.exp(-j * half_log_r)
        diag[flat_index_bkc(j, 1)] = np.exp(j * half_log_r)
    log_scale, phase = _as_log_phase(diag)
    return SimilarityMatrix(log_scale=log_scale, phase=phase, r_values={"r": r})


def hatano_nelson_target(p: BKCParams, bc: BoundaryCondition = BoundaryCondition.OBC) -> np.ndarray:
    """Image of the omega=0 single-band chain under `hatano_nelson_A`.

    The transformed matrix is c * sigma_z (x) (S + S^T) with
    c = -sqrt(J0^2 - Delta0^2) (principal root) for |Delta0| <= |J0| and
    c = -sign(Delta0) sqrt(J0^2 - Delta0^2) otherwise: Hermitian for
    J0 > |Delta0| (purely real spectrum) and anti-Hermitian for
    |Delta0| > |J0| (purely imaginary spectrum).
    """
    c = -np.sqrt(complex(p.J0 ** 2 - p.Delta0 ** 2))
    if abs(p.Delta0) > abs(p.J0) and p.Delta0 < 0:
        c = -c
    n = p.N
    T = np.zeros((2 * n, 2 * n), dtype=complex)
    bonds = [(j, j + 1) for j in range(n - 1)]
    if bc is BoundaryCondition.PBC:
        bonds.append((n - 1, 0))
    for a, b in bonds:
        T[flat_index_bkc(a, 0), flat_index_bkc(b, 0)] = c
        T[flat_index_bkc(b, 0), flat_index_bkc(a, 0)] = c
        T[flat_index_bkc(a, 1), flat_index_bkc(b, 1)] = -c
        T[flat_index_bkc(b, 1), flat_index_bkc(a, 1)] = -c
    return T


def _fields(p: Union[ModBKCParams, SiteFields]) -> SiteFields:
    return SiteFields.uniform(p) if isinstance(p, ModBKCParams) else p


def _log_r_arrays(f: SiteFields):
    r1 = np.empty(f.N, dtype=complex)
    r2 = np.empty(f.N, dtype=complex)
    for j in range(f.N):
        r1[j] = _ratio(f.Delta1[j], f.J1[j], f"intracell bond at cell {j}")
        r2[j] = _ratio(f.Delta2[j], f.J2[j], f"intercell bond at cell {j}")
    return np.log(r1), np.log(r2), r1, r2


def _similarity_from_products(f: SiteFields, use_r1: bool, use_r2: bool) -> SimilarityMatrix:
    """Product-form diagonal; uniform fields collapse to powers of r1, r2.

    Channel exponents (uniform limit, cell j):
        A x:  r1^(+j/2)  r2^(-j/2)
        A p:  r1^(-j/2)  r2^(+j/2)
        B x:  r1^(-(j+1)/2)  r2^(+j/2)
        B p:  r1^(+(j+1)/2)  r2^(-j/2)
    """
    log_r1, log_r2, r1, r2 = _log_r_arrays(f)
    if not use_r1:
        log_r1 = np.zeros_like(log_r1)
    if not use_r2:
        log_r2 = np.zeros_like(log_r2)
    c1 = np.concatenate([[0.0], np.cumsum(log_r1)])  # c1[j] = sum_{l<j} log r1_l
    c2 = np.concatenate([[0.0], np.cumsum(log_r2)])
    diag_log = np.zeros(4 * f.N, dtype=complex)
    ix = flat_index_modbkc
    for j in range(f.N):
        diag_log[ix(j, 0, 0)] = 0.5 * (c1[j] - c2[j])
        diag_log[ix(j, 0, 1)] = 0.5 * (c2[j] - c1[j])
        diag_log[ix(j, 1, 0)] = 0.5 * (c2[j] - c1[j + 1])
        diag_log[ix(j, 1, 1)] = 0.5 * (c1[j + 1] - c2[j])
    log_scale = diag_log.real
    phase = np.exp(1j * diag_log.imag)
    r_values = {}
    if use_r1:
        r_values["r1"] = r1 if isinstance(f, SiteFields) and np.ptp(r1.real) + np.ptp(r1.imag) > 0 else r1[0]
    if use_r2:
        r_values["r2"] = r2 if isinstance(f, SiteFields) and np.ptp(r2.real) + np.ptp(r2.imag) > 0 else r2[0]
    return SimilarityMatrix(log_scale=log_scale, phase=phase, r_values=r_values)


def a1_prime(p: Union[ModBKCParams, SiteFields]) -> SimilarityMatrix:
    """Intracell gauge (ratio r1 only); identity when J1 = 0."""
    return _similarity_from_products(_fields(p), use_r1=True, use_r2=False)


def a2_prime(p: Union[ModBKCParams, SiteFields]) -> SimilarityMatrix:
    """Intercell gauge (ratio r2 only); identity when J2 = 0."""
    return _similarity_from_products(_fields(p), use_r1=False, use_r2=True)


def a_combined(p: Union[ModBKCParams, SiteFields]) -> SimilarityMatrix:
    """Product of the intracell and intercell gauges (elementwise diagonal)."""
    return _similarity_from_products(_fields(p), use_r1=True, use_r2=True)


@dataclass(frozen=True)
class EffectiveSSHParams:
    """Renormalized SSH couplings produced by the similarity mapping."""

    dtilde1: complex
    dtilde2: complex


def effective_ssh_params(p: Union[ModBKCParams, SiteFields]) -> EffectiveSSHParams:
    """Principal-branch roots dtilde_i = sqrt(Delta_i^2 - J_i^2).

    Purely real when Delta > |J|, purely imaginary when Delta < |J|.
    Site-resolved fields use the per-cell leading values; use
    `effective_ssh_matrix` for the full disordered couplings.
    """
    if isinstance(p, SiteFields):
        d1 = np.sqrt(complex(p.Delta1[0] ** 2 - p.J1[0] ** 2))
        d2 = np.sqrt(complex(p.Delta2[0] ** 2 - p.J2[0] ** 2))
    else:
        d1 = np.sqrt(complex(p.Delta1 ** 2 - p.J1 ** 2))
        d2 = np.sqrt(complex(p.Delta2 ** 2 - p.J2 ** 2))
    return EffectiveSSHParams(dtilde1=d1, dtilde2=d2)


def effective_ssh_matrix(p: Union[ModBKCParams, SiteFields],
                         bc: BoundaryCondition = BoundaryCondition.OBC) -> np.ndarray:
    """2N-dimensional SSH-form matrix with couplings dtilde1[j], dtilde2[j].

    The omega=0 excitation matrix is isospectral to i sigma_x (x) (this
    matrix): its 4N eigenvalues are +-i E_m over the 2N eigenvalues E_m here.
    The identity holds for all parameters (including Delta = J, where the
    gauge itself is singular) because characteristic polynomials depend
    polynomially on the couplings.
    """
    f = _fields(p)
    n = f.N
    v = np.sqrt((f.Delta1 ** 2 - f.J1 ** 2).astype(complex))
    w = np.sqrt((f.Delta2 ** 2 - f.J2 ** 2).astype(complex))
    H = np.zeros((2 * n, 2 * n), dtype=complex)
    for j in range(n):
        H[2 * j, 2 * j + 1] = v[j]
        H[2 * j + 1, 2 * j] = v[j]
    bonds = list(range(n - 1)) + ([n - 1] if bc is BoundaryCondition.PBC else [])
    for a in bonds:
        b = (a + 1) % n
        H[2 * a + 1, 2 * b] = w[a]
        H[2 * b, 2 * a + 1] = w[a]
    return H


def ssh_lift_target(p: Union[ModBKCParams, SiteFields],
                    bc: BoundaryCondition = BoundaryCondition.OBC) -> np.ndarray:
    """4N target matrix i sigma_x (x) effective_ssh_matrix in the flat basis."""
    H = effective_ssh_matrix(p, bc)
    n = H.shape[0] // 2
    T = np.zeros((4 * n, 4 * n), dtype=complex)
    ix = flat_index_modbkc
    for a in range(2 * n):
        for b in range(2 * n):
            if H[a, b] != 0:
                ja, Sa = divmod(a, 2)
                jb, Sb = divmod(b, 2)
                # sigma_x flips the quadrature bit
                T[ix(ja, Sa, 0), ix(jb, Sb, 1)] += 1j * H[a, b]
                T[ix(ja, Sa, 1), ix(jb, Sb, 0)] += 1j * H[a, b]
    return T


def transform_residual(M: Union[ExcitationMatrix, np.ndarray],
                       A: SimilarityMatrix,
                       target: np.ndarray) -> float:
    """max-norm residual of A^{-1} M A against a target, relative to max|M|."""
    Mm = M.M if isinstance(M, ExcitationMatrix) else np.asarray(M)
    if Mm.shape[0] != A.dim or Mm.shape != target.shape:
        raise ValueError("dimension mismatch between matrix, similarity and target")
    scale = np.abs(Mm).max()
    if scale == 0:
        return float(np.abs(target).max())
    # conjugate() only touches the nonzero pattern of M; entries where the
    # target is nonzero but M is zero must still be counted.
    diff = A.conjugate(Mm) - target
    return float(np.abs(diff).max() / scale)
