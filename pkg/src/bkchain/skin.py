"""Spatial eigenstate profiles and skin-effect diagnostics.

A profile is the normalized squared modulus of an eigenvector over the flat
basis (occupation probability).  Edge weight sums the profile over the first
and last ceil(frac*N) unit cells; `nhse_fraction` reports how many eigenstates
clear an edge-weight threshold, which distinguishes the skin-effect regime
(all states pile up at the boundaries) from the delocalized one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import cell_index
from .spectral import Spectrum

__all__ = [
    "SpatialProfile",
    "spatial_profile",
    "edge_weight",
    "nhse_fraction",
    "mean_position",
    "profile_matrix",
]


@dataclass(frozen=True)
class SpatialProfile:
    """Occupation probabilities over the flat basis; sums to one."""

    prob: np.ndarray
    n_cells: int

    def __post_init__(self):
        if np.any(self.prob < 0):
            raise ValueError("profile entries must be non-negative")
        if abs(self.prob.sum() - 1.0) > 1e-12:
            raise ValueError(f"profile must sum to 1, got {self.prob.sum()!r}")


def spatial_profile(v: np.ndarray, n_cells: int) -> SpatialProfile:
    """Normalized |v|^2 over the flat basis."""
    v = np.asarray(v)
    norm2 = float(np.vdot(v, v).real)
    if norm2 == 0 or not math.isfinite(norm2):
        raise ValueError("cannot build a profile from a zero or non-finite vector")
    prob = (np.abs(v) ** 2) / norm2
    prob = prob / prob.sum()  # repair last-ulp drift
    return SpatialProfile(prob=prob, n_cells=n_cells)


def edge_weight(p: SpatialProfile, frac: float) -> float:
    """Profile mass in the first and last ceil(frac*N) cells."""
    if not 0 < frac <= 0.5:
        raise ValueError(f"frac must be in (0, 0.5], got {frac}")
    n = p.n_cells
    ncells = math.ceil(frac * n)
    cells = cell_index(len(p.prob), n)
    mask = (cells < ncells) | (cells >= n - ncells)
    return float(p.prob[mask].sum())


def nhse_fraction(s: Spectrum, frac: float, threshold: float, n_cells: int) -> float:
    """Fraction of eigenstates with edge weight above the threshold."""
    if s.eigenvectors is None:
        raise ValueError("nhse_fraction needs a spectrum with eigenvectors")
    weights = [edge_weight(spatial_profile(s.eigenvectors[:, m], n_cells), frac)
               for m in range(s.eigenvectors.shape[1])]
    return float(np.mean([w > threshold for w in weights]))


def mean_position(p: SpatialProfile) -> float:
    """Profile-weighted mean cell index."""
    cells = cell_index(len(p.prob), p.n_cells)
    return float((p.prob * cells).sum())


def profile_matrix(s: Spectrum, n_cells: int) -> np.ndarray:
    """Stacked profiles, row = eigenstate (in eigenvalue sort order), column = flat index."""
    if s.eigenvectors is None:
        raise ValueError("profile_matrix needs a spectrum with eigenvectors")
    return np.stack([
        spatial_profile(s.eigenvectors[:, m], n_cells).prob
        for m in range(s.eigenvectors.shape[1])
    ])
