"""Winding numbers, zero-mode detection and phase-diagram scans.

The off-diagonal Bloch components of the mapped SSH chain,

    h_pm(k) = dtilde1 + dtilde2 cos(k) +- i dtilde2 sin(k) = dtilde1 + dtilde2 e^{+-ik},

trace circles of radius |dtilde2| centered at dtilde1, so the winding numbers
are w_pm = +-1 when |dtilde2| > |dtilde1| and 0 otherwise.  `winding_numeric`
evaluates the contour integral by phase unwrapping on a uniform k grid and
must agree with the closed form on every gapped point.

Zero modes: at omega = 0 the excitation spectrum consists of two exact copies
of the reduced SSH spectrum (+-i E_m each), so counting threshold crossings on
the full matrix double-counts the physical edge modes.  `edge_mode_count`
counts, per copy, eigenvalues of the reduced SSH matrix with |E| below
tolerance: 2 in the topological phase, 0 in the trivial one.  `zero_modes`
is the literal threshold count on whatever spectrum it is given.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .model import BoundaryCondition, ModBKCParams, SiteFields
from .skin import edge_weight, spatial_profile
from .spectral import Spectrum, modbkc_spectrum_zero_omega, zero_gap as _zero_gap
from .transform import EffectiveSSHParams, effective_ssh_matrix, effective_ssh_params

__all__ = [
    "WindingResult",
    "GapClosedError",
    "NonIntegerWindingError",
    "h_pm",
    "winding_numeric",
    "winding_analytic",
    "zero_modes",
    "edge_mode_count",
    "gap_closing_predicates",
    "AxisSpec",
    "PhasePoint",
    "PhaseDiagram",
    "phase_scan",
]

_WINDING_RESIDUE_TOL = 0.01
_GAP_TOL = 1e-10


class GapClosedError(ValueError):
    """|h(k)| dipped below threshold somewhere on the k grid."""


class NonIntegerWindingError(RuntimeError):
    """Unwrapped phase did not land near an integer multiple of 2 pi."""


@dataclass(frozen=True)
class WindingResult:
    w_plus: int
    w_minus: int


def h_pm(k: float, eff: EffectiveSSHParams):
    """Off-diagonal Bloch entries of the mapped SSH block at momentum k."""
    hp = eff.dtilde1 + eff.dtilde2 * np.cos(k) + 1j * eff.dtilde2 * np.sin(k)
    hm = eff.dtilde1 + eff.dtilde2 * np.cos(k) - 1j * eff.dtilde2 * np.sin(k)
    return hp, hm


def _winding_of_samples(h: np.ndarray) -> int:
    if np.abs(h).min() < _GAP_TOL:
        raise GapClosedError(f"min |h| = {np.abs(h).min():.3e} below {_GAP_TOL}; winding undefined")
    closed = np.concatenate([h, h[:1]])
    total = np.unwrap(np.angle(closed))
    w = (total[-1] - total[0]) / (2 * np.pi)
    nearest = round(w)
    if abs(w - nearest) >= _WINDING_RESIDUE_TOL:
        raise NonIntegerWindingError(f"winding residue |{w:.4f} - {nearest}| >= {_WINDING_RESIDUE_TOL}")
    return int(nearest)


def winding_numeric(eff: EffectiveSSHParams, grid: int = 1024) -> WindingResult:
    """Phase-unwrapped winding numbers of h_pm over k in [-pi, pi)."""
    if grid < 64:
        raise ValueError(f"grid must be >= 64, got {grid}")
    ks = -np.pi + 2 * np.pi * np.arange(grid) / grid
    hp, hm = h_pm(ks, eff)
    return WindingResult(w_plus=_winding_of_samples(hp), w_minus=_winding_of_samples(hm))


def winding_analytic(p: Union[ModBKCParams, EffectiveSSHParams]) -> WindingResult:
    """Closed form: (+1, -1) when |dtilde2| > |dtilde1|, else (0, 0)."""
    eff = p if isinstance(p, EffectiveSSHParams) else effective_ssh_params(p)
    a1, a2 = abs(eff.dtilde1), abs(eff.dtilde2)
    if math.isclose(a1, a2, rel_tol=1e-12, abs_tol=1e-15):
        raise GapClosedError(f"|dtilde1| = |dtilde2| = {a1:.6g}: phase boundary, winding undefined")
    if a2 > a1:
        return WindingResult(w_plus=1, w_minus=-1)
    return WindingResult(w_plus=0, w_minus=0)


def zero_modes(s: Spectrum, tol: float):
    """Indices and count of eigenvalues with |E| < tol (literal threshold)."""
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    idx = np.flatnonzero(np.abs(s.eigenvalues) < tol)
    return len(idx), idx.tolist()


def edge_mode_count(p: Union[ModBKCParams, SiteFields], tol: float = 1e-6,
                    bc: BoundaryCondition = BoundaryCondition.OBC) -> int:
    """Zero modes per quadrature copy at omega = 0 (reduced SSH spectrum).

    The full excitation spectrum is two exact copies of the reduced one, so
    this equals ``zero_modes(full spectrum)[0] / 2`` but stays exact under
    open boundaries where the direct eigensolver is unreliable.
    """
    H = effective_ssh_matrix(p, bc)
    if np.abs(H.imag).max() == 0:
        E = np.linalg.eigvalsh(H.real).astype(complex)
    else:
        E = np.linalg.eigvals(H)
    return int((np.abs(E) < tol).sum())


def gap_closing_predicates(p: ModBKCParams, rel_tol: float = 1e-9) -> dict:
    """Open/periodic gap-closing identities as booleans.

    obc_type1: dtilde1^2 =  dtilde2^2  (Delta1^2 - J1^2 =   Delta2^2 - J2^2)
    obc_type2: dtilde1^2 = -dtilde2^2  (Delta1^2 - J1^2 = -(Delta2^2 - J2^2))
    pbc: with one coupling switched off, J^2 = (Delta1 +- Delta2)^2 for the
    other; the mixed-J periodic closing has no closed form here.
    """
    scale = max(1.0, p.J1 ** 2, p.J2 ** 2, p.Delta1 ** 2, p.Delta2 ** 2)
    t1 = (p.Delta1 ** 2 - p.J1 ** 2) - (p.Delta2 ** 2 - p.J2 ** 2)
    t2 = (p.Delta1 ** 2 - p.J1 ** 2) + (p.Delta2 ** 2 - p.J2 ** 2)
    pbc = False
    for sign in (1.0, -1.0):
        target = (p.Delta1 + sign * p.Delta2) ** 2
        if p.J2 == 0 and abs(p.J1 ** 2 - target) <= rel_tol * scale:
            pbc = True
        if p.J1 == 0 and abs(p.J2 ** 2 - target) <= rel_tol * scale:
            pbc = True
    return {
        "obc_type1": abs(t1) <= rel_tol * scale,
        "obc_type2": abs(t2) <= rel_tol * scale,
        "pbc": pbc,
    }


@dataclass(frozen=True)
class AxisSpec:
    """One swept parameter: name in {J1, J2, Delta1, Delta2, omega}, inclusive range."""

    name: str
    start: float
    stop: float
    step: float

    def values(self) -> np.ndarray:
        if self.name not in ("J1", "J2", "Delta1", "Delta2", "omega"):
            raise ValueError(f"unknown sweep parameter {self.name!r}")
        if self.step <= 0:
            raise ValueError("axis step must be positive")
        if self.stop < self.start:
            raise ValueError("axis stop must be >= start")
        count = int(round((self.stop - self.start) / self.step)) + 1
        return self.start + self.step * np.arange(count)


@dataclass(frozen=True)
class PhasePoint:
    values: tuple
    zero_gap: float
    zero_modes: Optional[int]
    w_plus: Optional[int]
    w_minus: Optional[int]
    nhse_fraction: Optional[float]
    error: Optional[str] = None


@dataclass(frozen=True)
class PhaseDiagram:
    axes: tuple
    points: tuple

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(pt, name) for pt in self.points], dtype=object)


def _scan_point(p: ModBKCParams, values: tuple, tol: float, frac: float, threshold: float) -> PhasePoint:
    try:
        eff = effective_ssh_params(p)
        try:
            w = winding_analytic(eff)
            w_plus, w_minus = w.w_plus, w.w_minus
        except GapClosedError:
            w_plus = w_minus = None
        if p.omega == 0:
            spec = modbkc_spectrum_zero_omega(p, BoundaryCondition.OBC)
            count = edge_mode_count(p, tol=tol)
        else:
            from .model import build_modbkc_excitation_direct
            from .spectral import eigendecompose
            spec = eigendecompose(build_modbkc_excitation_direct(p, BoundaryCondition.OBC))
            count = zero_modes(spec, tol)[0]
        gap = _zero_gap(spec)
        if spec.eigenvectors is not None:
            ew = np.array([
                edge_weight(spatial_profile(spec.eigenvectors[:, m], n_cells=p.N), frac)
                for m in range(spec.eigenvectors.shape[1])
            ])
            nhse = float((ew > threshold).mean())
        else:
            nhse = None
        return PhasePoint(values=values, zero_gap=gap, zero_modes=count,
                          w_plus=w_plus, w_minus=w_minus, nhse_fraction=nhse)
    except Exception as err:  # record, do not abort the scan
        return PhasePoint(values=values, zero_gap=float("nan"), zero_modes=None,
                          w_plus=None, w_minus=None, nhse_fraction=None,
                          error=f"{type(err).__name__}: {err}")


def phase_scan(base: ModBKCParams, axes: Sequence[AxisSpec], tol: float = 1e-6,
               frac: float = 0.1, threshold: float = 0.9,
               threads: int = 1) -> PhaseDiagram:
    """Sweep 1-2 parameters; per-point records never abort on solver errors."""
    if not 1 <= len(axes) <= 2:
        raise ValueError("phase_scan takes one or two axes")
    grids = [ax.values() for ax in axes]
    total = int(np.prod([len(g) for g in grids]))
    if total > 10 ** 6:
        raise ValueError(f"grid has {total} points, above the 1e6 limit")
    combos = []
    if len(grids) == 1:
        combos = [(v,) for v in grids[0]]
    else:
        combos = [(u, v) for u in grids[0] for v in grids[1]]

    def make_params(vals):
        kw = dict(J1=base.J1, J2=base.J2, Delta1=base.Delta1, Delta2=base.Delta2,
                  omega=base.omega, N=base.N)
        for ax, v in zip(axes, vals):
            kw[ax.name] = float(v)
        return ModBKCParams(**kw)

    def work(vals):
        return _scan_point(make_params(vals), tuple(float(v) for v in vals), tol, frac, threshold)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            points = tuple(pool.map(work, combos))
    else:
        points = tuple(work(vals) for vals in combos)
    return PhaseDiagram(axes=tuple(axes), points=points)
