"""Seeded disorder ensembles and disorder-averaged observables.

Every parameter P in {J1, J2, Delta1, Delta2, omega} can be drawn per site
uniformly from [P(1-W_P), P(1+W_P)].  The onsite frequency is drawn
independently for the two sublattices (omega_A, omega_B).  Randomness comes
from a counter-based keyed hash (SplitMix64 finalizer): every entry is a pure
function of (seed, realization, parameter, site), so single entries are
reproducible in isolation, realizations can run in any order or in parallel,
and outputs are bit-identical across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .model import (
    BoundaryCondition,
    ModBKCParams,
    SiteFields,
    build_modbkc_quadratic,
    excitation_matrix,
)
from .skin import nhse_fraction, profile_matrix
from .spectral import (
    Spectrum,
    eigendecompose,
    modbkc_spectrum_zero_omega,
    zero_gap,
)
from .topology import edge_mode_count, zero_modes
from .transform import SimilarityMatrix, a_combined

__all__ = [
    "DisorderSpec",
    "sample_site_fields",
    "disordered_similarity",
    "EnsembleResult",
    "ensemble_observables",
    "OBSERVABLES",
]

_PARAM_IDS = {"J1": 1, "J2": 2, "Delta1": 3, "Delta2": 4, "omega_A": 5, "omega_B": 6}
_MASK64 = (1 << 64) - 1

OBSERVABLES = ("abs_spectrum", "zero_gap", "zero_modes", "nhse_fraction", "mean_profile")


@dataclass(frozen=True)
class DisorderSpec:
    """Disorder strengths W_P per parameter, RNG seed and realization count."""

    strengths: dict
    seed: int
    realizations: int = 20

    def __post_init__(self):
        allowed = {"J1", "J2", "Delta1", "Delta2", "omega"}
        for name, w in self.strengths.items():
            if name not in allowed:
                raise ValueError(f"unknown disorder parameter {name!r}; allowed: {sorted(allowed)}")
            if w < 0:
                raise ValueError(f"disorder strength W_{name} must be >= 0, got {w}")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")

    def strength(self, name: str) -> float:
        return float(self.strengths.get(name, 0.0))


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _keyed_uniform(seed: int, realization: int, param_id: int, index: int) -> float:
    """Uniform in [0, 1) with a 53-bit mantissa, keyed by the full coordinate."""
    h = seed & _MASK64
    for part in (realization, param_id, index):
        h = _splitmix64(h ^ (part & _MASK64))
    return (h >> 11) * 2.0 ** -53


def _draw(base: float, w: float, seed: int, realization: int, param: str, n: int) -> np.ndarray:
    pid = _PARAM_IDS[param]
    if w == 0.0:
        return np.full(n, base)
    u = np.array([_keyed_uniform(seed, realization, pid, j) for j in range(n)])
    return base * (1.0 + w * (2.0 * u - 1.0))


def sample_site_fields(base: ModBKCParams, spec: DisorderSpec, realization: int) -> SiteFields:
    """One disorder realization; entries are uniform in [P(1-W_P), P(1+W_P)]."""
    if not 0 <= realization < spec.realizations:
        raise ValueError(f"realization {realization} outside [0, {spec.realizations})")
    n = base.N
    w_om = spec.strength("omega")
    return SiteFields(
        J1=_draw(base.J1, spec.strength("J1"), spec.seed, realization, "J1", n),
        J2=_draw(base.J2, spec.strength("J2"), spec.seed, realization, "J2", n),
        Delta1=_draw(base.Delta1, spec.strength("Delta1"), spec.seed, realization, "Delta1", n),
        Delta2=_draw(base.Delta2, spec.strength("Delta2"), spec.seed, realization, "Delta2", n),
        omega_A=_draw(base.omega, w_om, spec.seed, realization, "omega_A", n),
        omega_B=_draw(base.omega, w_om, spec.seed, realization, "omega_B", n),
    )


def disordered_similarity(f: SiteFields) -> SimilarityMatrix:
    """Product-form diagonal gauge for site-resolved couplings.

    Replaces the uniform powers r^(j/2) by cumulative products of the local
    ratios r_{i,l} = (Delta_{i,l} + J_{i,l}) / (Delta_{i,l} - J_{i,l}); for
    uniform fields this equals the clean combined gauge entrywise.
    """
    return a_combined(f)


def _ensemble_spectrum(f: SiteFields, bc: BoundaryCondition) -> Spectrum:
    if np.all(f.omega_A == 0) and np.all(f.omega_B == 0):
        return modbkc_spectrum_zero_omega(f, bc)
    return eigendecompose(excitation_matrix(build_modbkc_quadratic(f, bc)))


@dataclass(frozen=True)
class EnsembleResult:
    """Per-realization observable values with mean/std aggregates."""

    observables: dict            # name -> array, first axis = realization
    mean: dict
    std: dict
    seed: int
    realizations: int
    failures: tuple = field(default=())


def ensemble_observables(base: ModBKCParams, spec: DisorderSpec,
                         observables: Iterable[str] = ("zero_gap", "zero_modes"),
                         bc: BoundaryCondition = BoundaryCondition.OBC,
                         zero_tol: float = 1e-6,
                         frac: float = 0.1, threshold: float = 0.9,
                         threads: int = 1) -> EnsembleResult:
    """Disorder-averaged observables over ``spec.realizations`` realizations.

    Per-realization failures are recorded and skipped; the run only fails if
    every realization does.  ``zero_modes`` is the per-quadrature-copy count
    at omega = 0 and the literal threshold count otherwise.
    """
    names = tuple(observables)
    for name in names:
        if name not in OBSERVABLES:
            raise ValueError(f"unknown observable {name!r}; choose from {OBSERVABLES}")

    def one(realization: int):
        f = sample_site_fields(base, spec, realization)
        spectrum = _ensemble_spectrum(f, bc)
        out = {}
        for name in names:
            if name == "abs_spectrum":
                out[name] = np.sort(np.abs(spectrum.eigenvalues))
            elif name == "zero_gap":
                out[name] = zero_gap(spectrum)
            elif name == "zero_modes":
                if np.all(f.omega_A == 0) and np.all(f.omega_B == 0):
                    out[name] = edge_mode_count(f, tol=zero_tol, bc=bc)
                else:
                    out[name] = zero_modes(spectrum, zero_tol)[0]
            elif name == "nhse_fraction":
                out[name] = nhse_fraction(spectrum, frac, threshold, base.N)
            elif name == "mean_profile":
                out[name] = profile_matrix(spectrum, base.N).mean(axis=0)
        return out

    results: list[Optional[dict]] = [None] * spec.realizations
    failures = []
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futs = {r: pool.submit(one, r) for r in range(spec.realizations)}
            for r, fut in futs.items():
                try:
                    results[r] = fut.result()
                except Exception as err:
                    failures.append((r, f"{type(err).__name__}: {err}"))
    else:
        for r in range(spec.realizations):
            try:
                results[r] = one(r)
            except Exception as err:
                failures.append((r, f"{type(err).__name__}: {err}"))
    good = [r for r in results if r is not None]
    if not good:
        raise RuntimeError(f"all {spec.realizations} realizations failed; first: {failures[0][1]}")
    obs = {name: np.array([g[name] for g in good]) for name in names}
    mean = {name: np.mean(arr, axis=0) for name, arr in obs.items()}
    std = {name: np.std(arr, axis=0, ddof=1) if len(good) > 1 else np.zeros_like(np.mean(arr, axis=0))
           for name, arr in obs.items()}
    return EnsembleResult(observables=obs, mean=mean, std=std, seed=spec.seed,
                          realizations=spec.realizations, failures=tuple(failures))
