"""Harmonic transition-rate formulas and per-pathway rate tables.

The rate of escape through a saddle is g * exp(-beta * barrier) with the
harmonic prefactor g built from the curvatures at the minimum and at the
saddle.  A RateTable collects, per pathway, the low-temperature rate k_lo,
the high-temperature rate k_hi, and (when it is known by construction) the
true intensity kappa of the exit-counting process.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadCurvature
from .potentials import Basin, PathwayInfo


def harmonic_prefactor(lambda1: float, det_hessian_min: float, det_hessian_saddle: float) -> float:
    """Prefactor |lambda1|/pi * sqrt(|det H(min) / det H(saddle)|).

    ``lambda1`` is the sole negative Hessian eigenvalue at the saddle.  In
    one dimension both determinants are the scalar curvatures and
    ``det_hessian_saddle == lambda1``.
    """
    if lambda1 >= 0.0:
        raise BadCurvature(f"lambda1 must be < 0, got {lambda1}")
    if det_hessian_min <= 0.0:
        raise BadCurvature(f"det of Hessian at minimum must be > 0, got {det_hessian_min}")
    if det_hessian_saddle == 0.0:
        raise BadCurvature("det of Hessian at saddle must be nonzero")
    return abs(lambda1) / math.pi * math.sqrt(abs(det_hessian_min / det_hessian_saddle))


def eyring_kramers(info: PathwayInfo, beta: float) -> float:
    """Escape rate through one pathway at inverse temperature ``beta``.

    Returns (|lambda1|/pi) * sqrt(|curv_min/lambda1|) * exp(-beta*barrier),
    the 1D specialization of the determinant-ratio prefactor.
    """
    if info.barrier <= 0.0:
        raise BadCurvature(f"barrier must be > 0, got {info.barrier}")
    g = harmonic_prefactor(info.curvature_at_saddle, info.curvature_at_min, info.curvature_at_saddle)
    return g * math.exp(-beta * info.barrier)


def modified_arrhenius(g: float, barrier: float, beta_hi: float, beta_lo: float, n: float) -> float:
    """Deviated high-temperature rate (beta_lo/beta_hi)**n * g * exp(-beta_hi*barrier).

    The exponent ``n`` controls how the true rates depart from the harmonic
    law at beta_hi; n = 0 recovers it exactly.
    """
    return (beta_lo / beta_hi) ** n * g * math.exp(-beta_hi * barrier)


@dataclass(frozen=True)
class RateTable:
    """Per-pathway rates plus the inverse temperatures they were computed at.

    Attributes:
        barriers: energy barrier per pathway.
        k_lo: escape rates at beta_lo (the rates the estimators weight by).
        k_hi: escape rates at beta_hi (used by the physical estimator).
        kappa: true exit-process intensities, or None when not constructed.
        beta_lo, beta_hi: inverse temperatures, beta_lo > beta_hi > 0.
    """

    barriers: np.ndarray
    k_lo: np.ndarray
    k_hi: np.ndarray
    beta_lo: float
    beta_hi: float
    kappa: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "barriers", np.asarray(self.barriers, dtype=float))
        object.__setattr__(self, "k_lo", np.asarray(self.k_lo, dtype=float))
        object.__setattr__(self, "k_hi", np.asarray(self.k_hi, dtype=float))
        if self.kappa is not None:
            object.__setattr__(self, "kappa", np.asarray(self.kappa, dtype=float))
        if not (self.beta_lo > self.beta_hi > 0.0):
            raise ValueError(
                f"need beta_lo > beta_hi > 0, got beta_lo={self.beta_lo}, beta_hi={self.beta_hi}"
            )
        for name in ("k_lo", "k_hi"):
            arr = getattr(self, name)
            if arr.ndim != 1 or arr.size == 0 or np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be a 1D array of positive finite rates")
        if self.kappa is not None and (np.any(self.kappa <= 0.0) or self.kappa.shape != self.k_lo.shape):
            raise ValueError("kappa must be positive and match the pathway count")

    @property
    def n_pathways(self) -> int:
        return self.k_lo.size

    @property
    def total_k_lo(self) -> float:
        """K, the total low-temperature rate."""
        return float(self.k_lo.sum())

    def to_csv(self, path_or_file) -> None:
        """Write `pathway,barrier,k_lo,k_hi,kappa` rows (kappa blank if unknown)."""
        if hasattr(path_or_file, "write"):
            self._write_csv(path_or_file)
        else:
            with open(path_or_file, "w", newline="") as fh:
                self._write_csv(fh)

    def _write_csv(self, fh) -> None:
        fh.write("pathway,barrier,k_lo,k_hi,kappa\n")
        for j in range(self.n_pathways):
            kap = "" if self.kappa is None else repr(float(self.kappa[j]))
            fh.write(
                f"{j + 1},{float(self.barriers[j])!r},{float(self.k_lo[j])!r},"
                f"{float(self.k_hi[j])!r},{kap}\n"
            )


def rate_table_from_basin(basin: Basin, beta_lo: float, beta_hi: float) -> RateTable:
    """Rate table for a basin's pathways from the harmonic law; kappa unknown."""
    barriers = [p.barrier for p in basin.pathways]
    k_lo = [eyring_kramers(p, beta_lo) for p in basin.pathways]
    k_hi = [eyring_kramers(p, beta_hi) for p in basin.pathways]
    return RateTable(barriers=barriers, k_lo=k_lo, k_hi=k_hi, beta_lo=beta_lo, beta_hi=beta_hi)


def build_test_system(
    n: float,
    n_pathways: int = 20,
    beta_hi: float = 2.5,
    beta_lo: float = 10.0,
) -> RateTable:
    """Ladder-of-barriers test system with known true intensities.

    Pathway j = 0..n_pathways-1 has barrier 1 + (4/19)*j and unit prefactor.
    k_lo and k_hi follow the harmonic law at beta_lo and beta_hi; the true
    intensities are the modified-Arrhenius rates with deviation exponent n,
    so n = 0 makes kappa equal to k_hi exactly.
    """
    j = np.arange(n_pathways, dtype=float)
    barriers = 1.0 + (4.0 / 19.0) * j
    k_lo = np.exp(-beta_lo * barriers)
    k_hi = np.exp(-beta_hi * barriers)
    kappa = np.array(
        [modified_arrhenius(1.0, b, beta_hi, beta_lo, n) for b in barriers]
    )
    return RateTable(
        barriers=barriers, k_lo=k_lo, k_hi=k_hi, beta_lo=beta_lo, beta_hi=beta_hi, kappa=kappa
    )
