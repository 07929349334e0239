"""Online estimators of the discovered fraction of total low-temperature rate.

Notation, per pathway j with low-temperature rate k_j and exit count n_j(t):

    chi_j(t)  = 1 if n_j(t) >= 1 else 0
    R(t)      = sum_j chi_j k_j / sum_j k_j          (oracle; needs all k_j)
    Rbar(t)   = sum_j (1 - exp(-kappa_j t)) k_j / K  (its expectation)
    ptilde_j  = 1 - exp(-k_hi_j t)                   (physical estimate of E[chi_j])
    nhat_j    = n_j if n_j >= 2 else 0
    phat_j    = 1 - exp(-nhat_j)                     (counting estimate of E[chi_j])
    Rtilde(t) = sum_j ptilde_j chi_j k_j / sum_j chi_j k_j
    Rhat(t)   = sum_j phat_j  chi_j k_j / sum_j chi_j k_j

Rtilde and Rhat only touch rates of pathways already found, so both are
computable online during a search.  Before the first exit both are defined
as 0, which keeps the stopping rule from firing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StoppingRule:
    """Stop as soon as the chosen estimator exceeds 1 - epsilon."""

    epsilon: float
    estimator: str = "tilde"

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.estimator not in ("tilde", "hat"):
            raise ValueError(f"estimator must be 'tilde' or 'hat', got {self.estimator!r}")

    @property
    def threshold(self) -> float:
        return 1.0 - self.epsilon


def should_stop(rule: StoppingRule, value: float) -> bool:
    """Strict comparison: stop iff value > 1 - epsilon."""
    return value > rule.threshold


def proportion_found(n_events, k_lo) -> float:
    """R(t): found low-temperature rate over total, from per-pathway counts."""
    n = np.asarray(n_events)
    k = np.asarray(k_lo, dtype=float)
    return float(k[n >= 1].sum() / k.sum())


def expected_proportion(kappa, k_lo, t: float) -> float:
    """Rbar(t) = sum_j (1 - exp(-kappa_j t)) k_j / sum_j k_j."""
    kap = np.asarray(kappa, dtype=float)
    k = np.asarray(k_lo, dtype=float)
    return float(((1.0 - np.exp(-kap * t)) * k).sum() / k.sum())


def p_tilde(k_hi, t: float):
    """1 - exp(-k_hi * t); scalar or per-pathway."""
    out = 1.0 - np.exp(-np.asarray(k_hi, dtype=float) * t)
    return float(out) if out.ndim == 0 else out


def n_hat(n_events):
    """Counts with singletons zeroed: n_j if n_j >= 2 else 0."""
    n = np.asarray(n_events)
    if n.ndim == 0:
        return int(n) if int(n) >= 2 else 0
    return np.where(n >= 2, n, 0)


def p_hat(n_events):
    """1 - exp(-n_hat); zero for pathways seen at most once."""
    out = 1.0 - np.exp(-np.asarray(n_hat(n_events), dtype=float))
    return float(out) if out.ndim == 0 else out


def r_tilde(n_events, k_lo, k_hi, t: float) -> float:
    """Rtilde(t); 0 when no pathway has been found yet."""
    n = np.asarray(n_events)
    k = np.asarray(k_lo, dtype=float)
    chi = n >= 1
    den = k[chi].sum()
    if den == 0.0:
        return 0.0
    pt = 1.0 - np.exp(-np.asarray(k_hi, dtype=float)[chi] * t)
    return float((pt * k[chi]).sum() / den)


def r_hat(n_events, k_lo) -> float:
    """Rhat(t); 0 when no pathway has been found yet."""
    n = np.asarray(n_events)
    k = np.asarray(k_lo, dtype=float)
    chi = n >= 1
    den = k[chi].sum()
    if den == 0.0:
        return 0.0
    ph = 1.0 - np.exp(-np.where(n[chi] >= 2, n[chi], 0).astype(float))
    return float((ph * k[chi]).sum() / den)


def r_hat_per_term(n_events, k_lo) -> float:
    """Rhat via the per-term form sum_j phat_j k_j / (k_j + sum_{m != j} chi_m k_m).

    Algebraically identical to :func:`r_hat` because phat_j vanishes unless
    chi_j = 1; kept as an independent route for cross-checking.
    """
    n = np.asarray(n_events)
    k = np.asarray(k_lo, dtype=float)
    chi = (n >= 1).astype(float)
    ph = 1.0 - np.exp(-np.where(n >= 2, n, 0).astype(float))
    total_found = float((chi * k).sum())
    out = 0.0
    for j in range(k.size):
        xi_j = k[j] + total_found - chi[j] * k[j]
        out += ph[j] * k[j] / xi_j
    return out


@dataclass
class EstimatorTrace:
    """Estimator values sampled at event times (and the stopping time).

    Per-pathway arrays have shape (len(t), n_pathways).  ``r`` and ``r_bar``
    are NaN where they are not computable (unknown full rate table or
    unknown true intensities).
    """

    t: np.ndarray
    r: np.ndarray
    r_bar: np.ndarray
    r_tilde: np.ndarray
    r_hat: np.ndarray
    chi: np.ndarray
    n: np.ndarray
    n_hat: np.ndarray
    p_tilde: np.ndarray
    p_hat: np.ndarray

    def to_csv(self, path, per_pathway: bool = False) -> None:
        """Write `t,R,R_bar,R_tilde,R_hat` rows, optionally with wide per-pathway columns."""
        n_pathways = self.chi.shape[1] if self.chi.size else 0
        with open(path, "w", newline="") as fh:
            header = "t,R,R_bar,R_tilde,R_hat"
            if per_pathway:
                for j in range(1, n_pathways + 1):
                    header += f",chi_{j},n_{j},n_hat_{j},p_tilde_{j},p_hat_{j}"
            fh.write(header + "\n")
            for i in range(self.t.size):
                row = (
                    f"{float(self.t[i])!r},{float(self.r[i])!r},{float(self.r_bar[i])!r},"
                    f"{float(self.r_tilde[i])!r},{float(self.r_hat[i])!r}"
                )
                if per_pathway:
                    for j in range(n_pathways):
                        row += (
                            f",{int(self.chi[i, j])},{int(self.n[i, j])},"
                            f"{int(self.n_hat[i, j])},{float(self.p_tilde[i, j])!r},"
                            f"{float(self.p_hat[i, j])!r}"
                        )
                fh.write(row + "\n")
