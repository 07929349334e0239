"""Analytic bias/variance/MSE bounds for the online estimators.

With q_j(t) = exp(-kappa_j t), K = sum_j k_j, minima/maxima over pathways,
and Rbar(t) the expected discovered fraction, the estimator errors satisfy

  tilde:  |Bias| <= N max|ptilde_j - p_j| + (K/min k) Rbar max q
          Var    <= 4 (K^2/min k^2) Rbar^2 max q
          MSE    <= 2 N^2 max (ptilde_j - p_j)^2
                    + (K^2/min k^2) (2 max q + 4) Rbar^2 max q

  hat:    |Bias| <= N max|E[phat_j] - p_j| + (K/min k) Rbar max q
          Var    <= 2 (K^2/min k^2) Rbar^2 max q
                    + (1 + 2 N^2 max q) max Var(phat_j)
          MSE    <= (1 + N^2 + 2 N^2 max q) max MSE(phat_j, p_j)
                    + 4 (K^2/min k^2) Rbar^2 (1 + max q) max q

Evaluating them needs the true intensities kappa_j, so they are analysis
instruments, not online quantities.  Bias(X, Y) = E[X - Y] and
MSE(X, Y) = Bias(X, Y)^2 + Var(X) throughout (note the asymmetry).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import TooFewSamples
from .estimators import expected_proportion
from .rates import RateTable

SERIES_TOL = 1e-12
SERIES_CLOSED_FORM_CUTOFF = 200.0


class BoundTriple(NamedTuple):
    bias_bound: float
    var_bound: float
    mse_bound: float


class XiMomentBounds(NamedTuple):
    """Jensen lower / Edmundson-Madansky upper brackets for E[1/xi], E[1/xi^2]."""

    lower1: float
    upper1: float
    lower2: float
    upper2: float


class PHatMoments(NamedTuple):
    mean: float
    variance: float
    mse_vs_p: float


@dataclass(frozen=True)
class ErrorStats:
    """Monte Carlo bias/variance/MSE of an estimator against a fixed target."""

    bias: float
    variance: float
    mse: float
    se_bias: float
    se_var: float
    se_mse: float


def empirical_error(samples, target: float) -> ErrorStats:
    """Sample bias/variance/MSE of ``samples`` against ``target``.

    Bias is mean(samples) - target, variance is the unbiased sample
    variance, and mse = bias^2 + variance.  Standard errors: s/sqrt(n) for
    the bias, the fourth-moment formula for the variance, and first-order
    propagation (ignoring the bias/variance covariance) for the MSE.

    Raises:
        TooFewSamples: fewer than 2 samples.
    """
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 2:
        raise TooFewSamples(f"need at least 2 samples, got {n}")
    mean = float(x.mean())
    var = float(x.var(ddof=1))
    bias = mean - float(target)
    mse = bias * bias + var
    se_bias = math.sqrt(var / n)
    centered = x - mean
    m4 = float((centered**4).mean())
    var_of_var = (m4 - var * var * (n - 3) / (n - 1)) / n
    se_var = math.sqrt(max(var_of_var, 0.0))
    se_mse = math.sqrt((2.0 * bias * se_bias) ** 2 + se_var * se_var)
    return ErrorStats(bias=bias, variance=var, mse=mse,
                      se_bias=se_bias, se_var=se_var, se_mse=se_mse)


def p_hat_moments(kappa_t: float, tol: float = SERIES_TOL) -> PHatMoments:
    """Moments of phat = 1 - exp(-nhat(N)) for N ~ Poisson(kappa_t).

    Evaluated by summing the Poisson series until the remaining tail mass
    drops below ``tol`` (hard cap 10*kappa_t + 50 terms).  For large
    kappa_t, where the leading pmf terms underflow, the exact generating
    function form E[e^(-cN)] = exp(kappa_t (e^(-c) - 1)) is used instead;
    the two routes agree to ~1e-13 where both apply.

    Returns:
        (mean, variance, mse against p = 1 - exp(-kappa_t)).
    """
    lam = float(kappa_t)
    if lam < 0.0:
        raise ValueError(f"kappa_t must be >= 0, got {kappa_t}")
    p = -math.expm1(-lam)
    if lam == 0.0:
        return PHatMoments(0.0, 0.0, p * p)
    if lam > SERIES_CLOSED_FORM_CUTOFF:
        pmf1 = lam * math.exp(-lam)
        mean = 1.0 - math.exp(lam * (math.exp(-1.0) - 1.0)) - (-math.expm1(-1.0)) * pmf1
        second = (
            1.0
            - 2.0 * math.exp(lam * (math.exp(-1.0) - 1.0))
            + math.exp(lam * (math.exp(-2.0) - 1.0))
            - (-math.expm1(-1.0)) ** 2 * pmf1
        )
    else:
        max_terms = int(10.0 * lam + 50.0)
        pmf = math.exp(-lam)
        cum = pmf
        mean = 0.0
        second = 0.0
        for n in range(1, max_terms + 1):
            pmf *= lam / n
            cum += pmf
            if n >= 2:
                f = -math.expm1(-float(n))
                mean += f * pmf
                second += f * f * pmf
            if n >= 2 and 1.0 - cum < tol:
                break
    variance = max(second - mean * mean, 0.0)
    bias = mean - p
    return PHatMoments(mean, variance, bias * bias + variance)


def _bound_inputs(rt: RateTable, t: float):
    if rt.kappa is None:
        raise ValueError("bound evaluation needs the true intensities (rt.kappa)")
    k = rt.k_lo
    q = np.exp(-rt.kappa * t)
    big_k = float(k.sum())
    min_k = float(k.min())
    r_bar = expected_proportion(rt.kappa, k, t)
    return k, q, big_k, min_k, r_bar, float(q.max()), rt.n_pathways


def tilde_bounds(rt: RateTable, t: float) -> BoundTriple:
    """Theoretical bias/variance/MSE bounds for the physical estimator at time t."""
    k, q, big_k, min_k, r_bar, max_q, n = _bound_inputs(rt, t)
    p_err = np.abs(np.exp(-rt.kappa * t) - np.exp(-rt.k_hi * t))
    max_abs_bias = float(p_err.max())
    ratio = big_k / min_k
    inherent = ratio * r_bar * max_q
    bias = n * max_abs_bias + inherent
    var = 4.0 * ratio * ratio * r_bar * r_bar * max_q
    mse = 2.0 * n * n * max_abs_bias * max_abs_bias + ratio * ratio * (
        2.0 * max_q + 4.0
    ) * r_bar * r_bar * max_q
    return BoundTriple(bias, var, mse)


def hat_bounds(rt: RateTable, t: float) -> BoundTriple:
    """Theoretical bias/variance/MSE bounds for the counting estimator at time t."""
    k, q, big_k, min_k, r_bar, max_q, n = _bound_inputs(rt, t)
    moments = [p_hat_moments(float(kap) * t) for kap in rt.kappa]
    p = 1.0 - q
    max_abs_bias = max(abs(m.mean - float(pj)) for m, pj in zip(moments, p))
    max_var = max(m.variance for m in moments)
    max_mse = max(m.mse_vs_p for m in moments)
    ratio = big_k / min_k
    bias = n * max_abs_bias + ratio * r_bar * max_q
    var = 2.0 * ratio * ratio * r_bar * r_bar * max_q + (
        1.0 + 2.0 * n * n * max_q
    ) * max_var
    mse = (1.0 + n * n + 2.0 * n * n * max_q) * max_mse + 4.0 * ratio * ratio * r_bar * r_bar * (
        1.0 + max_q
    ) * max_q
    return BoundTriple(bias, var, mse)


def xi_moment_bounds(rt: RateTable, t: float, pathway: int) -> XiMomentBounds:
    """Brackets for the inverse moments of xi_i = k_i + sum_{m != i} k_m chi_m.

    ``pathway`` is the 1-based label i.  The lower bounds are Jensen's
    applied to E[xi_i]; the upper bounds come from the Edmundson-Madansky
    inequality on the range [k_i, K].  With every q_m = 0 (or a single
    pathway) all four collapse to the deterministic 1/K and 1/K^2.
    """
    if rt.kappa is None:
        raise ValueError("xi moment bounds need the true intensities (rt.kappa)")
    if not 1 <= pathway <= rt.n_pathways:
        raise ValueError(f"pathway must be in 1..{rt.n_pathways}, got {pathway}")
    i = pathway - 1
    k = rt.k_lo
    q = np.exp(-rt.kappa * t)
    k_i = float(k[i])
    big_k = float(k.sum())
    others = float((np.delete(k, i) * np.delete(q, i)).sum())
    e_xi = big_k - others
    lower1 = 1.0 / e_xi
    lower2 = 1.0 / (e_xi * e_xi)
    if rt.n_pathways == 1 or big_k == k_i:
        return XiMomentBounds(lower1, 1.0 / k_i, lower2, 1.0 / (k_i * k_i))
    w_lo = (big_k - e_xi) / (big_k - k_i)
    w_hi = (e_xi - k_i) / (big_k - k_i)
    upper1 = w_lo / k_i + w_hi / big_k
    upper2 = w_lo / (k_i * k_i) + w_hi / (big_k * big_k)
    return XiMomentBounds(lower1, upper1, lower2, upper2)


@dataclass(frozen=True)
class BoundRow:
    """One (time, estimator) row of a bound report.

    ``target`` is the expected discovered fraction the bias is measured
    against; ``max_q`` echoes the largest per-pathway survival probability
    entering the bound formulas at this time.
    """

    t: float
    target: float
    which: str
    bias_bound: float
    bias_emp: float
    bias_se: float
    var_bound: float
    var_emp: float
    var_se: float
    mse_bound: float
    mse_emp: float
    mse_se: float
    max_q: float = float("nan")

    def satisfied(self, n_se: float = 3.0) -> dict[str, bool]:
        """Inequality verdicts with an n_se * SE Monte Carlo slack."""
        return {
            "bias": abs(self.bias_emp) <= self.bias_bound + n_se * self.bias_se,
            "var": self.var_emp <= self.var_bound + n_se * self.var_se,
            "mse": self.mse_emp <= self.mse_bound + n_se * self.mse_se,
        }


@dataclass(frozen=True)
class BoundReport:
    """Analytic bounds alongside empirical error statistics on a time grid.

    ``big_k``, ``min_k``, and ``n_pathways`` echo the rate-table inputs the
    bound formulas were evaluated with.
    """

    rows: tuple[BoundRow, ...]
    n_replicas: int
    big_k: float = float("nan")
    min_k: float = float("nan")
    n_pathways: int = 0

    def all_satisfied(self, n_se: float = 3.0) -> bool:
        return all(all(r.satisfied(n_se).values()) for r in self.rows)

    def to_csv(self, path) -> None:
        cols = (
            "t,target,which,bias_bound,bias_emp,bias_se,"
            "var_bound,var_emp,var_se,mse_bound,mse_emp,mse_se"
        )
        with open(path, "w", newline="") as fh:
            fh.write(cols + "\n")
            for r in self.rows:
                fh.write(
                    f"{r.t!r},{r.target!r},{r.which},{r.bias_bound!r},{r.bias_emp!r},"
                    f"{r.bias_se!r},{r.var_bound!r},{r.var_emp!r},{r.var_se!r},"
                    f"{r.mse_bound!r},{r.mse_emp!r},{r.mse_se!r}\n"
                )
