"""Test-system ensembles, statistical verification, and figure-data export.

The test system replaces the SDE by direct sampling of the exit-counting
processes: per pathway, events arrive as a Poisson process whose intensity
is the modified-Arrhenius rate, so estimator behavior can be studied with
the truth known.  Ensembles over many replicas produce the mean-estimator
curves; the verify_* routines turn distributional claims (exponential exit
times, label independence, unit Fano factors, conditional unbiasedness,
error bounds) into hypothesis tests with explicit levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps
from statsmodels.stats.diagnostic import lilliefors

from .bounds import BoundReport, BoundRow, empirical_error, hat_bounds, tilde_bounds
from .rates import RateTable, build_test_system
from .search import EventLog

FIGURE_HEADER = "time,exact,chill_1,chill_2"


@dataclass(frozen=True)
class TestSystemParams:
    """Barrier-ladder test system: 20 pathways, barriers 1 + (4/19)j, unit prefactors.

    ``n`` is the deviation exponent: the true intensities are
    (beta_lo/beta_hi)**n times the harmonic-law rates at beta_hi.
    """

    n: float
    beta_hi: float = 2.5
    beta_lo: float = 10.0
    n_pathways: int = 20

    def rate_table(self) -> RateTable:
        return build_test_system(
            self.n, n_pathways=self.n_pathways, beta_hi=self.beta_hi, beta_lo=self.beta_lo
        )


def default_time_grid(rt: RateTable, n_points: int = 60, span: tuple[float, float] = (1e-2, 1e2)) -> np.ndarray:
    """Log-spaced times from span[0]/kappa_max to span[1]/kappa_min."""
    if rt.kappa is None:
        raise ValueError("time grid needs the true intensities (rt.kappa)")
    return np.geomspace(span[0] / rt.kappa.max(), span[1] / rt.kappa.min(), n_points)


def simulate_test_system(
    params: TestSystemParams, horizon: float, rng: np.random.Generator
) -> EventLog:
    """One realization of the labeled exit process up to ``horizon``.

    For each pathway, exponential interarrivals are drawn and accumulated
    until they pass the horizon; all pathways are then merged in time order.
    No SDE is involved.
    """
    if horizon <= 0.0:
        raise ValueError(f"horizon must be > 0, got {horizon}")
    rt = params.rate_table()
    all_times = []
    all_labels = []
    for j, kap in enumerate(rt.kappa, start=1):
        scale = 1.0 / float(kap)
        t = 0.0
        pieces = []
        while True:
            chunk = max(16, int(1.25 * (horizon - t) / scale) + 8)
            cum = t + np.cumsum(rng.exponential(scale, size=chunk))
            inside = cum <= horizon
            if inside.all():
                pieces.append(cum)
                t = float(cum[-1])
            else:
                pieces.append(cum[inside])
                break
        times = np.concatenate(pieces)
        if times.size:
            all_times.append(times)
            all_labels.append(np.full(times.size, j, dtype=np.int64))
    if all_times:
        times = np.concatenate(all_times)
        labels = np.concatenate(all_labels)
        order = np.argsort(times, kind="stable")
        times, labels = times[order], labels[order]
    else:
        times = np.empty(0)
        labels = np.empty(0, dtype=np.int64)
    return EventLog(
        times=times, pathways=labels, horizon=horizon,
        n_pathways_seen=int(np.unique(labels).size),
    )


@dataclass(frozen=True)
class EnsembleStats:
    """Replica means and standard errors of the estimators on a time grid.

    ``diff_*`` entries are paired statistics of (estimator - oracle R) per
    replica, which is what sign comparisons between curves should use.
    """

    t: np.ndarray
    mean_r: np.ndarray
    se_r: np.ndarray
    mean_r_tilde: np.ndarray
    se_r_tilde: np.ndarray
    mean_r_hat: np.ndarray
    se_r_hat: np.ndarray
    r_bar: np.ndarray
    mean_diff_tilde: np.ndarray
    se_diff_tilde: np.ndarray
    mean_diff_hat: np.ndarray
    se_diff_hat: np.ndarray
    n_replicas: int
    seed: int


def run_ensemble(
    params: TestSystemParams,
    t_grid: np.ndarray,
    n_replicas: int,
    seed: int,
    batch_size: int = 2000,
) -> EnsembleStats:
    """Estimator curves over ``n_replicas`` independent test-system runs.

    Per replica, the pathway counts at the grid times are sampled exactly as
    cumulative Poisson increments of the true intensities.  The physical
    estimator uses the unmodified harmonic-law rates, whatever ``n`` is; the
    oracle R and the counting estimator weight by the low-temperature rates.
    """
    if n_replicas < 2:
        raise ValueError(f"need at least 2 replicas, got {n_replicas}")
    t_grid = np.asarray(t_grid, dtype=float)
    rt = params.rate_table()
    kappa, k_lo, k_hi = rt.kappa, rt.k_lo, rt.k_hi
    big_k = rt.total_k_lo
    n_times = t_grid.size

    dt = np.diff(t_grid, prepend=0.0)
    lam = kappa[:, None] * dt[None, :]
    p_til = 1.0 - np.exp(-k_hi[:, None] * t_grid[None, :])
    r_bar = ((1.0 - np.exp(-kappa[:, None] * t_grid[None, :])) * k_lo[:, None]).sum(axis=0) / big_k

    r_all = np.empty((n_replicas, n_times))
    rt_all = np.empty((n_replicas, n_times))
    rh_all = np.empty((n_replicas, n_times))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    done = 0
    while done < n_replicas:
        b = min(batch_size, n_replicas - done)
        incs = rng.poisson(np.broadcast_to(lam, (b,) + lam.shape))
        counts = np.cumsum(incs, axis=2)
        chi = counts >= 1
        found_k = chi * k_lo[None, :, None]
        den = found_k.sum(axis=1)
        sl = slice(done, done + b)
        r_all[sl] = den / big_k
        with np.errstate(invalid="ignore"):
            rt_all[sl] = np.where(den > 0.0, (p_til[None] * found_k).sum(axis=1) / den, 0.0)
            p_hat = 1.0 - np.exp(-np.where(counts >= 2, counts, 0).astype(float))
            rh_all[sl] = np.where(den > 0.0, (p_hat * found_k).sum(axis=1) / den, 0.0)
        done += b

    def mean_se(arr):
        return arr.mean(axis=0), arr.std(axis=0, ddof=1) / np.sqrt(n_replicas)

    mean_r, se_r = mean_se(r_all)
    mean_rt, se_rt = mean_se(rt_all)
    mean_rh, se_rh = mean_se(rh_all)
    mean_dt, se_dt = mean_se(rt_all - r_all)
    mean_dh, se_dh = mean_se(rh_all - r_all)
    return EnsembleStats(
        t=t_grid, mean_r=mean_r, se_r=se_r,
        mean_r_tilde=mean_rt, se_r_tilde=se_rt,
        mean_r_hat=mean_rh, se_r_hat=se_rh,
        r_bar=r_bar,
        mean_diff_tilde=mean_dt, se_diff_tilde=se_dt,
        mean_diff_hat=mean_dh, se_diff_hat=se_dh,
        n_replicas=n_replicas, seed=seed,
    )


def export_figure_data(stats: EnsembleStats, path) -> None:
    """Write `time,exact,chill_1,chill_2` = t, mean(1-R), mean(1-Rtilde), mean(1-Rhat)."""
    with open(path, "w", newline="") as fh:
        fh.write(FIGURE_HEADER + "\n")
        for i in range(stats.t.size):
            fh.write(
                f"{float(stats.t[i])!r},{float(1.0 - stats.mean_r[i])!r},"
                f"{float(1.0 - stats.mean_r_tilde[i])!r},{float(1.0 - stats.mean_r_hat[i])!r}\n"
            )


def _fano_tests(logs, n_windows: int, min_mean: float, alpha: float) -> list[dict]:
    labels_seen = sorted({int(j) for log in logs for j in log.pathways})
    out = []
    for lab in labels_seen:
        window_counts = []
        for log in logs:
            edges = np.linspace(0.0, log.horizon, n_windows + 1)
            t_j = log.times[log.pathways == lab]
            window_counts.append(np.histogram(t_j, bins=edges)[0])
        counts = np.concatenate(window_counts)
        mean = counts.mean()
        if mean < min_mean or counts.size < 2:
            continue
        fano = counts.var(ddof=1) / mean
        m = counts.size
        z = math.sqrt((m - 1) / 2.0) * (fano - 1.0)
        p = 2.0 * sps.norm.sf(abs(z))
        out.append({
            "name": f"fano_pathway_{lab}",
            "statistic": float(fano),
            "p_value": float(p),
            "pass": bool(p >= alpha),
            "detail": {"windows": int(m), "mean_count": float(mean)},
        })
    return out


def verify_poisson(
    logs,
    alpha: float = 0.01,
    n_windows: int = 25,
    known_rate: float | None = None,
    min_label_count: int = 40,
    min_window_mean: float = 5.0,
) -> dict:
    """Test a set of event logs for labeled-Poisson structure.

    Three checks: (i) Kolmogorov-Smirnov of the pooled interarrival times
    against an exponential law (Lilliefors correction when the rate is
    fitted); (ii) chi-square contingency of pathway label against
    interarrival quartile; (iii) per-pathway Fano factors of window counts
    against 1.  Labels rarer than ``min_label_count`` are pooled into one
    bucket for the contingency table; pathways whose mean window count is
    below ``min_window_mean`` are skipped by the Fano check.

    Returns:
        Report dict with one entry per test and an overall ``pass`` flag.
    """
    taus = np.concatenate([log.interarrival_times() for log in logs])
    labels = np.concatenate([log.pathways for log in logs])
    tests = []

    if known_rate is None:
        ks_stat, ks_p = lilliefors(taus, dist="exp", pvalmethod="table")
        detail = {"n": int(taus.size), "fitted_rate": float(1.0 / taus.mean())}
    else:
        ks_stat, ks_p = sps.kstest(taus, "expon", args=(0.0, 1.0 / known_rate))
        detail = {"n": int(taus.size), "rate": float(known_rate)}
    tests.append({
        "name": "interarrival_exponential_ks",
        "statistic": float(ks_stat),
        "p_value": float(ks_p),
        "pass": bool(ks_p >= alpha),
        "detail": detail,
    })

    unique, counts = np.unique(labels, return_counts=True)
    keep = unique[counts >= min_label_count]
    grouped = np.where(np.isin(labels, keep), labels, -1)
    groups = np.unique(grouped)
    if groups.size >= 2:
        quart = np.digitize(taus, np.quantile(taus, [0.25, 0.5, 0.75]))
        table = np.zeros((groups.size, 4))
        for gi, g in enumerate(groups):
            sel = grouped == g
            for qi in range(4):
                table[gi, qi] = np.count_nonzero(sel & (quart == qi))
        chi2, p_c, dof, _ = sps.chi2_contingency(table)
        tests.append({
            "name": "label_interarrival_independence",
            "statistic": float(chi2),
            "p_value": float(p_c),
            "pass": bool(p_c >= alpha),
            "detail": {"dof": int(dof), "labels_grouped": int(groups.size)},
        })

    tests.extend(_fano_tests(logs, n_windows, min_window_mean, alpha))
    return {"alpha": alpha, "tests": tests, "pass": all(t["pass"] for t in tests)}


def sde_event_log(potential, basin, cfg, rates, n_events, rng) -> EventLog:
    """Collect ``n_events`` exits of the full QSD-resampled search (no stopping)."""
    from .search import run_search

    log, _ = run_search(
        potential, basin, cfg, rates, rule=None, rng=rng, max_events=n_events
    )
    return log


def verify_rate_est(
    kappa_t_values,
    n_samples: int,
    rng: np.random.Generator,
    n_se: float = 3.0,
) -> dict:
    """Monte Carlo check of the conditional count and probability estimators.

    For each kappa*t, draws Poisson counts and conditions on at least one
    event: the singleton-zeroed count must be an unbiased estimate of
    kappa*t, and the derived probability estimate must not exceed the true
    1 - exp(-kappa*t) (it is conservative), both within ``n_se`` standard
    errors.
    """
    checks = []
    for kt in kappa_t_values:
        kt = float(kt)
        draws = rng.poisson(kt, size=n_samples)
        cond = draws[draws >= 1]
        nh = np.where(cond >= 2, cond, 0).astype(float)
        ph = 1.0 - np.exp(-nh)
        mean_nh = float(nh.mean())
        se_nh = float(nh.std(ddof=1) / np.sqrt(nh.size))
        mean_ph = float(ph.mean())
        se_ph = float(ph.std(ddof=1) / np.sqrt(ph.size))
        p_true = float(-np.expm1(-kt))
        ok_n = abs(mean_nh - kt) <= n_se * se_nh
        ok_p = mean_ph <= p_true + n_se * se_ph
        checks.append({
            "kappa_t": kt,
            "n_conditioned": int(nh.size),
            "mean_n_hat": mean_nh,
            "se_n_hat": se_nh,
            "n_hat_unbiased": bool(ok_n),
            "mean_p_hat": mean_ph,
            "se_p_hat": se_ph,
            "p_true": p_true,
            "p_hat_conservative": bool(ok_p),
        })
    return {"n_samples": n_samples, "checks": checks,
            "pass": all(c["n_hat_unbiased"] and c["p_hat_conservative"] for c in checks)}


def verify_error_bounds(
    params: TestSystemParams,
    t_grid,
    n_replicas: int,
    rng: np.random.Generator,
    n_se: float = 3.0,
) -> BoundReport:
    """Empirical estimator errors against the analytic bounds on a time grid.

    Per time, pathway counts are drawn directly from their Poisson marginals
    (the bounds are per-time statements), both estimators evaluated per
    replica, and the resulting bias/variance/MSE compared with the bound
    values; verdicts allow ``n_se`` standard errors of slack.
    """
    rt = params.rate_table()
    kappa, k_lo, k_hi = rt.kappa, rt.k_lo, rt.k_hi
    big_k = rt.total_k_lo
    rows = []
    for t in np.asarray(t_grid, dtype=float):
        counts = rng.poisson(kappa * t, size=(n_replicas, rt.n_pathways))
        chi = counts >= 1
        found_k = chi * k_lo[None, :]
        den = found_k.sum(axis=1)
        p_til = 1.0 - np.exp(-k_hi * t)
        with np.errstate(invalid="ignore"):
            r_til = np.where(den > 0.0, (p_til[None, :] * found_k).sum(axis=1) / den, 0.0)
            p_hat = 1.0 - np.exp(-np.where(counts >= 2, counts, 0).astype(float))
            r_hat = np.where(den > 0.0, (p_hat * found_k).sum(axis=1) / den, 0.0)
        target = float(((1.0 - np.exp(-kappa * t)) * k_lo).sum() / big_k)
        max_q = float(np.exp(-kappa * t).max())
        for which, samples, bound in (
            ("tilde", r_til, tilde_bounds(rt, float(t))),
            ("hat", r_hat, hat_bounds(rt, float(t))),
        ):
            err = empirical_error(samples, target)
            rows.append(BoundRow(
                t=float(t), target=target, which=which,
                bias_bound=bound.bias_bound, bias_emp=err.bias, bias_se=err.se_bias,
                var_bound=bound.var_bound, var_emp=err.variance, var_se=err.se_var,
                mse_bound=bound.mse_bound, mse_emp=err.mse, mse_se=err.se_mse,
                max_q=max_q,
            ))
    return BoundReport(rows=tuple(rows), n_replicas=n_replicas,
                       big_k=big_k, min_k=float(k_lo.min()), n_pathways=rt.n_pathways)
