"""High-temperature saddle-search driver and exit-event bookkeeping.

One search cycle: draw a fresh in-basin start from the quasistationary
distribution (simulation clock frozen), evolve until the first exit (clock
advances by the exit time), record the event and its pathway (clock
frozen), repeat.  The cumulative clock together with the per-pathway event
counts is everything the online estimators need.

The stopping rule is evaluated at every event time.  Between events the
counting-based estimator is constant, but the physical estimator grows
continuously, so a run may also stop strictly between events: the crossing
time is solved for exactly and the in-flight trajectory is discarded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import MaxCyclesExceeded, OutOfRange
from .estimators import (
    EstimatorTrace,
    StoppingRule,
    expected_proportion,
    n_hat,
    p_hat,
    p_tilde,
    proportion_found,
    r_hat,
    r_tilde,
    should_stop,
)
from .potentials import Basin, Potential
from .rates import RateTable
from .sde import SdeConfig, run_until_exit, sample_qsd

DEFAULT_MAX_CYCLES = 1_000_000


@dataclass(frozen=True)
class EventLog:
    """Time-stamped exit events: the realization of the counting processes.

    ``times`` holds cumulative simulation-clock values, strictly increasing;
    ``pathways`` the matching labels.  ``horizon`` is the final clock value,
    at or after the last event.
    """

    times: np.ndarray
    pathways: np.ndarray
    horizon: float
    n_pathways_seen: int

    def __post_init__(self):
        object.__setattr__(self, "times", np.asarray(self.times, dtype=float))
        object.__setattr__(self, "pathways", np.asarray(self.pathways, dtype=np.int64))
        if self.times.size:
            if np.any(np.diff(self.times) < 0.0):
                raise ValueError("event times must be nondecreasing")
            if self.horizon < self.times[-1]:
                raise ValueError("horizon must not precede the last event")
        elif self.horizon < 0.0:
            raise ValueError("horizon must be >= 0")

    @property
    def n_events(self) -> int:
        return self.times.size

    @property
    def events(self) -> list[tuple[float, int]]:
        return [(float(t), int(j)) for t, j in zip(self.times, self.pathways)]

    def interarrival_times(self) -> np.ndarray:
        """Waiting times between consecutive events (the first counts from 0)."""
        return np.diff(self.times, prepend=0.0)

    def to_csv(self, path) -> None:
        """Write `t_event,pathway` rows."""
        with open(path, "w", newline="") as fh:
            fh.write("t_event,pathway\n")
            for t, j in zip(self.times, self.pathways):
                fh.write(f"{float(t)!r},{int(j)}\n")


def write_metadata(path, payload: dict) -> None:
    """Write the JSON sidecar for a run (sorted keys, so byte-stable)."""
    with open(path, "w", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass(frozen=True)
class Counts:
    """Per-pathway event counts at some time, with the found indicators."""

    n: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "n", np.asarray(self.n, dtype=np.int64))

    @property
    def chi(self) -> np.ndarray:
        return (self.n >= 1).astype(np.int64)

    @property
    def total(self) -> int:
        return int(self.n.sum())


def counts_at(log: EventLog, t: float, n_pathways: int | None = None) -> Counts:
    """Counts of events with t_event <= t, per pathway label.

    Raises:
        OutOfRange: t outside [0, horizon].
    """
    if not 0.0 <= t <= log.horizon:
        raise OutOfRange(f"t={t} outside [0, {log.horizon}]")
    if n_pathways is None:
        n_pathways = log.n_pathways_seen
    n = np.zeros(n_pathways, dtype=np.int64)
    sel = log.times <= t
    for j in log.pathways[sel]:
        n[j - 1] += 1
    return Counts(n=n)


def _tilde_crossing_time(n, k_lo, k_hi, t_lo: float, t_hi: float, threshold: float) -> float:
    """First t in (t_lo, t_hi] where the continuously growing estimator hits the threshold."""
    return float(
        brentq(
            lambda t: r_tilde(n, k_lo, k_hi, t) - threshold,
            t_lo,
            t_hi,
            xtol=1e-15,
            rtol=1e-12,
        )
    )


def run_search(
    potential: Potential,
    basin: Basin,
    cfg: SdeConfig,
    rates: RateTable,
    rule: StoppingRule | None,
    rng: np.random.Generator,
    max_cycles: int = DEFAULT_MAX_CYCLES,
    max_events: int | None = None,
    horizon: float | None = None,
    label_mode: str = "geometric",
) -> tuple[EventLog, EstimatorTrace]:
    """Run the saddle search until the stopping rule fires (or a cap is hit).

    Args:
        rates: table covering every basin pathway in label order; its k_lo
            and k_hi back the estimators as pathways get discovered.
        rule: stopping rule, or None to run without one (then ``max_events``
            or ``horizon`` must terminate the run).
        max_events: optional event-count cap.
        horizon: optional simulation-clock cap; an in-flight exit beyond it
            is discarded.
        label_mode: "geometric" keeps basin labels (left=1); "discovery"
            relabels pathways in the order they were first seen.

    Returns:
        The event log and the estimator trace sampled at every event time
        and at the stopping time.

    Raises:
        MaxCyclesExceeded: no termination within ``max_cycles`` cycles.
    """
    if rule is None and max_events is None and horizon is None:
        raise ValueError("need a stopping rule, max_events, or horizon to terminate")
    if label_mode not in ("geometric", "discovery"):
        raise ValueError(f"label_mode must be 'geometric' or 'discovery', got {label_mode!r}")
    n_pathways = basin.n_pathways
    if rates.n_pathways != n_pathways:
        raise ValueError(
            f"rate table covers {rates.n_pathways} pathways, basin has {n_pathways}"
        )
    k_lo = rates.k_lo
    k_hi = rates.k_hi

    n = np.zeros(n_pathways, dtype=np.int64)
    t_sim = 0.0
    event_times: list[float] = []
    event_labels: list[int] = []
    trace_t: list[float] = []
    trace_counts: list[np.ndarray] = []

    def record(t: float) -> None:
        trace_t.append(t)
        trace_counts.append(n.copy())

    stopped = False
    for _ in range(max_cycles):
        start = sample_qsd(potential, basin, cfg, rng)
        rec = run_until_exit(start, potential, basin, cfg, rng)
        t_next = t_sim + rec.exit_time

        t_reach = t_next if horizon is None else min(t_next, horizon)
        if rule is not None and rule.estimator == "tilde" and n.any():
            value_at_reach = r_tilde(n, k_lo, k_hi, t_reach)
            if should_stop(rule, value_at_reach):
                t_sim = _tilde_crossing_time(n, k_lo, k_hi, t_sim, t_reach, rule.threshold)
                record(t_sim)
                stopped = True
                break
        if horizon is not None and t_next > horizon:
            t_sim = horizon
            record(t_sim)
            stopped = True
            break

        t_sim = t_next
        n[rec.pathway - 1] += 1
        event_times.append(t_sim)
        event_labels.append(rec.pathway)
        record(t_sim)

        if rule is not None:
            value = (
                r_tilde(n, k_lo, k_hi, t_sim)
                if rule.estimator == "tilde"
                else r_hat(n, k_lo)
            )
            if should_stop(rule, value):
                stopped = True
                break
        if max_events is not None and len(event_times) >= max_events:
            stopped = True
            break
    if not stopped:
        raise MaxCyclesExceeded(f"no termination within {max_cycles} cycles")

    times = np.asarray(event_times, dtype=float)
    labels = np.asarray(event_labels, dtype=np.int64)
    order = np.arange(n_pathways)
    if label_mode == "discovery":
        seen = []
        for lab in labels:
            if lab - 1 not in seen:
                seen.append(lab - 1)
        order = np.asarray(seen + [j for j in range(n_pathways) if j not in seen])
        relabel = np.empty(n_pathways, dtype=np.int64)
        relabel[order] = np.arange(1, n_pathways + 1)
        labels = relabel[labels - 1]

    counts = np.asarray(trace_counts, dtype=np.int64).reshape(len(trace_t), n_pathways)
    tgrid = np.asarray(trace_t, dtype=float)
    counts = counts[:, order]
    k_lo_o, k_hi_o = k_lo[order], k_hi[order]
    kappa_o = None if rates.kappa is None else rates.kappa[order]

    chi = (counts >= 1).astype(np.int64)
    nhat = n_hat(counts)
    ptil = p_tilde(k_hi_o[None, :], tgrid[:, None]) if tgrid.size else np.zeros((0, n_pathways))
    phat = p_hat(counts)
    r = np.array([proportion_found(c, k_lo_o) for c in counts])
    if kappa_o is None:
        rbar = np.full(tgrid.shape, np.nan)
    else:
        rbar = np.array([expected_proportion(kappa_o, k_lo_o, t) for t in tgrid])
    rtil = np.array([r_tilde(c, k_lo_o, k_hi_o, t) for c, t in zip(counts, tgrid)])
    rhat = np.array([r_hat(c, k_lo_o) for c in counts])

    log = EventLog(
        times=times,
        pathways=labels,
        horizon=t_sim,
        n_pathways_seen=int(np.unique(labels).size),
    )
    trace = EstimatorTrace(
        t=tgrid, r=r, r_bar=rbar, r_tilde=rtil, r_hat=rhat,
        chi=chi, n=counts, n_hat=nhat, p_tilde=ptil, p_hat=phat,
    )
    return log, trace
