"""Overdamped Langevin integration, first-exit detection, and QSD sampling.

The dynamics is dX_t = -V'(X_t) dt + sqrt(2/beta) dW_t, discretized with
Euler-Maruyama:

    x_{n+1} = x_n - V'(x_n) * dt + sqrt(2 * dt / beta) * g_n

with g_n iid standard normal.  Exits are detected at the first grid time
whose endpoint leaves the basin interval (no sub-step boundary correction;
the induced O(sqrt(dt)) exit-time bias is absorbed into the statistical
tolerances of downstream checks).

All randomness is drawn from a ``numpy.random.Generator`` passed in by the
caller, so identical seeds give identical trajectories.  The hot loops are
numba-compiled and consume the very same generator state, drawing the same
stream numpy would.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import MaxStepsExceeded, NonFinite
from .potentials import Basin, Potential, classify_exit

DEFAULT_DT = 1e-4
DEFAULT_MAX_STEPS = 2_000_000_000
QSD_RELAXATION_FACTOR = 5.0


@dataclass(frozen=True)
class SdeConfig:
    """Integration parameters.

    Attributes:
        beta: inverse temperature (> 0).
        dt: time step (> 0).
        t_corr: decorrelation time for QSD sampling; None selects the
            per-basin default 5 / curvature_at_min, and 0 degenerates to
            returning the start point unchanged.
        max_steps: step budget per operation call.
    """

    beta: float
    dt: float = DEFAULT_DT
    t_corr: float | None = None
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        if self.beta <= 0.0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if self.dt <= 0.0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.t_corr is not None and self.t_corr < 0.0:
            raise ValueError(f"t_corr must be >= 0, got {self.t_corr}")
        if self.max_steps <= 0:
            raise ValueError(f"max_steps must be > 0, got {self.max_steps}")

    @property
    def noise_scale(self) -> float:
        """sqrt(2 * dt / beta), the per-step noise amplitude."""
        return math.sqrt(2.0 * self.dt / self.beta)


@dataclass(frozen=True)
class ExitRecord:
    """First exit from a basin: continuous exit time, pathway label, endpoint."""

    exit_time: float
    pathway: int
    exit_point: float
    steps: int


def default_t_corr(basin: Basin) -> float:
    """Per-basin QSD decorrelation default: 5 relaxation times of the minimum."""
    return QSD_RELAXATION_FACTOR / basin.curvature_at_min


def resolve_t_corr(cfg: SdeConfig, basin: Basin) -> float:
    return default_t_corr(basin) if cfg.t_corr is None else cfg.t_corr


def em_step(x: float, potential: Potential, cfg: SdeConfig, gaussian: float) -> float:
    """One Euler-Maruyama update; deterministic given (x, gaussian).

    Raises:
        NonFinite: if the update overflows.
    """
    out = x - float(potential.gradient(x)) * cfg.dt + cfg.noise_scale * gaussian
    if not math.isfinite(out):
        raise NonFinite(f"Euler-Maruyama step from x={x} produced {out}")
    return out


@njit(cache=True)
def _exit_kernel(x, d0, d1, d2, d3, a, b, dt, noise, max_steps, rng):
    """Step until the first endpoint outside (a, b); return (x, steps_used)."""
    for step in range(1, max_steps + 1):
        x = x + (d0 + x * (d1 + x * (d2 + x * d3))) * dt + noise * rng.standard_normal()
        if x <= a or x >= b:
            return x, step
    return x, -1


@njit(cache=True)
def _qsd_kernel(x0, d0, d1, d2, d3, a, b, dt, noise, need_steps, max_steps, rng):
    """Confine for need_steps consecutive steps, restarting from x0 on exit.

    Returns (endpoint, steps_used); steps_used is -1 if the budget ran out.
    """
    x = x0
    survived = 0
    for step in range(1, max_steps + 1):
        x = x + (d0 + x * (d1 + x * (d2 + x * d3))) * dt + noise * rng.standard_normal()
        if x <= a or x >= b:
            x = x0
            survived = 0
        else:
            survived += 1
            if survived >= need_steps:
                return x, step
    return x, -1


@njit(cache=True)
def _evolve_kernel(x, d0, d1, d2, d3, dt, noise, n_steps, stride, out, rng):
    """Advance n_steps with no boundary; record every ``stride`` steps into out."""
    k = 0
    for step in range(1, n_steps + 1):
        x = x + (d0 + x * (d1 + x * (d2 + x * d3))) * dt + noise * rng.standard_normal()
        if stride > 0 and step % stride == 0:
            out[k] = x
            k += 1
    return x


def run_until_exit(
    start: float,
    potential: Potential,
    basin: Basin,
    cfg: SdeConfig,
    rng: np.random.Generator,
) -> ExitRecord:
    """Evolve from ``start`` until the trajectory first leaves the basin.

    The exit time is (number of steps) * dt, and the pathway is the label of
    the crossed boundary.

    Raises:
        MaxStepsExceeded: no exit within cfg.max_steps.
        ValueError: start does not lie inside the basin.
    """
    if not basin.contains(start):
        raise ValueError(f"start={start} is not inside ({basin.a}, {basin.b})")
    d0, d1, d2, d3 = potential.drift_coefficients()
    x, steps = _exit_kernel(
        float(start), d0, d1, d2, d3, basin.a, basin.b, cfg.dt, cfg.noise_scale,
        cfg.max_steps, rng,
    )
    if steps < 0:
        raise MaxStepsExceeded(f"no exit within {cfg.max_steps} steps")
    return ExitRecord(
        exit_time=steps * cfg.dt,
        pathway=classify_exit(basin, x),
        exit_point=float(x),
        steps=int(steps),
    )


def sample_qsd(
    potential: Potential,
    basin: Basin,
    cfg: SdeConfig,
    rng: np.random.Generator,
    start: float | None = None,
) -> float:
    """Draw an approximate sample of the quasistationary distribution.

    Runs a trajectory from ``start`` (default: the basin minimum) and returns
    the endpoint once it has stayed inside the basin for a contiguous time
    t_corr; any exit restarts the trajectory from ``start`` and resets the
    confinement clock.  The search simulation clock is never advanced here.

    Raises:
        MaxStepsExceeded: the step budget ran out before a success.
    """
    x0 = basin.minimum if start is None else float(start)
    if not basin.contains(x0):
        raise ValueError(f"start={x0} is not inside ({basin.a}, {basin.b})")
    t_corr = resolve_t_corr(cfg, basin)
    if t_corr == 0.0:
        return x0
    need = max(1, int(round(t_corr / cfg.dt)))
    d0, d1, d2, d3 = potential.drift_coefficients()
    x, steps = _qsd_kernel(
        x0, d0, d1, d2, d3, basin.a, basin.b, cfg.dt, cfg.noise_scale,
        need, cfg.max_steps, rng,
    )
    if steps < 0:
        raise MaxStepsExceeded(
            f"no {t_corr}-confined stretch within {cfg.max_steps} steps"
        )
    return float(x)


def evolve(
    potential: Potential,
    x0: float,
    cfg: SdeConfig,
    n_steps: int,
    rng: np.random.Generator,
    record_every: int = 0,
) -> float | np.ndarray:
    """Free evolution for ``n_steps`` (no absorbing boundary).

    Returns the endpoint, or the array of positions recorded every
    ``record_every`` steps when that is positive.
    """
    d0, d1, d2, d3 = potential.drift_coefficients()
    if record_every > 0:
        out = np.empty(n_steps // record_every, dtype=float)
    else:
        out = np.empty(0, dtype=float)
    x = _evolve_kernel(
        float(x0), d0, d1, d2, d3, cfg.dt, cfg.noise_scale, int(n_steps),
        int(record_every), out, rng,
    )
    if not math.isfinite(x):
        raise NonFinite(f"trajectory diverged to {x}")
    return out if record_every > 0 else float(x)
