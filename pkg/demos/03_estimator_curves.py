"""Mean estimator curves on the barrier-ladder test system.

Reproduces the figure data comparing the true discovered fraction R(t)
with its two online estimators, for three deviation exponents: n = 0
(the harmonic law is exact at the search temperature), n = -1/2 (it
overpredicts the search-temperature rates), and n = +1/2 (it
underpredicts them).  Writes one CSV per exponent with columns
time,exact,chill_1,chill_2 holding mean(1-R), mean(1-Rtilde),
mean(1-Rhat).
"""

import os

import numpy as np

from akmc import TestSystemParams, default_time_grid, export_figure_data, run_ensemble

REPLICAS = 2000  # the full reproduction uses 10_000; this keeps the demo quick

out_dir = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(out_dir, exist_ok=True)

for idx, n in enumerate((-0.5, 0.0, 0.5)):
    params = TestSystemParams(n=n)
    grid = default_time_grid(params.rate_table(), n_points=60)
    stats = run_ensemble(params, grid, REPLICAS, seed=[7, idx])
    path = os.path.join(out_dir, f"estimators_n{n:g}.csv")
    export_figure_data(stats, path)

    mid = (stats.r_bar > 0.05) & (stats.r_bar < 0.95)
    sign = np.sign(stats.mean_diff_tilde[mid])
    print(f"n = {n:+.1f}: wrote {path}")
    print(f"  grid points with 0.05 < Rbar < 0.95: {int(mid.sum())}")
    print(f"  mean(R_tilde - R) over that window: "
          f"{stats.mean_diff_tilde[mid].min():+.4f} .. {stats.mean_diff_tilde[mid].max():+.4f}")
    print(f"  mean(R_hat - R) is never positive beyond noise: "
          f"max = {stats.mean_diff_hat.max():+.2e}")
    if n < 0 and (sign < 0).any() and (sign > 0).any():
        print("  note: the physical estimator UNDERSHOOTS the oracle early in the")
        print("  window and overshoots late, even though its per-pathway inputs")
        print("  are all biased upward; conditioning on found pathways does that.")
print("\nplot any of the CSVs with your tool of choice (log-log works well).")
