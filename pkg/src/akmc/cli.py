"""Command-line interface: search, testsystem, verify, and rates commands.

Every run is driven by one merged configuration (built-in defaults, then an
optional JSON config file, then explicit flags) and a single root seed, so
any output can be reproduced from the metadata echo it ships with.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 runtime
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import AkmcError, ConfigError
from .estimators import StoppingRule
from .experiments import (
    TestSystemParams,
    default_time_grid,
    export_figure_data,
    run_ensemble,
    sde_event_log,
    simulate_test_system,
    verify_error_bounds,
    verify_poisson,
    verify_rate_est,
)
from .potentials import make_potential, stationary_points
from .rates import build_test_system, rate_table_from_basin
from .sde import SdeConfig
from .search import run_search, write_metadata

SEARCH_DEFAULTS = {
    "potential": "two-saddle",
    "c": 0.2,
    "omega": 1.0,
    "interval": None,
    "beta_hi": 2.5,
    "beta_lo": 10.0,
    "dt": 1e-4,
    "t_corr": None,
    "max_steps": 2_000_000_000,
    "epsilon": None,
    "estimator": "tilde",
    "max_cycles": 1_000_000,
    "label_mode": "geometric",
    "seed": 0,
    "out": ".",
}

TESTSYSTEM_DEFAULTS = {
    "n": [-0.5, 0.0, 0.5],
    "replicas": 10_000,
    "t_points": 60,
    "span": [1e-2, 1e2],
    "beta_hi": 2.5,
    "beta_lo": 10.0,
    "pathways": 20,
    "seed": 0,
    "out": ".",
}

VERIFY_DEFAULTS = {
    "source": "direct",
    "negative_control": False,
    "events": 5000,
    "replicas": 2000,
    "samples": 200_000,
    "alpha_direct": 0.01,
    "alpha_sde": 0.001,
    "potential": "two-saddle",
    "interval": None,
    "beta_hi": 2.5,
    "beta_lo": 10.0,
    "dt": 1e-4,
    "c": 0.2,
    "seed": 0,
    "out": ".",
}

RATES_DEFAULTS = {
    "test_system": False,
    "n": 0.0,
    "pathways": 20,
    "potential": "two-saddle",
    "c": 0.2,
    "interval": None,
    "beta_hi": 2.5,
    "beta_lo": 10.0,
    "out": None,
}

_FAMILY_INTERVALS = {"two-saddle": (-4.0, 4.0), "double-well": (-0.5, 3.0)}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="akmc",
        description="Saddle-search stopping criteria: simulation, estimators, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("search", help="run one SDE-driven saddle search with stopping")
    ps.add_argument("--config", help="JSON config file; explicit flags override it")
    ps.add_argument("--potential", choices=["two-saddle", "double-well"])
    ps.add_argument("--c", type=float, help="two-saddle asymmetry parameter")
    ps.add_argument("--interval", type=float, nargs=2, metavar=("LO", "HI"))
    ps.add_argument("--beta-hi", type=float, dest="beta_hi")
    ps.add_argument("--beta-lo", type=float, dest="beta_lo")
    ps.add_argument("--dt", type=float)
    ps.add_argument("--t-corr", type=float, dest="t_corr")
    ps.add_argument("--max-steps", type=int, dest="max_steps")
    ps.add_argument("--epsilon", type=float)
    ps.add_argument("--estimator", choices=["tilde", "hat"])
    ps.add_argument("--max-cycles", type=int, dest="max_cycles")
    ps.add_argument("--label-mode", choices=["geometric", "discovery"], dest="label_mode")
    ps.add_argument("--seed", type=int)
    ps.add_argument("--out", help="output directory")

    pt = sub.add_parser("testsystem", help="estimator-curve ensembles on the test system")
    pt.add_argument("--config")
    pt.add_argument("--n", type=float, nargs="+", help="deviation exponents")
    pt.add_argument("--replicas", type=int)
    pt.add_argument("--t-points", type=int, dest="t_points")
    pt.add_argument("--span", type=float, nargs=2, metavar=("LO", "HI"))
    pt.add_argument("--beta-hi", type=float, dest="beta_hi")
    pt.add_argument("--beta-lo", type=float, dest="beta_lo")
    pt.add_argument("--pathways", type=int)
    pt.add_argument("--seed", type=int)
    pt.add_argument("--out")

    pv = sub.add_parser("verify", help="statistical verification battery")
    pv.add_argument("--config")
    pv.add_argument("--source", choices=["direct", "sde"])
    pv.add_argument("--negative-control", action="store_true", default=None,
                    dest="negative_control",
                    help="use the deliberately broken QSD sampler (expected to fail)")
    pv.add_argument("--events", type=int)
    pv.add_argument("--replicas", type=int)
    pv.add_argument("--samples", type=int)
    pv.add_argument("--alpha-direct", type=float, dest="alpha_direct")
    pv.add_argument("--alpha-sde", type=float, dest="alpha_sde")
    pv.add_argument("--beta-hi", type=float, dest="beta_hi")
    pv.add_argument("--beta-lo", type=float, dest="beta_lo")
    pv.add_argument("--dt", type=float)
    pv.add_argument("--c", type=float)
    pv.add_argument("--seed", type=int)
    pv.add_argument("--out")

    pr = sub.add_parser("rates", help="dump a rate table as CSV")
    pr.add_argument("--config")
    pr.add_argument("--test-system", action="store_true", default=None, dest="test_system")
    pr.add_argument("--n", type=float, help="test-system deviation exponent")
    pr.add_argument("--pathways", type=int)
    pr.add_argument("--potential", choices=["two-saddle", "double-well"])
    pr.add_argument("--c", type=float)
    pr.add_argument("--interval", type=float, nargs=2, metavar=("LO", "HI"))
    pr.add_argument("--beta-hi", type=float, dest="beta_hi")
    pr.add_argument("--beta-lo", type=float, dest="beta_lo")
    pr.add_argument("--out", help="output CSV file (default: stdout)")
    return parser


def merge_config(defaults: dict, args: argparse.Namespace) -> dict:
    """defaults < config file < explicit flags."""
    merged = dict(defaults)
    path = getattr(args, "config", None)
    if path:
        try:
            with open(path) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: cannot read {path}: {exc}") from exc
        if isinstance(loaded, dict) and "config" in loaded and isinstance(loaded["config"], dict):
            loaded = loaded["config"]
        for key, value in loaded.items():
            if key in ("command",):
                continue
            if key not in merged:
                raise ConfigError(f"{key}: unknown config field")
            merged[key] = value
    for key in merged:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _require_positive(cfg: dict, *names) -> None:
    for name in names:
        value = cfg[name]
        if not isinstance(value, (int, float)) or not value > 0:
            raise ConfigError(f"{name}: must be a positive number, got {value!r}")


def _validate_betas(cfg: dict) -> None:
    _require_positive(cfg, "beta_hi", "beta_lo")
    if not cfg["beta_lo"] > cfg["beta_hi"]:
        raise ConfigError(
            f"beta_lo: must exceed beta_hi, got beta_lo={cfg['beta_lo']}, "
            f"beta_hi={cfg['beta_hi']}"
        )


def _basin_for(cfg: dict):
    potential = make_potential(cfg["potential"], **({"c": cfg["c"]} if cfg["potential"] == "two-saddle" else {}))
    interval = cfg.get("interval") or _FAMILY_INTERVALS[cfg["potential"]]
    basin = stationary_points(potential, tuple(interval))
    return potential, basin


def cmd_search(cfg: dict) -> int:
    if cfg["epsilon"] is None:
        raise ConfigError("epsilon: required (pass --epsilon or set it in the config file)")
    if not 0.0 < cfg["epsilon"] < 1.0:
        raise ConfigError(f"epsilon: must lie in (0, 1), got {cfg['epsilon']}")
    _validate_betas(cfg)
    _require_positive(cfg, "dt", "max_steps", "max_cycles")
    if cfg["t_corr"] is not None and cfg["t_corr"] < 0:
        raise ConfigError(f"t_corr: must be >= 0, got {cfg['t_corr']}")

    potential, basin = _basin_for(cfg)
    rates = rate_table_from_basin(basin, beta_lo=cfg["beta_lo"], beta_hi=cfg["beta_hi"])
    sde_cfg = SdeConfig(beta=cfg["beta_hi"], dt=cfg["dt"], t_corr=cfg["t_corr"],
                        max_steps=int(cfg["max_steps"]))
    rule = StoppingRule(epsilon=cfg["epsilon"], estimator=cfg["estimator"])
    rng = np.random.default_rng(np.random.SeedSequence(int(cfg["seed"])))
    log, trace = run_search(
        potential, basin, sde_cfg, rates, rule, rng,
        max_cycles=int(cfg["max_cycles"]), label_mode=cfg["label_mode"],
    )

    os.makedirs(cfg["out"], exist_ok=True)
    events_path = os.path.join(cfg["out"], "events.csv")
    trace_path = os.path.join(cfg["out"], "trace.csv")
    meta_path = os.path.join(cfg["out"], "metadata.json")
    log.to_csv(events_path)
    trace.to_csv(trace_path, per_pathway=True)
    final_tilde = float(trace.r_tilde[-1]) if trace.t.size else 0.0
    final_hat = float(trace.r_hat[-1]) if trace.t.size else 0.0
    write_metadata(meta_path, {
        "command": "search",
        "config": cfg,
        "results": {
            "stopping_time": log.horizon,
            "horizon": log.horizon,
            "n_events": log.n_events,
            "n_pathways_seen": log.n_pathways_seen,
            "final_r_tilde": final_tilde,
            "final_r_hat": final_hat,
        },
    })
    print(f"stopping time: {log.horizon!r}")
    print(f"events: {log.n_events}  pathways seen: {log.n_pathways_seen}")
    print(f"final R_tilde: {final_tilde!r}")
    print(f"final R_hat: {final_hat!r}")
    return 0


def cmd_testsystem(cfg: dict) -> int:
    _validate_betas(cfg)
    _require_positive(cfg, "replicas", "t_points", "pathways")
    if cfg["replicas"] < 2:
        raise ConfigError(f"replicas: need at least 2, got {cfg['replicas']}")
    span = cfg["span"]
    if not (len(span) == 2 and 0 < span[0] < span[1]):
        raise ConfigError(f"span: need 0 < LO < HI, got {span}")

    os.makedirs(cfg["out"], exist_ok=True)
    outputs = {}
    for idx, n in enumerate(cfg["n"]):
        params = TestSystemParams(n=float(n), beta_hi=cfg["beta_hi"], beta_lo=cfg["beta_lo"],
                                  n_pathways=int(cfg["pathways"]))
        grid = default_time_grid(params.rate_table(), n_points=int(cfg["t_points"]),
                                 span=(span[0], span[1]))
        stats = run_ensemble(params, grid, int(cfg["replicas"]), seed=[int(cfg["seed"]), idx])
        name = f"figure_n{float(n):g}.csv"
        export_figure_data(stats, os.path.join(cfg["out"], name))
        outputs[f"{float(n):g}"] = name
    write_metadata(os.path.join(cfg["out"], "metadata.json"), {
        "command": "testsystem",
        "config": cfg,
        "results": {"files": outputs},
    })
    for name in outputs.values():
        print(f"wrote {os.path.join(cfg['out'], name)}")
    return 0


def cmd_verify(cfg: dict) -> int:
    _validate_betas(cfg)
    _require_positive(cfg, "events", "replicas", "samples", "dt")
    for name in ("alpha_direct", "alpha_sde"):
        if not 0.0 < cfg[name] < 1.0:
            raise ConfigError(f"{name}: must lie in (0, 1), got {cfg[name]}")

    seed_seq = np.random.SeedSequence(int(cfg["seed"]))
    rng_poisson, rng_rate, rng_bounds = (
        np.random.default_rng(s) for s in seed_seq.spawn(3)
    )
    sections = {}

    if cfg["source"] == "sde" or cfg["negative_control"]:
        potential, basin = _basin_for(cfg)
        rates = rate_table_from_basin(basin, beta_lo=cfg["beta_lo"], beta_hi=cfg["beta_hi"])
        t_corr = 0.0 if cfg["negative_control"] else None
        sde_cfg = SdeConfig(beta=cfg["beta_hi"], dt=cfg["dt"], t_corr=t_corr)
        log = sde_event_log(potential, basin, sde_cfg, rates, int(cfg["events"]), rng_poisson)
        alpha = cfg["alpha_direct"] if cfg["negative_control"] else cfg["alpha_sde"]
        sections["poisson"] = verify_poisson([log], alpha=alpha)
    else:
        params = TestSystemParams(n=0.0, beta_hi=cfg["beta_hi"], beta_lo=cfg["beta_lo"])
        rt = params.rate_table()
        total = float(rt.kappa.sum())
        horizon = int(cfg["events"]) / total / 4.0
        logs = [simulate_test_system(params, horizon, rng_poisson) for _ in range(4)]
        sections["poisson"] = verify_poisson(logs, alpha=cfg["alpha_direct"], known_rate=total)

    sections["rate_estimator"] = verify_rate_est(
        [0.01, 0.1, 1.0, 5.0], int(cfg["samples"]), rng_rate
    )

    params0 = TestSystemParams(n=0.0, beta_hi=cfg["beta_hi"], beta_lo=cfg["beta_lo"])
    rt0 = params0.rate_table()
    kappa_min = float(rt0.kappa.min())
    t_grid = [-np.log(q) / kappa_min for q in (0.99, 0.5, 0.1, 0.01, 1e-3, 1e-4)]
    report = verify_error_bounds(params0, t_grid, int(cfg["replicas"]), rng_bounds)
    sections["error_bounds"] = {
        "pass": report.all_satisfied(),
        "rows": [
            {"t": r.t, "which": r.which, **r.satisfied()} for r in report.rows
        ],
    }

    overall = all(s["pass"] for s in sections.values())
    os.makedirs(cfg["out"], exist_ok=True)
    report_path = os.path.join(cfg["out"], "verify_report.json")
    write_metadata(report_path, {
        "command": "verify",
        "config": cfg,
        "pass": overall,
        "sections": sections,
    })
    report.to_csv(os.path.join(cfg["out"], "bound_report.csv"))
    for name, section in sections.items():
        print(f"{name}: {'pass' if section['pass'] else 'FAIL'}")
        if name == "poisson" and not section["pass"]:
            for test in section["tests"]:
                if not test["pass"]:
                    print(f"  failed: {test['name']} (p={test['p_value']:.3g})")
    print(f"report: {report_path}")
    return 0 if overall else 1


def cmd_rates(cfg: dict) -> int:
    _validate_betas(cfg)
    if cfg["test_system"]:
        table = build_test_system(float(cfg["n"]), n_pathways=int(cfg["pathways"]),
                                  beta_hi=cfg["beta_hi"], beta_lo=cfg["beta_lo"])
    else:
        _, basin = _basin_for(cfg)
        table = rate_table_from_basin(basin, beta_lo=cfg["beta_lo"], beta_hi=cfg["beta_hi"])
    table.to_csv(cfg["out"] if cfg["out"] else sys.stdout)
    return 0


_COMMANDS = {
    "search": (SEARCH_DEFAULTS, cmd_search),
    "testsystem": (TESTSYSTEM_DEFAULTS, cmd_testsystem),
    "verify": (VERIFY_DEFAULTS, cmd_verify),
    "rates": (RATES_DEFAULTS, cmd_rates),
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    defaults, handler = _COMMANDS[args.command]
    try:
        cfg = merge_config(defaults, args)
        return handler(cfg)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except AkmcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
