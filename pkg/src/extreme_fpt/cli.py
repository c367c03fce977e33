"""Command-line orchestration: configs, sweeps, figure data, cross-validation.

Subcommands
-----------
survival     solve one model, write the survival curve CSV
fastest      sweep N: PDE mean of the fastest FPT next to every asymptotic
regimes      sweep sigma: threshold curves; plus per-N regime statistics
mc-validate  Monte Carlo vs PDE vs limit-law means and survival checkpoints
figure       emit the CSV bundle (series + manifest) behind one paper figure

Configs are flat `key = value` files with [section] headers; unknown keys
are rejected by name. All outputs are CSV written atomically (tempfile then
rename) with 17 significant digits so re-parsing reproduces the numbers
exactly. Exit codes: 0 ok, 2 config error, 3 numerical failure, 4
unsupported-regime request.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import extremes, regimes
from .errors import ConfigError, ExtremeFptError, NumericalError, UnsupportedRegimeError
from .laws import law_to_record
from .mc import SimConfig, sample_fastest, simulate_fpt_batch
from .mesh import GridSpec
from .model import (
    AnnulusModel,
    InitialCondition,
    OUWellModel,
    mfpt_asymptotic,
    short_time_coefficients,
)
from .pde import SurvivalCurve, TimeSpec, default_time_spec, mean_fpt, mean_kth_fastest, solve_survival

_MODEL_KEYS = {"kind", "dim", "sigma", "kappa", "initial", "t_diff", "eps", "well_stiffness"}
_NUMERICS_KEYS = {
    "cells",
    "grading",
    "refine_ratio",
    "dt_initial",
    "t_final",
    "growth",
    "n_modes",
    "mc_dt",
    "mc_trials",
    "mc_max_time",
    "mc_n",
    "mc_kmax",
}
_SWEEP_KEYS = {"n_values", "n_log_range", "theta", "sigma_values", "sigma_log_range", "checkpoints"}
_OUTPUT_KEYS = {"dir"}
_SECTIONS = {
    "model": _MODEL_KEYS,
    "numerics": _NUMERICS_KEYS,
    "sweep": _SWEEP_KEYS,
    "output": _OUTPUT_KEYS,
}

_INITIALS = {
    "delta": InitialCondition.DELTA_AT_OUTER,
    "uniform": InitialCondition.UNIFORM,
    "quasistationary": InitialCondition.QUASI_STATIONARY,
}


@dataclass
class RunConfig:
    """Parsed and validated run configuration."""

    model: AnnulusModel | OUWellModel | None
    grid: GridSpec
    time: TimeSpec | None  # None means derive from the model
    n_modes: int
    mc: dict
    n_values: list[int]
    theta: float
    sigma_values: list[float]
    checkpoints: int
    out_dir: Path
    seed: int = 12345


def _parse_float(section: str, key: str, raw: str) -> float:
    token = raw.strip().lower()
    if token == "inf":
        return math.inf
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r} as a number") from exc


def _parse_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r} as an integer") from exc


def _parse_log_range(section: str, key: str, raw: str) -> list[float]:
    parts = raw.split(":")
    if len(parts) != 3:
        raise ConfigError(f"[{section}] {key}: expected lo:hi:count, got {raw!r}")
    lo = _parse_float(section, key, parts[0])
    hi = _parse_float(section, key, parts[1])
    count = _parse_int(section, key, parts[2])
    if not 0 < lo < hi or count < 2:
        raise ConfigError(f"[{section}] {key}: need 0 < lo < hi and count >= 2")
    return list(np.logspace(math.log10(lo), math.log10(hi), count))


def _build_model(items: dict[str, str]) -> AnnulusModel | OUWellModel:
    kind = items.get("kind", "annulus").strip().lower()
    t_diff = _parse_float("model", "t_diff", items.get("t_diff", "1.0"))
    dim = _parse_int("model", "dim", items.get("dim", "1"))
    if kind == "annulus":
        sigma = _parse_float("model", "sigma", items.get("sigma", "0.0"))
        kappa = _parse_float("model", "kappa", items.get("kappa", "inf"))
        initial_raw = items.get("initial", "delta").strip().lower()
        if initial_raw not in _INITIALS:
            raise ConfigError(f"[model] initial: unknown value {initial_raw!r}")
        try:
            return AnnulusModel(dim=dim, sigma=sigma, kappa=kappa, initial=_INITIALS[initial_raw], t_diff=t_diff)
        except ExtremeFptError as exc:
            raise ConfigError(f"[model] invalid annulus parameters: {exc}") from exc
    if kind == "ou":
        if "eps" not in items:
            raise ConfigError("[model] eps: required for kind = ou")
        eps = _parse_float("model", "eps", items["eps"])
        stiffness = _parse_float("model", "well_stiffness", items.get("well_stiffness", "1.0"))
        try:
            return OUWellModel(dim=dim, eps=eps, well_stiffness=stiffness, t_diff=t_diff)
        except ExtremeFptError as exc:
            raise ConfigError(f"[model] invalid well parameters: {exc}") from exc
    raise ConfigError(f"[model] kind: unknown value {kind!r}")


def parse_config(path: str | Path | None, out_override: str | None = None) -> RunConfig:
    """Read, validate, and materialize a run configuration file."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    items: dict[str, dict[str, str]] = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            parser.read(path)
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse config: {exc}") from exc
        for section in parser.sections():
            if section not in _SECTIONS:
                raise ConfigError(f"unknown config section [{section}]")
            for key in parser[section]:
                if key not in _SECTIONS[section]:
                    raise ConfigError(f"unknown key {key!r} in section [{section}]")
            items[section] = dict(parser[section])

    model_items = items.get("model")
    model = _build_model(model_items) if model_items else None

    num = items.get("numerics", {})
    grid = GridSpec(
        num_cells=_parse_int("numerics", "cells", num.get("cells", "2048")),
        grading=num.get("grading", "refined").strip(),
        refine_ratio=_parse_float("numerics", "refine_ratio", num.get("refine_ratio", "5.0")),
    )
    t_diff = model.t_diff if model is not None else 1.0
    time_spec = None
    if "dt_initial" in num or "t_final" in num or "growth" in num:
        dt0 = _parse_float("numerics", "dt_initial", num.get("dt_initial", "1e-6")) * t_diff
        t_final_raw = num.get("t_final", "auto").strip().lower()
        if t_final_raw == "auto":
            base = default_time_spec(model) if model is not None else None
            t_final = base.t_final if base is not None else 40.0 * t_diff
        else:
            t_final = _parse_float("numerics", "t_final", t_final_raw) * t_diff
        growth = _parse_float("numerics", "growth", num.get("growth", "1.05"))
        time_spec = TimeSpec(dt_initial=dt0, t_final=t_final, growth=growth)

    mc = {
        "dt": _parse_float("numerics", "mc_dt", num.get("mc_dt", "1e-4")) * t_diff,
        "max_time": _parse_float("numerics", "mc_max_time", num.get("mc_max_time", "40")) * t_diff,
        "trials": _parse_int("numerics", "mc_trials", num.get("mc_trials", "10000")),
        "n": _parse_int("numerics", "mc_n", num.get("mc_n", "100")),
        "k_max": _parse_int("numerics", "mc_kmax", num.get("mc_kmax", "1")),
    }

    sweep = items.get("sweep", {})
    if "n_values" in sweep:
        n_values = [_parse_int("sweep", "n_values", tok) for tok in sweep["n_values"].split(",") if tok.strip()]
    else:
        raw = sweep.get("n_log_range", "1:1e6:25")
        n_values = sorted({int(round(v)) for v in _parse_log_range("sweep", "n_log_range", raw)})
    if "sigma_values" in sweep:
        sigma_values = [
            _parse_float("sweep", "sigma_values", tok) for tok in sweep["sigma_values"].split(",") if tok.strip()
        ]
    else:
        sigma_values = _parse_log_range("sweep", "sigma_log_range", sweep.get("sigma_log_range", "0.005:0.5:40"))
    theta = _parse_float("sweep", "theta", sweep.get("theta", "0.5"))
    checkpoints = _parse_int("sweep", "checkpoints", sweep.get("checkpoints", "20"))

    out_dir = Path(out_override or items.get("output", {}).get("dir", "out"))
    return RunConfig(
        model=model,
        grid=grid,
        time=time_spec,
        n_modes=_parse_int("numerics", "n_modes", num.get("n_modes", "64")),
        mc=mc,
        n_values=n_values,
        theta=theta,
        sigma_values=sigma_values,
        checkpoints=checkpoints,
        out_dir=out_dir,
    )


def _format(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return f"{float(value):.17g}"


def write_csv_atomic(path: Path, header: list[str], rows) -> None:
    """Write rows to path through a temp file so reruns are idempotent."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    with open(tmp, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format(v) for v in row])
    os.replace(tmp, path)


def write_manifest_atomic(path: Path, entries: dict[str, str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    with open(tmp, "w") as fh:
        for key, value in entries.items():
            fh.write(f"{key} = {value}\n")
    os.replace(tmp, path)


def _resolve_jobs(args) -> int:
    if args.jobs is not None:
        return max(1, args.jobs)
    env = os.environ.get("EXTREME_FPT_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"EXTREME_FPT_JOBS: cannot parse {env!r} as an integer") from exc
    return 1


def _require_model(cfg: RunConfig) -> AnnulusModel | OUWellModel:
    if cfg.model is None:
        raise ConfigError("this command needs a [model] section in the config")
    return cfg.model


def _pool_map(fn, payloads: list, jobs: int) -> list:
    """Map tasks over a process pool (jobs > 1) or inline, preserving input order."""
    if jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, payloads))
    return [fn(p) for p in payloads]


# ---------------------------------------------------------------------------
# subcommands


def cmd_survival(cfg: RunConfig) -> list[Path]:
    model = _require_model(cfg)
    curve = solve_survival(model, cfg.grid, cfg.time)
    out = cfg.out_dir / "survival.csv"
    write_csv_atomic(out, ["t", "S"], zip(curve.times, curve.values))
    return [out]


def _fastest_row(curve: SurvivalCurve, model, etau: float, st, theta: float, n: int) -> list:
    mean_pde = mean_kth_fastest(curve, n, 1)
    mean_small = etau / n
    if st is not None and (st.gap == 0.0 or n >= 2):
        mean_large = extremes.large_n_moment(st, extremes.ExtremeQuery(n=n), 1.0)
    else:
        mean_large = math.nan
    mean_max = regimes.max_approximation(n, etau, model.t_diff) if n >= 2 else etau
    if isinstance(model, AnnulusModel):
        try:
            label = regimes.classify(model, n, theta, mfpt=etau).label
        except UnsupportedRegimeError:
            label = "n/a"
    else:
        label = "n/a"
    return [n, mean_pde, mean_small, mean_large, mean_max, label]


def _fastest_chunk(payload) -> list[list]:
    times, values, model, etau, st, theta, ns = payload
    curve = SurvivalCurve(times=times, values=values)
    return [_fastest_row(curve, model, etau, st, theta, n) for n in ns]


def cmd_fastest(cfg: RunConfig, jobs: int = 1) -> list[Path]:
    model = _require_model(cfg)
    curve = solve_survival(model, cfg.grid, cfg.time)
    etau = mean_fpt(curve)
    st = None
    if isinstance(model, AnnulusModel):
        try:
            st = short_time_coefficients(model)
        except UnsupportedRegimeError:
            st = None
    chunks = [list(part) for part in np.array_split(cfg.n_values, max(jobs, 1)) if len(part)]
    payloads = [(curve.times, curve.values, model, etau, st, cfg.theta, [int(n) for n in ns]) for ns in chunks]
    rows = [row for part in _pool_map(_fastest_chunk, payloads, jobs) for row in part]
    out = cfg.out_dir / "fastest.csv"
    write_csv_atomic(out, ["N", "mean_pde", "mean_small_n", "mean_large_n", "mean_max_approx", "label"], rows)
    return [out]


def _threshold_row(payload) -> list:
    model, sigma, theta = payload
    variant = AnnulusModel(dim=model.dim, sigma=sigma, kappa=model.kappa, initial=model.initial, t_diff=model.t_diff)
    try:
        n_exp = regimes.n_exp_threshold(variant, theta)
    except UnsupportedRegimeError:
        n_exp = math.nan
    try:
        n_gum = regimes.n_gum_threshold(variant, theta)
    except UnsupportedRegimeError:
        n_gum = math.nan
    return [sigma, n_exp, n_gum, regimes.n_wei_threshold(variant, theta)]


def cmd_regimes(cfg: RunConfig, jobs: int = 1) -> list[Path]:
    model = _require_model(cfg)
    if not isinstance(model, AnnulusModel):
        raise ConfigError("regime thresholds are defined for annulus models")
    payloads = [(model, sigma, cfg.theta) for sigma in cfg.sigma_values]
    threshold_rows = _pool_map(_threshold_row, payloads, jobs)
    out_thresholds = cfg.out_dir / "regime_thresholds.csv"
    write_csv_atomic(out_thresholds, ["sigma", "n_exp", "n_gum", "n_wei"], threshold_rows)

    mfpt = mfpt_asymptotic(model)
    per_n_rows = []
    for n in cfg.n_values:
        theta_exp = regimes.sufficient_exponential_stat(n, mfpt, model.t_diff)
        necessary = regimes.necessary_exponential_violated(n, mfpt, model.t_diff) if n >= 2 else math.nan
        label = regimes.classify(model, n, cfg.theta, mfpt=mfpt).label
        per_n_rows.append([n, theta_exp, necessary, label])
    out_per_n = cfg.out_dir / "regime_per_n.csv"
    write_csv_atomic(out_per_n, ["N", "theta_exp", "stat_necessary", "label"], per_n_rows)
    return [out_thresholds, out_per_n]


def cmd_mc_validate(cfg: RunConfig, seed: int) -> list[Path]:
    model = _require_model(cfg)
    curve = solve_survival(model, cfg.grid, cfg.time)

    single_cfg = SimConfig(dt=cfg.mc["dt"], max_time=cfg.mc["max_time"], trials=cfg.mc["trials"], seed=seed)
    times = simulate_fpt_batch(model, single_cfg)
    checkpoints = np.quantile(times[~np.isnan(times)], np.linspace(0.05, 0.95, cfg.checkpoints))
    surv_rows = []
    for t in checkpoints:
        s_mc = float(np.mean(np.where(np.isnan(times), True, times > t)))
        band = 3.0 * math.sqrt(max(s_mc * (1 - s_mc), 1e-12) / len(times))
        surv_rows.append([t, s_mc, band, float(curve.at(t))])
    out_surv = cfg.out_dir / "mc_survival_check.csv"
    write_csv_atomic(out_surv, ["t", "S_mc", "band3se", "S_pde"], surv_rows)

    n, k_max = cfg.mc["n"], cfg.mc["k_max"]
    fastest_cfg = SimConfig(dt=cfg.mc["dt"], max_time=cfg.mc["max_time"], trials=max(200, cfg.mc["trials"] // 10), seed=seed + 1)
    stats = sample_fastest(model, n, k_max, fastest_cfg)
    etau = mean_fpt(curve)
    label = None
    if isinstance(model, AnnulusModel):
        try:
            label = regimes.classify(model, n, cfg.theta, mfpt=etau).label
        except ExtremeFptError:
            label = None
    rows = []
    for k in range(1, k_max + 1):
        mean_pde = mean_kth_fastest(curve, n, k)
        mean_law = math.nan
        law_record = ""
        if label is not None:
            try:
                query = extremes.ExtremeQuery(n=n, k=k)
                if label == regimes.LABEL_EXPONENTIAL:
                    law = extremes.small_n_law(etau, query)
                else:
                    law = extremes.large_n_law(short_time_coefficients(model), query)
                mean_law = law.moment(1)
                law_record = json.dumps(law_to_record(law))
            except ExtremeFptError:
                pass
        rows.append(
            [
                k,
                n,
                stats.means[k - 1],
                stats.stderrs[k - 1],
                stats.censored_fraction,
                stats.trials,
                mean_pde,
                mean_law,
                law_record,
            ]
        )
    out_means = cfg.out_dir / "mc_validate.csv"
    write_csv_atomic(
        out_means,
        ["k", "N", "mean_emp", "stderr", "censored_frac", "trials", "mean_pde", "mean_law", "law_record"],
        rows,
    )
    return [out_surv, out_means]


# ---------------------------------------------------------------------------
# figure bundles


def _n_sweep(lo: float, hi: float, count: int) -> list[int]:
    return sorted({int(round(v)) for v in np.logspace(math.log10(lo), math.log10(hi), count)})


def _pde_mean_series(model, grid, time, n_values) -> tuple[list, float]:
    curve = solve_survival(model, grid, time)
    etau = mean_fpt(curve)
    rows = [[n, mean_kth_fastest(curve, n, 1)] for n in n_values]
    return rows, etau


def _figure_zoo_left(out: Path, theta: float) -> dict[str, str]:
    n_values = _n_sweep(1, 1e6, 25)
    grid = GridSpec(num_cells=4096, grading="refined", refine_ratio=10.0)
    time = TimeSpec(dt_initial=1e-8, t_final=60.0, growth=1.02)
    case1 = AnnulusModel(dim=3, sigma=0.1, kappa=math.inf, initial=InitialCondition.DELTA_AT_OUTER)
    rows1, etau = _pde_mean_series(case1, grid, time, n_values)
    fine_grid = GridSpec(num_cells=16384, grading="refined", refine_ratio=50.0)
    fine_time = TimeSpec(dt_initial=1e-12, t_final=60.0, growth=1.02)
    case3 = AnnulusModel(dim=3, sigma=0.1, kappa=math.inf, initial=InitialCondition.UNIFORM)
    rows3, _ = _pde_mean_series(case3, fine_grid, fine_time, n_values)

    st1 = short_time_coefficients(case1)
    st3 = short_time_coefficients(case3)
    asym_exp = [[n, etau / n] for n in n_values]
    asym_gum = [[n, extremes.large_n_moment(st1, extremes.ExtremeQuery(n=n), 1.0)] for n in n_values if n >= 2]
    asym_wei = [[n, extremes.large_n_moment(st3, extremes.ExtremeQuery(n=n), 1.0)] for n in n_values]

    series = {
        "case1_pde": (rows1, "solid"),
        "case3_pde": (rows3, "solid"),
        "asym_exponential": (asym_exp, "dashed"),
        "asym_gumbel": (asym_gum, "dotted"),
        "asym_weibull": (asym_wei, "dashdot"),
    }
    manifest = {
        "figure": "zoo_left",
        "panels": "1",
        "axis.x.scale": "log",
        "axis.y.scale": "log",
        "axis.x.label": "N",
        "axis.y.label": "E[T_N] / t_diff",
    }
    for name, (rows, style) in series.items():
        write_csv_atomic(out / f"{name}.csv", ["N", "mean"], rows)
        manifest[f"series.{name}.file"] = f"{name}.csv"
        manifest[f"series.{name}.style"] = style
        manifest[f"series.{name}.panel"] = "1"
    return manifest


def _figure_zoo_right(out: Path, theta: float) -> dict[str, str]:
    n_values = _n_sweep(1, 1e6, 25)
    grid = GridSpec(num_cells=4096, grading="refined", refine_ratio=10.0)
    time = TimeSpec(dt_initial=1e-8, t_final=60.0, growth=1.02)
    manifest = {
        "figure": "zoo_right",
        "panels": "1",
        "axis.x.scale": "log",
        "axis.y.scale": "log",
        "axis.x.label": "N",
        "axis.y.label": "E[T_N] / t_diff",
    }
    for sigma in (0.05, 0.1, 0.2):
        tag = f"sigma{sigma:g}".replace(".", "p")
        model = AnnulusModel(dim=3, sigma=sigma, kappa=math.inf, initial=InitialCondition.DELTA_AT_OUTER)
        rows, etau = _pde_mean_series(model, grid, time, n_values)
        approx = [[n, regimes.max_approximation(n, etau, 1.0)] for n in n_values if n >= 2]
        n_exp = regimes.n_exp_threshold(model, theta)
        n_gum = regimes.n_gum_threshold(model, theta)
        markers = [
            [n_exp, regimes.max_approximation(max(2, int(round(n_exp))), etau, 1.0), "square"],
            [n_gum, regimes.max_approximation(max(2, int(round(n_gum))), etau, 1.0), "circle"],
        ]
        write_csv_atomic(out / f"pde_{tag}.csv", ["N", "mean"], rows)
        write_csv_atomic(out / f"maxapprox_{tag}.csv", ["N", "mean"], approx)
        write_csv_atomic(out / f"markers_{tag}.csv", ["N", "mean", "marker"], markers)
        manifest[f"series.pde_{tag}.file"] = f"pde_{tag}.csv"
        manifest[f"series.pde_{tag}.style"] = "solid"
        manifest[f"series.pde_{tag}.panel"] = "1"
        manifest[f"series.maxapprox_{tag}.file"] = f"maxapprox_{tag}.csv"
        manifest[f"series.maxapprox_{tag}.style"] = "dashed"
        manifest[f"series.maxapprox_{tag}.panel"] = "1"
        manifest[f"series.markers_{tag}.file"] = f"markers_{tag}.csv"
        manifest[f"series.markers_{tag}.style"] = "markers"
        manifest[f"series.markers_{tag}.panel"] = "1"
        manifest[f"marker.{tag}.n_exp"] = _format(n_exp)
        manifest[f"marker.{tag}.n_gum"] = _format(n_gum)
    return manifest


def _figure_kappa(out: Path, theta: float) -> dict[str, str]:
    n_values = _n_sweep(1, 1e6, 25)
    grid = GridSpec(num_cells=8192, grading="refined", refine_ratio=20.0)
    time = TimeSpec(dt_initial=1e-10, t_final=2000.0, growth=1.03)
    manifest = {
        "figure": "kappa",
        "panels": "1",
        "axis.x.scale": "log",
        "axis.y.scale": "log",
        "axis.x.label": "N",
        "axis.y.label": "E[T_N] / t_diff",
    }
    for kappa in (1e-2, 1e2):
        ktag = f"kappa{kappa:g}".replace(".", "p").replace("+", "").replace("-", "m")
        for initial, itag in ((InitialCondition.DELTA_AT_OUTER, "delta"), (InitialCondition.UNIFORM, "uniform")):
            model = AnnulusModel(dim=1, sigma=0.1, kappa=kappa, initial=initial, t_diff=1.0)
            rows, etau = _pde_mean_series(model, grid, time, n_values)
            st = short_time_coefficients(model)
            if st.gap > 0:
                theory = [[n, extremes.large_n_moment(st, extremes.ExtremeQuery(n=n), 1.0)] for n in n_values if n >= 2]
            else:
                theory = [[n, extremes.large_n_moment(st, extremes.ExtremeQuery(n=n), 1.0)] for n in n_values]
            name = f"pde_{itag}_{ktag}"
            tname = f"theory_{itag}_{ktag}"
            write_csv_atomic(out / f"{name}.csv", ["N", "mean"], rows)
            write_csv_atomic(out / f"{tname}.csv", ["N", "mean"], theory)
            manifest[f"series.{name}.file"] = f"{name}.csv"
            manifest[f"series.{name}.style"] = "solid"
            manifest[f"series.{name}.panel"] = "1"
            manifest[f"series.{tname}.file"] = f"{tname}.csv"
            manifest[f"series.{tname}.style"] = "plus"
            manifest[f"series.{tname}.panel"] = "1"
            if initial is InitialCondition.DELTA_AT_OUTER:
                small = [[n, etau / n] for n in n_values]
                sname = f"asym_exponential_{ktag}"
                write_csv_atomic(out / f"{sname}.csv", ["N", "mean"], small)
                manifest[f"series.{sname}.file"] = f"{sname}.csv"
                manifest[f"series.{sname}.style"] = "dashed"
                manifest[f"series.{sname}.panel"] = "1"
    return manifest


def _figure_regime(out: Path, theta: float) -> dict[str, str]:
    sigmas = np.logspace(math.log10(0.003), math.log10(0.5), 60)
    manifest = {
        "figure": "regime",
        "panels": "2",
        "axis.x.scale": "log",
        "axis.y.scale": "log",
        "axis.x.label": "sigma",
        "axis.y.label": "N",
        "theta": _format(theta),
    }
    for panel, kappa, ptag in ((1, math.inf, "kinf"), (2, 1.0, "k1")):
        rows_exp, rows_gum, rows_wei = [], [], []
        for sigma in sigmas:
            model = AnnulusModel(dim=3, sigma=float(sigma), kappa=kappa)
            rows_exp.append([sigma, regimes.n_exp_threshold(model, theta)])
            rows_gum.append([sigma, regimes.n_gum_threshold(model, theta)])
            rows_wei.append([sigma, regimes.n_wei_threshold(model, theta)])
        for name, rows, style in (
            (f"nexp_{ptag}", rows_exp, "dashed"),
            (f"ngum_{ptag}", rows_gum, "dotted"),
            (f"nwei_{ptag}", rows_wei, "solid"),
        ):
            write_csv_atomic(out / f"{name}.csv", ["sigma", "n"], rows)
            manifest[f"series.{name}.file"] = f"{name}.csv"
            manifest[f"series.{name}.style"] = style
            manifest[f"series.{name}.panel"] = str(panel)
    return manifest


_FIGURES = {
    "regime": _figure_regime,
    "zoo_left": _figure_zoo_left,
    "zoo_right": _figure_zoo_right,
    "kappa": _figure_kappa,
}


def cmd_figure(figure_id: str, out_dir: Path, theta: float) -> list[Path]:
    if figure_id not in _FIGURES:
        raise ConfigError(f"unknown figure id {figure_id!r}; choose from {sorted(_FIGURES)}")
    bundle = out_dir / f"figure_{figure_id}"
    manifest = _FIGURES[figure_id](bundle, theta)
    write_manifest_atomic(bundle / "manifest.txt", manifest)
    return [bundle / "manifest.txt"]


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="extreme-fpt", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("survival", "fastest", "regimes", "mc-validate", "figure"):
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None, help="key=value config file")
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--jobs", type=int, default=None, help="worker pool size (env EXTREME_FPT_JOBS)")
        p.add_argument("--seed", type=int, default=12345, help="base random seed")
        p.add_argument("--theta", type=float, default=None, help="regime tolerance override")
        if name == "figure":
            p.add_argument("--figure", required=True, choices=sorted(_FIGURES), help="figure id")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config, out_override=str(args.out) if args.out else None)
        cfg.seed = args.seed
        if args.theta is not None:
            cfg.theta = args.theta
        jobs = _resolve_jobs(args)
        if args.command == "survival":
            written = cmd_survival(cfg)
        elif args.command == "fastest":
            written = cmd_fastest(cfg, jobs)
        elif args.command == "regimes":
            written = cmd_regimes(cfg, jobs)
        elif args.command == "mc-validate":
            written = cmd_mc_validate(cfg, cfg.seed)
        else:
            written = cmd_figure(args.figure, cfg.out_dir, cfg.theta)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedRegimeError as exc:
        print(f"unsupported regime: {exc}", file=sys.stderr)
        return 4
    except (NumericalError, ExtremeFptError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
