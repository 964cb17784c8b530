"""Scenario runners: each writes its data files and a manifest into one directory.

Data files carry no timestamps, so identical config and seed give
byte-identical data. Run time and checksums live in ``manifest.json``.
"""
from __future__ import annotations

import datetime as _dt
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .. import __version__, io
from ..ai_dynamics import AiScenario, PuncturedKind, ai_moments, punctured_times_until
from ..errors import ConfigError
from ..exact import (
    GridSpec,
    moment_minima,
    moments,
    principal_variances,
    ridge_angle,
    rotation_angle,
    unwrap_angles,
    wigner,
)
from ..kibble_zurek import RampSpec, Regime, classify_regime, freeze_out_time, relaxation_time
from ..microcrystal import ChainParams, diagonalization_frequencies, phonon_dispersion
from ..tomography import SparseCoverageWarning, marginals, reconstruct, sample_quadratures, uniform_angles
from .config import ScenarioConfig


def _map(fn, items, workers: int) -> list:
    """Ordered parallel map; results come back in input order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _scenario_info(s: AiScenario, t_start_reduced: float) -> dict:
    return {
        "n_atoms": s.big_n,
        "delta": s.ramp.delta,
        "t0": s.ramp.t0,
        "b0": s.ramp.b0,
        "t_hat": s.t_hat,
        "omega0": s.omega0,
        "t0_over_that": s.t0_reduced,
        "regime_at_t_start": classify_regime(s.ramp, max(t_start_reduced * s.t_hat, s.ramp.t0)).value,
    }


def time_grid(cfg: ScenarioConfig, s: AiScenario) -> np.ndarray:
    """Sample times in units of t_hat for one scenario."""
    tg = cfg.time_grid
    start = s.t0_reduced if tg.t_start is None else tg.t_start
    if tg.n_samples == 1:
        return np.array([start])
    if tg.spacing == "log":
        return np.geomspace(start, tg.t_end, tg.n_samples)
    return np.linspace(start, tg.t_end, tg.n_samples)


def write_manifest(out: Path, cfg: ScenarioConfig, command: str, scenarios: list[dict], files: list[Path],
                   extra: dict | None = None) -> Path:
    manifest = {
        "command": command,
        "config": cfg.to_dict(),
        "scenarios": scenarios,
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "outputs": {p.name: io.sha256(p) for p in sorted(files)},
    }
    if extra:
        manifest.update(extra)
    return io.write_json(out / "manifest.json", manifest)


def _time_scale(cfg: ScenarioConfig, s: AiScenario) -> float:
    return s.t_hat if cfg.outputs.absolute_times else 1.0


def _dynamics_one(cfg: ScenarioConfig, idx: int, s: AiScenario, out: Path) -> list[Path]:
    tr = time_grid(cfg, s)
    t = tr * s.t_hat
    # the first sample sits at t0 up to rounding of t0/t_hat
    t = np.maximum(t, s.ramp.t0)
    dq2_ai, dpi2_ai = ai_moments(s, t)
    dq2, dpi2 = moments(s, t)
    dq2, dpi2 = np.atleast_1d(dq2), np.atleast_1d(dpi2)
    theta = np.atleast_1d(rotation_angle(s, t))
    scale = _time_scale(cfg, s)
    series = io.write_table(
        out / f"dynamics_{idx:02d}.csv",
        ["t_over_that" if scale == 1.0 else "t", "inv_dq2_ai", "inv_dpi2_ai", "product_ai",
         "inv_dq2_exact", "inv_dpi2_exact", "product_exact", "theta_wrapped", "theta_unwrapped"],
        [tr * scale, 1 / dq2_ai, 1 / dpi2_ai, dq2_ai * dpi2_ai,
         1 / dq2, 1 / dpi2, dq2 * dpi2, theta, unwrap_angles(theta)],
    )

    rows = {"kind": [], "kappa": [], "t_ai": [], "t_exact_minimum": []}
    t_end = float(t[-1])
    if s.t0_reduced < 1.0 and t.size >= 3:
        for kind, which in ((PuncturedKind.LOCALIZATION, "q"), (PuncturedKind.REVIVAL, "p")):
            ai = punctured_times_until(kind, t_end, s.t_hat)
            exact = moment_minima(s, t, which)
            for k, ta in enumerate(ai):
                # exact minimum nearest to the prediction, if any
                te = exact[np.argmin(np.abs(exact - ta))] if exact.size else math.nan
                rows["kind"].append(kind.value)
                rows["kappa"].append(k)
                rows["t_ai"].append(ta / s.t_hat * scale)
                rows["t_exact_minimum"].append(te / s.t_hat * scale)
    punct = io.write_table(out / f"punctured_{idx:02d}.csv", list(rows), list(rows.values()))
    return [series, punct]


def run_dynamics(cfg: ScenarioConfig, out: Path) -> list[Path]:
    out = Path(out)
    scenarios = cfg.scenarios()
    results = _map(lambda a: _dynamics_one(cfg, a[0], a[1], out), enumerate(scenarios), cfg.workers)
    files = [p for r in results for p in r]
    info = [_scenario_info(s, time_grid(cfg, s)[0]) for s in scenarios]
    write_manifest(out, cfg, "dynamics", info, files)
    return files


def _wigner_one(cfg: ScenarioConfig, idx: int, s: AiScenario, out: Path) -> list[Path]:
    times = [float(x) for x in cfg.wigner.times]
    for x in times:
        if x < s.t0_reduced * (1 - 1e-12):
            raise ConfigError(f"time {x} precedes t0/t_hat = {s.t0_reduced:.6g}", field="wigner.times")
    spec = GridSpec(cfg.grid.n_points, cfg.grid.window_sigmas)
    grids = _map(lambda x: wigner(s, max(x * s.t_hat, s.ramp.t0), spec), times, cfg.workers)
    files = []
    summary = {k: [] for k in ("t_over_that", "var_minor", "var_major", "aspect_ratio",
                               "ridge_angle", "arctan_im_omega", "ridge_angle_rescaled")}
    scale = _time_scale(cfg, s)
    for j, (x, g) in enumerate(zip(times, grids)):
        files.extend(io.write_wigner(out / f"wigner_{idx:02d}_{j:03d}", g))
        minor, major, _ = principal_variances(g)
        summary["t_over_that"].append(x * scale)
        summary["var_minor"].append(minor)
        summary["var_major"].append(major)
        summary["aspect_ratio"].append(minor / major)
        summary["ridge_angle"].append(ridge_angle(g))
        summary["arctan_im_omega"].append(float(rotation_angle(s, g.t)))
        summary["ridge_angle_rescaled"].append(ridge_angle(g, physical=False))
    if times:
        header = list(summary)
        if scale != 1.0:
            header[0] = "t"
        files.append(io.write_table(out / f"wigner_{idx:02d}_summary.csv", header, list(summary.values())))
    return files


def run_wigner(cfg: ScenarioConfig, out: Path) -> list[Path]:
    out = Path(out)
    scenarios = cfg.scenarios()
    # scenarios run serially here; the times inside each are mapped in parallel
    files = [p for i, s in enumerate(scenarios) for p in _wigner_one(cfg, i, s, out)]
    info = [_scenario_info(s, max(s.t0_reduced, min(cfg.wigner.times, default=s.t0_reduced)))
            for s in scenarios]
    out.mkdir(parents=True, exist_ok=True)
    write_manifest(out, cfg, "wigner", info, files)
    return files


def _tomography_time(cfg: ScenarioConfig, s: AiScenario) -> float:
    tm = cfg.tomography.time
    if tm is None:
        return s.t0_reduced
    if tm < s.t0_reduced * (1 - 1e-12):
        raise ConfigError(f"time {tm} precedes t0/t_hat = {s.t0_reduced:.6g}", field="tomography.time")
    return float(tm)


def _tomography_one(cfg: ScenarioConfig, idx: int, s: AiScenario, out: Path) -> list[Path]:
    tc = cfg.tomography
    x = _tomography_time(cfg, s)
    ref = wigner(s, max(x * s.t_hat, s.ramp.t0), GridSpec(tc.n_points, cfg.grid.window_sigmas))
    quads = marginals(ref, uniform_angles(tc.angles))
    files = [io.write_quadratures(out / f"quadratures_{idx:02d}.csv", quads)]
    data = quads
    if tc.samples_per_angle > 0:
        # one seed stream per scenario, split per angle inside the sampler
        seed = np.random.SeedSequence(tc.seed).spawn(idx + 1)[idx]
        data = sample_quadratures(quads, tc.samples_per_angle, seed)
        files.append(io.write_samples(out / f"samples_{idx:02d}.csv", data.angles, data.samples))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SparseCoverageWarning)
        report = reconstruct(data, reference=ref, filter=tc.filter, cutoff=tc.cutoff)
    files.extend(io.write_wigner(out / f"reconstruction_{idx:02d}", report.grid))
    files.extend(io.write_wigner(out / f"reference_{idx:02d}", ref))
    files.append(io.write_json(out / f"report_{idx:02d}.json", {
        "t_over_that": x,
        "l2_error": report.l2_error,
        "sup_error": report.sup_error,
        "angles_used": report.angles_used,
        "filter": report.filter,
        "cutoff": tc.cutoff,
        "sparse": report.sparse,
        "samples_per_angle": tc.samples_per_angle,
    }))
    return files


def run_tomography(cfg: ScenarioConfig, out: Path) -> list[Path]:
    out = Path(out)
    scenarios = cfg.scenarios()
    results = _map(lambda a: _tomography_one(cfg, a[0], a[1], out), enumerate(scenarios), cfg.workers)
    files = [p for r in results for p in r]
    info = [_scenario_info(s, _tomography_time(cfg, s)) for s in scenarios]
    write_manifest(out, cfg, "tomography", info, files)
    return files


def _log_grid(lo: float, hi: float, n: int, include_one: bool) -> np.ndarray:
    g = np.geomspace(lo, hi, n)
    if include_one and lo <= 1.0 <= hi:
        g = np.union1d(g, [1.0])
    return g


def run_regimes(cfg: ScenarioConfig, out: Path) -> list[Path]:
    """Regime label for every (t/t_hat, t0/t_hat) cell with t >= t0, and the tau(t) curves."""
    out = Path(out)
    r = cfg.regimes
    ts = _log_grid(r.t_range[0], r.t_range[1], r.n_t, include_one=True)
    t0s = _log_grid(r.t0_range[0], r.t0_range[1], r.n_t0, include_one=False)
    cols = {k: [] for k in ("delta", "t_over_that", "t0_over_that", "regime")}
    tau = {k: [] for k in ("delta", "t_over_that", "tau_over_that", "t_over_tau")}
    for d in r.deltas:
        th = freeze_out_time(d)
        for t0r in t0s:
            ramp = RampSpec.from_t0(d, t0r * th)
            for tr in ts:
                if tr < t0r:
                    continue
                # t = t_hat exactly on the boundary column
                t = th if tr == 1.0 else tr * th
                cols["delta"].append(d)
                cols["t_over_that"].append(tr)
                cols["t0_over_that"].append(t0r)
                cols["regime"].append(classify_regime(ramp, t).value)
        for tr in ts:
            tt = relaxation_time(d, tr * th)
            tau["delta"].append(d)
            tau["t_over_that"].append(tr)
            tau["tau_over_that"].append(tt / th)
            tau["t_over_tau"].append(tr * th / tt)
    if cfg.outputs.absolute_times:
        th = np.array([freeze_out_time(d) for d in cols["delta"]])
        cols["t_over_that"] = list(np.array(cols["t_over_that"]) * th)
        cols["t0_over_that"] = list(np.array(cols["t0_over_that"]) * th)
        thc = np.array([freeze_out_time(d) for d in tau["delta"]])
        tau["t_over_that"] = list(np.array(tau["t_over_that"]) * thc)
        tau["tau_over_that"] = list(np.array(tau["tau_over_that"]) * thc)
    names = {"t_over_that": "t", "t0_over_that": "t0", "tau_over_that": "tau"} if cfg.outputs.absolute_times else {}
    files = [
        io.write_table(out / "regimes.csv", [names.get(k, k) for k in cols], list(cols.values())),
        io.write_table(out / "tau_curve.csv", [names.get(k, k) for k in tau], list(tau.values())),
    ]
    write_manifest(out, cfg, "regimes", [], files,
                   extra={"regime_labels": [x.value for x in Regime]})
    return files


def run_dispersion(cfg: ScenarioConfig, out: Path) -> list[Path]:
    out = Path(out)
    m = cfg.model
    params = ChainParams(cfg.dispersion.n_atoms, m.kappa, m.mass, m.lattice_const)
    modes = phonon_dispersion(params)
    # rank matching: both spectra sorted ascending, modes listed in that order
    order = np.argsort([md.energy for md in modes], kind="stable")
    modes = [modes[i] for i in order]
    diag = np.sort(diagonalization_frequencies(params))
    eps = np.array([md.energy for md in modes])
    files = [io.write_table(
        out / "dispersion.csv",
        ["k", "a_k", "b_k", "eps_bogoliubov", "eps_diagonalization", "abs_diff", "zero_mode"],
        [[md.k for md in modes], [md.a_k for md in modes], [md.b_k for md in modes],
         eps, diag, np.abs(eps - diag), [md.is_zero_mode for md in modes]],
    )]
    write_manifest(out, cfg, "dispersion", [], files,
                   extra={"chain": {"n_atoms": params.n_atoms, "kappa": params.kappa,
                                    "mass": params.mass, "lattice_const": params.lattice_const}})
    return files


RUNNERS = {
    "dynamics": run_dynamics,
    "wigner": run_wigner,
    "tomography": run_tomography,
    "regimes": run_regimes,
    "dispersion": run_dispersion,
}
