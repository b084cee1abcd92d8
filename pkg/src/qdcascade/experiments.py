"""Experiment orchestration: config documents, run kinds, CSV/JSON outputs.

Each run reads a YAML config, executes one of the run kinds and writes its
outputs plus a manifest (config hash, constants, grid settings, versions)
into the output directory.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import scipy
import yaml

from . import __version__
from .constants import HBAR
from .correlations import (
    CorrelationEngine,
    CorrelationGrid,
    DegenerateEmissionError,
)
from .dynamics import TimeGrid, evolve
from .entanglement import concurrence
from .hilbert import BasisState, DotLevel, Truncation
from .model import (
    CavityParams,
    Scenario,
    scenario_from_dict,
    scenario_to_dict,
)
from .optimizer import SearchSpec, biexciton_map, map_to_csv, optimize_second_pulse

RUN_KINDS = (
    "dynamics",
    "concurrence",
    "map_concurrence",
    "map_biexciton",
    "sweep_g",
    "validate_truncation",
    "optimize",
)

# desk-scale map axes; the full-resolution grid is behind grid_scale="fine"
COARSE_DELTA_B = (0.5, 1.0, 1.5, 2.5, 4.0)
COARSE_ALPHA1 = (5.0, 10.0, 20.0, 25.0, 32.0)
FINE_DELTA_B = tuple(np.round(np.arange(0.5, 6.01, 0.5), 3))
FINE_ALPHA1 = tuple(np.round(np.arange(2.0, 35.01, 3.0), 3))
DEFAULT_SWEEP_G = (0.0, 0.03, 0.06, 0.1, 0.15, 0.2, 0.3, 0.5, 0.75, 1.0)


class ConfigError(ValueError):
    """Config validation failure with a field-level message."""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass
class ExperimentConfig:
    run: str
    scenario: Scenario
    out_dir: Path = Path("out")
    rho0: str = "ground"            # ground | biexciton
    window: float = 600.0           # correlation window length, ps
    dt: float = 1.0                 # outer-time step, ps
    dtau: float = 0.5               # delay step, ps
    dyn_t_end: float | None = None  # dynamics window override
    dyn_dt_out: float = 1.0
    grid_scale: str = "coarse"      # coarse | fine
    delta_b_values: tuple = ()
    alpha1_values: tuple = ()
    sweep_g_values: tuple = ()
    search: dict = field(default_factory=dict)
    threads: int = 1
    export_g2: bool = False
    raw: dict = field(default_factory=dict)

    def correlation_grid(self) -> CorrelationGrid:
        return CorrelationGrid.for_scenario(
            self.scenario, window=self.window, dt=self.dt, dtau=self.dtau
        )

    def map_axes(self) -> tuple[tuple, tuple]:
        if self.delta_b_values and self.alpha1_values:
            return self.delta_b_values, self.alpha1_values
        if self.grid_scale == "fine":
            return FINE_DELTA_B, FINE_ALPHA1
        return COARSE_DELTA_B, COARSE_ALPHA1

    def search_spec(self) -> SearchSpec:
        known = {f.name for f in dataclasses.fields(SearchSpec)}
        bad = set(self.search) - known
        if bad:
            raise ConfigError("search", f"unknown fields {sorted(bad)}")
        spec = SearchSpec(**self.search)
        if self.scenario.pulses:
            p1 = self.scenario.pulses[0]
            spec = replace(
                spec,
                delta_b=self.scenario.dot.delta_b,
                alpha1=p1.alpha,
                delta1=p1.delta,
                sigma=p1.sigma,
                t0=p1.t0,
                **{k: v for k, v in self.search.items()},
            )
        return spec

    def initial_state(self) -> np.ndarray:
        space = self.scenario.space()
        level = {"ground": DotLevel.G, "biexciton": DotLevel.B}.get(self.rho0)
        if level is None:
            raise ConfigError("rho0", f"unknown initial state {self.rho0!r}")
        i = space.index(BasisState(level, 0, 0))
        rho = np.zeros((space.dim, space.dim), dtype=complex)
        rho[i, i] = 1.0
        return rho


def load_config(path, **overrides) -> ExperimentConfig:
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "config must be a mapping")
    return config_from_dict(doc, **overrides)


def config_from_dict(doc: dict, **overrides) -> ExperimentConfig:
    run = overrides.pop("run", doc.get("run"))
    if run not in RUN_KINDS:
        raise ConfigError("run", f"must be one of {RUN_KINDS}, got {run!r}")
    if "scenario" not in doc:
        raise ConfigError("scenario", "missing scenario section")
    try:
        scenario = scenario_from_dict(doc["scenario"])
    except ValueError as exc:
        raise ConfigError("scenario", str(exc)) from exc
    grid = doc.get("grid", {}) or {}
    cfg = ExperimentConfig(
        run=run,
        scenario=scenario,
        out_dir=Path(doc.get("out_dir", "out")),
        rho0=doc.get("rho0", "ground"),
        window=float(grid.get("window_ps", 600.0)),
        dt=float(grid.get("dt_ps", 1.0)),
        dtau=float(grid.get("dtau_ps", 0.5)),
        dyn_t_end=grid.get("dynamics_t_end_ps"),
        dyn_dt_out=float(grid.get("dynamics_dt_out_ps", 1.0)),
        grid_scale=doc.get("grid_scale", "coarse"),
        delta_b_values=tuple(doc.get("map", {}).get("delta_b_mev", ())),
        alpha1_values=tuple(doc.get("map", {}).get("alpha1_pi", ())),
        sweep_g_values=tuple(doc.get("sweep", {}).get("g_mev", ())),
        search=doc.get("search", {}) or {},
        export_g2=bool(doc.get("export_g2", False)),
        raw=doc,
    )
    for key, val in overrides.items():
        if val is not None:
            setattr(cfg, key, val)
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    if cfg.grid_scale not in ("coarse", "fine"):
        raise ConfigError("grid_scale", "must be 'coarse' or 'fine'")
    if cfg.rho0 not in ("ground", "biexciton"):
        raise ConfigError("rho0", "must be 'ground' or 'biexciton'")
    if cfg.run in ("dynamics", "concurrence") and not cfg.scenario.pulses \
            and cfg.rho0 == "ground":
        raise ConfigError(
            "scenario.pulses",
            f"run kind {cfg.run!r} needs pulses or rho0: biexciton",
        )
    if cfg.run == "sweep_g" and cfg.scenario.cavity is None:
        raise ConfigError("scenario.cavity", "sweep_g requires a cavity section")
    if cfg.run in ("map_concurrence", "map_biexciton", "optimize") and len(cfg.scenario.pulses) < 1:
        raise ConfigError(
            "scenario.pulses", f"run kind {cfg.run!r} needs the first SUPER pulse"
        )


# --- outputs -----------------------------------------------------------------

def write_csv(path, header: list[str], rows) -> None:
    """Schema-checked CSV writer: row width and finiteness validated."""
    rows = list(rows)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row width {len(row)} != header width {len(header)}")
        for cell in row:
            if isinstance(cell, float) and not math.isfinite(cell):
                raise ValueError(f"non-finite value in CSV row: {row}")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _config_hash(cfg: ExperimentConfig) -> str:
    blob = json.dumps(cfg.raw, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()


def write_manifest(cfg: ExperimentConfig, outputs: list[str]) -> Path:
    manifest = {
        "run": cfg.run,
        "config_sha256": _config_hash(cfg),
        "scenario": scenario_to_dict(cfg.scenario),
        "grid": {
            "window_ps": cfg.window,
            "dt_ps": cfg.dt,
            "dtau_ps": cfg.dtau,
            "dynamics_dt_out_ps": cfg.dyn_dt_out,
        },
        "constants": {"hbar_mev_ps": HBAR},
        "versions": {
            "qdcascade": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "outputs": outputs,
    }
    path = cfg.out_dir / "manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
    return path


def _prepare_out(cfg: ExperimentConfig) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)


# --- run kinds ---------------------------------------------------------------

def run_dynamics(cfg: ExperimentConfig) -> dict:
    _prepare_out(cfg)
    sc = cfg.scenario
    if sc.pulses:
        t_start = min(p.t0 - 4 * p.sigma for p in sc.pulses)
        anchor = min(p.t0 for p in sc.pulses)
    else:
        t_start = anchor = 0.0
    t_end = anchor + (cfg.dyn_t_end if cfg.dyn_t_end is not None else 600.0)
    grid = TimeGrid(t_start, t_end, cfg.dyn_dt_out)
    traj = evolve(cfg.initial_state(), sc, grid)
    out = cfg.out_dir / "trajectory.csv"
    write_csv(
        out,
        ["t_ps", "occ_G", "occ_X", "occ_Y", "occ_B", "N_X", "N_Y"],
        [
            [
                float(traj.times[i]),
                *[float(traj.occupations[k][i]) for k in ("G", "X", "Y", "B")],
                float(traj.n_x[i]),
                float(traj.n_y[i]),
            ]
            for i in range(len(traj.times))
        ],
    )
    write_manifest(cfg, [out.name])
    return {"trajectory": out, "final_occ_B": float(traj.occupations["B"][-1])}


def run_concurrence(cfg: ExperimentConfig) -> dict:
    _prepare_out(cfg)
    engine = CorrelationEngine(
        cfg.scenario, cfg.correlation_grid(), rho0=cfg.initial_state()
    )
    m = engine.two_photon_matrix()
    res = concurrence(m.matrix)
    payload = {
        "concurrence": res.value,
        "sqrt_eigenvalues": list(res.sqrt_eigenvalues),
        "two_photon_matrix": m.to_jsonable(),
    }
    if cfg.scenario.cavity is not None and cfg.scenario.cavity.g > 0:
        payload["pair_counts"] = engine.pair_counts()
    out = cfg.out_dir / "concurrence.json"
    with open(out, "w") as fh:
        json.dump(payload, fh, indent=2)
    outputs = [out.name]
    if cfg.export_g2:
        g2_path = cfg.out_dir / "g2_slices.csv"
        engine.export_g2_csv(g2_path, t_stride=1, tau_stride=10)
        outputs.append(g2_path.name)
    write_manifest(cfg, outputs)
    return {"concurrence": res.value, "json": out, "engine": engine}


def _concurrence_cell(args) -> dict:
    (db, a1, search, scenario_doc, window, dt, dtau) = args
    spec = replace(search, delta_b=float(db), alpha1=float(a1))
    opt = optimize_second_pulse(spec)
    doc = dict(scenario_doc)
    doc["dot"] = dict(doc.get("dot", {}), delta_b_mev=float(db))
    doc["pulses"] = [
        {"alpha_pi": float(a1), "sigma_ps": spec.sigma,
         "delta_mev": spec.delta1, "t0_ps": spec.t0},
        {"alpha_pi": opt.alpha2, "sigma_ps": spec.sigma,
         "delta_mev": opt.delta2, "t0_ps": spec.t0},
    ]
    scenario = scenario_from_dict(doc)
    grid = CorrelationGrid.for_scenario(scenario, window=window, dt=dt, dtau=dtau)
    try:
        m = CorrelationEngine(scenario, grid).two_photon_matrix()
        c = concurrence(m.matrix).value
    except DegenerateEmissionError:
        c = float("nan")
    return {
        "delta_b_mev": float(db),
        "alpha1_pi": float(a1),
        "alpha2_pi": opt.alpha2,
        "delta2_mev": opt.delta2,
        "b_final": opt.b_final,
        "concurrence": c,
    }


def _parallel_map(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_map_concurrence(cfg: ExperimentConfig) -> dict:
    _prepare_out(cfg)
    db_axis, a1_axis = cfg.map_axes()
    search = cfg.search_spec()
    scenario_doc = scenario_to_dict(cfg.scenario)
    jobs = [
        (db, a1, search, scenario_doc, cfg.window, cfg.dt, cfg.dtau)
        for db in db_axis
        for a1 in a1_axis
    ]
    rows = _parallel_map(_concurrence_cell, jobs, cfg.threads)
    out = cfg.out_dir / "concurrence_map.csv"
    header = ["delta_b_mev", "alpha1_pi", "alpha2_pi", "delta2_mev",
              "b_final", "concurrence"]
    write_csv(out, header, [[r[k] for k in header] for r in rows
                            if math.isfinite(r["concurrence"])])
    write_manifest(cfg, [out.name])
    return {"map": out, "rows": rows}


def run_map_biexciton(cfg: ExperimentConfig) -> dict:
    _prepare_out(cfg)
    db_axis, a1_axis = cfg.map_axes()
    search = cfg.search_spec()
    if cfg.threads > 1:
        jobs = [
            replace(search, delta_b=float(db), alpha1=float(a1))
            for db in db_axis
            for a1 in a1_axis
        ]
        results = _parallel_map(optimize_second_pulse, jobs, cfg.threads)
        from .optimizer import MapCell
        cells = [
            MapCell(s.delta_b, s.alpha1, r) for s, r in zip(jobs, results)
        ]
    else:
        cells = biexciton_map(db_axis, a1_axis, search)
    out = cfg.out_dir / "biexciton_map.csv"
    map_to_csv(cells, out)
    write_manifest(cfg, [out.name])
    return {"map": out, "cells": cells}


def _sweep_point(args) -> dict:
    scenario_doc, g, window, dt, dtau = args
    doc = dict(scenario_doc)
    doc["cavity"] = dict(doc["cavity"], g_mev=float(g))
    scenario = scenario_from_dict(doc)
    grid = CorrelationGrid.for_scenario(scenario, window=window, dt=dt, dtau=dtau)
    engine = CorrelationEngine(scenario, grid)
    row = {"g_mev": float(g)}
    try:
        m = engine.two_photon_matrix()
        row["concurrence"] = concurrence(m.matrix).value
        row.update({f"n_pair_{k.lower()}": v for k, v in engine.pair_counts().items()})
    except DegenerateEmissionError:
        row["concurrence"] = float("nan")
        row.update({f"n_pair_{k.lower()}": 0.0 for k in ("XX", "XY", "YX", "YY")})
    return row


def run_sweep_g(cfg: ExperimentConfig) -> dict:
    _prepare_out(cfg)
    g_values = cfg.sweep_g_values or DEFAULT_SWEEP_G
    scenario_doc = scenario_to_dict(cfg.scenario)
    jobs = [(scenario_doc, g, cfg.window, cfg.dt, cfg.dtau) for g in g_values]
    rows = _parallel_map(_sweep_point, jobs, cfg.threads)
    out = cfg.out_dir / "sweep_g.csv"
    header = ["g_mev", "concurrence", "n_pair_xx", "n_pair_xy",
              "n_pair_yx", "n_pair_yy"]
    write_csv(
        out, header,
        [[(0.0 if k == "concurrence" and not math.isfinite(r[k]) else r[k])
          for k in header] for r in rows],
    )
    write_manifest(cfg, [out.name])
    return {"sweep": out, "rows": rows}


def run_validate_truncation(cfg: ExperimentConfig) -> dict:
    _prepare_out(cfg)
    if cfg.scenario.cavity is None:
        raise ConfigError("scenario.cavity", "truncation validation needs a cavity")
    names = ("reduced18", "full2", "full3")
    curves = {}
    for name in names:
        sc = replace(cfg.scenario, truncation=Truncation.from_name(name))
        engine = CorrelationEngine(
            sc, CorrelationGrid.for_scenario(sc, window=cfg.window,
                                             dt=cfg.dt, dtau=cfg.dtau)
        )
        curves[name] = {
            "times": engine.trajectory.times,
            "n_x": engine.trajectory.n_x,
            "g2_xxxx_tau0": engine.g2_tau0_series("X", "X", "X", "X").real,
            "engine": engine,
        }
    out_csv = cfg.out_dir / "truncation_curves.csv"
    t = curves["reduced18"]["times"]
    write_csv(
        out_csv,
        ["t_ps"] + [f"{q}_{n}" for q in ("n_x", "g2_xxxx_tau0") for n in names],
        [
            [float(t[i])]
            + [float(curves[n]["n_x"][i]) for n in names]
            + [float(curves[n]["g2_xxxx_tau0"][i]) for n in names]
            for i in range(len(t))
        ],
    )
    report = {"photon_number_max_abs_deviation": {}, "concurrence": {}}
    for name in ("full2", "full3"):
        dev = np.abs(curves["reduced18"]["n_x"] - curves[name]["n_x"])
        report["photon_number_max_abs_deviation"][f"reduced18_vs_{name}"] = {
            "value": float(dev.max()),
            "t_ps": float(t[int(np.argmax(dev))]),
        }
    dev23 = np.abs(curves["full2"]["n_x"] - curves["full3"]["n_x"])
    report["photon_number_max_abs_deviation"]["full2_vs_full3"] = {
        "value": float(dev23.max()),
        "t_ps": float(t[int(np.argmax(dev23))]),
    }
    for name in ("reduced18", "full2"):
        m = curves[name]["engine"].two_photon_matrix()
        report["concurrence"][name] = concurrence(m.matrix).value
    report["concurrence"]["reduced18_vs_full2_difference"] = abs(
        report["concurrence"]["reduced18"] - report["concurrence"]["full2"]
    )
    out_json = cfg.out_dir / "truncation_report.json"
    with open(out_json, "w") as fh:
        json.dump(report, fh, indent=2)
    write_manifest(cfg, [out_csv.name, out_json.name])
    return {"report": report, "csv": out_csv, "json": out_json}


def run_optimize(cfg: ExperimentConfig) -> dict:
    _prepare_out(cfg)
    result = optimize_second_pulse(cfg.search_spec())
    out = cfg.out_dir / "optimization.json"
    with open(out, "w") as fh:
        json.dump(dataclasses.asdict(result), fh, indent=2)
    write_manifest(cfg, [out.name])
    return {"result": result, "json": out}


RUNNERS = {
    "dynamics": run_dynamics,
    "concurrence": run_concurrence,
    "map_concurrence": run_map_concurrence,
    "map_biexciton": run_map_biexciton,
    "sweep_g": run_sweep_g,
    "validate_truncation": run_validate_truncation,
    "optimize": run_optimize,
}


def run(cfg: ExperimentConfig) -> dict:
    return RUNNERS[cfg.run](cfg)
