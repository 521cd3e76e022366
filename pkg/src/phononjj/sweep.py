"""Deterministic simulation runs and parameter sweeps.

A run is a pure function of its parameter dict, so sweep points can be
executed in any order or in parallel without changing the merged output.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .meanfield import (
    DampedJunctionState,
    IntegrationOptions,
    JunctionState,
    Trajectory,
    detect_self_trapping,
    integrate,
    integrate_damped,
)

SIMULATE_DEFAULTS: dict = {
    "g": 1.0,
    "delta": 0.0,
    "kappa": 0.0,
    "z0": 0.3,
    "phi0": math.pi,
    "t_end": 200.0,
    "adaptive": True,
    "dt": 0.01,
    "samples": None,
    "window": 0.5,
    "mst_threshold": 0.02,
}

SWEEPABLE = ("g", "delta", "kappa", "z0", "phi0", "t_end")

SIMULATE_COLUMNS = ("t", "z", "phi_mod2pi", "phi_unwrapped", "N", "energy", "current")


def simulate_params(overrides: dict) -> dict:
    """Full simulate parameter set with unknown keys rejected."""
    unknown = sorted(set(overrides) - set(SIMULATE_DEFAULTS))
    if unknown:
        raise ConfigError(f"simulate: unknown parameter(s) {', '.join(unknown)}")
    params = dict(SIMULATE_DEFAULTS)
    params.update({k: v for k, v in overrides.items() if v is not None})
    return params


def run_simulate(params: dict) -> tuple[Trajectory, dict]:
    """Integrate one configuration and summarize its trailing window.

    The current column is in units of the critical current I_c = G N_T.
    """
    p = simulate_params(params)
    opts = IntegrationOptions(
        method="adaptive" if p["adaptive"] else "rk4",
        dt=p["dt"], n_samples=p["samples"],
        energy_tol=1e-8 if (p["adaptive"] and p["kappa"] == 0.0) else None,
    )
    if p["kappa"] > 0.0:
        traj = integrate_damped(DampedJunctionState(p["z0"], p["phi0"]), p["g"],
                                p["kappa"], p["t_end"], Delta=p["delta"], opts=opts)
    else:
        traj = integrate(JunctionState(p["z0"], p["phi0"]), p["g"], p["delta"],
                         p["t_end"], opts=opts)
    report = detect_self_trapping(traj, p["g"], window=p["window"],
                                  mst_threshold=p["mst_threshold"])
    summary = {
        "mean_z": report.mean_z,
        "is_mst": report.is_mst,
        "mst_type": report.mst_type,
        "z_s": report.z_s,
        "energy_drift": traj.diagnostics.get("energy_drift"),
    }
    return traj, summary


def trajectory_columns(traj: Trajectory) -> list[np.ndarray]:
    """Column arrays matching SIMULATE_COLUMNS."""
    sq = np.sqrt(np.maximum(traj.N**2 - traj.z**2, 0.0))
    current = sq * np.sin(traj.phi)
    return [traj.times, traj.z, traj.phi_mod, traj.phi, traj.N, traj.energy, current]


@dataclass(frozen=True)
class SweepResult:
    axis: str
    values: list[float]
    trajectories: dict          # value -> Trajectory (successful runs)
    summaries: list[dict]       # one per value, in input order
    failures: dict              # value -> error message


def _sweep_worker(args: tuple[dict, str, float]):
    base, axis, value = args
    params = dict(base)
    params[axis] = value
    traj, summary = run_simulate(params)
    return value, traj, summary


def sweep(base: dict, axis: str, values: list[float],
          jobs: int | None = None) -> SweepResult:
    """One simulate run per axis value; failed points are reported without
    aborting the rest.  Results are ordered by the input value list, so
    serial and parallel execution produce identical output."""
    if axis not in SWEEPABLE:
        raise ConfigError(
            f"axis {axis!r} is not sweepable; choose one of {', '.join(SWEEPABLE)}"
        )
    base = simulate_params(base)
    tasks = [(base, axis, float(v)) for v in values]
    results: dict[float, tuple] = {}
    failures: dict[float, str] = {}

    def record(value, outcome, error=None):
        if error is not None:
            failures[value] = error
        else:
            results[value] = outcome

    if jobs is not None and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(_sweep_worker, t): t[2] for t in tasks}
            for fut, value in futures.items():
                try:
                    v, traj, summary = fut.result()
                    record(v, (traj, summary))
                except Exception as exc:
                    record(value, None, f"{type(exc).__name__}: {exc}")
    else:
        for t in tasks:
            try:
                v, traj, summary = _sweep_worker(t)
                record(v, (traj, summary))
            except Exception as exc:
                record(t[2], None, f"{type(exc).__name__}: {exc}")

    summaries = []
    trajectories = {}
    for v in (float(x) for x in values):
        if v in failures:
            summaries.append({"value": v, "error": failures[v]})
        else:
            traj, summary = results[v]
            trajectories[v] = traj
            summaries.append({"value": v, "error": None, **summary})
    return SweepResult(axis=axis, values=[float(v) for v in values],
                       trajectories=trajectories, summaries=summaries,
                       failures=failures)


def sweep_long_columns(result: SweepResult) -> tuple[list[str], list[np.ndarray]]:
    """Merge trajectories into long format with the swept value prepended."""
    header = [result.axis] + list(SIMULATE_COLUMNS)
    blocks = []
    for v in result.values:
        traj = result.trajectories.get(v)
        if traj is None:
            continue
        cols = trajectory_columns(traj)
        blocks.append([np.full_like(cols[0], v)] + cols)
    if not blocks:
        return header, [np.array([]) for _ in header]
    return header, [np.concatenate([b[i] for b in blocks]) for i in range(len(header))]
