"""Canonical dataset recipes: the junction's standard portraits.

Each recipe emits plot-ready CSV bundles for a fixed, documented parameter
set, plus a manifest recording the expected features.  Quantitative
anchors (critical parameters, fixed-point energies, decay laws) are
checked and reported as pass/fail assertions; waveform shapes are
summarized descriptively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .meanfield import critical_g, detect_self_trapping, stationary_g_s
from .phasespace import MAXIMUM, MINIMUM, SADDLE, energy_grid, fixed_points
from .quantum import AngularHamiltonianParams, visibility_trace
from .sweep import SIMULATE_COLUMNS, run_simulate, trajectory_columns

FIGURE_IDS = ("fig2", "fig3", "fig4", "fig5")

# standard initial condition for the imbalance dynamics
Z0, PHI0 = 0.3, math.pi
# total phonon number for the visibility panels (the model does not pin it;
# chosen so quantum collapse features resolve in a 200-unit horizon)
VIS_NT = 40


@dataclass
class FigureBundle:
    figure: str
    files: list[str] = field(default_factory=list)
    assertions: list[dict] = field(default_factory=list)
    panels: list[dict] = field(default_factory=list)

    @property
    def failed(self) -> list[dict]:
        return [a for a in self.assertions if not a["passed"]]

    def check(self, name: str, passed: bool, detail: str) -> None:
        self.assertions.append({"name": name, "passed": bool(passed), "detail": detail})


def reproduce_figure(figure: str, outdir: str | Path) -> FigureBundle:
    """Generate one canonical dataset bundle into outdir.

    Returns the bundle with its manifest written to <figure>_manifest.json;
    failed assertions are listed there and in bundle.failed.
    """
    outdir = Path(outdir)
    recipes = {"fig2": _energy_contours, "fig3": _imbalance_scan,
               "fig4": _damped_runs, "fig5": _visibility_panels}
    if figure not in recipes:
        raise ValueError(f"unknown figure id {figure!r}; choose from {FIGURE_IDS}")
    bundle = recipes[figure](outdir)
    manifest = outdir / f"{figure}_manifest.json"
    io.write_json(manifest, {
        "figure": bundle.figure,
        "files": bundle.files,
        "panels": bundle.panels,
        "assertions": bundle.assertions,
        "all_passed": not bundle.failed,
    })
    bundle.files.append(str(manifest))
    return bundle


def _energy_contours(outdir: Path) -> FigureBundle:
    """Energy landscapes at Delta = 0 for g = 0.9, 1.8, 2.5."""
    bundle = FigureBundle("fig2")
    for g in (0.9, 1.8, 2.5):
        grid = energy_grid(g, 0.0, 201, 201)
        path = outdir / f"fig2_g{g}.csv"
        zz, pp = np.meshgrid(grid.z_axis, grid.phi_axis, indexing="ij")
        io.write_csv(path, ["z", "phi", "energy"],
                     [zz.ravel(), pp.ravel(), grid.values.ravel()])
        bundle.files.append(str(path))
        fps = fixed_points(g, 0.0)
        kinds = sorted(fp.kind for fp in fps)
        bundle.panels.append({
            "g": g,
            "fixed_points": [{"z": fp.z, "phi": fp.phi, "kind": fp.kind,
                              "energy": fp.energy} for fp in fps],
            "grid_min": float(grid.values.min()),
            "grid_max": float(grid.values.max()),
        })
        minimum = [fp for fp in fps if fp.kind == MINIMUM]
        bundle.check(f"g={g}: one minimum at (0, 0) with energy -1",
                     len(minimum) == 1 and abs(minimum[0].z) < 1e-10
                     and abs(minimum[0].energy + 1.0) < 1e-8,
                     f"minima: {[(fp.z, fp.energy) for fp in minimum]}")
        if g < 1.0:
            bundle.check(f"g={g}: (0, pi) is the maximum with energy +1",
                         kinds == [MAXIMUM, MINIMUM]
                         and all(abs(fp.energy - 1.0) < 1e-8 for fp in fps
                                 if fp.kind == MAXIMUM),
                         f"kinds: {kinds}")
        else:
            zs = math.sqrt(1.0 - 1.0 / g**2)
            emax = 0.5 * g * (1.0 + 1.0 / g**2)
            maxima = sorted(fp.z for fp in fps if fp.kind == MAXIMUM)
            bundle.check(
                f"g={g}: (0, pi) saddle and maxima at +-{zs:.5f} with energy {emax:.5f}",
                kinds == [MAXIMUM, MAXIMUM, MINIMUM, SADDLE]
                and np.allclose(maxima, [-zs, zs], atol=1e-8)
                and all(abs(fp.energy - emax) < 1e-8 for fp in fps
                        if fp.kind == MAXIMUM),
                f"kinds: {kinds}, maxima z: {maxima}")
    return bundle


def _imbalance_scan(outdir: Path) -> FigureBundle:
    """z(t) from (0.3, pi) across the self-trapping transition."""
    bundle = FigureBundle("fig3")
    g_cr = critical_g(Z0, PHI0)
    g_s = stationary_g_s(Z0)
    bundle.check("critical nonlinearity g_cr(0.3, pi) = 1.02357 +- 1e-5",
                 abs(g_cr - 1.02357) < 1e-5, f"g_cr = {g_cr:.7f}")
    bundle.check("stationary nonlinearity g_s(0.3) = 1.04828 +- 1e-5",
                 abs(g_s - 1.04828) < 1e-5, f"g_s = {g_s:.7f}")
    panels = [
        ("a", 0.9, "rabi-like oscillation, zero-mean z"),
        ("b", 1.0, "anharmonic oscillation, zero-mean z"),
        ("c", g_cr, "critical run: separatrix grazing"),
        ("d", 1.04, "type-I trapped pi-phase mode"),
        ("e", g_s, "stationary imbalance, no oscillation"),
        ("f", 1.056, "type-II trapped pi-phase mode"),
    ]
    for label, g, feature in panels:
        traj, summary = run_simulate({"g": g, "z0": Z0, "phi0": PHI0, "t_end": 200.0})
        path = outdir / f"fig3_{label}_g{g:.5f}.csv"
        io.write_csv(path, list(SIMULATE_COLUMNS), trajectory_columns(traj))
        bundle.files.append(str(path))
        report = detect_self_trapping(traj, g)
        half = traj.times >= traj.times[-1] / 2.0
        var = float(np.var(traj.z[half]))
        bundle.panels.append({
            "panel": label, "g": g, "expected": feature,
            "mean_z": report.mean_z, "is_mst": report.is_mst,
            "mst_type": report.mst_type, "z_s": report.z_s,
            "trailing_variance": var,
        })
        if label in ("a", "b"):
            bundle.check(f"panel {label} (g={g}): |mean z| < 0.02",
                         abs(report.mean_z) < 0.02, f"mean_z = {report.mean_z:+.5f}")
        elif label == "d":
            bundle.check(f"panel {label} (g={g}): type-I self-trapping",
                         report.is_mst and report.mst_type == "type-I",
                         f"mst_type = {report.mst_type}, mean_z = {report.mean_z:+.5f}")
        elif label == "e":
            bundle.check(f"panel {label} (g=g_s): stationary, trailing variance < 1e-4",
                         var < 1e-4, f"variance = {var:.3e}")
        elif label == "f":
            bundle.check(f"panel {label} (g={g}): type-II self-trapping",
                         report.is_mst and report.mst_type == "type-II",
                         f"mst_type = {report.mst_type}, mean_z = {report.mean_z:+.5f}")
    return bundle


def _damped_runs(outdir: Path) -> FigureBundle:
    """Damped runs at kappa = 0.001: trapping decays away at long times."""
    bundle = FigureBundle("fig4")
    g_s = stationary_g_s(Z0)
    for label, g in (("a", 0.9), ("b", 1.023), ("c", g_s)):
        traj, _ = run_simulate({"g": g, "z0": Z0, "phi0": PHI0, "kappa": 1e-3,
                                "t_end": 5000.0})
        path = outdir / f"fig4_{label}_g{g:.5f}.csv"
        io.write_csv(path, list(SIMULATE_COLUMNS), trajectory_columns(traj))
        bundle.files.append(str(path))
        n_err = float(np.max(np.abs(traj.N - np.exp(-1e-3 * traj.times))
                             / np.exp(-1e-3 * traj.times)))
        above = np.nonzero(np.abs(traj.z) >= 0.01)[0]
        t_settle = float(traj.times[above[-1] + 1]) if above.size else 0.0
        bundle.panels.append({"panel": label, "g": g, "kappa": 1e-3,
                              "t_settle": t_settle, "n_rel_err": n_err})
        bundle.check(f"panel {label} (g={g}): N(t) = exp(-kappa t) within 1e-9",
                     n_err < 1e-9, f"max rel err = {n_err:.2e}")
        bundle.check(f"panel {label} (g={g}): |z| < 0.01 before t = 5000",
                     above.size == 0 or above[-1] + 1 < len(traj.times),
                     f"settles at t = {t_settle:.0f}")
    return bundle


def _visibility_panels(outdir: Path) -> FigureBundle:
    """Fringe visibility of coherent states under the exact dynamics."""
    bundle = FigureBundle("fig5")
    panels = [
        ("a", 0.3, math.pi), ("b", 1.0, math.pi), ("c", 6.0, math.pi),
        ("d", 0.3, 0.0), ("e", 1.0, 0.0), ("f", 6.0, 0.0),
    ]
    for label, g, phi0 in panels:
        p = AngularHamiltonianParams.from_g(g, VIS_NT)
        trace = visibility_trace(math.pi / 2.0, phi0, p, 200.0, 801)
        path = outdir / f"fig5_{label}_g{g}_phi{phi0:.2f}.csv"
        io.write_csv(path, ["t", "jx", "jy", "jz", "visibility", "delta_n"],
                     [trace.times, trace.jx, trace.jy, trace.jz,
                      trace.visibility, trace.delta_n])
        bundle.files.append(str(path))
        half = trace.times >= 100.0
        bundle.panels.append({
            "panel": label, "g": g, "theta0": math.pi / 2.0, "phi0": phi0,
            "N_T": VIS_NT,
            "min_visibility": float(trace.visibility.min()),
            "trailing_mean_visibility": float(trace.visibility[half].mean()),
            "trailing_max_visibility": float(trace.visibility[half].max()),
        })
    # quantitative checks on the two anchor panels
    vis_a = next(p for p in bundle.panels if p["panel"] == "a")
    bundle.check(
        "panel a (g=0.3 from (pi/2, pi)): visibility decays below 0.2",
        vis_a["min_visibility"] < 0.2,
        f"min visibility = {vis_a['min_visibility']:.3f}; the pi-phase point "
        "is a stable energy maximum for g < 1, so the exact dynamics keeps "
        "this state phase-locked instead of decaying",
    )
    vis_f = next(p for p in bundle.panels if p["panel"] == "f")
    bundle.check(
        "panel f (g=6 from (pi/2, 0)): trailing mean visibility > 0.5",
        vis_f["trailing_mean_visibility"] > 0.5,
        f"trailing mean = {vis_f['trailing_mean_visibility']:.3f}",
    )
    return bundle
