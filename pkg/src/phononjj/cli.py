"""Command-line interface.

Every subcommand is a deterministic function of its flags (no randomness
anywhere); a run record with the resolved parameters, tool version and
output digests is written next to each primary output.  Flags may also be
supplied through --config (TOML or JSON); explicit flags win.  The
PHONONJJ_OUTDIR environment variable sets the default output directory.

Exit codes: 0 success, 1 error, 2 failed dataset assertions in
reproduce-figure.
"""

from __future__ import annotations

import math
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import __version__, io
from .beams import EffectiveParams, effective_report
from .errors import ConfigError, DomainError, RWAViolationError, SolverError
from .bloch import SpinVector, fringe_visibility, integrate_cartesian
from .figures import FIGURE_IDS, reproduce_figure
from .phasespace import energy_grid, fixed_points
from .quantum import fluctuation_report, trace_from_effective
from .sweep import SIMULATE_COLUMNS, SIMULATE_DEFAULTS, run_simulate, sweep, \
    sweep_long_columns, trajectory_columns

_ERRORS = (ConfigError, DomainError, SolverError, RWAViolationError,
           FileNotFoundError, ValueError)


def _resolve(ctx: click.Context, names: list[str], config: str | None) -> dict:
    """Merge config-file values under explicit command-line flags."""
    params = {name: ctx.params[name] for name in names}
    if config:
        loaded = io.load_config(config)
        io.check_keys(loaded, names, (), f"config {config}")
        from click.core import ParameterSource
        for name, value in loaded.items():
            if ctx.get_parameter_source(name) != ParameterSource.COMMANDLINE:
                params[name] = value
    return params


def _out_path(out: str | None, default_name: str) -> Path:
    return Path(out) if out else io.default_outdir() / default_name


def _record(out: Path, command: str, params: dict, t0: float,
            extra_outputs: list[Path] = ()) -> None:
    outputs = {str(p): io.sha256_file(p) for p in [out, *extra_outputs]}
    io.write_run_record(out.with_suffix(out.suffix + ".run.json"), io.RunRecord(
        command=command, parameters=params, version=__version__,
        wall_time_s=round(time.perf_counter() - t0, 6), outputs=outputs,
    ))


@click.group()
@click.version_option(__version__)
def cli():
    """Phonon Josephson junction simulation toolkit."""


@cli.command()
@click.option("--g", type=float, default=SIMULATE_DEFAULTS["g"], show_default=True,
              help="Dimensionless nonlinearity parameter.")
@click.option("--delta", type=float, default=0.0, show_default=True,
              help="Dimensionless detuning.")
@click.option("--kappa", type=float, default=0.0, show_default=True,
              help="Dimensionless damping rate (0 = conservative).")
@click.option("--z0", type=float, default=SIMULATE_DEFAULTS["z0"], show_default=True)
@click.option("--phi0", type=float, default=SIMULATE_DEFAULTS["phi0"], show_default=True)
@click.option("--t-end", "t_end", type=float, default=200.0, show_default=True,
              help="Horizon in rescaled time 2 G t.")
@click.option("--adaptive/--fixed-step", "adaptive", default=True,
              help="Adaptive RK 5(4) or fixed-step RK4 (byte-stable output).")
@click.option("--dt", type=float, default=0.01, show_default=True,
              help="Step for --fixed-step mode.")
@click.option("--samples", type=int, default=None,
              help="Output samples for adaptive mode.")
@click.option("--config", type=click.Path(exists=True), default=None)
@click.option("--out", type=click.Path(), default=None,
              help="Output CSV path [default: <outdir>/simulate.csv].")
@click.pass_context
def simulate(ctx, **kwargs):
    """Integrate the junction and write t, z, phi, N, energy, current.

    The current column is in units of the critical current I_c = G N_T.
    """
    t0 = time.perf_counter()
    config, out = kwargs.pop("config"), kwargs.pop("out")
    names = list(kwargs)
    params = _resolve(ctx, names, config)
    traj, summary = run_simulate(params)
    out = _out_path(out, "simulate.csv")
    io.write_csv(out, list(SIMULATE_COLUMNS), trajectory_columns(traj))
    _record(out, "simulate", params, t0)
    click.echo(f"wrote {out}: mean_z={io.format_number(summary['mean_z'])} "
               f"is_mst={summary['is_mst']} mst_type={summary['mst_type']}")


@cli.command("phase-portrait")
@click.option("--g", type=float, required=True)
@click.option("--delta", type=float, default=0.0, show_default=True)
@click.option("--nz", type=int, default=201, show_default=True)
@click.option("--nphi", type=int, default=201, show_default=True)
@click.option("--config", type=click.Path(exists=True), default=None)
@click.option("--out", type=click.Path(), default=None,
              help="Output directory [default: <outdir>].")
@click.pass_context
def phase_portrait(ctx, **kwargs):
    """Energy grid over (z, phi) plus a fixed-point sidecar JSON."""
    t0 = time.perf_counter()
    config, out = kwargs.pop("config"), kwargs.pop("out")
    params = _resolve(ctx, list(kwargs), config)
    outdir = Path(out) if out else io.default_outdir()
    grid = energy_grid(params["g"], params["delta"], params["nz"], params["nphi"])
    zz, pp = np.meshgrid(grid.z_axis, grid.phi_axis, indexing="ij")
    csv_path = outdir / "phase_portrait.csv"
    io.write_csv(csv_path, ["z", "phi", "energy"],
                 [zz.ravel(), pp.ravel(), grid.values.ravel()])
    fps = fixed_points(params["g"], params["delta"])
    sidecar = {
        "g": params["g"], "delta": params["delta"],
        "fixed_points": [{"z": fp.z, "phi": fp.phi, "kind": fp.kind,
                          "energy": fp.energy} for fp in fps],
    }
    if params["delta"] != 0.0:
        sidecar["note"] = ("fixed-point classification for delta != 0 comes from "
                           "the analytic Hessian; no independent closed form "
                           "exists for this case")
    json_path = outdir / "fixed_points.json"
    io.write_json(json_path, sidecar)
    _record(csv_path, "phase-portrait", params, t0, [json_path])
    click.echo(f"wrote {csv_path} and {json_path} ({len(fps)} fixed points)")


@cli.command()
@click.option("--g", type=float, required=True)
@click.option("--theta0", type=float, required=True)
@click.option("--phi0", type=float, required=True)
@click.option("--t-end", "t_end", type=float, default=200.0, show_default=True)
@click.option("--samples", type=int, default=2001, show_default=True)
@click.option("--config", type=click.Path(exists=True), default=None)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def coherence(ctx, **kwargs):
    """Semiclassical spin trajectory and fringe visibility."""
    t0 = time.perf_counter()
    config, out = kwargs.pop("config"), kwargs.pop("out")
    params = _resolve(ctx, list(kwargs), config)
    theta0, phi0 = params["theta0"], params["phi0"]
    s0 = SpinVector(jx=math.sin(theta0) * math.cos(phi0),
                    jy=math.sin(theta0) * math.sin(phi0),
                    jz=-math.cos(theta0))
    traj = integrate_cartesian(s0, params["g"], params["t_end"],
                               n_samples=params["samples"])
    out = _out_path(out, "coherence.csv")
    io.write_csv(out, ["t", "theta", "phi", "jx", "jy", "jz", "visibility"],
                 [traj.times, traj.theta, traj.phi, traj.jx, traj.jy, traj.jz,
                  np.abs(traj.jx)])
    _record(out, "coherence", params, t0)
    vis_end = fringe_visibility(SpinVector(jx=float(traj.jx[-1]),
                                           jy=float(traj.jy[-1]),
                                           jz=float(traj.jz[-1])))
    click.echo(f"wrote {out}: final visibility {io.format_number(vis_end)}")


def _effective_from_flags(params) -> EffectiveParams:
    return EffectiveParams(lambda1=params["lambda1"], lambda2=params["lambda2"],
                           G=params["g_coupling"], Delta0=params["delta0"],
                           kappa1=0.0, kappa2=0.0, N_T=params["nt"])


@cli.command()
@click.option("--nt", type=int, required=True, help="Total phonon number.")
@click.option("--lambda1", type=float, required=True, help="Kerr rate, mode 1 (rad/s).")
@click.option("--lambda2", type=float, required=True, help="Kerr rate, mode 2 (rad/s).")
@click.option("--g-coupling", "g_coupling", type=float, required=True,
              help="Linear coupling rate G (rad/s).")
@click.option("--delta0", type=float, default=0.0, show_default=True,
              help="Frequency detuning omega02 - omega01 (rad/s).")
@click.option("--theta0", type=float, required=True)
@click.option("--phi0", type=float, required=True)
@click.option("--t-end", "t_end", type=float, default=200.0, show_default=True,
              help="Horizon in rescaled time 2 G t.")
@click.option("--samples", type=int, default=801, show_default=True)
@click.option("--config", type=click.Path(exists=True), default=None)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def quantum(ctx, **kwargs):
    """Exact evolution of a coherent state; writes spin observables."""
    t0 = time.perf_counter()
    config, out = kwargs.pop("config"), kwargs.pop("out")
    params = _resolve(ctx, list(kwargs), config)
    trace = trace_from_effective(_effective_from_flags(params), params["theta0"],
                                 params["phi0"], params["t_end"], params["samples"])
    out = _out_path(out, "quantum.csv")
    io.write_csv(out, ["t", "jx", "jy", "jz", "visibility", "delta_n"],
                 [trace.times, trace.jx, trace.jy, trace.jz, trace.visibility,
                  trace.delta_n])
    _record(out, "quantum", params, t0)
    click.echo(f"wrote {out}")


@cli.command()
@click.option("--nt", type=int, required=True)
@click.option("--lambda1", type=float, required=True)
@click.option("--lambda2", type=float, required=True)
@click.option("--g-coupling", "g_coupling", type=float, required=True)
@click.option("--delta0", type=float, default=0.0, show_default=True)
@click.option("--config", type=click.Path(exists=True), default=None)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
def fluctuations(ctx, **kwargs):
    """Ground-state number/phase fluctuation report as JSON."""
    t0 = time.perf_counter()
    config, out = kwargs.pop("config"), kwargs.pop("out")
    params = _resolve(ctx, list(kwargs), config)
    rep = fluctuation_report(_effective_from_flags(params))
    out = _out_path(out, "fluctuations.json")
    io.write_json(out, {
        "E_c": rep.E_c, "E_j": rep.E_j, "E_c_prime": rep.E_c_prime,
        "delta_n_analytic": rep.delta_n_analytic,
        "delta_phi_analytic": rep.delta_phi_analytic,
        "delta_n_exact": rep.delta_n_exact,
        "delta_n_rabi": rep.delta_n_rabi,
        "delta_n_josephson": rep.delta_n_josephson,
    })
    _record(out, "fluctuations", params, t0)
    click.echo(f"wrote {out}")


@cli.command("beam-params")
@click.option("--config", type=click.Path(exists=True), required=True,
              help="TOML/JSON file with [beam1], [beam2] sections and N_T.")
@click.option("--out", type=click.Path(), default=None)
def beam_params(config, out):
    """Physical -> effective -> dimensionless parameter audit as JSON."""
    t0 = time.perf_counter()
    cfg = io.load_config(config)
    io.check_keys(cfg, ("beam1", "beam2", "N_T", "rwa_warn_threshold",
                        "rwa_reject_threshold", "quartic_convention"),
                  ("beam1", "beam2", "N_T"), f"config {config}")
    beam1 = io.beam_from_config(cfg["beam1"], "beam1")
    beam2 = io.beam_from_config(cfg["beam2"], "beam2")
    report = effective_report(
        beam1, beam2, float(cfg["N_T"]),
        rwa_warn_threshold=float(cfg.get("rwa_warn_threshold", 0.01)),
        rwa_reject_threshold=float(cfg.get("rwa_reject_threshold", 0.1)),
        quartic_convention=cfg.get("quartic_convention", "quarter"),
    )
    worst = report["rwa"]["worst_ratio"]
    if worst > report["rwa"]["reject_threshold"]:
        detail = ", ".join(f"{k}={v:.3e}" for k, v in report["rwa"]["ratios"].items())
        raise RWAViolationError(
            f"rotating-wave reduction invalid (worst ratio {worst:.3e}): {detail}")
    out = _out_path(out, "beam_params.json")
    io.write_json(out, report)
    _record(out, "beam-params", {"config": str(config)}, t0)
    click.echo(f"wrote {out}")


@cli.command()
@click.option("--axis", type=str, required=True,
              help="Numeric simulate parameter to sweep (e.g. g, kappa).")
@click.option("--values", type=str, required=True,
              help="Comma-separated axis values.")
@click.option("--config", type=click.Path(exists=True), default=None,
              help="Base simulate parameters (TOML/JSON).")
@click.option("--jobs", type=int, default=None,
              help="Parallel workers [default: serial].")
@click.option("--out", type=click.Path(), default=None,
              help="Output directory [default: <outdir>].")
def sweep_cmd(axis, values, config, jobs, out):
    """Run simulate once per axis value; merge results and summaries."""
    t0 = time.perf_counter()
    base = {}
    if config:
        base = io.load_config(config)
    value_list = [float(v) for v in values.split(",") if v.strip() != ""]
    result = sweep(base, axis, value_list, jobs=jobs)
    outdir = Path(out) if out else io.default_outdir()
    header, columns = sweep_long_columns(result)
    csv_path = outdir / "sweep.csv"
    io.write_csv(csv_path, header, columns)
    summary_path = outdir / "sweep_summary.csv"
    io.write_rows_csv(
        summary_path,
        ["value", "mean_z", "is_mst", "mst_type", "z_s", "error"],
        [[s["value"], s.get("mean_z"), s.get("is_mst"), s.get("mst_type"),
          s.get("z_s"), s.get("error")] for s in result.summaries],
    )
    _record(csv_path, "sweep",
            {"axis": axis, "values": value_list, "base": base}, t0, [summary_path])
    click.echo(f"wrote {csv_path} and {summary_path} "
               f"({len(result.trajectories)} ok, {len(result.failures)} failed)")
    if result.failures:
        for v, msg in sorted(result.failures.items()):
            click.echo(f"  {axis}={v}: {msg}", err=True)


@cli.command("reproduce-figure")
@click.argument("figure", type=click.Choice(FIGURE_IDS))
@click.option("--out", type=click.Path(), default=None,
              help="Output directory [default: <outdir>].")
def reproduce_figure_cmd(figure, out):
    """Emit a canonical dataset bundle and check its quantitative anchors.

    Exits with status 2 if any checked assertion fails.
    """
    outdir = Path(out) if out else io.default_outdir()
    bundle = reproduce_figure(figure, outdir)
    for a in bundle.assertions:
        status = "ok" if a["passed"] else "FAILED"
        click.echo(f"[{status}] {a['name']} - {a['detail']}")
    click.echo(f"wrote {len(bundle.files)} files to {outdir}")
    if bundle.failed:
        click.echo(f"{len(bundle.failed)} assertion(s) failed", err=True)
        sys.exit(2)


def main():
    try:
        cli(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.Abort:
        sys.exit(1)
    except SystemExit:
        raise
    except _ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
