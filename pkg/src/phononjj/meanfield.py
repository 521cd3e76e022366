"""Semiclassical junction dynamics.

The two-mode system reduces to the fractional population imbalance
z = (n1 - n2)/N_T and relative phase phi, evolving in rescaled time
t -> 2 G t under

    dz/dt   = -sqrt(1 - z^2) sin(phi)
    dphi/dt = Delta + g z + z cos(phi) / sqrt(1 - z^2)

which are Hamilton's equations (dz/dt = -dH/dphi, dphi/dt = +dH/dz) of

    H = Delta z + (g/2) z^2 - sqrt(1 - z^2) cos(phi).

With mechanical loss the normalized total number N(t) = exp(-kappa t)
enters the square roots and a -kappa z drag appears in dz/dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .beams import DimensionlessParams, EffectiveParams, classify_g
from .errors import DomainError, SolverError

# |z| is kept a hair inside N; reaching the guard aborts with a report
# because the phase velocity diverges there.
Z_GUARD = 1e-12

TYPE_I = "type-I"
TYPE_II = "type-II"
BOUNDARY = "boundary"


@dataclass(frozen=True)
class JunctionState:
    """Phase-space point (z, phi); phi is stored unwrapped."""

    z: float
    phi: float

    def __post_init__(self):
        if abs(self.z) > 1.0 + 1e-9:
            raise DomainError(f"|z| = {abs(self.z)} exceeds 1")


@dataclass(frozen=True)
class DampedJunctionState:
    """Phase-space point (z, phi) plus the normalized total number N."""

    z: float
    phi: float
    N: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.N <= 1.0:
            raise DomainError(f"N = {self.N} must lie in (0, 1]")
        if abs(self.z) > self.N + 1e-9:
            raise DomainError(f"|z| = {abs(self.z)} exceeds N = {self.N}")


@dataclass(frozen=True)
class IntegrationOptions:
    """Integrator controls.

    method 'adaptive' is an embedded Runge-Kutta 5(4) pair; 'rk4' is a
    fixed-step classical Runge-Kutta scheme whose output is byte-stable
    across runs for golden files.  energy_tol, when set, makes the
    conservative integrator fail loudly if the Hamiltonian drifts more.
    """

    method: str = "adaptive"
    rtol: float = 1e-10
    atol: float = 1e-10
    dt: float = 0.01
    n_samples: int | None = None
    energy_tol: float | None = 1e-8

    def __post_init__(self):
        if self.method not in ("adaptive", "rk4"):
            raise DomainError(f"unknown integration method {self.method!r}")


@dataclass(frozen=True)
class Trajectory:
    """Sampled trajectory in rescaled time, with per-sample diagnostics."""

    times: np.ndarray
    z: np.ndarray
    phi: np.ndarray            # unwrapped
    N: np.ndarray
    energy: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.times)
        if any(len(a) != n for a in (self.z, self.phi, self.N, self.energy)):
            raise DomainError("trajectory arrays must have matching lengths")
        if np.any(np.diff(self.times) <= 0):
            raise DomainError("trajectory times must be strictly increasing")

    @property
    def phi_mod(self) -> np.ndarray:
        return np.mod(self.phi, 2.0 * math.pi)


@dataclass(frozen=True)
class SelfTrappingReport:
    """Trailing-window classification of a run.

    mst_type is 'type-II' when the trapped average exceeds the starting
    imbalance (the orbit encircles a stationary point above z(0), which
    happens for g > g_s), 'type-I' when it stays below, 'boundary' within
    boundary_tol of z(0).  mean_exceeds_stationary reports the literal
    comparison |mean_z| > z_s for reference; near the type transition the
    orbit average sits marginally below z_s on both sides, so that
    comparison does not separate the two trapped modes.
    """

    mean_z: float
    is_mst: bool
    mst_type: str | None
    z_s: float
    z0: float
    mean_exceeds_stationary: bool
    window_span: float
    n_samples: int


def _sqrt_floor(arg: float, N: float) -> float:
    # trial steps of the adaptive solver may graze past |z| = N; keep the
    # root finite there, the guard event aborts genuine crossings
    floor = (1e-8 * N) ** 2
    return math.sqrt(arg if arg > floor else floor)


def rhs_conservative(state: JunctionState, g: float, Delta: float) -> tuple[float, float]:
    """(dz/dt, dphi/dt) of the lossless junction in rescaled time."""
    z, phi = state.z, state.phi
    if abs(z) > 1.0:
        raise DomainError(f"|z| = {abs(z)} exceeds 1")
    if 1.0 - z * z <= 2.0 * Z_GUARD:
        raise DomainError(
            f"phase velocity diverges at |z| -> 1 (z = {z}); state is inside the guard band"
        )
    sq = math.sqrt(1.0 - z * z)
    dz = -sq * math.sin(phi)
    dphi = Delta + g * z + z * math.cos(phi) / sq
    return dz, dphi


def rhs_damped(state: DampedJunctionState, g: float, Delta_kappa: float,
               kappa: float) -> tuple[float, float, float]:
    """(dz/dt, dphi/dt, dN/dt) of the damped junction in rescaled time.

    Delta_kappa is the instantaneous value of the slowly drifting detuning;
    it is constant and equal to Delta when the two modes share one
    nonlinearity.
    """
    z, phi, N = state.z, state.phi, state.N
    if abs(z) > N:
        raise DomainError(f"|z| = {abs(z)} exceeds N = {N}")
    arg = N * N - z * z
    if arg <= 2.0 * Z_GUARD * N * N:
        raise DomainError(
            f"phase velocity diverges at |z| -> N (z = {z}, N = {N})"
        )
    sq = math.sqrt(arg)
    dz = -sq * math.sin(phi) - kappa * z
    dphi = Delta_kappa + g * z + z * math.cos(phi) / sq
    dN = -kappa * N
    return dz, dphi, dN


def hamiltonian(state: JunctionState, g: float, Delta: float) -> float:
    """Junction energy H = Delta z + (g/2) z^2 - sqrt(1 - z^2) cos(phi)."""
    if abs(state.z) > 1.0:
        raise DomainError(f"|z| = {abs(state.z)} exceeds 1")
    return float(junction_energy(state.z, state.phi, g, Delta))


def junction_energy(z, phi, g: float, Delta: float):
    """Vectorized junction energy; accepts arrays for grid evaluation."""
    z = np.asarray(z, dtype=float)
    phi = np.asarray(phi, dtype=float)
    sq = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    out = Delta * z + 0.5 * g * z * z - sq * np.cos(phi)
    return out if out.ndim else float(out)


def tunneling_current(state: JunctionState, G: float, N_T: float) -> float:
    """Phonon tunneling current I = I_c sqrt(1 - z^2) sin(phi), I_c = G N_T.

    Positive I is the flow out of resonator 1: in physical time
    (N_T/2) dz/dt = -I.
    """
    if abs(state.z) > 1.0:
        raise DomainError(f"|z| = {abs(state.z)} exceeds 1")
    return G * N_T * math.sqrt(max(1.0 - state.z**2, 0.0)) * math.sin(state.phi)


def _default_samples(t_end: float) -> int:
    return int(min(20001, max(201, round(10.0 * t_end) + 1)))


def _integrate_zphi(z0: float, phi0: float, g: float,
                    delta_fn: Callable[[float], float], kappa: float,
                    t_end: float, opts: IntegrationOptions) -> Trajectory:
    """Shared driver: integrates (z, phi) with N(t) = exp(-kappa t) exact.

    The total-number equation dN/dt = -kappa N decouples, so its closed
    form is substituted instead of integrating it; this keeps N exact over
    arbitrarily long horizons and removes one stiffness source.
    """
    if not t_end > 0:
        raise DomainError("t_end must be positive")

    def n_of(t):
        return math.exp(-kappa * t) if kappa else 1.0

    def f(t, y):
        z, phi = y
        N = n_of(t)
        sq = _sqrt_floor(N * N - z * z, N)
        return (-sq * math.sin(phi) - kappa * z,
                delta_fn(t) + g * z + z * math.cos(phi) / sq)

    def guard(t, y):
        N = n_of(t)
        return (N * (1.0 - Z_GUARD)) ** 2 - y[0] ** 2

    guard.terminal = True
    guard.direction = -1.0

    if opts.method == "rk4":
        n_steps = max(1, int(math.ceil(t_end / opts.dt)))
        h = t_end / n_steps
        times = np.linspace(0.0, t_end, n_steps + 1)
        ys = np.empty((n_steps + 1, 2))
        ys[0] = (z0, phi0)
        y = np.array([z0, phi0])
        for i in range(n_steps):
            t = times[i]
            k1 = np.array(f(t, y))
            k2 = np.array(f(t + 0.5 * h, y + 0.5 * h * k1))
            k3 = np.array(f(t + 0.5 * h, y + 0.5 * h * k2))
            k4 = np.array(f(t + h, y + h * k3))
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if guard(times[i + 1], y) <= 0.0:
                raise SolverError(
                    f"|z| reached the guard band at t = {times[i + 1]:.6g}"
                )
            ys[i + 1] = y
        z, phi = ys[:, 0], ys[:, 1]
        nfev = 4 * n_steps
        stats = {"method": "rk4", "dt": h, "n_steps": n_steps, "nfev": nfev}
    else:
        n_samples = opts.n_samples or _default_samples(t_end)
        times = np.linspace(0.0, t_end, n_samples)
        sol = solve_ivp(f, (0.0, t_end), (z0, phi0), method="RK45",
                        rtol=opts.rtol, atol=opts.atol, t_eval=times,
                        events=guard, dense_output=False)
        if sol.status == 1:
            raise SolverError(
                f"|z| reached the guard band at t = {sol.t_events[0][0]:.6g}; "
                "step size underflows near the phase singularity"
            )
        if not sol.success:
            raise SolverError(f"integration failed: {sol.message}")
        z, phi = sol.y[0], sol.y[1]
        stats = {"method": "adaptive", "rtol": opts.rtol, "atol": opts.atol,
                 "nfev": sol.nfev}

    N = np.exp(-kappa * times) if kappa else np.ones_like(times)
    delta_samples = np.fromiter((delta_fn(t) for t in times), dtype=float,
                                count=len(times))
    sq = np.sqrt(np.maximum(N * N - z * z, 0.0))
    energy = delta_samples * z + 0.5 * g * z * z - sq * np.cos(phi)
    diagnostics = dict(stats)
    diagnostics.update({"g": g, "kappa": kappa, "guard_events": []})
    if kappa == 0.0:
        drift = float(np.max(np.abs(energy - energy[0])))
        diagnostics["energy_drift"] = drift
        if (opts.method == "adaptive" and opts.energy_tol is not None
                and drift > opts.energy_tol):
            raise SolverError(
                f"energy drift {drift:.3e} exceeds energy_tol {opts.energy_tol:.1e}; "
                "tighten rtol/atol or relax energy_tol"
            )
    return Trajectory(times=times, z=z, phi=phi, N=N, energy=energy,
                      diagnostics=diagnostics)


def integrate(state0: JunctionState, g: float, Delta: float, t_end: float,
              opts: IntegrationOptions | None = None) -> Trajectory:
    """Integrate the lossless junction from state0 over rescaled time t_end."""
    opts = opts or IntegrationOptions()
    return _integrate_zphi(state0.z, state0.phi, g, lambda t: Delta, 0.0,
                           t_end, opts)


def integrate_damped(state0: DampedJunctionState, g: float, kappa: float,
                     t_end: float, Delta: float = 0.0,
                     eff: EffectiveParams | None = None,
                     opts: IntegrationOptions | None = None) -> Trajectory:
    """Integrate the damped junction.

    When eff is given, the drifting detuning is evaluated exactly as
    Delta_kappa(t) = [-Delta0 + (N_T e^{-kappa t}/2 + 1)(lambda1 - lambda2)]
    / 2G, and g, kappa are derived from eff (g uses N_T at t = 0); with
    equal nonlinearities this reduces to the constant Delta.
    """
    opts = opts or IntegrationOptions(energy_tol=None)
    if state0.N != 1.0:
        raise DomainError("damped runs start from N(0) = 1")
    if eff is not None:
        if eff.G <= 0:
            raise DomainError("uncoupled system: G = 0")
        g = eff.N_T * (eff.lambda1 + eff.lambda2) / (4.0 * eff.G)
        kappa = eff.kappa1 / (2.0 * eff.G)
        dlam = eff.lambda1 - eff.lambda2
        N_T, Delta0, G2 = eff.N_T, eff.Delta0, 2.0 * eff.G

        def delta_fn(t):
            return (-Delta0 + (N_T * math.exp(-kappa * t) / 2.0 + 1.0) * dlam) / G2
    else:
        def delta_fn(t):
            return Delta
    if kappa < 0:
        raise DomainError("kappa must be nonnegative")
    return _integrate_zphi(state0.z, state0.phi, g, delta_fn, kappa, t_end, opts)


def classify_regime(p: DimensionlessParams) -> tuple[str, bool]:
    """(regime, on_boundary) for the dimensionless parameter set."""
    return classify_g(p.g, p.N_T)


def critical_g(z0: float, phi0: float) -> float:
    """Critical nonlinearity for self-trapping from (z0, phi0).

    The run self-traps when its energy exceeds the separatrix value 1,
    giving g_cr = [1 + sqrt(1 - z0^2) cos(phi0)] / (z0^2 / 2).  A zero
    initial imbalance cannot trap and reports infinity.
    """
    if abs(z0) > 1.0:
        raise DomainError(f"|z0| = {abs(z0)} exceeds 1")
    if z0 == 0.0:
        return math.inf
    return (1.0 + math.sqrt(1.0 - z0 * z0) * math.cos(phi0)) / (z0 * z0 / 2.0)


def stationary_g_s(z0: float) -> float:
    """Nonlinearity g_s = 1/sqrt(1 - z0^2) at which (z0, pi) is stationary."""
    if abs(z0) >= 1.0:
        raise DomainError(f"|z0| = {abs(z0)} must be < 1")
    return 1.0 / math.sqrt(1.0 - z0 * z0)


def detect_self_trapping(traj: Trajectory, g: float, window: float = 0.5,
                         mst_threshold: float = 0.02,
                         boundary_tol: float = 1e-6) -> SelfTrappingReport:
    """Classify a run as Rabi-like or macroscopically self-trapped.

    mean_z is the time average of z over the trailing `window` fraction of
    the trajectory; the run is self-trapped when |mean_z| exceeds
    mst_threshold.  The trajectory must resolve the oscillation (several
    periods, or the settled plateau, inside the window).
    """
    if not 0.0 < window <= 1.0:
        raise DomainError("window must be a fraction in (0, 1]")
    t0 = traj.times[-1] - window * (traj.times[-1] - traj.times[0])
    mask = traj.times >= t0
    if int(mask.sum()) < 16:
        raise DomainError(
            f"trajectory too short: only {int(mask.sum())} samples in the "
            "trailing window"
        )
    tw = traj.times[mask]
    zw = traj.z[mask]
    span = float(tw[-1] - tw[0])
    mean_z = float(np.trapezoid(zw, tw) / span)
    z_s = math.sqrt(1.0 - 1.0 / (g * g)) if g > 1.0 else 0.0
    z0 = float(traj.z[0])
    is_mst = abs(mean_z) > mst_threshold
    mst_type = None
    if is_mst:
        excess = abs(mean_z) - abs(z0)
        if abs(excess) <= boundary_tol:
            mst_type = BOUNDARY
        elif excess > 0:
            mst_type = TYPE_II
        else:
            mst_type = TYPE_I
    return SelfTrappingReport(
        mean_z=mean_z, is_mst=is_mst, mst_type=mst_type, z_s=z_s, z0=z0,
        mean_exceeds_stationary=abs(mean_z) > z_s,
        window_span=span, n_samples=int(mask.sum()),
    )
