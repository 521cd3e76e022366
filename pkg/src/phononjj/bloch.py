"""Semiclassical spin dynamics on the Bloch sphere.

The junction maps onto a classical spin of unit length, u = 2<J>/N_T, via
z = -cos(theta) = jz and the shared azimuth phi.  In angular coordinates
the rescaled-time equations are

    dtheta/dt = -sin(phi)
    dphi/dt   = -g cos(theta) - cot(theta) cos(phi)

which are singular at the poles.  The integrator therefore evolves the
Cartesian components, obtained from the same spin Hamiltonian with the
spin Poisson brackets:

    d jx/dt = -g jy jz
    d jy/dt = jz (1 + g jx)
    d jz/dt = -jy

These conserve |u| and (g/2) jz^2 - jx exactly and reduce to the angular
equations away from the poles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import lgamma

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, SolverError

NORM_TOL = 1e-8


@dataclass(frozen=True)
class BlochState:
    """Spherical orientation (theta, phi) with theta strictly inside (0, pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 < self.theta < math.pi:
            raise DomainError(
                f"theta = {self.theta} must lie strictly inside (0, pi); "
                "use SpinVector at the poles"
            )

    def to_vector(self) -> "SpinVector":
        st = math.sin(self.theta)
        return SpinVector(jx=st * math.cos(self.phi),
                          jy=st * math.sin(self.phi),
                          jz=-math.cos(self.theta))


@dataclass(frozen=True)
class SpinVector:
    """Unit vector 2<J>/N_T in Cartesian components."""

    jx: float
    jy: float
    jz: float

    def __post_init__(self):
        norm = math.sqrt(self.jx**2 + self.jy**2 + self.jz**2)
        if abs(norm - 1.0) > 1e-6:
            raise DomainError(f"|u| = {norm} is not 1")

    def to_angles(self) -> tuple[float, float]:
        """(theta, phi) read-back; phi from atan2(jy, jx)."""
        return math.acos(max(-1.0, min(1.0, -self.jz))), math.atan2(self.jy, self.jx)


def from_junction(z: float, phi: float) -> SpinVector:
    """Spin vector matching a junction state: jz = z, azimuth phi."""
    if abs(z) > 1.0:
        raise DomainError(f"|z| = {abs(z)} exceeds 1")
    st = math.sqrt(1.0 - z * z)
    return SpinVector(jx=st * math.cos(phi), jy=st * math.sin(phi), jz=z)


@dataclass(frozen=True)
class SpinTrajectory:
    times: np.ndarray
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def theta(self) -> np.ndarray:
        return np.arccos(np.clip(-self.jz, -1.0, 1.0))

    @property
    def phi(self) -> np.ndarray:
        return np.arctan2(self.jy, self.jx)

    @property
    def norm(self) -> np.ndarray:
        return np.sqrt(self.jx**2 + self.jy**2 + self.jz**2)


def bloch_rhs(state: BlochState, g: float) -> tuple[float, float]:
    """(dtheta/dt, dphi/dt) in rescaled time; singular at the poles."""
    st = math.sin(state.theta)
    return (-math.sin(state.phi),
            -g * math.cos(state.theta) - math.cos(state.theta) / st * math.cos(state.phi))


def cartesian_rhs(u, g: float):
    """Pole-free right-hand side for the unit spin vector."""
    jx, jy, jz = u
    return np.array([-g * jy * jz, jz * (1.0 + g * jx), -jy])


def integrate_cartesian(s0: SpinVector, g: float, t_end: float,
                        rtol: float = 1e-10, atol: float = 1e-10,
                        n_samples: int | None = None) -> SpinTrajectory:
    """Evolve the spin vector over rescaled time t_end.

    The norm is monitored at every sample; drift beyond NORM_TOL is
    corrected by renormalization and logged as an event.
    """
    if not t_end > 0:
        raise DomainError("t_end must be positive")
    n_samples = n_samples or int(min(20001, max(201, round(10.0 * t_end) + 1)))
    times = np.linspace(0.0, t_end, n_samples)
    sol = solve_ivp(lambda t, u: cartesian_rhs(u, g), (0.0, t_end),
                    (s0.jx, s0.jy, s0.jz), method="RK45",
                    rtol=rtol, atol=atol, t_eval=times)
    if not sol.success:
        raise SolverError(f"spin integration failed: {sol.message}")
    jx, jy, jz = sol.y
    norms = np.sqrt(jx**2 + jy**2 + jz**2)
    renorm_events = []
    drift = float(np.max(np.abs(norms - 1.0)))
    if drift > NORM_TOL:
        bad = np.nonzero(np.abs(norms - 1.0) > NORM_TOL)[0]
        renorm_events = [float(times[i]) for i in bad[:16]]
        jx, jy, jz = jx / norms, jy / norms, jz / norms
    return SpinTrajectory(times=times, jx=jx, jy=jy, jz=jz,
                          diagnostics={"nfev": sol.nfev, "norm_drift": drift,
                                       "renorm_events": renorm_events, "g": g})


def fringe_visibility(state, signed: bool = False) -> float:
    """Mean fringe visibility sin(theta) cos(phi) = jx of a spin state.

    Returns |jx| = 2|<Jx>|/N_T by default; signed=True exposes the raw
    value for diagnostics.
    """
    if isinstance(state, BlochState):
        value = math.sin(state.theta) * math.cos(state.phi)
    elif isinstance(state, SpinVector):
        value = state.jx
    else:
        raise DomainError(f"expected BlochState or SpinVector, got {type(state)!r}")
    return value if signed else abs(value)


def spin_coherent_coefficients(theta: float, phi: float, N_T: int) -> np.ndarray:
    """Amplitudes of the spin coherent state |theta, phi> over the Jz basis.

    Index k = m + N_T/2 runs 0..N_T (k phonons in resonator 1):

        c_k = sqrt(C(N_T, k)) sin(theta/2)^k cos(theta/2)^(N_T-k) e^{-i k phi}

    This closed form is the alpha = tan(theta/2) e^{-i phi} parameterization
    with the normalization absorbed, finite at both poles (theta = pi puts
    all weight on k = N_T with phase e^{-i N_T phi}).  Binomials are
    evaluated in log space so large N_T does not overflow.
    """
    if N_T < 1 or N_T != int(N_T):
        raise DomainError("N_T must be a positive integer")
    if not 0.0 <= theta <= math.pi:
        raise DomainError(f"theta = {theta} must lie in [0, pi]")
    N_T = int(N_T)
    k = np.arange(N_T + 1)
    s, c = math.sin(theta / 2.0), math.cos(theta / 2.0)
    if s == 0.0 or theta == 0.0:
        out = np.zeros(N_T + 1, dtype=complex)
        out[0] = 1.0
        return out
    if c == 0.0 or theta == math.pi:
        # exact south pole: cos(pi/2) is not a float zero, branch explicitly
        out = np.zeros(N_T + 1, dtype=complex)
        out[N_T] = np.exp(-1j * N_T * phi)
        return out
    ln_binom = np.array([lgamma(N_T + 1) - lgamma(kk + 1) - lgamma(N_T - kk + 1)
                         for kk in k])
    ln_mag = 0.5 * ln_binom + k * math.log(s) + (N_T - k) * math.log(c)
    coeffs = np.exp(ln_mag) * np.exp(-1j * k * phi)
    return coeffs / np.linalg.norm(coeffs)
