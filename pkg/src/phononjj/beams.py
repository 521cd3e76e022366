"""Clamped-beam elasticity front end.

Maps the geometry and material of two doubly clamped nanomechanical beams to
the effective two-mode model: Kerr-type nonlinearities lambda_i, linear
coupling rate G, detuning Delta0, and the dimensionless junction parameters
(g, Delta, kappa).

The flexural eigenproblem of a doubly clamped beam gives mode shapes
psi_n(x) with eigenvalues zeta_n solving cos(zeta) cosh(zeta) = 1.  The
deflection-induced stretching of the beam produces a quartic (Duffing)
stiffening whose strength is set by the integral N11 = int psi_1'(x)^2 dx.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar

from .constants import HBAR
from .errors import DomainError, RWAViolationError, SolverError

QUAD_EPSREL = 1e-10
QUAD_EPSABS = 1e-14

# Regime labels for the dimensionless nonlinearity parameter g
RABI = "rabi"
JOSEPHSON = "josephson"
FOCK = "fock"


@dataclass(frozen=True)
class PhysicalBeam:
    """One doubly clamped resonator, SI units.

    mu: linear mass density (kg/m)
    L: length (m)
    K: ratio of bending to compressional rigidity (m); d/sqrt(12) for a
       rectangular cross-section of thickness d
    linear_modulus: I = E*A, Young's modulus times cross-section area (N)
    G0: inter-beam coupling constant (N/m)
    kappa0: mechanical energy damping rate (rad/s)
    omega0: fundamental angular frequency (rad/s); derived from the
       eigenproblem when omitted
    """

    mu: float
    L: float
    K: float
    linear_modulus: float
    G0: float
    kappa0: float
    omega0: float | None = None

    def __post_init__(self):
        for name in ("mu", "L", "K", "linear_modulus"):
            if not getattr(self, name) > 0:
                raise DomainError(f"PhysicalBeam.{name} must be strictly positive")
        if self.kappa0 < 0:
            raise DomainError("PhysicalBeam.kappa0 must be nonnegative")
        if not self.K < self.L:
            raise DomainError(
                "slender-beam assumption violated: K must be much smaller than L "
                f"(got K={self.K}, L={self.L})"
            )


@dataclass(frozen=True)
class ModeSolution:
    """One flexural mode: eigenvalue, modal mass, frequency and Duffing strength.

    n11 is the stretching integral int_0^L psi'(x)^2 dx (1/m) of the
    max-normalized mode shape; duffing_lambda0 is the quartic stiffness
    coefficient (N/m^3) in the (lambda0/4) X^4 energy convention.
    """

    zeta: float
    effective_mass: float
    frequency: float
    n11: float
    duffing_lambda0: float


@dataclass(frozen=True)
class EffectiveParams:
    """Two-mode model coefficients, all rates in rad/s."""

    lambda1: float
    lambda2: float
    G: float
    Delta0: float
    kappa1: float
    kappa2: float
    N_T: float

    @property
    def Lambda(self) -> float:
        return self.lambda1 + self.lambda2


@dataclass(frozen=True)
class DimensionlessParams:
    """Junction parameters in units of the coupling: g, Delta, kappa = kappa0/2G."""

    g: float
    Delta: float
    kappa: float
    N_T: float


def _residual(zeta: float) -> float:
    # cos(z) cosh(z) = 1 rewritten as cos(z) - sech(z) = 0; the rewritten
    # form stays finite where cosh overflows.
    return math.cos(zeta) - 1.0 / math.cosh(zeta)


def solve_eigenvalues(n_modes: int, tol: float = 1e-12) -> list[float]:
    """First n_modes positive roots of cos(zeta) cosh(zeta) = 1, increasing.

    Each root satisfies |cos(zeta) cosh(zeta) - 1| < tol * cosh(zeta).
    Roots are bracketed in (n*pi, (n+1)*pi), near the asymptote (n+1/2)*pi.
    """
    if n_modes < 1:
        raise DomainError("n_modes must be >= 1")
    if not tol > 0:
        raise DomainError("tol must be positive")
    roots = []
    for n in range(1, n_modes + 1):
        a, b = n * math.pi, (n + 1) * math.pi
        try:
            zeta = brentq(_residual, a, b, xtol=1e-15, rtol=8.9e-16, maxiter=200)
        except (ValueError, RuntimeError) as exc:
            raise SolverError(
                f"eigenvalue root finding failed in bracket "
                f"({a:.6f}, {b:.6f}): residuals f(a)={_residual(a):.3e}, "
                f"f(b)={_residual(b):.3e}"
            ) from exc
        if abs(_residual(zeta)) >= tol:
            raise SolverError(
                f"eigenvalue {zeta!r} has residual {abs(_residual(zeta)):.3e} >= tol={tol:.3e}"
            )
        roots.append(zeta)
    return roots


def _mode_shape_raw(zeta: float, s):
    """Unnormalized clamped-clamped mode shape on the scaled coordinate s = x/L."""
    s = np.asarray(s, dtype=float)
    a = (np.sin(zeta * s) - np.sinh(zeta * s)) / (math.sin(zeta) - math.sinh(zeta))
    b = (np.cos(zeta * s) - np.cosh(zeta * s)) / (math.cos(zeta) - math.cosh(zeta))
    return a - b


def _mode_slope_raw(zeta: float, s):
    """d/ds of the unnormalized mode shape."""
    s = np.asarray(s, dtype=float)
    a = zeta * (np.cos(zeta * s) - np.cosh(zeta * s)) / (math.sin(zeta) - math.sinh(zeta))
    b = zeta * (-np.sin(zeta * s) - np.sinh(zeta * s)) / (math.cos(zeta) - math.cosh(zeta))
    return a - b


@lru_cache(maxsize=64)
def _normalization(zeta: float) -> float:
    """Signed value of the raw shape at its |psi| maximum, so that the
    normalized shape peaks at +1."""
    grid = np.linspace(0.0, 1.0, 65537)
    vals = _mode_shape_raw(zeta, grid)
    i = int(np.argmax(np.abs(vals)))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(
        lambda s: -abs(float(_mode_shape_raw(zeta, s))),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-14},
    )
    return float(_mode_shape_raw(zeta, res.x))


def eigenmode(zeta: float, s):
    """Mode shape psi(s) at s = x/L in [0, 1], normalized so max psi = 1."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0) or np.any(s_arr > 1):
        raise DomainError("s = x/L must lie in [0, 1]")
    out = _mode_shape_raw(zeta, s_arr) / _normalization(zeta)
    return float(out) if np.isscalar(s) else out


def eigenmode_slope(zeta: float, s):
    """d psi/ds of the max-normalized mode shape (multiply by 1/L for psi'(x))."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0) or np.any(s_arr > 1):
        raise DomainError("s = x/L must lie in [0, 1]")
    out = _mode_slope_raw(zeta, s_arr) / _normalization(zeta)
    return float(out) if np.isscalar(s) else out


def mode_mass_from_shape(beam: PhysicalBeam, shape: Callable[[float], float]) -> float:
    """Modal mass mu * L * int_0^1 shape(s)^2 ds for an arbitrary shape function."""
    integral, _ = quad(lambda s: shape(s) ** 2, 0.0, 1.0,
                       epsrel=QUAD_EPSREL, epsabs=QUAD_EPSABS, limit=200)
    return beam.mu * beam.L * integral


def mode_mass(beam: PhysicalBeam, zeta: float) -> float:
    """Effective mass m_n = mu int_0^L psi_n(x)^2 dx of the max-normalized mode."""
    return mode_mass_from_shape(beam, lambda s: float(eigenmode(zeta, s)))


def mode_frequency(beam: PhysicalBeam, zeta: float) -> float:
    """Flexural frequency Omega_n = sqrt(I K^2 / mu) (zeta_n / L)^2."""
    return math.sqrt(beam.linear_modulus * beam.K**2 / beam.mu) * (zeta / beam.L) ** 2


def stretching_integral(zeta: float) -> float:
    """Dimensionless stretching integral int_0^1 (d psi/ds)^2 ds.

    The physical N11 = int_0^L psi'(x)^2 dx equals this divided by L.
    """
    integral, _ = quad(lambda s: float(eigenmode_slope(zeta, s)) ** 2, 0.0, 1.0,
                       epsrel=QUAD_EPSREL, epsabs=QUAD_EPSABS, limit=200)
    return integral


def solve_mode(beam: PhysicalBeam, n: int = 1, tol: float = 1e-12,
               quartic_convention: str = "quarter") -> ModeSolution:
    """Solve mode n of the beam and collect mass, frequency and Duffing strength."""
    zeta = solve_eigenvalues(n, tol=tol)[n - 1]
    mass = mode_mass(beam, zeta)
    freq = beam.omega0 if beam.omega0 is not None else mode_frequency(beam, zeta)
    n11 = stretching_integral(zeta) / beam.L
    lam0 = _duffing_lambda0(beam, zeta, n11, freq, quartic_convention)
    return ModeSolution(zeta=zeta, effective_mass=mass, frequency=freq,
                        n11=n11, duffing_lambda0=lam0)


def _duffing_lambda0(beam: PhysicalBeam, zeta: float, n11: float,
                     omega0: float, convention: str) -> float:
    lam0 = n11**2 * beam.L**3 * beam.mu * omega0**2 / (2.0 * zeta**4 * beam.K**2)
    if convention == "quarter":
        # quartic energy written as (lambda0/4) X^4
        return lam0
    if convention == "plain":
        # quartic energy written as lambda0 X^4; same physics, smaller symbol
        return lam0 / 4.0
    raise DomainError(f"unknown quartic_convention {convention!r}; use 'quarter' or 'plain'")


def duffing_lambda(beam: PhysicalBeam, mode: ModeSolution,
                   quartic_convention: str = "quarter") -> float:
    """Quartic stiffness lambda0 = N11^2 L^3 mu omega0^2 / (2 zeta^4 K^2).

    The default 'quarter' convention corresponds to a (lambda0/4) X^4 energy
    term; 'plain' reports the coefficient of lambda0 X^4 instead (a factor
    4 smaller, identical physics).
    """
    omega0 = beam.omega0 if beam.omega0 is not None else mode.frequency
    return _duffing_lambda0(beam, mode.zeta, mode.n11, omega0, quartic_convention)


def duffing_coefficient(beam: PhysicalBeam, mode: ModeSolution) -> float:
    """Dimensionless c0 = lambda0 K^2 / (m omega0^2), about 0.060 for the
    fundamental mode (with m the modal mass)."""
    omega0 = beam.omega0 if beam.omega0 is not None else mode.frequency
    return mode.duffing_lambda0 * beam.K**2 / (mode.effective_mass * omega0**2)


def zero_point_amplitude(mass: float, omega: float) -> float:
    """Mechanical zero-point motion x0 = sqrt(hbar / (2 m omega))."""
    return math.sqrt(HBAR / (2.0 * mass * omega))


def _rwa_ratios(lambda1, lambda2, G, Delta0, omega1, omega2) -> dict[str, float]:
    wmin = min(omega1, omega2)
    return {
        "G/omega0": G / wmin,
        "lambda1/omega01": lambda1 / omega1,
        "lambda2/omega02": lambda2 / omega2,
        "|Delta0|/omega0": abs(Delta0) / wmin,
    }


def effective_report(beam1: PhysicalBeam, beam2: PhysicalBeam, N_T: float,
                     rwa_warn_threshold: float = 0.01,
                     rwa_reject_threshold: float = 0.1,
                     quartic_convention: str = "quarter") -> dict:
    """Full physical -> effective -> dimensionless audit trail as a dict.

    Every intermediate (x0_i, lambda0_i, lambda_tilde_i, lambda_i, G, g,
    Delta, kappa) is included so the mapping can be checked line by line.
    """
    if not N_T > 0:
        raise DomainError("N_T must be positive")
    beams = []
    for beam in (beam1, beam2):
        mode = solve_mode(beam, 1, quartic_convention=quartic_convention)
        x0 = zero_point_amplitude(mode.effective_mass, mode.frequency)
        # energy coefficient of X^4 is convention independent
        energy_coeff = mode.duffing_lambda0 / (4.0 if quartic_convention == "quarter" else 1.0)
        lam_tilde = 2.0 * energy_coeff * x0**4 / HBAR
        lam = 6.0 * lam_tilde
        beams.append({
            "zeta1": mode.zeta,
            "effective_mass": mode.effective_mass,
            "omega0": mode.frequency,
            "n11": mode.n11,
            "lambda0": mode.duffing_lambda0,
            "x0": x0,
            "lambda_tilde": lam_tilde,
            "lambda": lam,
            "kappa0": beam.kappa0,
        })
    if beam1.G0 != beam2.G0:
        raise DomainError(
            f"the two beams declare different coupling constants G0 "
            f"({beam1.G0} vs {beam2.G0}); they describe one shared coupling"
        )
    G = 2.0 * beam1.G0 * beams[0]["x0"] * beams[1]["x0"] / HBAR
    Delta0 = beams[1]["omega0"] - beams[0]["omega0"]
    ratios = _rwa_ratios(beams[0]["lambda"], beams[1]["lambda"], G, Delta0,
                         beams[0]["omega0"], beams[1]["omega0"])
    report = {
        "N_T": N_T,
        "beam1": beams[0],
        "beam2": beams[1],
        "G0": beam1.G0,
        "G": G,
        "Delta0": Delta0,
        "quartic_convention": quartic_convention,
        "rwa": {
            "ratios": ratios,
            "warn_threshold": rwa_warn_threshold,
            "reject_threshold": rwa_reject_threshold,
            "worst_ratio": max(ratios.values()),
        },
    }
    eff = EffectiveParams(
        lambda1=beams[0]["lambda"], lambda2=beams[1]["lambda"], G=G,
        Delta0=Delta0, kappa1=beam1.kappa0, kappa2=beam2.kappa0, N_T=N_T,
    )
    if G > 0:
        dim = to_dimensionless(eff)
        regime, boundary = classify_g(dim.g, dim.N_T)
        report["dimensionless"] = {
            "g": dim.g, "Delta": dim.Delta, "kappa": dim.kappa, "N_T": dim.N_T,
            "regime": regime, "regime_boundary": boundary,
        }
    return report


def to_effective(beam1: PhysicalBeam, beam2: PhysicalBeam, N_T: float,
                 rwa_warn_threshold: float = 0.01,
                 rwa_reject_threshold: float = 0.1,
                 quartic_convention: str = "quarter") -> EffectiveParams:
    """Effective two-mode parameters from two beams and a total phonon number.

    lambda_i = 3 lambda0_i x0_i^4 / hbar, G = 2 G0 x01 x02 / hbar,
    Delta0 = omega02 - omega01.  Emits a warning if any rotating-wave
    validity ratio exceeds rwa_warn_threshold and rejects above
    rwa_reject_threshold.
    """
    report = effective_report(beam1, beam2, N_T,
                              rwa_warn_threshold=rwa_warn_threshold,
                              rwa_reject_threshold=rwa_reject_threshold,
                              quartic_convention=quartic_convention)
    ratios = report["rwa"]["ratios"]
    worst = report["rwa"]["worst_ratio"]
    if worst > rwa_reject_threshold:
        detail = ", ".join(f"{k}={v:.3e}" for k, v in ratios.items())
        raise RWAViolationError(
            f"rotating-wave reduction invalid: ratio(s) exceed "
            f"{rwa_reject_threshold}: {detail}"
        )
    if worst > rwa_warn_threshold:
        detail = ", ".join(f"{k}={v:.3e}" for k, v in ratios.items() if v > rwa_warn_threshold)
        warnings.warn(f"rotating-wave validity marginal: {detail}", stacklevel=2)
    return EffectiveParams(
        lambda1=report["beam1"]["lambda"], lambda2=report["beam2"]["lambda"],
        G=report["G"], Delta0=report["Delta0"],
        kappa1=beam1.kappa0, kappa2=beam2.kappa0, N_T=N_T,
    )


def to_dimensionless(eff: EffectiveParams) -> DimensionlessParams:
    """g = N_T (lambda1 + lambda2) / 4G, Delta = [-Delta0 + (N_T/2 + 1)
    (lambda1 - lambda2)] / 2G, kappa = kappa0 / 2G.

    The rescaling assumes a common loss rate; differing kappa1, kappa2 are
    rejected rather than averaged.
    """
    if eff.G == 0:
        raise DomainError("uncoupled system: G = 0, dimensionless reduction undefined")
    scale = max(abs(eff.kappa1), abs(eff.kappa2))
    if scale > 0 and abs(eff.kappa1 - eff.kappa2) > 1e-12 * scale:
        raise DomainError(
            f"damping rates differ (kappa1={eff.kappa1}, kappa2={eff.kappa2}); "
            "the single-kappa reduction assumes equal loss rates"
        )
    g = eff.N_T * (eff.lambda1 + eff.lambda2) / (4.0 * eff.G)
    Delta = (-eff.Delta0 + (eff.N_T / 2.0 + 1.0) * (eff.lambda1 - eff.lambda2)) / (2.0 * eff.G)
    kappa = eff.kappa1 / (2.0 * eff.G)
    return DimensionlessParams(g=g, Delta=Delta, kappa=kappa, N_T=eff.N_T)


def classify_g(g: float, N_T: float) -> tuple[str, bool]:
    """Regime of the nonlinearity parameter: g < 1 Rabi, 1 < g < N_T^2
    Josephson, g > N_T^2 Fock.  Returns (regime, on_boundary)."""
    if N_T < 1:
        raise DomainError("N_T must be >= 1 for regime classification")
    boundary = math.isclose(g, 1.0, rel_tol=1e-12) or math.isclose(g, N_T**2, rel_tol=1e-12)
    if g < 1.0:
        return RABI, boundary
    if g > N_T**2:
        return FOCK, boundary
    return JOSEPHSON, boundary
