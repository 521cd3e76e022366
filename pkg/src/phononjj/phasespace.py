"""Fixed points and energy landscape of the junction Hamiltonian.

Stationary points have phi in {0, pi} (mod 2pi); their z values solve

    zero phase:  z (g + 1/sqrt(1 - z^2)) + Delta = 0
    pi phase:    z (g - 1/sqrt(1 - z^2)) + Delta = 0

At Delta = 0 the pi-phase branch has the closed form z = 0 plus, for
g > 1, the degenerate pair z = +-sqrt(1 - 1/g^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, SolverError
from .meanfield import junction_energy

MINIMUM = "minimum"
MAXIMUM = "maximum"
SADDLE = "saddle"
BOUNDARY = "boundary"

# Hessian eigenvalues smaller than this are bifurcation-degenerate
EIG_TOL = 1e-8
GRAD_TOL = 1e-10


@dataclass(frozen=True)
class FixedPoint:
    z: float
    phi: float                 # representative in [0, 2*pi)
    kind: str
    energy: float


@dataclass(frozen=True)
class EnergyGrid:
    z_axis: np.ndarray
    phi_axis: np.ndarray
    values: np.ndarray         # values[i, j] = H(z_i, phi_j)
    g: float
    Delta: float


def gradient(z: float, phi: float, g: float, Delta: float) -> tuple[float, float]:
    """(dH/dz, dH/dphi) of the junction Hamiltonian."""
    sq = math.sqrt(1.0 - z * z)
    if sq == 0.0:
        raise DomainError("gradient undefined at |z| = 1")
    return (Delta + g * z + z * math.cos(phi) / sq, sq * math.sin(phi))


def hessian(z: float, phi: float, g: float, Delta: float) -> np.ndarray:
    """Analytic 2x2 Hessian of H in (z, phi)."""
    sq = math.sqrt(1.0 - z * z)
    if sq == 0.0:
        raise DomainError("Hessian undefined at |z| = 1")
    h_zz = g + math.cos(phi) / sq**3
    h_pp = sq * math.cos(phi)
    h_zp = -z * math.sin(phi) / sq
    return np.array([[h_zz, h_zp], [h_zp, h_pp]])


def classify(z: float, phi: float, g: float, Delta: float) -> str:
    """Classify a stationary point by the eigenvalue signs of the Hessian.

    Both positive -> minimum, both negative -> maximum, mixed -> saddle;
    an eigenvalue within EIG_TOL of zero marks a bifurcation boundary.
    """
    gz, gp = gradient(z, phi, g, Delta)
    if max(abs(gz), abs(gp)) > 1e-8:
        raise DomainError(
            f"({z}, {phi}) is not stationary: |grad H| = {max(abs(gz), abs(gp)):.3e}"
        )
    eigs = np.linalg.eigvalsh(hessian(z, phi, g, Delta))
    if np.any(np.abs(eigs) < EIG_TOL):
        return BOUNDARY
    if np.all(eigs > 0):
        return MINIMUM
    if np.all(eigs < 0):
        return MAXIMUM
    return SADDLE


def _branch_roots(g: float, Delta: float, sign: float, n_scan: int = 1000) -> list[float]:
    """Roots of z (g + sign/sqrt(1-z^2)) + Delta = 0 on (-1, 1) by a
    sign-change scan followed by bracketed refinement."""

    def f(z):
        return z * (g + sign / math.sqrt(1.0 - z * z)) + Delta

    eps = 1e-9
    zs = np.linspace(-1.0 + eps, 1.0 - eps, n_scan)
    vals = np.array([f(z) for z in zs])
    roots = []
    for i in np.nonzero(np.diff(np.sign(vals)) != 0)[0]:
        try:
            root = brentq(f, zs[i], zs[i + 1], xtol=1e-14, rtol=8.9e-16)
        except (ValueError, RuntimeError) as exc:
            raise SolverError(
                f"fixed-point refinement failed in [{zs[i]}, {zs[i+1]}]"
            ) from exc
        if not any(math.isclose(root, r, abs_tol=1e-10) for r in roots):
            roots.append(root)
    exact = np.nonzero(vals == 0.0)[0]
    for i in exact:
        if not any(math.isclose(zs[i], r, abs_tol=1e-10) for r in roots):
            roots.append(float(zs[i]))
    return sorted(roots)


def fixed_points(g: float, Delta: float = 0.0) -> list[FixedPoint]:
    """All stationary points with phi in {0, pi}, classified and with energy.

    Delta = 0 uses the analytic branch (z = 0 on both phases; the pair
    z = +-sqrt(1 - 1/g^2) on the pi phase for g > 1); otherwise both
    branch equations are solved by a bracketed scan.
    """
    if not math.isfinite(Delta):
        raise DomainError("Delta must be finite")
    points: list[tuple[float, float]] = []
    if Delta == 0.0:
        points.append((0.0, 0.0))
        points.append((0.0, math.pi))
        if g > 1.0:
            zs = math.sqrt(1.0 - 1.0 / (g * g))
            points.append((+zs, math.pi))
            points.append((-zs, math.pi))
    else:
        for z in _branch_roots(g, Delta, +1.0):
            points.append((z, 0.0))
        for z in _branch_roots(g, Delta, -1.0):
            points.append((z, math.pi))
    out = []
    for z, phi in points:
        kind = classify(z, phi, g, Delta)
        energy = float(junction_energy(z, phi, g, Delta))
        out.append(FixedPoint(z=z, phi=phi, kind=kind, energy=energy))
    return out


def energy_grid(g: float, Delta: float, nz: int, nphi: int) -> EnergyGrid:
    """Junction energy sampled on a uniform grid z in [-1, 1], phi in [0, 2pi]."""
    if nz < 2 or nphi < 2:
        raise DomainError("nz and nphi must be >= 2")
    z_axis = np.linspace(-1.0, 1.0, nz)
    phi_axis = np.linspace(0.0, 2.0 * math.pi, nphi)
    values = junction_energy(z_axis[:, None], phi_axis[None, :], g, Delta)
    return EnergyGrid(z_axis=z_axis, phi_axis=phi_axis, values=values,
                      g=g, Delta=Delta)


def separatrix_energy(g: float) -> float:
    """Energy of the stationary point at (0, pi): the self-trapping threshold.

    Runs whose initial energy exceeds this value (equal to 1 for every g
    at Delta = 0) cannot reach z = 0 with phi = 0 and stay trapped.
    """
    return float(junction_energy(0.0, math.pi, g, 0.0))
