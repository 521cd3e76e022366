"""Exact quantum dynamics at fixed total phonon number.

At fixed N_T the two-mode system is a spin J = N_T/2.  In the Jz
eigenbasis |m>, m = -J..J stored at array index k = m + J (k phonons in
resonator 1), the interaction Hamiltonian is

    H = (Lambda/2) (Jz - n0)^2 - 2 G Jx,      Lambda = lambda1 + lambda2

with all rates in rad/s (hbar absorbed).  The asymmetry parameter

    n0 = [(lambda2 - lambda1)(N_T + 1)/2 + Delta0] / Lambda

is singular at Lambda = 0; expanding the square gives the equivalent
linear coefficient Lambda*n0 = (lambda2 - lambda1)(N_T + 1)/2 + Delta0,
finite for all Lambda, which `build_hamiltonian_from_effective` uses.

Evolution is by dense eigendecomposition: exact up to machine precision,
so quantum-vs-semiclassical comparisons carry no integrator error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .beams import EffectiveParams
from .bloch import spin_coherent_coefficients
from .errors import DomainError

NORM_TOL = 1e-12


@dataclass(frozen=True)
class AngularHamiltonianParams:
    """Parameters (Lambda, G, n0, N_T) of the spin Hamiltonian."""

    Lambda: float
    G: float
    n0: float
    N_T: int

    def __post_init__(self):
        if self.N_T < 1 or self.N_T != int(self.N_T):
            raise DomainError("N_T must be a positive integer")
        if self.Lambda < 0:
            raise DomainError("Lambda must be nonnegative")

    @property
    def J(self) -> float:
        return self.N_T / 2.0

    @classmethod
    def from_effective(cls, eff: EffectiveParams) -> "AngularHamiltonianParams":
        """Derive (Lambda, G, n0) from effective two-mode parameters.

        Rejects Lambda = 0 with a nonzero asymmetry, where n0 is undefined;
        build_hamiltonian_from_effective handles that case without n0.
        """
        Lam = eff.lambda1 + eff.lambda2
        linear = (eff.lambda2 - eff.lambda1) * (eff.N_T + 1) / 2.0 + eff.Delta0
        if Lam > 0:
            n0 = linear / Lam
        elif linear == 0.0:
            n0 = 0.0
        else:
            raise DomainError(
                "n0 is undefined for Lambda = 0 with nonzero asymmetry; "
                "use build_hamiltonian_from_effective instead"
            )
        return cls(Lambda=Lam, G=eff.G, n0=n0, N_T=int(round(eff.N_T)))

    @classmethod
    def from_g(cls, g: float, N_T: int, G: float = 1.0) -> "AngularHamiltonianParams":
        """Symmetric parameter set with nonlinearity g: Lambda = 4 g G / N_T."""
        return cls(Lambda=4.0 * g * G / N_T, G=G, n0=0.0, N_T=N_T)


def jz_values(N_T: int) -> np.ndarray:
    """Diagonal of Jz: m = k - N_T/2 at index k."""
    return np.arange(N_T + 1, dtype=float) - N_T / 2.0


def jx_matrix(N_T: int) -> np.ndarray:
    """Dense Jx = (J+ + J-)/2 in the |m> basis."""
    J = N_T / 2.0
    m = jz_values(N_T)[:-1]
    off = 0.5 * np.sqrt(J * (J + 1.0) - m * (m + 1.0))
    H = np.zeros((N_T + 1, N_T + 1))
    idx = np.arange(N_T)
    H[idx, idx + 1] = off
    H[idx + 1, idx] = off
    return H


def jy_matrix(N_T: int) -> np.ndarray:
    """Dense Jy = (J+ - J-)/(2i) in the |m> basis."""
    J = N_T / 2.0
    m = jz_values(N_T)[:-1]
    off = 0.5 * np.sqrt(J * (J + 1.0) - m * (m + 1.0))
    H = np.zeros((N_T + 1, N_T + 1), dtype=complex)
    idx = np.arange(N_T)
    H[idx + 1, idx] = -1j * off   # <m+1| Jy |m> = -i/2 sqrt(...)
    H[idx, idx + 1] = +1j * off
    return H


def _build(Lambda: float, G: float, jz_linear: float, N_T: int,
           diag_shift: float = 0.0) -> np.ndarray:
    m = jz_values(N_T)
    H = -2.0 * G * jx_matrix(N_T)
    H[np.diag_indices(N_T + 1)] += 0.5 * Lambda * m * m - jz_linear * m + diag_shift
    return H


def build_hamiltonian(p: AngularHamiltonianParams) -> np.ndarray:
    """Dense (N_T+1)-dimensional Hamiltonian, real symmetric.

    Diagonal (Lambda/2)(m - n0)^2, off-diagonals -G sqrt(J(J+1) - m(m+-1)).
    """
    return _build(p.Lambda, p.G, p.Lambda * p.n0, p.N_T,
                  diag_shift=0.5 * p.Lambda * p.n0**2)


def build_hamiltonian_from_effective(eff: EffectiveParams) -> np.ndarray:
    """Hamiltonian straight from effective parameters.

    Uses the expanded form (Lambda/2) Jz^2 - [(lambda2 - lambda1)(N_T+1)/2
    + Delta0] Jz - 2 G Jx, which stays finite at Lambda = 0 where the n0
    parameterization breaks down.  The dropped constant (Lambda/2) n0^2
    shifts all eigenvalues equally.
    """
    Lam = eff.lambda1 + eff.lambda2
    linear = (eff.lambda2 - eff.lambda1) * (eff.N_T + 1) / 2.0 + eff.Delta0
    return _build(Lam, eff.G, linear, int(round(eff.N_T)))


def _check_state(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-9:
        raise DomainError(f"state norm {norm} is not 1")
    return state


def diagonalize(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a real symmetric H."""
    if not np.allclose(H, H.T.conj(), atol=1e-12):
        raise DomainError("Hamiltonian is not Hermitian")
    return eigh(H)


def evolve(state0: np.ndarray, H: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) |state0> by full eigendecomposition; t in seconds when
    H is in rad/s."""
    state0 = _check_state(state0)
    w, V = diagonalize(H)
    out = V @ (np.exp(-1j * w * t) * (V.conj().T @ state0))
    return out


def evolve_trace(state0: np.ndarray, H: np.ndarray, times: np.ndarray) -> np.ndarray:
    """States at many times as columns; one eigendecomposition for all."""
    state0 = _check_state(state0)
    w, V = diagonalize(H)
    coef = V.conj().T @ state0
    return V @ (np.exp(-1j * np.outer(w, np.asarray(times, dtype=float))) * coef[:, None])


@dataclass(frozen=True)
class Observables:
    jx: float
    jy: float
    jz: float
    delta_n: float
    visibility: float


def observables(state: np.ndarray) -> Observables:
    """Exact <Jx>, <Jy>, <Jz>, the Jz spread and the fringe visibility
    2|<Jx>|/N_T."""
    state = _check_state(state)
    N_T = state.size - 1
    m = jz_values(N_T)
    p = np.abs(state) ** 2
    jz = float(p @ m)
    jz2 = float(p @ (m * m))
    jx = float(np.real(state.conj() @ (jx_matrix(N_T) @ state)))
    jy = float(np.real(state.conj() @ (jy_matrix(N_T) @ state)))
    delta_n = math.sqrt(max(jz2 - jz * jz, 0.0))
    return Observables(jx=jx, jy=jy, jz=jz, delta_n=delta_n,
                       visibility=2.0 * abs(jx) / N_T)


@dataclass(frozen=True)
class GroundState:
    energy: float
    vector: np.ndarray
    degenerate: bool


def ground_state(H: np.ndarray) -> GroundState:
    """Lowest eigenpair; flags degeneracy when the first gap is below
    1e-12 of the spectral span."""
    w, V = diagonalize(H)
    span = float(w[-1] - w[0])
    degenerate = bool(w.size > 1 and (w[1] - w[0]) < 1e-12 * max(span, 1.0))
    return GroundState(energy=float(w[0]), vector=V[:, 0], degenerate=degenerate)


@dataclass(frozen=True)
class FluctuationReport:
    """Ground-state number/phase fluctuations of the junction.

    E_c = lambda1 + lambda2 (charging), E_j = G N_T (coupling),
    E_c' = E_c + 4 E_j / N_T^2.  The harmonic-oscillator estimates are
    delta_n = (E_j/E_c')^(1/4)/sqrt(2) and delta_phi = 1/(2 delta_n), so
    their product is exactly 1/2.  delta_n_exact is the Jz spread of the
    exact ground state.  The regime limits are delta_n_rabi = sqrt(N_T)/2
    and delta_n_josephson = (G N_T / (lambda1+lambda2))^(1/4)/sqrt(2).
    """

    E_c: float
    E_j: float
    E_c_prime: float
    delta_n_analytic: float
    delta_phi_analytic: float
    delta_n_exact: float
    delta_n_rabi: float
    delta_n_josephson: float


def fluctuation_report(eff: EffectiveParams) -> FluctuationReport:
    if eff.G <= 0:
        raise DomainError("fluctuation report needs G > 0")
    if eff.N_T < 2:
        raise DomainError("fluctuation report needs N_T >= 2")
    N_T = int(round(eff.N_T))
    E_c = eff.lambda1 + eff.lambda2
    E_j = eff.G * N_T
    E_cp = E_c + 4.0 * E_j / N_T**2
    dn = (E_j / E_cp) ** 0.25 / math.sqrt(2.0)
    dphi = 0.5 / dn
    gs = ground_state(build_hamiltonian_from_effective(eff))
    dn_exact = observables(gs.vector).delta_n
    dn_j = (E_j / E_c) ** 0.25 / math.sqrt(2.0) if E_c > 0 else math.inf
    return FluctuationReport(
        E_c=E_c, E_j=E_j, E_c_prime=E_cp,
        delta_n_analytic=dn, delta_phi_analytic=dphi, delta_n_exact=dn_exact,
        delta_n_rabi=math.sqrt(N_T) / 2.0, delta_n_josephson=dn_j,
    )


@dataclass(frozen=True)
class QuantumTrace:
    """Observables of an evolving state sampled at rescaled times 2 G t."""

    times: np.ndarray
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    visibility: np.ndarray
    delta_n: np.ndarray


def observables_trace(states: np.ndarray, times: np.ndarray) -> QuantumTrace:
    """Vectorized observables for a (dim, nt) array of state columns."""
    N_T = states.shape[0] - 1
    m = jz_values(N_T)
    p = np.abs(states) ** 2
    jz = np.einsum("i,it->t", m, p)
    jz2 = np.einsum("i,it->t", m * m, p)
    Jx = jx_matrix(N_T)
    jx = np.einsum("it,ij,jt->t", states.conj(), Jx, states).real
    Jy = jy_matrix(N_T)
    jy = np.einsum("it,ij,jt->t", states.conj(), Jy, states).real
    return QuantumTrace(times=np.asarray(times, dtype=float), jx=jx, jy=jy, jz=jz,
                        visibility=2.0 * np.abs(jx) / N_T,
                        delta_n=np.sqrt(np.maximum(jz2 - jz * jz, 0.0)))


def visibility_trace(theta0: float, phi0: float, p: AngularHamiltonianParams,
                     t_end: float, samples: int) -> QuantumTrace:
    """Evolve the coherent state |theta0, phi0> and sample its observables
    at uniform rescaled times on [0, t_end]."""
    if samples < 2:
        raise DomainError("samples must be >= 2")
    if p.G <= 0:
        raise DomainError("visibility trace needs G > 0 to define rescaled time")
    times = np.linspace(0.0, t_end, samples)
    psi0 = spin_coherent_coefficients(theta0, phi0, p.N_T)
    states = evolve_trace(psi0, build_hamiltonian(p), times / (2.0 * p.G))
    return observables_trace(states, times)


def trace_from_effective(eff: EffectiveParams, theta0: float, phi0: float,
                         t_end: float, samples: int) -> QuantumTrace:
    """Like visibility_trace but parameterized by effective two-mode rates,
    valid for any Lambda including 0 with asymmetry."""
    if samples < 2:
        raise DomainError("samples must be >= 2")
    if eff.G <= 0:
        raise DomainError("rescaled time needs G > 0")
    times = np.linspace(0.0, t_end, samples)
    psi0 = spin_coherent_coefficients(theta0, phi0, int(round(eff.N_T)))
    states = evolve_trace(psi0, build_hamiltonian_from_effective(eff),
                          times / (2.0 * eff.G))
    return observables_trace(states, times)
