"""Simulation toolkit for a phonon Josephson junction built from two
coupled nonlinear nanomechanical resonators: beam-elasticity parameter
mapping, semiclassical mean-field and Bloch-sphere dynamics, phase-space
analysis, and an exact fixed-phonon-number quantum reference."""

__version__ = "0.1.0"

from .beams import (
    DimensionlessParams,
    EffectiveParams,
    ModeSolution,
    PhysicalBeam,
    classify_g,
    duffing_coefficient,
    duffing_lambda,
    effective_report,
    eigenmode,
    eigenmode_slope,
    mode_frequency,
    mode_mass,
    solve_eigenvalues,
    solve_mode,
    stretching_integral,
    to_dimensionless,
    to_effective,
    zero_point_amplitude,
)
from .bloch import (
    BlochState,
    SpinTrajectory,
    SpinVector,
    bloch_rhs,
    cartesian_rhs,
    fringe_visibility,
    from_junction,
    integrate_cartesian,
    spin_coherent_coefficients,
)
from .errors import ConfigError, DomainError, RWAViolationError, SolverError
from .meanfield import (
    DampedJunctionState,
    IntegrationOptions,
    JunctionState,
    SelfTrappingReport,
    Trajectory,
    classify_regime,
    critical_g,
    detect_self_trapping,
    hamiltonian,
    integrate,
    integrate_damped,
    junction_energy,
    rhs_conservative,
    rhs_damped,
    stationary_g_s,
    tunneling_current,
)
from .phasespace import (
    EnergyGrid,
    FixedPoint,
    classify,
    energy_grid,
    fixed_points,
    gradient,
    hessian,
    separatrix_energy,
)
from .quantum import (
    AngularHamiltonianParams,
    FluctuationReport,
    GroundState,
    Observables,
    QuantumTrace,
    build_hamiltonian,
    build_hamiltonian_from_effective,
    diagonalize,
    evolve,
    evolve_trace,
    fluctuation_report,
    ground_state,
    jx_matrix,
    jy_matrix,
    jz_values,
    observables,
    observables_trace,
    visibility_trace,
)
