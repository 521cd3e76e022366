import math

import numpy as np
import pytest

from phononjj import quantum as qm
from phononjj.beams import EffectiveParams
from phononjj.bloch import spin_coherent_coefficients
from phononjj.errors import DomainError


def basis_state(nt, k):
    v = np.zeros(nt + 1, dtype=complex)
    v[k] = 1.0
    return v


def symmetric_eff(g, nt, G=1.0):
    lam = 2.0 * g * G / nt
    return EffectiveParams(lambda1=lam, lambda2=lam, G=G, Delta0=0.0,
                           kappa1=0.0, kappa2=0.0, N_T=float(nt))


class TestBuildHamiltonian:
    def test_single_phonon_beam_splitter(self):
        p = qm.AngularHamiltonianParams(Lambda=0.0, G=0.7, n0=0.0, N_T=1)
        H = qm.build_hamiltonian(p)
        assert np.allclose(H, [[0.0, -0.7], [-0.7, 0.0]])
        assert np.allclose(np.linalg.eigvalsh(H), [-0.7, 0.7])

    def test_two_phonon_spectrum(self):
        # oracle: diagonalize the explicitly written tridiagonal matrix
        p = qm.AngularHamiltonianParams(Lambda=0.0, G=1.0, n0=0.0, N_T=2)
        H = qm.build_hamiltonian(p)
        s2 = math.sqrt(2.0)
        expected = np.array([[0, -s2, 0], [-s2, 0, -s2], [0, -s2, 0]])
        assert np.allclose(H, expected, atol=1e-15)
        assert np.allclose(np.linalg.eigvalsh(expected), [-2.0, 0.0, 2.0])
        assert np.allclose(np.linalg.eigvalsh(H), [-2.0, 0.0, 2.0], atol=1e-12)

    def test_uncoupled_is_diagonal(self):
        p = qm.AngularHamiltonianParams(Lambda=0.8, G=0.0, n0=0.3, N_T=6)
        H = qm.build_hamiltonian(p)
        m = qm.jz_values(6)
        assert np.allclose(H, np.diag(0.4 * (m - 0.3) ** 2))
        w, V = qm.diagonalize(H)
        assert np.allclose(np.sort(0.4 * (m - 0.3) ** 2), w)
        assert np.allclose(np.abs(V), np.eye(7)[:, np.argsort(0.4 * (m - 0.3) ** 2)])

    def test_hermitian_for_random_parameters(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            p = qm.AngularHamiltonianParams(
                Lambda=float(rng.uniform(0, 2)), G=float(rng.uniform(0, 2)),
                n0=float(rng.uniform(-3, 3)), N_T=int(rng.integers(1, 40)))
            H = qm.build_hamiltonian(p)
            assert np.allclose(H, H.T)

    def test_linear_spectrum_at_zero_nonlinearity(self):
        for nt, G in ((2, 1.0), (20, 0.7)):
            p = qm.AngularHamiltonianParams(Lambda=0.0, G=G, n0=0.0, N_T=nt)
            w = np.sort(np.linalg.eigvalsh(qm.build_hamiltonian(p)))
            expected = np.sort(-2.0 * G * qm.jz_values(nt))
            assert np.max(np.abs(w - expected)) < 1e-10

    def test_effective_form_handles_zero_nonlinearity_with_detuning(self):
        # linear spin Hamiltonian -Delta0 Jz - 2G Jx has spectrum -|B| m
        eff = EffectiveParams(lambda1=0.0, lambda2=0.0, G=0.4, Delta0=0.9,
                              kappa1=0.0, kappa2=0.0, N_T=8.0)
        H = qm.build_hamiltonian_from_effective(eff)
        field = math.hypot(2.0 * 0.4, 0.9)
        expected = np.sort(-field * qm.jz_values(8))
        assert np.allclose(np.sort(np.linalg.eigvalsh(H)), expected, atol=1e-12)

    def test_n0_parameterization_rejects_singular_case(self):
        eff = EffectiveParams(lambda1=0.0, lambda2=0.0, G=0.4, Delta0=0.9,
                              kappa1=0.0, kappa2=0.0, N_T=8.0)
        with pytest.raises(DomainError, match="n0"):
            qm.AngularHamiltonianParams.from_effective(eff)

    def test_n0_formula(self):
        eff = EffectiveParams(lambda1=1e-3, lambda2=3e-3, G=1.0, Delta0=0.2,
                              kappa1=0.0, kappa2=0.0, N_T=10.0)
        p = qm.AngularHamiltonianParams.from_effective(eff)
        expected = ((3e-3 - 1e-3) * 11 / 2.0 + 0.2) / 4e-3
        assert p.n0 == pytest.approx(expected, rel=1e-14)
        # both builders agree up to the dropped constant shift
        Ha = qm.build_hamiltonian(p)
        Hb = qm.build_hamiltonian_from_effective(eff)
        diff = Ha - Hb
        assert np.allclose(diff, diff[0, 0] * np.eye(11), atol=1e-12)


class TestEvolve:
    def test_zero_time_is_identity(self):
        psi = spin_coherent_coefficients(1.0, 0.3, 12)
        p = qm.AngularHamiltonianParams(Lambda=0.4, G=0.8, n0=0.1, N_T=12)
        out = qm.evolve(psi, qm.build_hamiltonian(p), 0.0)
        assert np.allclose(out, psi, atol=1e-12)

    def test_diagonal_hamiltonian_only_rotates_phases(self):
        psi = spin_coherent_coefficients(1.2, 0.0, 10)
        p = qm.AngularHamiltonianParams(Lambda=1.0, G=0.0, n0=0.0, N_T=10)
        out = qm.evolve(psi, qm.build_hamiltonian(p), 2.7)
        assert np.allclose(np.abs(out), np.abs(psi), atol=1e-12)
        assert not np.allclose(out, psi)

    def test_beam_splitter_oscillation(self):
        # all phonons in resonator 1: <Jz>(t) = J cos(2 G t)
        for nt in (2, 20):
            G = 1.3
            p = qm.AngularHamiltonianParams(Lambda=0.0, G=G, n0=0.0, N_T=nt)
            H = qm.build_hamiltonian(p)
            times = np.linspace(0.0, 10.0, 61)
            states = qm.evolve_trace(basis_state(nt, nt), H, times)
            jz = qm.observables_trace(states, times).jz
            expected = (nt / 2.0) * np.cos(2.0 * G * times)
            assert np.max(np.abs(jz - expected)) < 1e-9

    def test_norm_preserved(self):
        psi = spin_coherent_coefficients(2.0, 1.0, 30)
        p = qm.AngularHamiltonianParams(Lambda=0.3, G=1.0, n0=0.0, N_T=30)
        out = qm.evolve(psi, qm.build_hamiltonian(p), 57.0)
        assert abs(np.linalg.norm(out) - 1.0) < 1e-12

    def test_rejects_unnormalized(self):
        with pytest.raises(DomainError, match="norm"):
            qm.evolve(np.ones(5), np.eye(5), 1.0)

    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError, match="Hermitian"):
            qm.diagonalize(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestObservables:
    def test_equator_coherent_state(self):
        obs = qm.observables(spin_coherent_coefficients(math.pi / 2, 0.0, 24))
        assert obs.visibility == pytest.approx(1.0, abs=1e-12)
        assert abs(obs.jz) < 1e-12
        assert obs.jx == pytest.approx(12.0, abs=1e-12)

    def test_number_state(self):
        obs = qm.observables(basis_state(10, 3))
        assert obs.visibility == 0.0
        assert obs.delta_n == 0.0
        assert obs.jz == pytest.approx(-2.0)     # m = 3 - 5

    def test_coherent_state_expectation_vector(self):
        # exact check of <J> = (N_T/2)(sin t cos p, sin t sin p, -cos t)
        rng = np.random.default_rng(17)
        for _ in range(20):
            nt = int(rng.integers(1, 48))
            theta = float(rng.uniform(0.05, math.pi - 0.05))
            phi = float(rng.uniform(0, 2 * math.pi))
            obs = qm.observables(spin_coherent_coefficients(theta, phi, nt))
            J = nt / 2.0
            assert obs.jx == pytest.approx(J * math.sin(theta) * math.cos(phi), abs=1e-10)
            assert obs.jy == pytest.approx(J * math.sin(theta) * math.sin(phi), abs=1e-10)
            assert obs.jz == pytest.approx(-J * math.cos(theta), abs=1e-10)

    def test_coherent_state_number_spread(self):
        # binomial distribution over k gives delta_n = sqrt(N_T)/2 sin(theta)
        nt, theta = 36, 1.1
        obs = qm.observables(spin_coherent_coefficients(theta, 0.4, nt))
        assert obs.delta_n == pytest.approx(math.sqrt(nt) / 2.0 * math.sin(theta),
                                            rel=1e-10)


class TestGroundState:
    def test_linear_limit(self):
        nt, G = 16, 0.9
        p = qm.AngularHamiltonianParams(Lambda=0.0, G=G, n0=0.0, N_T=nt)
        gs = qm.ground_state(qm.build_hamiltonian(p))
        assert gs.energy == pytest.approx(-G * nt, rel=1e-12)
        overlap = abs(np.vdot(spin_coherent_coefficients(math.pi / 2, 0.0, nt),
                              gs.vector)) ** 2
        assert overlap == pytest.approx(1.0, abs=1e-10)

    def test_weak_nonlinearity_keeps_coherent_ground_state(self):
        nt, G = 20, 1.0
        eff = EffectiveParams(lambda1=1e-3 * G, lambda2=1e-3 * G, G=G,
                              Delta0=0.0, kappa1=0.0, kappa2=0.0, N_T=float(nt))
        gs = qm.ground_state(qm.build_hamiltonian_from_effective(eff))
        overlap = abs(np.vdot(spin_coherent_coefficients(math.pi / 2, 0.0, nt),
                              gs.vector)) ** 2
        assert overlap > 0.99
        assert gs.energy == pytest.approx(-G * nt, rel=0.02)

    def test_pure_nonlinearity_even_count(self):
        p = qm.AngularHamiltonianParams(Lambda=1.0, G=0.0, n0=0.0, N_T=8)
        gs = qm.ground_state(qm.build_hamiltonian(p))
        assert not gs.degenerate
        assert abs(gs.vector[4]) == pytest.approx(1.0)    # m = 0

    def test_pure_nonlinearity_odd_count_degenerate(self):
        p = qm.AngularHamiltonianParams(Lambda=1.0, G=0.0, n0=0.0, N_T=7)
        gs = qm.ground_state(qm.build_hamiltonian(p))
        assert gs.degenerate                               # m = +-1/2 pair


class TestFluctuations:
    def test_rabi_limit(self):
        rep = qm.fluctuation_report(symmetric_eff(0.0, 40))
        assert rep.delta_n_analytic == pytest.approx(math.sqrt(40) / 2.0, rel=1e-12)

    def test_uncertainty_product_exact(self):
        # delta_phi is constructed as 0.5/delta_n, so the product is 1/2 up
        # to the single rounding of this multiply
        for g in (0.01, 0.5, 3.0, 10.0, 30.0):
            rep = qm.fluctuation_report(symmetric_eff(g, 40))
            product = rep.delta_n_analytic * rep.delta_phi_analytic
            assert abs(product - 0.5) <= 2.0**-53

    def test_josephson_formula(self):
        g, nt, G = 10.0, 40, 1.0
        rep = qm.fluctuation_report(symmetric_eff(g, nt, G))
        expected = (G * nt / (rep.E_c)) ** 0.25 / math.sqrt(2.0)
        assert rep.delta_n_josephson == pytest.approx(expected, rel=1e-12)

    def test_josephson_below_rabi_spread(self):
        for g in (1.5, 5.0, 20.0, 50.0):
            rep = qm.fluctuation_report(symmetric_eff(g, 40))
            assert rep.delta_n_josephson < rep.delta_n_rabi

    def test_exact_spread_tracks_harmonic_estimate(self):
        for g in (2.0, 10.0, 40.0):
            rep = qm.fluctuation_report(symmetric_eff(g, 40))
            assert rep.delta_n_exact == pytest.approx(rep.delta_n_analytic, rel=0.15)

    def test_charging_and_coupling_energies(self):
        rep = qm.fluctuation_report(symmetric_eff(2.0, 40, G=1.5))
        assert rep.E_j == pytest.approx(60.0)
        assert rep.E_c == pytest.approx(0.3)         # 4 g G / N_T
        assert rep.E_c_prime == pytest.approx(rep.E_c + 4 * rep.E_j / 1600)

    def test_input_validation(self):
        with pytest.raises(DomainError):
            qm.fluctuation_report(EffectiveParams(1e-3, 1e-3, 0.0, 0.0, 0.0, 0.0, 40.0))
        with pytest.raises(DomainError):
            qm.fluctuation_report(EffectiveParams(1e-3, 1e-3, 1.0, 0.0, 0.0, 0.0, 1.0))


class TestVisibilityTrace:
    def test_starts_at_unity_from_equator(self):
        p = qm.AngularHamiltonianParams.from_g(1.0, 24)
        trace = qm.visibility_trace(math.pi / 2, 0.0, p, 10.0, 51)
        assert trace.visibility[0] == pytest.approx(1.0, abs=1e-12)
        assert trace.times[-1] == 10.0

    def test_collapse_and_revival_at_strong_nonlinearity(self):
        # the pi-oriented state at g = 6 collapses deeply and revives
        p = qm.AngularHamiltonianParams.from_g(6.0, 40)
        trace = qm.visibility_trace(math.pi / 2, math.pi, p, 200.0, 801)
        assert float(trace.visibility.min()) < 0.1
        revival_window = trace.times >= 30.0
        assert float(trace.visibility[revival_window].max()) > 0.8

    def test_effective_parameterization_matches(self):
        g, nt = 2.0, 16
        a = qm.visibility_trace(1.0, 0.5, qm.AngularHamiltonianParams.from_g(g, nt),
                                20.0, 41)
        b = qm.trace_from_effective(symmetric_eff(g, nt), 1.0, 0.5, 20.0, 41)
        assert np.allclose(a.visibility, b.visibility, atol=1e-12)
        assert np.allclose(a.jz, b.jz, atol=1e-12)

    def test_number_conservation_fixed_dimension(self):
        p = qm.AngularHamiltonianParams.from_g(3.0, 12)
        trace = qm.visibility_trace(1.0, 0.0, p, 10.0, 21)
        norm_proxy = trace.jx**2 + trace.jy**2 + trace.jz**2
        assert np.all(norm_proxy <= (12 / 2) ** 2 + 1e-9)
