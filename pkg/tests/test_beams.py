import math

import numpy as np
import pytest
from scipy.integrate import quad

from phononjj import beams
from phononjj.errors import DomainError, RWAViolationError


def make_beam(**overrides):
    params = dict(mu=2.33e-11, L=1e-6, K=2.89e-8, linear_modulus=1.7e-3,
                  G0=5e-4, kappa0=1e3)
    params.update(overrides)
    return beams.PhysicalBeam(**params)


class TestEigenvalues:
    def test_first_two_roots(self):
        z1, z2 = beams.solve_eigenvalues(2)
        assert z1 == pytest.approx(4.7300, abs=1e-3)
        assert z2 == pytest.approx(7.8532, abs=1e-2)

    def test_defining_equation_near_first_root(self):
        z1 = beams.solve_eigenvalues(1)[0]
        assert math.cos(z1) * math.cosh(z1) == pytest.approx(1.0, rel=1e-3)

    def test_residual_bound(self):
        tol = 1e-12
        for zeta in beams.solve_eigenvalues(5, tol=tol):
            assert abs(math.cos(zeta) * math.cosh(zeta) - 1.0) < tol * math.cosh(zeta)

    def test_roots_increasing(self):
        roots = beams.solve_eigenvalues(5)
        assert all(b > a for a, b in zip(roots, roots[1:]))

    def test_invalid_arguments(self):
        with pytest.raises(DomainError):
            beams.solve_eigenvalues(0)
        with pytest.raises(DomainError):
            beams.solve_eigenvalues(1, tol=0.0)


class TestEigenmode:
    def test_clamped_boundaries(self):
        for zeta in beams.solve_eigenvalues(2):
            assert beams.eigenmode(zeta, 0.0) == 0.0
            assert abs(beams.eigenmode(zeta, 1.0)) < 1e-9
            assert abs(beams.eigenmode_slope(zeta, 0.0)) < 1e-8
            assert abs(beams.eigenmode_slope(zeta, 1.0)) < 1e-8

    def test_fundamental_peaks_at_midpoint(self):
        # independent oracle: dense maximization of |psi| over s
        zeta = beams.solve_eigenvalues(1)[0]
        s = np.linspace(0.0, 1.0, 100001)
        vals = np.abs(beams.eigenmode(zeta, s))
        assert s[np.argmax(vals)] == pytest.approx(0.5, abs=1e-4)
        assert float(np.max(vals)) == pytest.approx(1.0, abs=1e-9)
        assert beams.eigenmode(zeta, 0.5) == pytest.approx(1.0, abs=1e-9)

    def test_max_normalization_second_mode(self):
        zeta = beams.solve_eigenvalues(2)[1]
        s = np.linspace(0.0, 1.0, 100001)
        vals = beams.eigenmode(zeta, s)
        assert float(np.max(vals)) == pytest.approx(1.0, abs=1e-8)

    def test_orthogonality(self):
        z1, z2 = beams.solve_eigenvalues(2)
        integral, _ = quad(lambda s: beams.eigenmode(z1, s) * beams.eigenmode(z2, s),
                           0.0, 1.0, epsrel=1e-10, epsabs=1e-12, limit=200)
        assert abs(integral) < 1e-6

    def test_domain_check(self):
        zeta = beams.solve_eigenvalues(1)[0]
        with pytest.raises(DomainError):
            beams.eigenmode(zeta, 1.5)


class TestModeMass:
    def test_fundamental_mass_fraction(self):
        beam = make_beam()
        zeta = beams.solve_eigenvalues(1)[0]
        ratio = beams.mode_mass(beam, zeta) / (beam.mu * beam.L)
        assert ratio == pytest.approx(0.3965, abs=0.0005)

    def test_quadratic_in_shape_amplitude(self):
        beam = make_beam()
        zeta = beams.solve_eigenvalues(1)[0]
        base = beams.mode_mass_from_shape(beam, lambda s: beams.eigenmode(zeta, s))
        scaled = beams.mode_mass_from_shape(beam, lambda s: 3.0 * beams.eigenmode(zeta, s))
        assert scaled == pytest.approx(9.0 * base, rel=1e-10)

    def test_linear_in_density(self):
        zeta = beams.solve_eigenvalues(1)[0]
        m1 = beams.mode_mass(make_beam(), zeta)
        m2 = beams.mode_mass(make_beam(mu=2 * 2.33e-11), zeta)
        assert m2 == pytest.approx(2.0 * m1, rel=1e-10)


class TestModeFrequency:
    def test_inverse_square_length_scaling(self):
        zeta = beams.solve_eigenvalues(1)[0]
        f1 = beams.mode_frequency(make_beam(), zeta)
        f2 = beams.mode_frequency(make_beam(L=2e-6), zeta)
        assert f1 / f2 == pytest.approx(4.0, rel=1e-12)

    def test_stiffness_density_scaling(self):
        zeta = beams.solve_eigenvalues(1)[0]
        f1 = beams.mode_frequency(make_beam(), zeta)
        f2 = beams.mode_frequency(make_beam(linear_modulus=4 * 1.7e-3), zeta)
        f3 = beams.mode_frequency(make_beam(mu=4 * 2.33e-11), zeta)
        assert f2 == pytest.approx(2.0 * f1, rel=1e-12)
        assert f3 == pytest.approx(0.5 * f1, rel=1e-12)

    def test_si_vector_against_direct_evaluation(self):
        # oracle: re-evaluate the closed form from scratch
        mu, L = 1e-12, 1e-6
        K = L / math.sqrt(12.0) * 1e-2
        I = 5e-4
        beam = make_beam(mu=mu, L=L, K=K, linear_modulus=I)
        zeta = beams.solve_eigenvalues(1)[0]
        expected = math.sqrt(I * K**2 / mu) * (zeta / L) ** 2
        assert beams.mode_frequency(beam, zeta) == pytest.approx(expected, rel=1e-14)


class TestDuffing:
    def test_dimensionless_coefficient(self):
        beam = make_beam()
        mode = beams.solve_mode(beam)
        assert beams.duffing_coefficient(beam, mode) == pytest.approx(0.060, abs=0.001)

    def test_positive(self):
        for L in (0.5e-6, 1e-6, 5e-6):
            beam = make_beam(L=L, K=L / 40.0)
            assert beams.solve_mode(beam).duffing_lambda0 > 0

    def test_stretching_integral_against_finite_differences(self):
        # oracle: dense central-difference derivative of the mode shape
        zeta = beams.solve_eigenvalues(1)[0]
        s = np.linspace(0.0, 1.0, 200001)
        psi = beams.eigenmode(zeta, s)
        dpsi = np.gradient(psi, s)
        fd_integral = np.trapezoid(dpsi**2, s)
        assert beams.stretching_integral(zeta) == pytest.approx(fd_integral, rel=1e-4)

    def test_plain_convention_is_quarter(self):
        beam = make_beam()
        mode = beams.solve_mode(beam)
        plain = beams.duffing_lambda(beam, mode, quartic_convention="plain")
        assert plain == pytest.approx(mode.duffing_lambda0 / 4.0, rel=1e-14)
        with pytest.raises(DomainError):
            beams.duffing_lambda(beam, mode, quartic_convention="other")


class TestEffectiveParams:
    def test_identical_beams_are_symmetric(self):
        beam = make_beam()
        eff = beams.to_effective(beam, beam, N_T=1e6)
        assert eff.lambda1 == eff.lambda2
        assert eff.Delta0 == 0.0

    def test_zero_coupling(self):
        beam = make_beam(G0=0.0)
        eff = beams.to_effective(beam, beam, N_T=1e6)
        assert eff.G == 0.0

    def test_kerr_rate_is_six_times_prererduction_coefficient(self):
        beam = make_beam()
        report = beams.effective_report(beam, beam, N_T=1e6)
        for key in ("beam1", "beam2"):
            assert report[key]["lambda"] == pytest.approx(
                6.0 * report[key]["lambda_tilde"], rel=1e-14)

    def test_kerr_rate_closed_form(self):
        beam = make_beam()
        report = beams.effective_report(beam, beam, N_T=1e6)
        from phononjj.constants import HBAR
        b = report["beam1"]
        assert b["lambda"] == pytest.approx(
            3.0 * b["lambda0"] * b["x0"] ** 4 / HBAR, rel=1e-14)

    def test_mismatched_coupling_constants_rejected(self):
        with pytest.raises(DomainError):
            beams.to_effective(make_beam(G0=1e-4), make_beam(G0=2e-4), N_T=10.0)

    def test_rwa_rejection_with_ratio_report(self):
        beam = make_beam(G0=50.0)
        with pytest.raises(RWAViolationError, match="G/omega0"):
            beams.to_effective(beam, beam, N_T=1e6)

    def test_rwa_warning(self):
        beam = make_beam(G0=5.0)
        with pytest.warns(UserWarning, match="marginal"):
            beams.to_effective(beam, beam, N_T=1e6, rwa_reject_threshold=1.0)


class TestDimensionless:
    def test_symmetric_beams_zero_detuning(self):
        eff = beams.EffectiveParams(lambda1=1e-3, lambda2=1e-3, G=1.0,
                                    Delta0=0.0, kappa1=0.0, kappa2=0.0, N_T=100.0)
        assert beams.to_dimensionless(eff).Delta == 0.0

    def test_direct_formula(self):
        G = 7.0
        eff = beams.EffectiveParams(lambda1=2e-3 * G, lambda2=2e-3 * G, G=G,
                                    Delta0=0.0, kappa1=0.0, kappa2=0.0, N_T=100.0)
        assert beams.to_dimensionless(eff).g == pytest.approx(0.1, rel=1e-14)

    def test_kappa_rescaling(self):
        eff = beams.EffectiveParams(lambda1=0.0, lambda2=0.0, G=5.0,
                                    Delta0=0.0, kappa1=0.01, kappa2=0.01, N_T=10.0)
        assert beams.to_dimensionless(eff).kappa == pytest.approx(0.001, rel=1e-14)

    def test_uncoupled_rejected(self):
        eff = beams.EffectiveParams(lambda1=1e-3, lambda2=1e-3, G=0.0,
                                    Delta0=0.0, kappa1=0.0, kappa2=0.0, N_T=100.0)
        with pytest.raises(DomainError, match="uncoupled"):
            beams.to_dimensionless(eff)

    def test_unequal_damping_rejected(self):
        eff = beams.EffectiveParams(lambda1=1e-3, lambda2=1e-3, G=1.0,
                                    Delta0=0.0, kappa1=1.0, kappa2=2.0, N_T=100.0)
        with pytest.raises(DomainError, match="kappa"):
            beams.to_dimensionless(eff)

    def test_regime_classification(self):
        assert beams.classify_g(0.9, 100.0) == (beams.RABI, False)
        assert beams.classify_g(50.0, 100.0) == (beams.JOSEPHSON, False)
        assert beams.classify_g(1e5, 100.0) == (beams.FOCK, False)
        assert beams.classify_g(1.0, 10.0)[1] is True
        assert beams.classify_g(100.0, 10.0)[1] is True

    def test_pipeline_matches_single_expression(self):
        # g from raw physical inputs in one expression, against the staged
        # pipeline, to 1e-12 relative
        from phononjj.constants import HBAR
        beam = make_beam()
        N_T = 3e7
        eff = beams.to_effective(beam, beam, N_T)
        g_pipeline = beams.to_dimensionless(eff).g
        mode = beams.solve_mode(beam)
        x0 = math.sqrt(HBAR / (2.0 * mode.effective_mass * mode.frequency))
        lam = 3.0 * mode.duffing_lambda0 * x0**4 / HBAR
        g_direct = N_T * (lam + lam) / (4.0 * (2.0 * beam.G0 * x0 * x0 / HBAR))
        assert g_pipeline == pytest.approx(g_direct, rel=1e-12)

    def test_g_monotone_in_phonon_number_and_nonlinearity(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            G = float(rng.uniform(0.5, 5.0))
            lam1 = float(rng.uniform(1e-4, 1e-2))
            lam2 = float(rng.uniform(1e-4, 1e-2))
            n = float(rng.uniform(10.0, 1e4))

            def g_of(l1, l2, nt):
                eff = beams.EffectiveParams(lambda1=l1, lambda2=l2, G=G,
                                            Delta0=0.0, kappa1=0.0, kappa2=0.0,
                                            N_T=nt)
                return beams.to_dimensionless(eff).g

            assert g_of(lam1, lam2, 2 * n) > g_of(lam1, lam2, n)
            assert g_of(2 * lam1, lam2, n) > g_of(lam1, lam2, n)


class TestBeamValidation:
    def test_positive_fields(self):
        with pytest.raises(DomainError):
            make_beam(mu=0.0)
        with pytest.raises(DomainError):
            make_beam(L=-1e-6)

    def test_slender_assumption(self):
        with pytest.raises(DomainError):
            make_beam(K=2e-6)
