import numpy as np
import pytest

from pickzeta import (
    DirichletMultiplier,
    DomainError,
    HypothesisError,
    IllConditionedError,
    TruncationError,
    build_realization,
    defect_gram,
    evaluate_realization,
    feature_transfer,
    gram_matrix,
    psd_factor,
    verify_realization,
    zeta,
    zeta_power_kernel,
    zeta_reciprocal,
)

from oracles import random_psd

POINTS = [1.05, 1.4 + 0.3j, 1.9 - 0.25j, 2.6]


class TestDirichletMultiplier:
    def test_monomial_values(self):
        phi = DirichletMultiplier.monomial(0.5)
        assert complex(phi(1.0)) == pytest.approx(0.25)
        assert phi.declared_norm == pytest.approx(0.5)
        assert phi.certified

    def test_uncertified_sum(self):
        phi = DirichletMultiplier(np.array([0.8, 0.4]))
        assert not phi.certified
        with pytest.raises(HypothesisError):
            build_realization(phi, POINTS, trunc=50)


class TestDefectGram:
    def test_zero_multiplier_gives_zeta_gram(self):
        phi = DirichletMultiplier(np.array([0.0]))
        g = defect_gram(phi, POINTS)
        assert np.allclose(g, gram_matrix(zeta_power_kernel(1), POINTS), atol=1e-10)

    def test_unimodular_constant_gives_zero(self):
        phi = DirichletMultiplier(np.array([1.0]))
        g = defect_gram(phi, POINTS)
        assert np.abs(g).max() < 1e-12

    def test_halved_monomial_strictly_positive(self):
        phi = DirichletMultiplier.monomial(0.5)
        g = defect_gram(phi, [1.0, 1.5, 2.0])
        assert np.linalg.eigvalsh(g)[0] > 0.0

    def test_domain(self):
        phi = DirichletMultiplier.monomial(0.5)
        with pytest.raises(DomainError):
            defect_gram(phi, [0.4])


class TestPsdFactor:
    def test_zero_matrix(self):
        psi, r = psd_factor(np.zeros((3, 3)))
        assert r == 0 and psi.shape == (3, 0)

    def test_rank_one_single_point(self):
        psi, r = psd_factor(np.array([[2.25]]))
        assert r == 1
        assert psi[0, 0] == pytest.approx(1.5)

    def test_reconstruction(self):
        rng = np.random.default_rng(21)
        g = random_psd(rng, 4)
        psi, r = psd_factor(g, tol=1e-12)
        assert r == 4
        assert np.abs(psi @ psi.conj().T - g).max() < 1e-10 * np.abs(g).max()

    def test_rejects_indefinite(self):
        with pytest.raises(HypothesisError):
            psd_factor(np.diag([1.0, -0.5]))


class TestFeatureTransfer:
    def test_certified_bounds_at_sigma_one(self):
        t = feature_transfer(1.0, 2.0, 10**4)
        assert t.inverse_norm == pytest.approx(0.8545, abs=5e-4)
        assert t.eps_tilde == pytest.approx(0.9301, abs=5e-5)
        assert t.section_ratio <= t.eps_tilde < 1.0

    @pytest.mark.parametrize("sigma", [0.6, 0.75, 1.0, 2.0, 5.0])
    def test_inverse_norm_bound_across_sigmas(self, sigma):
        t = feature_transfer(sigma, 2.0, 4000)
        z = zeta(2.0 * sigma).real
        expected_eps = np.sqrt((z * z + 0.5) / (z * z + 1.0))
        assert t.eps_tilde == pytest.approx(expected_eps, abs=1e-12)
        assert t.section_ratio <= t.eps_tilde < 1.0
        assert t.inverse_norm < 1.0
        # The simpler diagonal comparison also holds:
        assert z < z + zeta_reciprocal(2.0 * sigma).real

    def test_alpha_must_exceed_one(self):
        with pytest.raises(DomainError):
            feature_transfer(1.0, 0.9, 100)

    def test_maps_section_to_image(self):
        t = feature_transfer(1.3 - 0.7j, 2.0, 600)
        f = t.section()
        g = t.image_section()
        out = t.apply(f.reshape(-1, 1)).ravel()
        assert np.linalg.norm(out - g) <= 1e-10 * np.linalg.norm(g)

    def test_dense_structure(self):
        t = feature_transfer(0.8, 2.0, 40)
        m = t.as_matrix()
        sv = np.sort(np.linalg.svd(m, compute_uv=False))
        assert sv[0] == pytest.approx(min(abs(t.d1), 2.0), abs=1e-12)
        assert sv[-1] == pytest.approx(2.0, abs=1e-12)
        assert 1.0 / sv[0] == pytest.approx(t.inverse_norm, abs=1e-12)
        inv = t.apply_inverse(np.eye(40, dtype=complex))
        assert np.abs(inv @ m - np.eye(40)).max() < 1e-12

    def test_singular_value_oracle_at_sigma_one(self):
        t = feature_transfer(1.0, 2.0, 200)
        m = t.as_matrix()
        smallest = np.linalg.svd(m, compute_uv=False).min()
        assert 1.0 / smallest == pytest.approx(t.inverse_norm, abs=1e-12)


class TestBuildRealization:
    def test_constant_multiplier(self):
        phi = DirichletMultiplier(np.array([0.6]))
        model = build_realization(phi, [1.0, 1.5, 2.2], trunc=3000)
        assert model.rank == 3
        assert model.a != 0
        for p in (1.0, 1.5, 2.2):
            assert abs(evaluate_realization(model, p) - 0.6) < 1e-4
        assert abs(evaluate_realization(model, 1.8) - 0.6) < 1e-3

    def test_zero_multiplier(self):
        phi = DirichletMultiplier(np.array([0.0]))
        model = build_realization(phi, [1.1, 1.6, 2.4], trunc=400)
        assert abs(model.a) < 1e-10
        assert model.certificates["isometry_defect"] < 1e-10
        assert model.certificates["sigma_max"] <= 1.0 + 1e-8
        for p in (1.2, 2.0):
            assert abs(evaluate_realization(model, p)) < 1e-6

    def test_single_point_scalar_identity(self):
        # One sample point: the Gram identity collapses to the scalar
        # identity 1 + zeta_N(2s) k = |phi|^2 + kappa_N(2s) k.
        phi = DirichletMultiplier.monomial(0.5)
        s = 1.3
        model = build_realization(phi, [s], trunc=2000)
        k = complex(defect_gram(phi, [s])[0, 0])
        n = np.arange(1, 2001, dtype=float)
        zeta_n = np.sum(n ** (-2.0 * s))
        kappa_n = np.sum((1.0 + np.array([_mu(int(v)) for v in n])) * n ** (-2.0 * s))
        lhs = 1.0 + zeta_n * k
        rhs = abs(complex(phi(s))) ** 2 + kappa_n * k
        assert abs(lhs - rhs) == pytest.approx(
            model.certificates["gram_identity_residual"], rel=1e-6)

    def test_unimodular_constant_trivial_model(self):
        phi = DirichletMultiplier(np.array([1.0]))
        model = build_realization(phi, [1.0, 2.0], trunc=64)
        assert model.rank == 0
        assert model.a == pytest.approx(1.0)
        assert evaluate_realization(model, 1.7) == pytest.approx(1.0)

    def test_truncation_error_suggests_larger(self):
        phi = DirichletMultiplier.monomial(0.5)
        with pytest.raises(TruncationError) as err:
            build_realization(phi, POINTS, trunc=64, tol=1e-9)
        assert err.value.suggested_trunc > 64

    def test_clustered_points_rejected(self):
        # Span conditioning below 1e-12 signals numerically dependent
        # lifted vectors; wider spacings legitimately proceed.
        phi = DirichletMultiplier.monomial(0.5)
        with pytest.raises(IllConditionedError):
            build_realization(phi, [1.0, 1.0 + 1e-14], trunc=128)

    def test_certificates_at_moderate_truncation(self):
        phi = DirichletMultiplier.monomial(0.5j)
        model = build_realization(phi, POINTS, trunc=2000)
        certs = model.certificates
        assert certs["gram_identity_residual"] < 5e-6
        assert certs["isometry_defect"] < 1e-12
        assert certs["sigma_max"] <= 1.0 + 1e-8
        assert certs["d_contraction_residual"] < 5e-5
        assert certs["d_norm"] <= 1.0 + 1e-10

    def test_gram_identity_residual_shrinks_with_truncation(self):
        phi = DirichletMultiplier.monomial(0.3)
        residuals = []
        for trunc in (200, 2000, 20000):
            model = build_realization(phi, [1.1, 1.7], trunc=trunc)
            residuals.append(model.certificates["gram_identity_residual"])
        assert residuals[2] < residuals[1] < residuals[0]


def _mu(n):
    from pickzeta import mobius
    return mobius(n)


class TestEvaluation:
    def test_samples_and_held_out(self):
        phi = DirichletMultiplier.monomial(-0.8)
        model = build_realization(phi, POINTS, trunc=4000)
        for p in POINTS:
            err = abs(evaluate_realization(model, p) - complex(phi(p)))
            assert err < 1e-5
        for p in (1.2, 1.6 + 0.15j, 2.2 - 0.1j, 3.0):
            err = abs(evaluate_realization(model, p) - complex(phi(p)))
            assert err < 1e-2

    def test_gamma_zero_collapses_to_constant(self):
        phi = DirichletMultiplier(np.array([1.0]))
        model = build_realization(phi, [1.0, 1.4], trunc=64)
        assert np.linalg.norm(model.gamma) == 0.0
        assert evaluate_realization(model, 5.0) == model.a

    def test_domain_check(self):
        phi = DirichletMultiplier.monomial(0.5)
        model = build_realization(phi, [1.0, 1.5], trunc=256)
        with pytest.raises(DomainError):
            evaluate_realization(model, 0.3)


class TestVerification:
    def test_pipeline_model_passes(self):
        phi = DirichletMultiplier.monomial(0.5)
        model = build_realization(phi, POINTS, trunc=2000)
        report = verify_realization(model, grid=[1.1, 1.3, 1.7, 2.1, 2.9])
        assert report.contraction_ok
        assert report.d_contraction_ok
        assert report.psd_ok
        assert report.passed

    def test_scaled_d_fails(self):
        phi = DirichletMultiplier.monomial(0.5)
        model = build_realization(phi, POINTS, trunc=2000)
        report = verify_realization(model.scaled(1.5), grid=[1.1, 1.5, 2.0])
        assert not report.passed
        assert report.sigma_max > 1.4
        assert not report.contraction_ok

    def test_trivial_unimodular_model(self):
        phi = DirichletMultiplier(np.array([1.0]))
        model = build_realization(phi, [1.0, 2.0], trunc=64)
        report = verify_realization(model, grid=[1.2, 1.8, 2.5])
        # phi = 1 gives the zero defect Gram: PSD trivially.
        assert report.passed
        assert np.abs(report.reconstructed - 1.0).max() < 1e-12
