import math

import numpy as np
import pytest

import mkropina as mk
from mkropina.errors import DomainError, MKropinaError

from conftest import SQRT_HALF, metric_for_preset


class TestAlphaBeta:
    def test_unit_basis_vector(self, u2_central_met):
        alpha, beta = u2_central_met.alpha_beta(np.array([1.0, 0, 0, 0]))
        assert alpha == pytest.approx(1.0)
        assert beta == pytest.approx(0.8)

    def test_diagonal_direction(self, u2_central_met):
        y = np.array([SQRT_HALF, 0.0, SQRT_HALF, 0.0])
        alpha, beta = u2_central_met.alpha_beta(y)
        assert alpha == pytest.approx(1.0, abs=1e-15)
        assert beta == pytest.approx(0.8 * SQRT_HALF, abs=1e-15)

    def test_zero_vector(self, u2_central_met):
        assert u2_central_met.alpha_beta(np.zeros(4)) == (0.0, 0.0)


class TestNorm:
    def test_diagonal_direction(self, u2_central_met):
        y = np.array([SQRT_HALF, 0.0, SQRT_HALF, 0.0])
        assert u2_central_met.norm(y) == pytest.approx(
            1.0 / (0.8 * SQRT_HALF), rel=1e-14
        )

    def test_central_direction(self, u2_central_met):
        assert u2_central_met.norm(np.array([1.0, 0, 0, 0])) == pytest.approx(1.25)

    def test_cone_boundary_raises(self, u2_central_met):
        with pytest.raises(DomainError):
            u2_central_met.norm(np.array([0.0, 1.0, 0, 0]))

    @pytest.mark.parametrize("m_exp", [1.0, 2.0, 0.5, -0.5])
    @pytest.mark.parametrize("scale", [0.5, 2.0, 10.0])
    def test_positive_homogeneity(self, m_exp, scale):
        met, _ = metric_for_preset("u2", m_exp)
        rng = np.random.default_rng(21)
        for _ in range(25):
            y = rng.standard_normal(4)
            if met.ip(met.x_vec, y) <= 0.05:
                continue
            f1 = met.norm(scale * y)
            f0 = met.norm(y)
            assert abs(f1 - scale * f0) <= 1e-12 * max(1.0, abs(scale * f0))


class TestMetricValidation:
    def test_m_zero_rejected(self, u2_pair):
        with pytest.raises(MKropinaError, match="outside"):
            mk.MKropinaMetric(0.0, [0.8, 0, 0, 0], u2_pair.gram)

    def test_m_minus_one_rejected(self, u2_pair):
        with pytest.raises(MKropinaError, match="outside"):
            mk.MKropinaMetric(-1.0, [0.8, 0, 0, 0], u2_pair.gram)

    def test_zero_x_rejected(self, u2_pair):
        with pytest.raises(MKropinaError, match="nonzero"):
            mk.MKropinaMetric(1.0, np.zeros(4), u2_pair.gram)

    def test_norm_bound_enforced(self, u2_pair):
        with pytest.raises(MKropinaError, match="norm bound"):
            mk.MKropinaMetric(1.0, [1.2, 0, 0, 0], u2_pair.gram)

    def test_norm_bound_relaxable_with_warning(self, u2_pair):
        met = mk.MKropinaMetric(
            1.0, [1.2, 0, 0, 0], u2_pair.gram, relax_norm_bound=True
        )
        assert any("norm bound" in w for w in met.warnings)

    def test_x_outside_tangent_part_rejected(self, u2_pair):
        with pytest.raises(MKropinaError, match="supported"):
            mk.MKropinaMetric(
                1.0, [0.8, 0.1, 0, 0], u2_pair.gram, m_indices=(0, 2, 3)
            )


class TestPhiEval:
    def test_m1(self):
        assert mk.phi_eval(1.0, 0.5) == pytest.approx((2.0, -4.0, 16.0))

    def test_m2(self):
        assert mk.phi_eval(2.0, 1.0) == pytest.approx((1.0, -2.0, 6.0))

    def test_nonpositive_s_raises(self):
        with pytest.raises(DomainError):
            mk.phi_eval(1.0, -0.1)
        with pytest.raises(DomainError):
            mk.phi_eval(1.0, 0.0)


class TestStrongConvexity:
    def test_m1_valid_on_full_grid(self):
        report = mk.check_strong_convexity(1.0, 0.9)
        assert report.valid
        assert report.nodes_checked == 100 * 100
        assert report.first_failure is None

    def test_reduced_form_matches_generic_form(self):
        for m_exp in (1.0, 2.0, 0.5, -0.5, -2.5):
            report = mk.check_strong_convexity(m_exp, 0.9, s_count=40, b_count=15)
            assert report.form_agreement <= 1e-12

    def test_negative_m_fails_below_threshold(self):
        # s^2 + m (b^2 - s^2) at (s, b) = (0.3, 0.9), m = -1/2:
        # 1.5 * 0.09 - 0.5 * 0.81 = -0.27 < 0.
        report = mk.check_strong_convexity(-0.5, 0.9, s_count=3, b_fixed=0.9)
        assert not report.valid
        assert report.first_failure == pytest.approx((0.3, 0.9))

    def test_negative_m_threshold_location(self):
        report = mk.check_strong_convexity(-0.5, 0.9, s_count=900, b_fixed=0.9)
        threshold = 0.9 / math.sqrt(3.0)
        assert report.max_failing_s < threshold < report.min_passing_s

    def test_restricted_grid_above_threshold_is_valid(self):
        # All nodes at s > b * sqrt(-m / (1 - m)) pass.
        report = mk.check_strong_convexity(-0.5, 0.9, s_count=100, b_fixed=0.9)
        threshold = 0.9 / math.sqrt(3.0)
        assert report.min_passing_s > threshold

    def test_b0_domain(self):
        with pytest.raises(DomainError):
            mk.check_strong_convexity(1.0, 1.5)


class TestHessianPd:
    def test_flag_a_context_is_positive_definite(self, u2_central_met):
        y = np.array([SQRT_HALF, 0.0, SQRT_HALF, 0.0])
        report = mk.check_hessian_pd(u2_central_met, y)
        assert report.positive_definite
        assert len(report.eigenvalues) == 4
        assert not report.warnings

    def test_abelian_2d_explicit(self):
        alg = mk.preset("abelian_2")
        pair = mk.build_inner_product_pair(
            alg, mk.ReductiveDecomposition(2, ()), np.eye(2)
        )
        met = mk.MKropinaMetric(1.0, [0.5, 0.0], pair.gram)
        report = mk.check_hessian_pd(met, np.array([1.0, 0.0]))
        assert report.positive_definite
        np.testing.assert_allclose(report.eigenvalues, (4.0, 8.0), atol=1e-12)

    def test_near_cone_conditioning_warning(self, u2_central_met):
        y = np.array([1e-12 / 0.8, 0.0, 1.0, 0.0])
        report = mk.check_hessian_pd(u2_central_met, y)
        assert report.warnings

    def test_h_block_is_excluded(self, u2):
        dec = mk.ReductiveDecomposition(4, (0,))
        pair = mk.build_inner_product_pair(u2, dec, np.eye(4))
        met = mk.MKropinaMetric(
            1.0, [0, 0.8, 0, 0], pair.gram, m_indices=dec.m_indices
        )
        report = mk.check_hessian_pd(met, np.array([0.0, 1.0, 0, 0]))
        assert len(report.eigenvalues) == 3

    @pytest.mark.parametrize("m_exp", [1.0, 2.0])
    def test_agrees_with_flag_gram_determinant_sign(self, m_exp):
        # Positive-definite Hessian forces a positive flag Gram determinant
        # on admissible orthonormal flags, and both hold on these scenarios.
        from mkropina.sampling import fd_margin, orthonormal_admissible_flag
        from mkropina.tensors import TensorEvalContext, orthonormal_identity_residuals

        met, _ = metric_for_preset("u2", m_exp)
        rng = np.random.default_rng(22)
        for _ in range(10):
            y, u = orthonormal_admissible_flag(rng, met, fd_margin(met))
            assert mk.check_hessian_pd(met, y).positive_definite
            res = orthonormal_identity_residuals(
                TensorEvalContext.create(met, y), u
            )
            assert res.det_value > 0.0


class TestFlagAdmissibility:
    def test_worked_flag_is_admissible(self, u2_central_met, flag_a):
        report = mk.check_flag_admissible(u2_central_met, flag_a.y, flag_a.u)
        assert report.admissible
        assert report.beta == pytest.approx(0.8 * SQRT_HALF)

    def test_dependent_edge_rejected(self, u2_central_met, flag_a):
        report = mk.check_flag_admissible(u2_central_met, flag_a.y, 2.0 * flag_a.y)
        assert not report.admissible
        assert not report.independent

    def test_pole_on_cone_boundary_rejected(self, u2_central_met):
        report = mk.check_flag_admissible(
            u2_central_met, np.array([0.0, 1.0, 0, 0]), np.array([0.0, 0, 1.0, 0])
        )
        assert not report.admissible
        assert "conic" in " ".join(report.reasons)
