import math

import numpy as np
import pytest

from bandcomp import warp as wp


def finite_difference(f, t, eps=1e-5):
    d1 = (f(t + eps) - f(t - eps)) / (2 * eps)
    d2 = (f(t + eps) - 2 * f(t) + f(t - eps)) / eps**2
    return d1, d2


class TestEvalWarp:
    def test_constant(self):
        m = wp.constant_model(3, 0.0, 1.0)
        assert wp.eval_warp(m.warp, 0.5) == (1.0, 0.0, 0.0)

    def test_exponential(self):
        m = wp.exp_model(3, 0.0, 1.0)
        v, d1, d2 = wp.eval_warp(m.warp, 0.0)
        assert (v, d1, d2) == (1.0, 1.0, 1.0)

    def test_cos_power_derivatives_match_finite_differences(self):
        # phi = cos(7t/2)^(2/7): phi(0)=1, phi'(0)=0, phi''(0) = -7/2
        n = 7
        m = wp.cos_model(n, -0.2, 0.2)
        v, d1, d2 = wp.eval_warp(m.warp, 0.0)
        f = lambda t: math.cos(n * t / 2) ** (2 / n)
        fd1, fd2 = finite_difference(f, 0.0)
        assert v == pytest.approx(1.0, abs=1e-12)
        assert d1 == pytest.approx(fd1, abs=1e-8)
        assert d2 == pytest.approx(-n / 2, abs=1e-10)
        assert d2 == pytest.approx(fd2, abs=1e-4)

    def test_interior_derivatives_match_finite_differences(self):
        for m in (wp.cos_model(5, -0.3, 0.3), wp.sinh_model(3, 0.2, 1.5),
                  wp.power_model(4, 0.5, 2.0)):
            t0 = 0.5 * (m.warp.a + m.warp.b)
            _, d1, d2 = wp.eval_warp(m.warp, t0)
            fd1, fd2 = finite_difference(lambda t: m.warp.eval(t)[0], t0)
            assert d1 == pytest.approx(fd1, rel=1e-6)
            assert d2 == pytest.approx(fd2, rel=1e-4)

    def test_domain_error(self):
        m = wp.cos_model(3, -0.3, 0.3)
        with pytest.raises(wp.DomainError):
            wp.eval_warp(m.warp, 0.31)


class TestScalarCurvature:
    def test_cos_model_constant_n_n_minus_1(self):
        m = wp.cos_model(7, -0.2, 0.2)
        t = np.linspace(-0.2, 0.2, 101)
        assert np.max(np.abs(wp.scalar_curvature_profile(m, t) - 42.0)) < 1e-10

    def test_product_metric_flat(self):
        m = wp.constant_model(5, 0.0, 2.0)
        assert wp.scalar_curvature_profile(m, 1.3) == 0.0

    def test_exp_model(self):
        m = wp.exp_model(4, -1.0, 1.0)
        t = np.linspace(-1, 1, 11)
        assert np.max(np.abs(wp.scalar_curvature_profile(m, t) + 12.0)) < 1e-10

    def test_power_model_scalar_flat(self):
        m = wp.power_model(5, 0.2, 2.0)
        t = np.linspace(0.2, 2.0, 101)
        assert np.max(np.abs(wp.scalar_curvature_profile(m, t))) < 1e-10


class TestMeanCurvature:
    def test_cos_model(self):
        m = wp.cos_model(7, -0.2, 0.2)
        t = np.linspace(-0.2, 0.2, 21)
        expected = -6.0 * np.tan(7 * t / 2)
        assert np.max(np.abs(wp.mean_curvature_profile(m, t) - expected)) < 1e-10

    def test_constant(self):
        m = wp.constant_model(3, 0.0, 1.0)
        assert wp.mean_curvature_profile(m, 0.7) == 0.0

    def test_exp(self):
        m = wp.exp_model(4, -1.0, 1.0)
        assert wp.mean_curvature_profile(m, 0.3) == pytest.approx(3.0, abs=1e-12)


class TestBoundaryMeanCurvatures:
    def test_cos_model_sign_convention(self):
        lm, lp = -0.15, 0.25
        m = wp.cos_model(7, lm, lp)
        Hm, Hp = wp.boundary_mean_curvatures(m)
        assert Hm == pytest.approx(6 * math.tan(7 * lm / 2), abs=1e-12)
        assert Hp == pytest.approx(-6 * math.tan(7 * lp / 2), abs=1e-12)

    def test_constant(self):
        assert wp.boundary_mean_curvatures(wp.constant_model(4, -1, 3)) == (0.0, 0.0)

    def test_sinh_model(self):
        lm, lp = 0.2, 0.9
        m = wp.sinh_model(3, lm, lp)
        Hm, Hp = wp.boundary_mean_curvatures(m)
        assert Hm == pytest.approx(-2 / math.tanh(3 * lm / 2), abs=1e-12)
        assert Hp == pytest.approx(2 / math.tanh(3 * lp / 2), abs=1e-12)


class TestIdentity:
    def test_catalog_identity_analytic(self):
        models = [wp.cos_model(7, -0.2, 0.2), wp.power_model(5, 0.5, 2.5),
                  wp.sinh_model(3, 0.2, 1.7), wp.constant_model(4, 0, 2),
                  wp.exp_model(4, -1, 1), wp.sphere_annulus(3, -0.5, 0.5),
                  wp.euclidean_annulus(3, 1, 2), wp.hyperbolic_annulus(4, 0.3, 1.3)]
        for m in models:
            t = np.linspace(m.warp.a, m.warp.b, 10000)
            assert np.max(np.abs(wp.warped_identity_residual(m, t))) < 1e-8

    def test_n2_cos_hand_algebra(self):
        # Sc = 2, h = -tan t, 2h' = -2 sec^2 t, so 2 + 2 tan^2 - 2 sec^2 = 0
        m = wp.cos_model(2, -0.5, 0.5)
        t = np.linspace(-0.5, 0.5, 101)
        assert np.max(np.abs(wp.warped_identity_residual(m, t))) < 1e-12

    def test_sampled_residual_second_order(self):
        ref = wp.cos_model(3, -0.4, 0.4)
        errs = []
        for num in (512, 1024, 2048):
            m = wp.sampled_copy(ref, num)
            t = m.warp._grid[8:-8]
            errs.append(np.max(np.abs(wp.warped_identity_residual(m, t))))
        assert errs[0] / errs[1] > 3.0
        assert errs[1] / errs[2] > 3.0


class TestLogConcavity:
    def test_exp_log_constant(self):
        m = wp.exp_model(3, 0, 1)
        assert wp.log_concavity_classify(m.warp) is wp.LogConcavity.LOG_CONSTANT

    def test_cos_strictly_log_concave(self):
        m = wp.cos_model(5, -0.3, 0.3)
        assert (wp.log_concavity_classify(m.warp)
                is wp.LogConcavity.STRICTLY_LOG_CONCAVE)

    def test_cosh_neither(self):
        # (tanh t)' = sech^2 t > 0
        w = wp.WarpingFunction.closed_form("cosh", (0.1, 1.5),
                                           np.cosh, np.sinh, np.cosh)
        assert wp.log_concavity_classify(w) is wp.LogConcavity.NEITHER

    def test_catalog_classification(self):
        strict = [wp.cos_model(3, -0.4, 0.4), wp.power_model(4, 0.5, 2),
                  wp.sinh_model(5, 0.2, 1.2), wp.sphere_annulus(3, -0.4, 0.4),
                  wp.euclidean_annulus(4, 0.5, 2), wp.hyperbolic_annulus(3, 0.2, 1)]
        for m in strict:
            assert (wp.log_concavity_classify(m.warp, tol=1e-10)
                    is wp.LogConcavity.STRICTLY_LOG_CONCAVE), m.name
        for m in (wp.constant_model(3), wp.exp_model(3)):
            assert (wp.log_concavity_classify(m.warp, tol=1e-10)
                    is wp.LogConcavity.LOG_CONSTANT), m.name


class TestCatalog:
    def test_annuli_scalar_curvatures(self):
        t = np.linspace(1.0, 2.0, 51)
        sph = wp.sphere_annulus(3, -0.5, 0.5)
        ts = np.linspace(-0.5, 0.5, 51)
        assert np.max(np.abs(wp.scalar_curvature_profile(sph, ts) - 6.0)) < 1e-10
        euc = wp.euclidean_annulus(3, 1.0, 2.0)
        assert np.max(np.abs(wp.scalar_curvature_profile(euc, t))) < 1e-10
        hyp = wp.hyperbolic_annulus(3, 1.0, 2.0)
        assert np.max(np.abs(wp.scalar_curvature_profile(hyp, t) + 6.0)) < 1e-10

    def test_model_space_invariant_constant_sc(self):
        for name, ctor in wp.model_catalog().items():
            if name in ("const", "exp"):
                m = ctor(4, 0.0, 1.0)
            elif name in ("cos",):
                m = ctor(4, -0.5, 0.5)
            elif name == "sphere_annulus":
                m = ctor(4, -0.6, 0.6)
            else:
                m = ctor(4, 0.4, 1.4)
            t = np.linspace(m.warp.a, m.warp.b, 257)
            sc = np.asarray(wp.scalar_curvature_profile(m, t))
            assert np.max(sc) - np.min(sc) < 1e-9, name
            cls = wp.log_concavity_classify(m.warp)
            assert cls is not wp.LogConcavity.NEITHER, name

    def test_parameter_validation(self):
        with pytest.raises(wp.ConstructionError):
            wp.cos_model(7, -0.2, 0.5)  # 0.5 > pi/7
        with pytest.raises(wp.ConstructionError):
            wp.power_model(3, -0.1, 1.0)
        with pytest.raises(wp.ConstructionError):
            wp.sinh_model(3, 0.0, 1.0)
        with pytest.raises(wp.ConstructionError):
            wp.sphere_annulus(3, -2.0, 0.5)


class TestSampled:
    def test_sampled_profiles_converge_second_order(self):
        ref = wp.sinh_model(3, 0.3, 1.3)
        errs = []
        for num in (256, 512, 1024):
            m = wp.sampled_copy(ref, num)
            t = np.linspace(0.35, 1.25, 173)
            err_h = np.max(np.abs(wp.mean_curvature_profile(m, t)
                                  - wp.mean_curvature_profile(ref, t)))
            errs.append(err_h)
        assert errs[0] / errs[1] > 3.0
        assert errs[1] / errs[2] > 3.0

    def test_minimum_grid(self):
        with pytest.raises(wp.ConstructionError):
            wp.WarpingFunction.from_samples([0, 1, 2], [1, 1, 1])

    def test_positivity(self):
        t = np.linspace(0, 1, 16)
        with pytest.raises(wp.ConstructionError):
            wp.WarpingFunction.from_samples(t, t - 0.5)

    def test_nonuniform_rejected(self):
        t = np.array([0, 0.1, 0.2, 0.32, 0.4, 0.5, 0.6, 0.7])
        with pytest.raises(wp.ConstructionError):
            wp.WarpingFunction.from_samples(t, np.ones(8))


class TestCsv:
    def test_round_trip_with_header(self, tmp_path):
        t = np.linspace(0.0, 1.0, 64)
        vals = np.exp(t)
        path = tmp_path / "warp.csv"
        lines = ["t,phi"] + [f"{float(ti)!r},{float(vi)!r}" for ti, vi in zip(t, vals)]
        path.write_text("\n".join(lines) + "\n")
        w = wp.load_sampled_csv(path)
        assert w.a == 0.0 and w.b == 1.0
        got = w.eval(t)[0]
        assert np.max(np.abs(got - vals)) == 0.0

    def test_rejects_few_rows(self, tmp_path):
        path = tmp_path / "warp.csv"
        path.write_text("0,1\n0.5,1\n1,1\n")
        with pytest.raises(wp.ConstructionError):
            wp.load_sampled_csv(path)
