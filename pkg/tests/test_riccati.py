import math

import numpy as np
import pytest

from bandcomp import riccati as rc
from bandcomp import warp as wp


class TestSolveRiccati:
    def test_tan_closed_form_and_blow_up(self):
        # n=3, sigma=6: h(t) = -2 tan(3t/2), pole at pi/3
        sol = rc.solve_riccati(3, 6.0, 0.0, 2.0, 1e-4)
        assert sol.closed_form_tag is rc.ClosedFormTag.TAN
        assert sol.blow_up is not None
        t_star, direction = sol.blow_up
        assert direction == "down"
        assert t_star == pytest.approx(math.pi / 3, abs=1e-6)
        mask = sol.t <= 0.9 * math.pi / 3
        exact = -2.0 * np.tan(1.5 * sol.t[mask])
        assert np.max(np.abs(sol.h[mask] - exact)) < 1e-6

    def test_flat_equilibrium(self):
        sol = rc.solve_riccati(5, 0.0, 0.0, 3.0, 1e-3)
        assert sol.blow_up is None
        assert np.max(np.abs(sol.h)) == 0.0
        assert sol.closed_form_tag is rc.ClosedFormTag.EXP_CONSTANT

    def test_exp_constant_orbit(self):
        # n=4, sigma=-12: h_c = 3 is a fixed point
        sol = rc.solve_riccati(4, -12.0, 3.0, 2.0, 1e-3)
        assert sol.closed_form_tag is rc.ClosedFormTag.EXP_CONSTANT
        assert np.max(np.abs(sol.h - 3.0)) < 1e-12
        assert sol.blow_up is None

    def test_negative_sigma_tags(self):
        assert (rc.solve_riccati(4, -12.0, 5.0, 1.0, 1e-3).closed_form_tag
                is rc.ClosedFormTag.COTH)
        assert (rc.solve_riccati(4, -12.0, -5.0, 1.0, 1e-3).closed_form_tag
                is rc.ClosedFormTag.TAN)
        assert (rc.solve_riccati(4, -12.0, 1.0, 1.0, 1e-3).closed_form_tag
                is rc.ClosedFormTag.INVALID)

    def test_generic_tan_agreement(self):
        # h(t) = -A tan(k t / 2 + c) with c = arctan(-h0 / A)
        rng = np.random.default_rng(7)
        for _ in range(10):
            n = int(rng.integers(2, 8))
            sigma = float(rng.uniform(1.0, 30.0))
            h0 = float(rng.uniform(-2.0, 2.0))
            a = math.sqrt(sigma * (n - 1) / n)
            k = math.sqrt(sigma * n / (n - 1))
            c = math.atan(-h0 / a)
            t_pole = (math.pi / 2 - c) / (k / 2)
            sol = rc.solve_riccati(n, sigma, h0, 0.8 * t_pole, 1e-4)
            exact = -a * np.tan(k * sol.t / 2 + c)
            assert np.max(np.abs(sol.h - exact)) < 1e-6

    def test_monotone_where_forced(self):
        sol = rc.solve_riccati(3, 6.0, 1.0, 0.5, 1e-3)
        assert np.all(np.diff(sol.h) < 0)

    def test_argument_errors(self):
        with pytest.raises(ValueError):
            rc.solve_riccati(3, 6.0, 0.0, 1.0, -1e-3)
        with pytest.raises(ValueError):
            rc.solve_riccati(3, 6.0, 0.0, 0.0, 1e-3)


class TestWidthBound:
    def test_sphere_supremum(self):
        v = rc.width_bound(rc.ComparisonProblem(7, 42.0, -1e6, -1e6))
        assert v.is_finite
        assert 2 * math.pi / 7 - 1e-4 <= v.width <= 2 * math.pi / 7

    def test_cos_symmetric_data(self):
        hm = 2 * math.tan(-0.45)
        hp = -2 * math.tan(0.45)
        v = rc.width_bound(rc.ComparisonProblem(3, 6.0, hm, hp))
        assert v.width == pytest.approx(0.6, abs=1e-6)

    def test_scalar_flat_corollary_formula(self):
        # no lower-boundary hypothesis: start from the pole (very negative
        # H_minus); the bound is 2(n-1)/(n H_plus)
        n, hp = 5, 0.5
        v = rc.width_bound(rc.ComparisonProblem(n, 0.0, -1e12, hp))
        assert v.width == pytest.approx(2 * (n - 1) / (n * hp), abs=1e-6)

    def test_zero_width_boundary_case(self):
        v = rc.width_bound(rc.ComparisonProblem(4, 12.0, 0.0, 0.0))
        assert v.is_finite and v.width == 0.0

    def test_infeasible_positive_sigma(self):
        v = rc.width_bound(rc.ComparisonProblem(4, 12.0, 0.0, 0.5))
        assert v.kind is rc.VerdictKind.INFEASIBLE

    def test_infinite_product_case(self):
        v = rc.width_bound(rc.ComparisonProblem(4, 0.0, 0.0, 0.0))
        assert v.kind is rc.VerdictKind.INFINITE

    def test_infinite_coth_plateau(self):
        # h_c = 3: profile from 4 plateaus at 3 >= 2
        v = rc.width_bound(rc.ComparisonProblem(4, -12.0, -4.0, 2.0))
        assert v.kind is rc.VerdictKind.INFINITE

    def test_finite_coth(self):
        v = rc.width_bound(rc.ComparisonProblem(4, -12.0, -4.0, 3.5))
        exact = rc.closed_form_width("sinh", 4, H_plus=3.5, H_minus=-4.0)
        assert v.width == pytest.approx(exact, abs=1e-6)

    def test_blow_down_below_minus_hc(self):
        v = rc.width_bound(rc.ComparisonProblem(4, -12.0, 4.0, -6.0))
        assert v.is_finite and v.width > 0

    def test_monotone_in_boundary_data(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            n = int(rng.integers(2, 8))
            sigma = float(rng.uniform(1.0, 20.0))
            hm = float(rng.uniform(-3.0, 1.0))
            hp = float(rng.uniform(-3.0, min(1.0, -hm)))
            base = rc.width_bound(rc.ComparisonProblem(n, sigma, hm, hp)).width
            up_m = rc.width_bound(rc.ComparisonProblem(n, sigma, hm + 0.2, hp))
            up_p = rc.width_bound(rc.ComparisonProblem(n, sigma, hm, hp + 0.1))
            if up_m.is_finite:
                assert up_m.width <= base + 1e-9
            if up_p.is_finite:
                assert up_p.width <= base + 1e-9
            tighter = rc.width_bound(rc.ComparisonProblem(n, sigma * 1.5, hm, hp))
            assert tighter.width <= base + 1e-9

    def test_supremum_bound(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            n = int(rng.integers(2, 8))
            sigma = float(rng.uniform(0.5, 40.0))
            hm = float(rng.uniform(-50.0, 5.0))
            hp = float(rng.uniform(-50.0, min(5.0, -hm)))
            v = rc.width_bound(rc.ComparisonProblem(n, sigma, hm, hp))
            assert v.width <= 2 * math.pi * math.sqrt((n - 1) / (sigma * n)) + 1e-9

    def test_extremal_profile_matches_closed_form(self):
        p = rc.ComparisonProblem(3, 6.0, 2 * math.tan(-0.45), -2 * math.tan(0.45))
        t, h = rc.extremal_profile(p, samples=64)
        exact = -2 * np.tan(1.5 * (t - 0.3))
        assert np.max(np.abs(h - exact)) < 1e-5


class TestClosedFormWidth:
    def test_cos(self):
        w = rc.closed_form_width("cos", 3, H_plus=-2 * math.tan(0.45),
                                 H_minus=2 * math.tan(-0.45))
        assert w == pytest.approx(0.6, abs=1e-12)

    def test_hyperbolic_corollary(self):
        w = rc.closed_form_width("hyperbolic_corollary", 3, H_plus=4.0)
        assert w == pytest.approx((2 / 3) * math.atanh(1 / 2), abs=1e-12)
        assert w == pytest.approx((1 / 3) * math.log(3), abs=1e-12)

    def test_power(self):
        # l_minus = 0.1 via H_minus = -2(n-1)/(n l_minus); l_plus = 3.2
        w = rc.closed_form_width("power", 5, H_plus=0.5, H_minus=-8 / 0.5)
        assert w == pytest.approx(3.1, abs=1e-12)

    def test_out_of_range_raises(self):
        with pytest.raises(rc.InfeasibleModelError):
            rc.closed_form_width("cos", 3, H_plus=2.0, H_minus=-1.0)
        with pytest.raises(rc.InfeasibleModelError):
            rc.closed_form_width("sinh", 3, H_plus=1.0, H_minus=-5.0)  # below h_c
        with pytest.raises(ValueError):
            rc.closed_form_width("nope", 3, H_plus=1.0)


class TestOdeComparisonCheck:
    def setup_method(self):
        self.t = np.linspace(-0.3, 0.3, 601)
        self.step = self.t[1] - self.t[0]
        self.tol = 10 * self.step**2

    def test_equality_case(self):
        h = -2 * np.tan(1.5 * self.t)
        res = rc.ode_comparison_check(self.t, h, h.copy(), 3, self.tol)
        assert res.kind == "hold_and_equal"

    def test_interior_bump_violation(self):
        h2 = -2 * np.tan(1.5 * self.t)
        bump = 0.1 * np.exp(-((self.t) / 0.05) ** 2)
        h1 = h2 - bump
        res = rc.ode_comparison_check(self.t, h1, h2, 3, self.tol)
        assert res.kind == "violated"
        assert res.which == "ode"

    def test_boundary_violation(self):
        h2 = -2 * np.tan(1.5 * self.t)
        h1 = h2 + 1.0
        res = rc.ode_comparison_check(self.t, h1, h2, 3, self.tol)
        assert res.kind == "violated"
        assert res.which in ("boundary_a", "ode")

    def test_pure_boundary_violation(self):
        h2 = np.zeros_like(self.t)
        h1 = np.zeros_like(self.t)
        # raise h1 near a only, flat enough that condition (i) stays inside tol
        h1 = 0.5 * np.exp(-((self.t + 0.3) / 0.5) ** 2) * 0 + h2 + 1.0
        res = rc.ode_comparison_check(self.t, h1, h2, 4, 0.5)
        assert res.kind == "violated"
        assert res.which == "boundary_a"

    def test_grid_mismatch(self):
        with pytest.raises(ValueError):
            rc.ode_comparison_check(self.t, self.t[:-1], self.t[:-1], 3, 1e-3)


class TestCompareWarpedProducts:
    def test_reflexive_equality(self):
        m = wp.cos_model(3, -0.3, 0.3)
        res = rc.compare_warped_products(m, m)
        assert res.kind == "equality_forced"

    def test_log_constant_different_domains(self):
        m1 = wp.exp_model(4, 0.0, 1.0)
        m2 = wp.exp_model(4, 2.0, 5.0)
        res = rc.compare_warped_products(m1, m2)
        assert res.kind == "equality_forced"

    def test_width_hypothesis_fails(self):
        m1 = wp.cos_model(3, -0.2, 0.2)
        m2 = wp.cos_model(3, -0.3, 0.3)
        res = rc.compare_warped_products(m1, m2)
        assert res.kind == "hypothesis_fails"
        assert res.which == "width"

    def test_sc_hypothesis_fails(self):
        m1 = wp.constant_model(3, 0.0, 1.0)   # Sc = 0
        m2 = wp.cos_model(3, -0.3, 0.3)       # Sc = 6
        res = rc.compare_warped_products(m1, m2)
        assert res.kind == "hypothesis_fails"
        assert res.which == "sc"

    def test_nonzero_base_rejected(self):
        m1 = wp.sphere_annulus(3, -0.3, 0.3)
        m2 = wp.cos_model(3, -0.3, 0.3)
        with pytest.raises(rc.UnsupportedModelError):
            rc.compare_warped_products(m1, m2)


class TestScalingTransform:
    def test_arithmetic(self):
        p = rc.ComparisonProblem(3, 6.0, -1.0, -1.0)
        q = rc.scaling_transform(p, 2.0)
        assert (q.n, q.sigma, q.H_minus, q.H_plus) == (3, 1.5, -0.5, -0.5)

    def test_identity(self):
        p = rc.ComparisonProblem(3, 6.0, -1.0, -1.0)
        assert rc.scaling_transform(p, 1.0) == p

    def test_covariance_against_solver(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            n = int(rng.integers(2, 8))
            sigma = float(rng.uniform(1.0, 20.0))
            hm = float(rng.uniform(-2.0, 0.5))
            hp = float(rng.uniform(-2.0, -hm - 0.05))
            lam = float(rng.uniform(0.2, 5.0))
            p = rc.ComparisonProblem(n, sigma, hm, hp)
            w0 = rc.width_bound(p).width
            w1 = rc.width_bound(rc.scaling_transform(p, lam)).width
            assert w1 == pytest.approx(lam * w0, rel=1e-6)

    def test_rejects_nonpositive(self):
        p = rc.ComparisonProblem(3, 6.0, -1.0, -1.0)
        with pytest.raises(ValueError):
            rc.scaling_transform(p, 0.0)


class TestSweep:
    def test_parse_and_run(self, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text(
            "# sweep over two dimensions\n"
            "n = 3,4\n"
            "sigma = 6\n"
            "h_minus = -1.0:0.0:2\n"
            "h_plus = -1.0\n")
        problems = rc.parse_sweep_config(cfg)
        assert len(problems) == 4
        results = rc.run_sweep(problems)
        rows = rc.sweep_csv_rows(results)
        assert rows[0] == "n,sigma,H_minus,H_plus,verdict,width"
        assert len(rows) == 5
        assert all(row.count(",") == 5 for row in rows[1:])

    def test_missing_key(self, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("n = 3\nsigma = 6\n")
        with pytest.raises(ValueError):
            rc.parse_sweep_config(cfg)
