import pytest

from coinroute import (BoundsError, CostSpec, ThresholdModel, argmin_upper,
                       lower_bound, simulate_threshold, solve_klb, upper_bound,
                       verdict)

SQUARE = CostSpec("power", b=1.0, p=2.0)
LINEAR = CostSpec("affine", a=0.0, b=1.0)


class TestBalancedThreshold:
    def test_square_vs_linear_closed_form(self):
        # x^2 = 1 - x balances at the golden ratio conjugate
        k = solve_klb(SQUARE, LINEAR, 1000)
        assert k / 1000 == pytest.approx((5 ** 0.5 - 1) / 2, abs=1e-6)

    def test_symmetric_pair_balances_at_half(self):
        k = solve_klb(LINEAR, LINEAR, 800)
        assert k / 800 == pytest.approx(0.5, abs=1e-9)

    def test_unbalanceable_pair(self):
        low = CostSpec("affine", a=0.0, b=0.001)
        high = CostSpec("affine", a=10.0, b=1.0)
        with pytest.raises(BoundsError):
            solve_klb(low, high, 100)

    def test_window_too_small(self):
        with pytest.raises(BoundsError):
            solve_klb(SQUARE, LINEAR, 4)


class TestBounds:
    def test_bound_ordering(self):
        for k in (200, 500, 800):
            lo = lower_bound(SQUARE, LINEAR, 1000, k)
            hi = upper_bound(SQUARE, LINEAR, 1000, k)
            assert lo < hi

    def test_bounds_tighten_with_window(self):
        gaps = []
        for W in (100, 1000, 10000):
            k = int(round(0.6 * W))
            gaps.append(upper_bound(SQUARE, LINEAR, W, k)
                        - lower_bound(SQUARE, LINEAR, W, k))
        assert gaps[0] > gaps[1] > gaps[2]

    def test_threshold_range_checked(self):
        with pytest.raises(BoundsError):
            upper_bound(SQUARE, LINEAR, 100, 1)
        with pytest.raises(BoundsError):
            lower_bound(SQUARE, LINEAR, 100, 99)

    def test_argmin_beats_balanced_ceiling(self):
        k_prime, ceiling = argmin_upper(SQUARE, LINEAR, 1000)
        k_lb = solve_klb(SQUARE, LINEAR, 1000)
        assert ceiling <= upper_bound(SQUARE, LINEAR, 1000, k_lb)
        assert 1 < k_prime < 999


class TestVerdict:
    def test_square_vs_linear_suboptimal(self):
        report = verdict(SQUARE, LINEAR, 1000)
        assert report.suboptimal
        assert report.k_lb / 1000 == pytest.approx(0.618, abs=1e-3)
        assert report.k_prime / 1000 == pytest.approx(0.548, abs=1e-3)
        assert report.lb_lower_bound == pytest.approx(0.380, abs=1e-3)
        assert report.opt_upper_bound == pytest.approx(0.371, abs=1e-3)

    def test_symmetric_pair_not_provably_suboptimal(self):
        report = verdict(LINEAR, LINEAR, 1000)
        assert not report.suboptimal

    def test_rows_align_with_fields(self):
        report = verdict(SQUARE, LINEAR, 500)
        rows = dict(report.rows())
        assert rows["W"] == 500
        assert rows["suboptimal"] == report.suboptimal


class TestSimulation:
    def test_worked_pair_lands_inside_bounds(self):
        W = 1000
        for k in (618, 548):
            model = ThresholdModel(SQUARE, LINEAR, W, k)
            avg = simulate_threshold(model, steps=100000)
            assert lower_bound(SQUARE, LINEAR, W, k) - 1e-9 <= avg
            assert avg <= upper_bound(SQUARE, LINEAR, W, k) + 1e-9

    def test_short_run_rejected(self):
        model = ThresholdModel(SQUARE, LINEAR, 1000, 618)
        with pytest.raises(BoundsError):
            simulate_threshold(model, steps=100)

    def test_absorbing_state_makes_average_stable(self):
        model = ThresholdModel(SQUARE, LINEAR, 200, 120)
        a = simulate_threshold(model, steps=20000)
        b = simulate_threshold(model, steps=40000)
        assert a == pytest.approx(b, abs=1e-3)
