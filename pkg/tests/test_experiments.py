"""Sweeps, golden-table reproduction, threshold curve, heatmap, serialization."""

import json
import random
from fractions import Fraction

import pytest

import ng_greedy.experiments as ex
from ng_greedy import ReproductionError, StrategyParams, greedy_revenue


def exact_rer_pct(gamma, alpha):
    """RER in percent via exact fraction arithmetic, no float rounding."""
    a, g = Fraction(str(alpha)), Fraction(str(gamma))
    ph0 = a * (2 - a)
    pa2 = a * (1 - a) ** 2
    geometric = Fraction(1) / (1 - a * (1 - a))
    ph00 = (1 - a) * ph0 + g * (1 - a) * pa2
    pa10 = (1 - g) * (1 - a) * pa2 + a * (1 - a) ** 3
    revenue = a * ph0 + a * pa2 + (a + g * (1 - a)) * (ph00 + pa10) * a * geometric
    return (revenue - a) / a * 100


class TestGoldenTable:
    def test_reproduces_all_cells(self):
        records = ex.reproduce_table1()
        assert len(records) == 30
        for rec in records:
            want = ex.TABLE_RER_PCT[(rec.gamma, rec.alpha)]
            assert abs(rec.rer_closed * 100 - want) <= ex.TABLE_TOL_PCT, (rec.gamma, rec.alpha)

    def test_records_ordered_by_gamma_then_alpha(self):
        records = ex.reproduce_table1()
        keys = [(r.gamma, r.alpha) for r in records]
        assert keys == sorted(keys)

    def test_golden_values_match_exact_arithmetic(self):
        for (gamma, alpha), want in ex.TABLE_RER_PCT.items():
            exact = exact_rer_pct(gamma, alpha)
            assert abs(float(exact) - want) <= ex.TABLE_TOL_PCT, (gamma, alpha)

    def test_columns_are_arithmetic_progressions_in_gamma(self):
        # RER is affine in gamma at fixed alpha: the gamma terms of the two
        # tie-state probabilities cancel in their sum
        for alpha in ex.TABLE_ALPHAS:
            column = [exact_rer_pct(g, alpha) for g in ex.TABLE_GAMMAS]
            deltas = {b - a for a, b in zip(column, column[1:])}
            assert len(deltas) == 1, alpha

    def test_documented_misprints(self):
        # digit slip: printed -30.0900, exact -30.0800
        assert exact_rer_pct(0.2, 0.2) == Fraction(-1504, 50)
        assert ex.TABLE_MISPRINTS[(0.2, 0.2)] == -30.0900
        assert float(exact_rer_pct(0.2, 0.2)) - ex.TABLE_MISPRINTS[(0.2, 0.2)] == pytest.approx(0.01, abs=1e-9)
        # rounding slip: exact -12.927848... prints to -12.9278, not -12.9279
        exact = float(exact_rer_pct(0.0, 0.3))
        assert exact == pytest.approx(-12.927848, abs=1e-6)
        assert round(exact, 4) == -12.9278
        assert ex.TABLE_MISPRINTS[(0.0, 0.3)] == -12.9279
        # every other printed value is correctly rounded to 4 decimals
        for key, want in ex.TABLE_RER_PCT.items():
            assert round(float(exact_rer_pct(*key)), 4) == pytest.approx(want, abs=1e-12), key

    def test_mismatch_raises_and_names_the_cell(self, monkeypatch):
        monkeypatch.setitem(ex.TABLE_RER_PCT, (1.0, 0.5), 99.0)
        with pytest.raises(ReproductionError, match=r"gamma=1\.0, alpha=0\.5"):
            ex.reproduce_table1()

    def test_check_can_be_disabled(self, monkeypatch):
        monkeypatch.setitem(ex.TABLE_RER_PCT, (1.0, 0.5), 99.0)
        assert len(ex.reproduce_table1(check=False)) == 30


class TestSweep:
    def test_closed_mode_grid(self):
        records = ex.sweep_revenue([0.3, 0.1, 0.2], [1.0, 0.0], mode="closed")
        assert len(records) == 6
        keys = [(r.gamma, r.alpha) for r in records]
        assert keys == sorted(keys)
        for rec in records:
            assert rec.revenue_honest == pytest.approx(rec.alpha, abs=1e-15)
            assert rec.revenue_greedy_oracle_lower is None
            assert rec.revenue_greedy_mc is None
            assert rec.rer_closed is not None

    def test_zero_alpha_flags_undefined_rer(self):
        (rec,) = ex.sweep_revenue([0.0], [0.5], mode="closed")
        assert rec.revenue_greedy_closed == 0.0
        assert rec.rer_closed is None

    def test_threshold_crossing_point(self):
        (rec,) = ex.sweep_revenue([0.18], [1.0], mode="closed")
        assert rec.revenue_greedy_closed == pytest.approx(rec.revenue_honest, abs=1e-3)

    def test_oracle_mode(self):
        records = ex.sweep_revenue([0.2, 0.4], [0.5], mode="oracle", depth=32)
        for rec in records:
            assert rec.revenue_greedy_oracle_lower is not None
            assert rec.revenue_greedy_oracle_lower <= rec.revenue_greedy_oracle_upper
            assert rec.revenue_greedy_closed <= rec.revenue_greedy_oracle_upper
            assert rec.revenue_greedy_mc is None

    def test_all_mode_consistency(self):
        (rec,) = ex.sweep_revenue([0.5], [0.0], mode="all", depth=64, trials=100_000, master_seed=7)
        assert rec.revenue_greedy_closed == pytest.approx(0.6041667, abs=1e-7)
        assert rec.revenue_greedy_oracle_lower >= rec.revenue_greedy_closed
        assert abs(rec.revenue_greedy_mc - rec.revenue_greedy_oracle_lower) <= 3 * rec.mc_ci

    def test_mc_mode_deterministic(self):
        kwargs = dict(mode="mc", trials=20_000, master_seed=99)
        assert ex.sweep_revenue([0.2, 0.3], [0.5], **kwargs) == ex.sweep_revenue([0.2, 0.3], [0.5], **kwargs)

    def test_validation(self):
        with pytest.raises(ValueError):
            ex.sweep_revenue([], [0.5])
        with pytest.raises(ValueError):
            ex.sweep_revenue([0.2], [1.5])
        with pytest.raises(ValueError):
            ex.sweep_revenue([0.2], [0.5], mode="warp")


class TestThresholdCurve:
    def test_curve_is_monotone(self):
        records = ex.threshold_curve([0.0, 0.25, 0.5, 0.75, 1.0], tol=1e-6)
        stars = [r.alpha_star for r in records]
        assert all(a >= b for a, b in zip(stars, stars[1:]))
        assert len(set(stars)) == len(stars)  # strictly ordered on this grid

    def test_endpoints(self):
        records = ex.threshold_curve([1.0, 0.0], tol=1e-6)
        by_gamma = {r.gamma: r.alpha_star for r in records}
        assert by_gamma[1.0] == pytest.approx(0.180, abs=0.005)
        assert 0.3 < by_gamma[0.0] < 0.4
        assert all(0.0 < r.alpha_star <= 0.5 for r in records)


class TestHeatmap:
    def test_reference_cells(self):
        matrix = ex.rer_heatmap([0.1, 0.5], [1.0])
        assert matrix[0][1] == pytest.approx(0.541667, abs=1e-6)
        assert matrix[0][0] == pytest.approx(-0.380868, abs=1e-6)

    def test_zero_alpha_cells_are_markers(self):
        matrix = ex.rer_heatmap([0.0, 0.3], [0.0, 1.0])
        assert matrix[0][0] is None
        assert matrix[1][0] is None
        assert isinstance(matrix[0][1], float)

    def test_sign_agrees_with_threshold_curve(self):
        gammas = [0.0, 0.5, 1.0]
        alphas = [i / 100 for i in range(5, 51, 5)]
        thresholds = {r.gamma: r.alpha_star for r in ex.threshold_curve(gammas, tol=1e-9)}
        matrix = ex.rer_heatmap(alphas, gammas)
        for i, gamma in enumerate(gammas):
            for j, alpha in enumerate(alphas):
                if abs(alpha - thresholds[gamma]) < 1e-3:
                    continue
                expected_sign = 1.0 if alpha > thresholds[gamma] else -1.0
                assert matrix[i][j] * expected_sign > 0, (gamma, alpha)

    def test_cells_below_threshold_are_negative(self):
        gammas = [0.0, 0.5, 1.0]
        alphas = [0.05, 0.1, 0.15]
        matrix = ex.rer_heatmap(alphas, gammas)
        thresholds = {r.gamma: r.alpha_star for r in ex.threshold_curve(gammas)}
        for i, gamma in enumerate(gammas):
            for j, alpha in enumerate(alphas):
                if alpha < thresholds[gamma]:
                    assert matrix[i][j] < 0


def random_record(rng):
    def maybe(v):
        return None if rng.random() < 0.25 else v

    return ex.SweepRecord(
        alpha=rng.random(),
        gamma=rng.random(),
        revenue_honest=rng.random(),
        revenue_greedy_closed=rng.uniform(0, 1),
        revenue_greedy_oracle_lower=maybe(rng.random()),
        revenue_greedy_oracle_upper=maybe(rng.random()),
        revenue_greedy_mc=maybe(rng.random()),
        rer_closed=maybe(rng.uniform(-1, 1)),
        mc_ci=maybe(rng.random() * 1e-3),
    )


class TestSerialization:
    def test_csv_round_trip_randomized(self, tmp_path):
        rng = random.Random(20240201)
        records = [random_record(rng) for _ in range(1000)]
        path = tmp_path / "sweep.csv"
        nbytes = ex.write_csv(records, path)
        assert nbytes == path.stat().st_size > 0
        back = ex.read_csv(path, ex.SweepRecord)
        assert len(back) == 1000
        for a, b in zip(records, back):
            for name in ("alpha", "gamma", "revenue_honest", "revenue_greedy_closed",
                         "revenue_greedy_oracle_lower", "revenue_greedy_oracle_upper",
                         "revenue_greedy_mc", "rer_closed", "mc_ci"):
                va, vb = getattr(a, name), getattr(b, name)
                if va is None:
                    assert vb is None
                else:
                    assert vb == pytest.approx(va, rel=1e-9, abs=1e-12), name

    def test_json_round_trip_is_exact(self, tmp_path):
        rng = random.Random(77)
        records = [random_record(rng) for _ in range(200)]
        path = tmp_path / "sweep.json"
        ex.write_json(records, path)
        assert ex.read_json(path, ex.SweepRecord) == records

    def test_csv_formatting_contract(self, tmp_path):
        records = ex.reproduce_table1()
        path = tmp_path / "table.csv"
        ex.write_csv(records, path)
        text = path.read_text()
        assert "\r" not in text
        lines = text.splitlines()
        assert lines[0].startswith("alpha,gamma,revenue_honest")
        assert len(lines) == 31

    def test_table_round_trip_still_passes_tolerance(self, tmp_path):
        path = tmp_path / "table.csv"
        ex.write_csv(ex.reproduce_table1(), path)
        for rec in ex.read_csv(path, ex.SweepRecord):
            want = ex.TABLE_RER_PCT[(rec.gamma, rec.alpha)]
            assert abs(rec.rer_closed * 100 - want) <= ex.TABLE_TOL_PCT

    def test_empty_records(self, tmp_path):
        csv_path = tmp_path / "empty.csv"
        ex.write_csv([], csv_path, record_type=ex.ThresholdRecord)
        assert csv_path.read_text() == "gamma,alpha_star,tol\n"
        json_path = tmp_path / "empty.json"
        ex.write_json([], json_path)
        assert json.loads(json_path.read_text()) == []
        assert ex.read_csv(csv_path, ex.ThresholdRecord) == []

    def test_threshold_records_round_trip(self, tmp_path):
        records = ex.threshold_curve([0.0, 1.0])
        path = tmp_path / "thresholds.csv"
        ex.write_csv(records, path)
        back = ex.read_csv(path, ex.ThresholdRecord)
        for a, b in zip(records, back):
            assert b.alpha_star == pytest.approx(a.alpha_star, rel=1e-9)

    def test_unwritable_destination(self):
        with pytest.raises(OSError, match="no/such/dir"):
            ex.write_csv(ex.threshold_curve([1.0]), "/no/such/dir/out.csv")

    def test_empty_csv_requires_record_type(self, tmp_path):
        with pytest.raises(ValueError):
            ex.write_csv([], tmp_path / "x.csv")


def test_sweep_oracle_gap_report_direction():
    records = ex.sweep_revenue([0.1, 0.3, 0.45], [0.0, 1.0], mode="oracle", depth=64)
    for rec in records:
        gap = rec.revenue_greedy_oracle_lower - rec.revenue_greedy_closed
        assert gap >= 0.0, (rec.alpha, rec.gamma)


def test_default_grids():
    assert ex.DEFAULT_SWEEP_ALPHAS[0] == 0.01
    assert ex.DEFAULT_SWEEP_ALPHAS[-1] == 0.50
    assert len(ex.DEFAULT_SWEEP_ALPHAS) == 50
    assert ex.DEFAULT_SWEEP_GAMMAS == (0.0, 0.25, 0.5, 1.0)
