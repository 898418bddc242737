"""Truncated-chain solve: brackets, conservation, descent probability."""

import pytest

from ng_greedy import (
    StrategyParams,
    absorption_bounds,
    boundary_mass,
    descent_probability,
    greedy_revenue,
)

GRID_ALPHAS = [0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45]
GRID_GAMMAS = [0.0, 0.5, 1.0]


@pytest.fixture(scope="module")
def grid_bounds():
    return {
        (a, g): absorption_bounds(StrategyParams(a, g), depth=64)
        for g in GRID_GAMMAS
        for a in GRID_ALPHAS
    }


def test_bracket_ordering_and_residual(grid_bounds):
    for (a, g), b in grid_bounds.items():
        assert 0.0 <= b.lower <= b.upper <= 1.0, (a, g)
        assert b.residual == b.upper - b.lower
        assert b.residual < 1e-6, (a, g, b.residual)


def test_closed_form_is_a_lower_bound(grid_bounds):
    # the folded geometric ladder undercounts multi-path excursions, so the
    # closed form must sit at or below the exact chain value
    for (a, g), b in grid_bounds.items():
        closed = greedy_revenue(StrategyParams(a, g))
        assert closed <= b.upper, (a, g)
        assert b.lower - closed >= 0.0, (a, g, b.lower - closed)


def test_gap_is_systematically_positive(grid_bounds):
    gaps = [b.lower - greedy_revenue(StrategyParams(a, g)) for (a, g), b in grid_bounds.items()]
    assert min(gaps) > 1e-6
    assert max(gaps) > 1e-3


def test_conservation(grid_bounds):
    for (a, g), b in grid_bounds.items():
        w = boundary_mass(StrategyParams(a, g), depth=64)
        assert b.lower + w == pytest.approx(1.0, abs=1e-10), (a, g)


def test_idle_adversary_never_wins():
    b = absorption_bounds(StrategyParams(0.0, 0.5), depth=16)
    assert b.lower == 0.0
    assert b.upper == 0.0
    assert boundary_mass(StrategyParams(0.0, 0.5), depth=16) == pytest.approx(1.0, abs=1e-12)


def test_half_power_lower_exceeds_closed_form():
    b = absorption_bounds(StrategyParams(0.5, 0.0), depth=64)
    assert b.lower >= 0.6041667


def test_residual_tightens_with_depth():
    params = StrategyParams(0.3, 0.5)
    shallow = absorption_bounds(params, depth=16)
    deep = absorption_bounds(params, depth=64)
    assert deep.residual < shallow.residual
    # lower bound can only grow as the give-up boundary recedes
    assert deep.lower >= shallow.lower


def test_residual_non_increasing_in_depth():
    params = StrategyParams(0.42, 0.5)
    residuals = [absorption_bounds(params, depth=d).residual for d in (8, 16, 32, 64)]
    assert all(r2 <= r1 for r1, r2 in zip(residuals, residuals[1:]))


def test_depth_validation():
    with pytest.raises(ValueError):
        absorption_bounds(StrategyParams(0.3, 0.5), depth=1)
    with pytest.raises(ValueError):
        boundary_mass(StrategyParams(0.3, 0.5), depth=0)


class TestDescentProbability:
    def test_matches_ruin_probability(self):
        for alpha in GRID_ALPHAS:
            got = descent_probability(StrategyParams(alpha, 0.0), depth=64)
            assert got == pytest.approx(alpha / (1 - alpha), abs=1e-6), alpha

    def test_fifth_power(self):
        assert descent_probability(StrategyParams(0.2, 0.0), depth=64) == pytest.approx(0.25, abs=1e-6)

    def test_folded_ladder_factor_undercounts(self):
        # the one-path-per-length folding is strictly below the true
        # first-passage probability for every minority power
        for alpha in GRID_ALPHAS:
            folded = alpha / (1 - alpha * (1 - alpha))
            exact = descent_probability(StrategyParams(alpha, 0.0), depth=64)
            assert folded < exact, alpha

    def test_vanishes_with_power(self):
        assert descent_probability(StrategyParams(1e-6, 0.0), depth=64) == pytest.approx(0.0, abs=1e-5)

    def test_domain(self):
        with pytest.raises(ValueError):
            descent_probability(StrategyParams(0.5, 0.0), depth=64)
        with pytest.raises(ValueError):
            descent_probability(StrategyParams(0.0, 0.0), depth=64)
        with pytest.raises(ValueError):
            descent_probability(StrategyParams(0.2, 0.0), depth=7)
