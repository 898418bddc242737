"""Closed-form incentive analysis of Bitcoin-NG fee splitting and Greedy-Mine.

Everything here is straight 64-bit float evaluation of the closed forms:
the fee-split bounds that make the three classic deviations unprofitable,
the per-episode reach probabilities of the fork-race states, the honest and
greedy revenue expectations (whale fee normalized to 1), the relative extra
reward, and the profitability threshold in alpha found by bisection.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NoThresholdError
from .params import StrategyParams

THRESHOLD_BRACKET = (1e-6, 0.5)
THRESHOLD_MAX_ITER = 200
DEFAULT_THRESHOLD_TOL = 1e-6


@dataclass(frozen=True)
class IncentiveBounds:
    """Fee-split constraints on the leader's share r at a given alpha.

    r_min_inclusion -- lower bound from the transaction inclusion attack:
                       r > alpha(2-alpha) / (1 + alpha - alpha^2)
    r_max_extension -- upper bound from the chain extension attack:
                       r < (1-alpha) / (2-alpha)
    r_min_modified  -- lower bound from the modified inclusion attack:
                       r > alpha / (1+alpha)
    window          -- (r_min_modified, r_max_extension) when nonempty; the
                       modified bound supersedes the original lower bound
    """

    r_min_inclusion: float
    r_max_extension: float
    r_min_modified: float
    window: tuple[float, float] | None


def incentive_bounds(alpha: float) -> IncentiveBounds:
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha!r}")
    r_min_inclusion = 1.0 - (1.0 - alpha) / (1.0 + alpha - alpha * alpha)
    r_max_extension = (1.0 - alpha) / (2.0 - alpha)
    r_min_modified = alpha / (1.0 + alpha)
    window = (r_min_modified, r_max_extension) if r_min_modified < r_max_extension else None
    return IncentiveBounds(r_min_inclusion, r_max_extension, r_min_modified, window)


@dataclass(frozen=True)
class StateProbabilities:
    """Per-episode reach probabilities of the named fork-race states."""

    p_s: float
    p_a0: float
    p_h0: float
    p_h00: float
    p_h10: float
    p_a1: float
    p_a2: float
    p_a00: float
    p_a10: float
    p_a20: float


def state_probabilities(params: StrategyParams) -> StateProbabilities:
    """Evaluate the reach-probability recurrences of the fork race.

    The two tie states h10 and a20 fold their descent ladders into the
    geometric factor 1 / (1 - alpha(1-alpha)).
    """
    a, g = params.alpha, params.gamma
    h = 1.0 - a
    p_s = 1.0
    p_a0 = h * p_s
    p_h0 = a + a * p_a0
    p_a1 = h * p_a0
    p_a2 = a * p_a1
    p_h00 = h * p_h0 + g * h * p_a2
    p_a00 = h * p_a1
    p_a10 = (1.0 - g) * h * p_a2 + a * p_a00
    geometric = 1.0 / (1.0 - a * h)
    p_h10 = a * p_h00 * geometric
    p_a20 = a * p_a10 * geometric
    return StateProbabilities(p_s, p_a0, p_h0, p_h00, p_h10, p_a1, p_a2, p_a00, p_a10, p_a20)


def honest_revenue(params: StrategyParams) -> float:
    """Expected whale-fee share of an honest pool with power alpha.

    alpha^2 * 1 + alpha(1-alpha) * r + (1-alpha)alpha * (1-r); the fee split
    makes this collapse to alpha for every r.
    """
    a, r = params.alpha, params.r_leader
    return a * a + a * (1.0 - a) * r + (1.0 - a) * a * (1.0 - r)


def greedy_revenue(params: StrategyParams) -> float:
    """Expected whale-fee share under Greedy-Mine: winner takes all.

    Sums the probability flux into the winning terminal: alpha per visit from
    h0 and a2, alpha + gamma(1-alpha) per visit from the tie states.
    """
    a, g = params.alpha, params.gamma
    probs = state_probabilities(params)
    tie_exit = a + g * (1.0 - a)
    return a * probs.p_h0 + a * probs.p_a2 + tie_exit * (probs.p_h10 + probs.p_a20)


def rer(r_attack: float, r_base: float) -> float:
    """Relative extra reward (r_attack - r_base) / r_base."""
    if r_base <= 0.0:
        raise ValueError(f"RER undefined for baseline revenue {r_base!r}")
    return (r_attack - r_base) / r_base


@dataclass(frozen=True)
class AnalyticReport:
    """Closed-form snapshot for one parameter point; rer is None at alpha=0."""

    params: StrategyParams
    probs: StateProbabilities
    revenue_honest: float
    revenue_greedy: float
    rer: float | None


def analytic_report(params: StrategyParams) -> AnalyticReport:
    r_honest = honest_revenue(params)
    r_greedy = greedy_revenue(params)
    value = rer(r_greedy, r_honest) if r_honest > 0.0 else None
    return AnalyticReport(params, state_probabilities(params), r_honest, r_greedy, value)


def threshold_alpha(gamma: float, tol: float = DEFAULT_THRESHOLD_TOL) -> float:
    """Smallest alpha in (0, 0.5] where Greedy-Mine matches honest revenue.

    Bisection on the revenue gap greedy - honest, bracketed on
    [1e-6, 0.5]; deterministic for fixed inputs.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma!r}")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol!r}")

    def gap(alpha: float) -> float:
        p = StrategyParams(alpha=alpha, gamma=gamma)
        return greedy_revenue(p) - honest_revenue(p)

    lo, hi = THRESHOLD_BRACKET
    f_lo, f_hi = gap(lo), gap(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo > 0.0 or f_hi < 0.0:
        raise NoThresholdError(f"no sign change of the revenue gap on {THRESHOLD_BRACKET} at gamma={gamma}")
    for _ in range(THRESHOLD_MAX_ITER):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
