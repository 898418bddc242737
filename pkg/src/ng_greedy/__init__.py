"""Desk-scale laboratory for the Greedy-Mine attack on Bitcoin-NG.

Three independent routes to the attacker's win probability and revenue:

* closed forms for the fork-race state probabilities, revenues and the
  relative extra reward (``analytics``),
* an exact absorbing-chain solve with rigorous truncation brackets
  (``oracle``),
* a seeded, reproducible Monte Carlo simulator (``simulate``).

``experiments`` sweeps parameter grids, reproduces the golden RER table
and serializes results; ``cli`` exposes everything on the command line.
"""

from .params import StrategyParams
from .chain import (
    ChainState,
    Family,
    Finder,
    Outcome,
    TieChoice,
    is_terminal,
    transition,
    transition_distribution,
)
from .analytics import (
    AnalyticReport,
    IncentiveBounds,
    StateProbabilities,
    analytic_report,
    greedy_revenue,
    honest_revenue,
    incentive_bounds,
    rer,
    state_probabilities,
    threshold_alpha,
)
from .oracle import AbsorptionBounds, absorption_bounds, boundary_mass, descent_probability
from .simulate import SimConfig, SimStats, TrialOutcome, TrialResult, estimate, run_trial
from .rng import TrialStream
from .errors import NoThresholdError, ReproductionError

__all__ = [
    "AbsorptionBounds",
    "AnalyticReport",
    "ChainState",
    "Family",
    "Finder",
    "IncentiveBounds",
    "NoThresholdError",
    "Outcome",
    "ReproductionError",
    "SimConfig",
    "SimStats",
    "StateProbabilities",
    "StrategyParams",
    "TieChoice",
    "TrialOutcome",
    "TrialResult",
    "TrialStream",
    "absorption_bounds",
    "analytic_report",
    "boundary_mass",
    "descent_probability",
    "estimate",
    "greedy_revenue",
    "honest_revenue",
    "incentive_bounds",
    "is_terminal",
    "rer",
    "run_trial",
    "state_probabilities",
    "threshold_alpha",
    "transition",
    "transition_distribution",
]

__version__ = "0.1.0"
