"""Seeded Monte Carlo simulation of whale-transaction episodes.

``run_trial`` is the readable single-episode reference built on the chain
rules; ``estimate`` runs batches through the compiled kernels. Both consume
the same per-trial sub-streams (see ng_greedy.rng for the derivation rule),
so a batch estimate equals the aggregate of individual reference trials.

Episodes that reach an honest lead of ``giveup_depth`` are scored as
truncated, which counts as an honest victory for revenue purposes; this is
the pessimistic-for-the-attacker closure matching the oracle's lower bound.
The transition rules themselves contain no honest terminal (the greedy pool
never concedes), so ``honest_wins`` can only be zero; the counter exists to
keep the outcome accounting explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import _kernels
from .chain import ChainState, Family, Finder, TieChoice, is_terminal, transition
from .params import StrategyParams
from .rng import TrialStream

DEFAULT_TRIALS = 1_000_000
DEFAULT_GIVEUP_DEPTH = 64
_SEED_MAX = 2**64


class TrialOutcome(Enum):
    GREEDY_WIN = "greedy-win"
    HONEST_WIN = "honest-win"
    TRUNCATED = "truncated"


_OUTCOME_BY_CODE = {
    _kernels.OUTCOME_GREEDY_WIN: TrialOutcome.GREEDY_WIN,
    _kernels.OUTCOME_HONEST_WIN: TrialOutcome.HONEST_WIN,
    _kernels.OUTCOME_TRUNCATED: TrialOutcome.TRUNCATED,
}


@dataclass(frozen=True)
class TrialResult:
    outcome: TrialOutcome
    steps: int  # Key-Blocks found during the episode
    path: tuple[ChainState, ...] | None = None


@dataclass(frozen=True)
class SimConfig:
    params: StrategyParams
    trials: int = DEFAULT_TRIALS
    master_seed: int = 0
    giveup_depth: int = DEFAULT_GIVEUP_DEPTH

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials!r}")
        if self.giveup_depth < 2:
            raise ValueError(f"giveup_depth must be >= 2, got {self.giveup_depth!r}")
        if not 0 <= self.master_seed < _SEED_MAX:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed!r}")


@dataclass(frozen=True)
class SimStats:
    """Aggregate of one batch; a pure function of the SimConfig."""

    greedy_wins: int
    honest_wins: int
    truncated: int
    p_hat: float
    ci95_half_width: float
    mean_steps: float
    seed_echo: int

    @property
    def trials(self) -> int:
        return self.greedy_wins + self.honest_wins + self.truncated


def run_trial(
    params: StrategyParams,
    stream: TrialStream,
    giveup_depth: int = DEFAULT_GIVEUP_DEPTH,
    trace: bool = False,
) -> TrialResult:
    """Play one episode from the start state to absorption.

    Each step draws the finder (greedy with probability alpha); at a tie
    state with an honest finder a second draw picks the branch (greedy with
    probability gamma). The episode ends at the winning terminal or, once
    the honest lead reaches ``giveup_depth``, as truncated.
    """
    if giveup_depth < 2:
        raise ValueError(f"giveup_depth must be >= 2, got {giveup_depth!r}")
    state = ChainState(Family.S)
    path = [state] if trace else None
    steps = 0
    while True:
        finder = Finder.GREEDY if stream.next_unit() < params.alpha else Finder.HONEST
        tie = None
        if finder is Finder.HONEST and state.is_tie:
            tie = TieChoice.EXTEND_GREEDY if stream.next_unit() < params.gamma else TieChoice.EXTEND_HONEST
        state = transition(state, finder, tie)
        steps += 1
        if path is not None:
            path.append(state)
        if is_terminal(state) is not None:
            return TrialResult(TrialOutcome.GREEDY_WIN, steps, tuple(path) if path else None)
        if state.k >= giveup_depth:
            return TrialResult(TrialOutcome.TRUNCATED, steps, tuple(path) if path else None)


def estimate(config: SimConfig, backend: str | None = None) -> SimStats:
    """Run the configured batch and aggregate the statistics.

    Trial i runs on the sub-stream derived from (master_seed, i), so the
    result does not depend on execution order, thread count or backend.
    """
    outcomes, steps = _kernels.run_batch(
        config.params.alpha,
        config.params.gamma,
        config.trials,
        config.master_seed,
        config.giveup_depth,
        backend=backend,
    )
    greedy_wins = int((outcomes == _kernels.OUTCOME_GREEDY_WIN).sum())
    honest_wins = int((outcomes == _kernels.OUTCOME_HONEST_WIN).sum())
    truncated = int((outcomes == _kernels.OUTCOME_TRUNCATED).sum())
    n = config.trials
    p_hat = greedy_wins / n
    ci = 1.96 * math.sqrt(p_hat * (1.0 - p_hat) / n)
    mean_steps = int(steps.sum()) / n  # integer sum: exact, order-insensitive
    return SimStats(
        greedy_wins=greedy_wins,
        honest_wins=honest_wins,
        truncated=truncated,
        p_hat=p_hat,
        ci95_half_width=ci,
        mean_steps=mean_steps,
        seed_echo=config.master_seed,
    )
