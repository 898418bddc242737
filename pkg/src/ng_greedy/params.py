"""Strategy parameters of the fork race between the greedy and honest pools."""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_R_LEADER = 0.40


def _check_prob(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class StrategyParams:
    """Parameter triple of the mining game.

    alpha    -- greedy pool's share of total mining power
    gamma    -- share of honest miners that extend the greedy branch in a tie
    r_leader -- current leader's share of an epoch's transaction fees
                (Bitcoin-NG uses 40%)
    """

    alpha: float
    gamma: float
    r_leader: float = DEFAULT_R_LEADER

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_prob("alpha", self.alpha))
        object.__setattr__(self, "gamma", _check_prob("gamma", self.gamma))
        object.__setattr__(self, "r_leader", _check_prob("r_leader", self.r_leader))
