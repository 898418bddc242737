"""Exact truncated solve of the fork-race chain with rigorous brackets.

The full chain is infinite in the honest lead k, so it is truncated: the
walk is absorbed into a single boundary state the moment any index reaches
``depth`` (the same give-up convention the simulator uses). Absorption at
the winning terminal is then the solution of a small linear system.

Two closures of the boundary bracket the untruncated win probability:

* lower: boundary worth 0 (greedy concedes there; this equals the give-up
  game the Monte Carlo engine plays),
* upper: boundary worth min(1, theta^depth) with theta = alpha/(1-alpha),
  since from honest lead ``depth`` the greedy branch must first descend
  ``depth`` rungs of a walk that steps down with probability alpha, which
  succeeds with probability theta^depth (< 1 exactly when alpha < 1/2; for
  alpha >= 1/2 the closure degrades to the trivial worth 1).

The naive worth-1 closure is useless here: for a minority pool nearly all
losing mass drifts upward through the boundary, so worth-1 would pin the
upper bound near 1 forever. The descent-probability closure is what makes
the bracket collapse below 1e-6 by depth 64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainState, Family, transition_distribution
from .errors import SolveError
from .params import StrategyParams

DEFAULT_DEPTH = 64
_SOLVE_RESIDUAL_MAX = 1e-12


@dataclass(frozen=True)
class AbsorptionBounds:
    """Bracket [lower, upper] on the greedy win probability from the start."""

    lower: float
    upper: float
    depth: int
    residual: float  # upper - lower


def _transient_states(depth: int) -> list[ChainState]:
    states = [
        ChainState(Family.S),
        ChainState(Family.H0),
        ChainState(Family.A0),
        ChainState(Family.A1),
        ChainState(Family.A2),
        ChainState(Family.H10),
        ChainState(Family.A20),
    ]
    states += [ChainState(Family.H0K, k) for k in range(depth)]
    states += [ChainState(Family.H1K, k) for k in range(1, depth)]
    states += [ChainState(Family.A0K, k) for k in range(depth)]
    states += [ChainState(Family.A1K, k) for k in range(depth)]
    states += [ChainState(Family.A2K, k) for k in range(1, depth)]
    return states


def _solve_from_start(params, depth, win_value, boundary_value):
    """Solve v = Pv on the truncated chain and return v at the start state.

    The winning terminal is worth ``win_value`` and any successor whose index
    reaches ``depth`` is worth ``boundary_value``.
    """
    states = _transient_states(depth)
    index = {s: i for i, s in enumerate(states)}
    n = len(states)
    a = np.eye(n)
    b = np.zeros(n)
    for i, state in enumerate(states):
        for succ, p in transition_distribution(state, params):
            if succ.family is Family.H1:
                b[i] += p * win_value
            elif succ.k >= depth:
                b[i] += p * boundary_value
            else:
                a[i, index[succ]] -= p
    v = np.linalg.solve(a, b)
    solve_residual = float(np.abs(a @ v - b).max())
    if not np.isfinite(solve_residual) or solve_residual > _SOLVE_RESIDUAL_MAX:
        raise SolveError(f"truncated-chain solve residual {solve_residual:.3e} exceeds {_SOLVE_RESIDUAL_MAX:.0e}")
    return float(v[index[ChainState(Family.S)]])


def _descent_tail(alpha: float, depth: int) -> float:
    if alpha >= 0.5:
        return 1.0
    theta = alpha / (1.0 - alpha)
    return min(1.0, theta**depth)


def absorption_bounds(params: StrategyParams, depth: int = DEFAULT_DEPTH) -> AbsorptionBounds:
    """Bracket the greedy win probability by solving the depth-truncated chain.

    ``lower`` is exactly the win probability of the game that scores an
    honest win once the honest lead reaches ``depth``; ``upper`` adds the
    descent-probability worth of the truncated mass.
    """
    if depth < 2:
        raise ValueError(f"depth must be >= 2, got {depth!r}")
    lower = _solve_from_start(params, depth, 1.0, 0.0)
    upper = _solve_from_start(params, depth, 1.0, _descent_tail(params.alpha, depth))
    return AbsorptionBounds(lower=lower, upper=upper, depth=depth, residual=upper - lower)


def boundary_mass(params: StrategyParams, depth: int = DEFAULT_DEPTH) -> float:
    """Probability that the walk is truncated (honest lead reaches depth)."""
    if depth < 2:
        raise ValueError(f"depth must be >= 2, got {depth!r}")
    return _solve_from_start(params, depth, 0.0, 1.0)


def descent_probability(params: StrategyParams, depth: int = DEFAULT_DEPTH) -> float:
    """Probability of erasing an honest lead of 1 before it reaches ``depth``.

    Solves the fork ladder alone, started one rung up, absorbing at the tie
    (worth 1) and at the give-up boundary (worth 0). For a minority pool
    this converges to the ruin probability alpha/(1-alpha) as depth grows.
    """
    alpha = params.alpha
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"descent probability requires 0 < alpha < 0.5, got {alpha!r}")
    if depth < 8:
        raise ValueError(f"depth must be >= 8, got {depth!r}")
    n = depth - 1  # unknowns: ladder rungs 1 .. depth-1
    a = np.eye(n)
    b = np.zeros(n)
    for i in range(n):
        k = i + 1
        if k == 1:
            b[i] += alpha  # down-step hits the tie
        else:
            a[i, i - 1] -= alpha
        if k + 1 < depth:
            a[i, i + 1] -= 1.0 - alpha  # up-step; at k+1 == depth it is truncated
    v = np.linalg.solve(a, b)
    solve_residual = float(np.abs(a @ v - b).max())
    if solve_residual > _SOLVE_RESIDUAL_MAX:
        raise SolveError(f"ladder solve residual {solve_residual:.3e} exceeds {_SOLVE_RESIDUAL_MAX:.0e}")
    return float(v[0])
