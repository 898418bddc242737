"""State machine of one whale-transaction episode under Greedy-Mine.

Each state tracks who packaged the whale transaction and how the fork race
stands; ``k`` is the honest branch's lead where a family is indexed.

  S         whale transaction not yet packaged
  H0        packaged by greedy pool, no Key-Block on top yet
  H1        terminal: greedy pool wins the whole whale fee
  H0K(k>=0) packaged by greedy, k+1 honest Key-Blocks on top, no fork yet
  H10       greedy forked, branches tied
  H1K(k>=1) greedy forked, honest branch k ahead
  A0        packaged by honest pool, nothing on top yet
  A1        packaged by honest pool, one honest Key-Block on top
  A2        greedy forked in front of the whale transaction, branches tied
  A0K(k>=0) honest side grows before greedy forks, honest lead k+2
  A1K(k>=0) greedy forked while k+1 behind
  A2K(k>=1) both branches grew after the fork, honest lead k
  A20       as A2K with the branches tied
  HONEST_WIN terminal boundary used by the oracle/simulator give-up policy;
             the transition rules themselves never enter it (the greedy pool
             never concedes)

Every step is driven by which pool finds the next Key-Block (greedy with
probability alpha). In the three tie states an honest finder additionally
chooses which branch to extend (greedy branch with probability gamma).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum

from .params import StrategyParams


class Family(IntEnum):
    S = 0
    H0 = 1
    H1 = 2
    H0K = 3
    H10 = 4
    H1K = 5
    A0 = 6
    A1 = 7
    A2 = 8
    A0K = 9
    A1K = 10
    A20 = 11
    A2K = 12
    HONEST_WIN = 13


# families carrying a k index, with the smallest legal k
_INDEXED_MIN_K = {Family.H0K: 0, Family.H1K: 1, Family.A0K: 0, Family.A1K: 0, Family.A2K: 1}

TERMINAL_FAMILIES = frozenset({Family.H1, Family.HONEST_WIN})

# the only states where an honest finder's branch choice matters
TIE_FAMILIES = frozenset({Family.H10, Family.A2, Family.A20})


class Finder(Enum):
    GREEDY = "greedy"
    HONEST = "honest"


class TieChoice(Enum):
    EXTEND_GREEDY = "extend-greedy"
    EXTEND_HONEST = "extend-honest"


class Outcome(Enum):
    GREEDY_WIN = "greedy-win"
    HONEST_WIN = "honest-win"


@dataclass(frozen=True)
class ChainState:
    family: Family
    k: int = 0

    def __post_init__(self):
        if self.family in _INDEXED_MIN_K:
            if self.k < _INDEXED_MIN_K[self.family]:
                raise ValueError(f"{self.family.name} requires k >= {_INDEXED_MIN_K[self.family]}, got {self.k}")
        elif self.k != 0:
            raise ValueError(f"{self.family.name} carries no index, got k={self.k}")

    @property
    def is_tie(self) -> bool:
        return self.family in TIE_FAMILIES

    def label(self) -> str:
        if self.family in _INDEXED_MIN_K:
            return f"{self.family.name.lower()}({self.k})"
        return self.family.name.lower()


START = ChainState(Family.S)
GREEDY_WIN_STATE = ChainState(Family.H1)
HONEST_WIN_STATE = ChainState(Family.HONEST_WIN)


def is_terminal(state: ChainState) -> Outcome | None:
    """Outcome of a terminal state, or None for states still in play."""
    if state.family is Family.H1:
        return Outcome.GREEDY_WIN
    if state.family is Family.HONEST_WIN:
        return Outcome.HONEST_WIN
    return None


def transition(state: ChainState, finder: Finder, tie: TieChoice | None = None) -> ChainState:
    """Apply one Key-Block event and return the successor state.

    ``tie`` must be supplied exactly when ``state`` is a tie state and the
    finder is honest, and must be absent otherwise.
    """
    if state.family in TERMINAL_FAMILIES:
        raise ValueError(f"cannot transition from terminal state {state.label()}")
    needs_tie = state.is_tie and finder is Finder.HONEST
    if needs_tie and tie is None:
        raise ValueError(f"{state.label()} with an honest finder requires a tie choice")
    if not needs_tie and tie is not None:
        raise ValueError(f"{state.label()} with finder={finder.value} takes no tie choice")

    fam, k = state.family, state.k
    greedy = finder is Finder.GREEDY

    if fam is Family.S:
        return ChainState(Family.H0) if greedy else ChainState(Family.A0)
    if fam is Family.H0:
        return ChainState(Family.H1) if greedy else ChainState(Family.H0K, 0)
    if fam is Family.H0K:
        if greedy:
            return ChainState(Family.H10) if k == 0 else ChainState(Family.H1K, k)
        return ChainState(Family.H0K, k + 1)
    if fam is Family.H10:
        if greedy or tie is TieChoice.EXTEND_GREEDY:
            return ChainState(Family.H1)
        return ChainState(Family.H1K, 1)
    if fam is Family.H1K:
        if greedy:
            return ChainState(Family.H10) if k == 1 else ChainState(Family.H1K, k - 1)
        return ChainState(Family.H1K, k + 1)
    if fam is Family.A0:
        return ChainState(Family.H0) if greedy else ChainState(Family.A1)
    if fam is Family.A1:
        return ChainState(Family.A2) if greedy else ChainState(Family.A0K, 0)
    if fam is Family.A2:
        if greedy:
            return ChainState(Family.H1)
        # honest miners re-extend the whale transaction onto the greedy branch
        return ChainState(Family.H0K, 0) if tie is TieChoice.EXTEND_GREEDY else ChainState(Family.A1K, 0)
    if fam is Family.A0K:
        return ChainState(Family.A1K, k) if greedy else ChainState(Family.A0K, k + 1)
    if fam is Family.A1K:
        if greedy:
            return ChainState(Family.A20) if k == 0 else ChainState(Family.A2K, k)
        return ChainState(Family.A1K, k + 1)
    if fam is Family.A20:
        if greedy or tie is TieChoice.EXTEND_GREEDY:
            return ChainState(Family.H1)
        return ChainState(Family.A2K, 1)
    # A2K
    if greedy:
        return ChainState(Family.A20) if k == 1 else ChainState(Family.A2K, k - 1)
    return ChainState(Family.A2K, k + 1)


def transition_distribution(
    state: ChainState, params: StrategyParams
) -> list[tuple[ChainState, float]]:
    """Successor distribution with Finder and TieChoice marginalized out.

    Zero-probability edges are dropped and duplicate successors merged, so
    the returned probabilities are positive and sum to 1.
    """
    if state.family in TERMINAL_FAMILIES:
        raise ValueError(f"terminal state {state.label()} has no outgoing distribution")
    a, g = params.alpha, params.gamma
    h = 1.0 - a

    edges: list[tuple[ChainState, float]] = [(transition(state, Finder.GREEDY), a)]
    if state.is_tie:
        edges.append((transition(state, Finder.HONEST, TieChoice.EXTEND_GREEDY), g * h))
        edges.append((transition(state, Finder.HONEST, TieChoice.EXTEND_HONEST), (1.0 - g) * h))
    else:
        edges.append((transition(state, Finder.HONEST), h))

    merged: dict[ChainState, float] = {}
    order: list[ChainState] = []
    for succ, p in edges:
        if p == 0.0:
            continue
        if succ not in merged:
            merged[succ] = 0.0
            order.append(succ)
        merged[succ] += p
    return [(succ, merged[succ]) for succ in order]
