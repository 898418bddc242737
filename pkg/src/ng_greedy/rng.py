"""Counter-based random streams for reproducible, order-independent trials.

Sub-stream derivation rule (part of the reproducibility contract):

    trial_seed(master_seed, i) = mix64((master_seed + (i+1) * GOLDEN) mod 2^64)

where GOLDEN = 0x9E3779B97F4A7C15 and mix64 is the SplitMix64 finalizer. The
trial stream itself is SplitMix64 started at that seed: each draw advances
the state by GOLDEN and outputs mix64(state). Uniform doubles take the top
53 bits, giving values in [0, 1).

Each trial's stream depends only on (master_seed, trial index), so results
do not depend on execution order or degree of parallelism. Per-stream period
is 2^64. The same arithmetic is implemented in the compiled and vectorized
kernels; bit-for-bit agreement across all three paths is enforced by tests.
"""

from __future__ import annotations

from dataclasses import dataclass

_MASK = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV53 = 2.0**-53


def mix64(x: int) -> int:
    """SplitMix64 finalizer: a 64-bit bijective scrambler."""
    x &= _MASK
    x = ((x ^ (x >> 30)) * _MIX1) & _MASK
    x = ((x ^ (x >> 27)) * _MIX2) & _MASK
    return x ^ (x >> 31)


def trial_seed(master_seed: int, index: int) -> int:
    """Initial stream state for one trial, from the keyed counter rule."""
    return mix64((master_seed + (index + 1) * GOLDEN) & _MASK)


@dataclass
class TrialStream:
    """SplitMix64 stream; the pure-Python reference for the kernels."""

    state: int

    @classmethod
    def for_trial(cls, master_seed: int, index: int) -> "TrialStream":
        return cls(trial_seed(master_seed, index))

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & _MASK
        return mix64(self.state)

    def next_unit(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * _INV53
