"""Episode batch kernels: numba-compiled hot loop with a pure-numpy fallback.

Backend selection: the NG_GREEDY_BACKEND environment variable ("numba" or
"numpy") wins; otherwise numba is used when importable. NG_GREEDY_THREADS,
if set, caps the numba thread count. Both backends implement the exact same
SplitMix64 arithmetic as ng_greedy.rng and produce bit-identical outcome and
step arrays for a given (alpha, gamma, trials, master_seed, giveup_depth).

Outcome codes: 0 = greedy win, 2 = truncated at the give-up depth. (1 is
reserved for an honest terminal, which the transition rules never produce.)
"""

from __future__ import annotations

import os

import numpy as np

from .chain import Family
from .rng import GOLDEN as _GOLDEN_INT, _MIX1 as _MIX1_INT, _MIX2 as _MIX2_INT

OUTCOME_GREEDY_WIN = 0
OUTCOME_HONEST_WIN = 1
OUTCOME_TRUNCATED = 2

_S = int(Family.S)
_H0 = int(Family.H0)
_H1 = int(Family.H1)
_H0K = int(Family.H0K)
_H10 = int(Family.H10)
_H1K = int(Family.H1K)
_A0 = int(Family.A0)
_A1 = int(Family.A1)
_A2 = int(Family.A2)
_A0K = int(Family.A0K)
_A1K = int(Family.A1K)
_A20 = int(Family.A20)
_A2K = int(Family.A2K)

GOLDEN = np.uint64(_GOLDEN_INT)
MIX1 = np.uint64(_MIX1_INT)
MIX2 = np.uint64(_MIX2_INT)
_U11 = np.uint64(11)
_U27 = np.uint64(27)
_U30 = np.uint64(30)
_U31 = np.uint64(31)
_ONE = np.uint64(1)
_INV53 = 2.0**-53

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAVE_NUMBA = False


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if HAVE_NUMBA else ("numpy",)


def default_backend() -> str:
    env = os.environ.get("NG_GREEDY_BACKEND", "").strip().lower()
    if env:
        if env not in ("numba", "numpy"):
            raise ValueError(f"NG_GREEDY_BACKEND must be 'numba' or 'numpy', got {env!r}")
        if env == "numba" and not HAVE_NUMBA:
            raise ValueError("NG_GREEDY_BACKEND=numba but numba is not importable")
        return env
    return "numba" if HAVE_NUMBA else "numpy"


def _apply_thread_cap():
    cap = os.environ.get("NG_GREEDY_THREADS")
    if not cap:
        return
    try:
        want = max(1, int(cap))
    except ValueError:
        raise ValueError(f"NG_GREEDY_THREADS must be an integer, got {cap!r}") from None
    numba.set_num_threads(min(want, numba.config.NUMBA_NUM_THREADS))


if HAVE_NUMBA:

    @njit(inline="always")
    def _mix(z):
        z = (z ^ (z >> _U30)) * MIX1
        z = (z ^ (z >> _U27)) * MIX2
        return z ^ (z >> _U31)

    @njit(inline="always")
    def _trial_seed(master, i):
        return _mix(master + (i + _ONE) * GOLDEN)

    @njit(inline="always")
    def _next_unit(state):
        state = state + GOLDEN
        return state, np.float64(_mix(state) >> _U11) * _INV53

    @njit(inline="always")
    def _step(fam, k, greedy, tie):
        if fam == _S:
            return (_H0, 0) if greedy else (_A0, 0)
        if fam == _H0:
            return (_H1, 0) if greedy else (_H0K, 0)
        if fam == _H0K:
            if greedy:
                return (_H10, 0) if k == 0 else (_H1K, k)
            return (_H0K, k + 1)
        if fam == _H10:
            if greedy or tie:
                return (_H1, 0)
            return (_H1K, 1)
        if fam == _H1K:
            if greedy:
                return (_H10, 0) if k == 1 else (_H1K, k - 1)
            return (_H1K, k + 1)
        if fam == _A0:
            return (_H0, 0) if greedy else (_A1, 0)
        if fam == _A1:
            return (_A2, 0) if greedy else (_A0K, 0)
        if fam == _A2:
            if greedy:
                return (_H1, 0)
            return (_H0K, 0) if tie else (_A1K, 0)
        if fam == _A0K:
            return (_A1K, k) if greedy else (_A0K, k + 1)
        if fam == _A1K:
            if greedy:
                return (_A20, 0) if k == 0 else (_A2K, k)
            return (_A1K, k + 1)
        if fam == _A20:
            if greedy or tie:
                return (_H1, 0)
            return (_A2K, 1)
        # A2K
        if greedy:
            return (_A20, 0) if k == 1 else (_A2K, k - 1)
        return (_A2K, k + 1)

    @njit(parallel=True)
    def _run_batch_numba(alpha, gamma, trials, master_seed, giveup_depth, outcomes, steps):
        for i in prange(trials):
            s = _trial_seed(master_seed, np.uint64(i))
            fam = _S
            k = 0
            n = 0
            while True:
                s, u = _next_unit(s)
                greedy = u < alpha
                tie = False
                if not greedy and (fam == _H10 or fam == _A2 or fam == _A20):
                    s, u2 = _next_unit(s)
                    tie = u2 < gamma
                fam, k = _step(fam, k, greedy, tie)
                n += 1
                if fam == _H1:
                    outcomes[i] = OUTCOME_GREEDY_WIN
                    break
                if k >= giveup_depth:
                    outcomes[i] = OUTCOME_TRUNCATED
                    break
            steps[i] = n


def _mix_vec(z):
    z = (z ^ (z >> _U30)) * MIX1
    z = (z ^ (z >> _U27)) * MIX2
    return z ^ (z >> _U31)


def _draw_vec(state):
    state = state + GOLDEN
    return state, (_mix_vec(state) >> _U11).astype(np.float64) * _INV53


def _run_batch_numpy(alpha, gamma, trials, master_seed, giveup_depth, outcomes, steps):
    # all live episodes advance in lockstep; absorbed ones drop out
    idx = np.arange(trials, dtype=np.uint64)
    state = _mix_vec(np.uint64(master_seed) + (idx + _ONE) * GOLDEN)

    fam = np.full(trials, _S, dtype=np.int8)
    k = np.zeros(trials, dtype=np.int64)
    alive = np.arange(trials)

    while alive.size:
        st, u = _draw_vec(state[alive])
        greedy = u < alpha
        f = fam[alive]
        kk = k[alive]
        need_tie = (~greedy) & ((f == _H10) | (f == _A2) | (f == _A20))
        tie = np.zeros(alive.size, dtype=bool)
        if need_tie.any():
            st2, u2 = _draw_vec(st[need_tie])
            st[need_tie] = st2
            tie[need_tie] = u2 < gamma
        state[alive] = st

        nf = np.empty_like(f)
        nk = np.empty_like(kk)
        for code in (_S, _H0, _H0K, _H10, _H1K, _A0, _A1, _A2, _A0K, _A1K, _A20, _A2K):
            m = f == code
            if not m.any():
                continue
            gm, km, tm = greedy[m], kk[m], tie[m]
            if code == _S:
                rf, rk = np.where(gm, _H0, _A0), np.zeros(km.shape, dtype=km.dtype)
            elif code == _H0:
                rf, rk = np.where(gm, _H1, _H0K), np.zeros(km.shape, dtype=km.dtype)
            elif code == _H0K:
                rf = np.where(gm, np.where(km == 0, _H10, _H1K), _H0K)
                rk = np.where(gm, np.where(km == 0, 0, km), km + 1)
            elif code == _H10:
                w = gm | tm
                rf, rk = np.where(w, _H1, _H1K), np.where(w, 0, 1)
            elif code == _H1K:
                rf = np.where(gm, np.where(km == 1, _H10, _H1K), _H1K)
                rk = np.where(gm, np.where(km == 1, 0, km - 1), km + 1)
            elif code == _A0:
                rf, rk = np.where(gm, _H0, _A1), np.zeros(km.shape, dtype=km.dtype)
            elif code == _A1:
                rf, rk = np.where(gm, _A2, _A0K), np.zeros(km.shape, dtype=km.dtype)
            elif code == _A2:
                rf = np.where(gm, _H1, np.where(tm, _H0K, _A1K))
                rk = np.zeros(km.shape, dtype=km.dtype)
            elif code == _A0K:
                rf, rk = np.where(gm, _A1K, _A0K), np.where(gm, km, km + 1)
            elif code == _A1K:
                rf = np.where(gm, np.where(km == 0, _A20, _A2K), _A1K)
                rk = np.where(gm, km, km + 1)
            elif code == _A20:
                w = gm | tm
                rf, rk = np.where(w, _H1, _A2K), np.where(w, 0, 1)
            else:  # A2K
                rf = np.where(gm, np.where(km == 1, _A20, _A2K), _A2K)
                rk = np.where(gm, np.where(km == 1, 0, km - 1), km + 1)
            nf[m] = rf.astype(np.int8)
            nk[m] = rk
        steps[alive] += 1
        fam[alive] = nf
        k[alive] = nk
        won = nf == _H1
        trunc = nk >= giveup_depth
        done = won | trunc
        if done.any():
            outcomes[alive[won]] = OUTCOME_GREEDY_WIN
            outcomes[alive[trunc & ~won]] = OUTCOME_TRUNCATED
            alive = alive[~done]


def run_batch(
    alpha: float,
    gamma: float,
    trials: int,
    master_seed: int,
    giveup_depth: int,
    backend: str | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Run ``trials`` independent episodes; returns (outcomes, steps) arrays.

    Results are a pure function of the scalar arguments, identical across
    backends and thread counts.
    """
    backend = backend or default_backend()
    outcomes = np.empty(trials, dtype=np.uint8)
    steps = np.zeros(trials, dtype=np.int64)
    if backend == "numba":
        if not HAVE_NUMBA:
            raise ValueError("numba backend requested but numba is not importable")
        _apply_thread_cap()
        _run_batch_numba(float(alpha), float(gamma), trials, np.uint64(master_seed), giveup_depth, outcomes, steps)
    elif backend == "numpy":
        _run_batch_numpy(float(alpha), float(gamma), trials, master_seed, giveup_depth, outcomes, steps)
    else:
        raise ValueError(f"unknown backend {backend!r}; expected 'numba' or 'numpy'")
    return outcomes, steps
