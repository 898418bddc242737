"""Parameter sweeps, golden-table reproduction and flat-file serialization.

The golden data is a reference 6x5 grid of relative extra reward (percent)
over gamma in {0, 0.2, ..., 1} and alpha in {0.1, ..., 0.5}. Two of the 30
printed entries are provable misprints: the closed-form RER is exactly affine
in gamma at fixed alpha, so every gamma column is an exact arithmetic
progression, which pins the (gamma=0.2, alpha=0.2) entry to -30.0800 (printed
-30.0900, a digit slip) and exact-fraction evaluation gives -12.927848 for
(gamma=0, alpha=0.3), which rounds to -12.9278 (printed -12.9279, off by one
in the last digit). The golden table carries the corrected values; the
printed originals are retained in TABLE_MISPRINTS and the offsets are
themselves asserted by the test suite.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Sequence

from .analytics import greedy_revenue, honest_revenue, threshold_alpha
from .errors import ReproductionError
from .oracle import DEFAULT_DEPTH, absorption_bounds
from .params import StrategyParams
from .rng import trial_seed
from .simulate import DEFAULT_GIVEUP_DEPTH, DEFAULT_TRIALS, SimConfig, estimate

TABLE_GAMMAS = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
TABLE_ALPHAS = (0.1, 0.2, 0.3, 0.4, 0.5)
TABLE_TOL_PCT = 5e-5

# golden RER values in percent, keyed by (gamma, alpha)
TABLE_RER_PCT = {
    (0.0, 0.1): -69.4187, (0.0, 0.2): -39.4667, (0.0, 0.3): -12.9278, (0.0, 0.4): 7.7053, (0.0, 0.5): 20.8333,
    (0.2, 0.1): -63.1523, (0.2, 0.2): -30.0800, (0.2, 0.3): -2.9542, (0.2, 0.4): 16.4968, (0.2, 0.5): 27.5000,
    (0.4, 0.1): -56.8859, (0.4, 0.2): -20.6933, (0.4, 0.3): 7.0195, (0.4, 0.4): 25.2884, (0.4, 0.5): 34.1667,
    (0.6, 0.1): -50.6196, (0.6, 0.2): -11.3067, (0.6, 0.3): 16.9932, (0.6, 0.4): 34.0800, (0.6, 0.5): 40.8333,
    (0.8, 0.1): -44.3532, (0.8, 0.2): -1.9200, (0.8, 0.3): 26.9668, (0.8, 0.4): 42.8716, (0.8, 0.5): 47.5000,
    (1.0, 0.1): -38.0868, (1.0, 0.2): 7.4667, (1.0, 0.3): 36.9405, (1.0, 0.4): 51.6632, (1.0, 0.5): 54.1667,
}

# misprinted originals at the two corrected cells
TABLE_MISPRINTS = {
    (0.2, 0.2): -30.0900,
    (0.0, 0.3): -12.9279,
}

DEFAULT_SWEEP_ALPHAS = tuple(round(i / 100, 2) for i in range(1, 51))
DEFAULT_SWEEP_GAMMAS = (0.0, 0.25, 0.5, 1.0)

SWEEP_MODES = ("closed", "oracle", "mc", "all")


@dataclass(frozen=True)
class SweepRecord:
    alpha: float
    gamma: float
    revenue_honest: float
    revenue_greedy_closed: float
    revenue_greedy_oracle_lower: float | None = None
    revenue_greedy_oracle_upper: float | None = None
    revenue_greedy_mc: float | None = None
    rer_closed: float | None = None
    mc_ci: float | None = None


@dataclass(frozen=True)
class ThresholdRecord:
    gamma: float
    alpha_star: float
    tol: float


def _check_grid(name: str, values: Sequence[float]) -> list[float]:
    values = [float(v) for v in values]
    if not values:
        raise ValueError(f"{name} must be non-empty")
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} values must lie in [0, 1], got {v!r}")
    return values


def _closed_record(alpha: float, gamma: float) -> SweepRecord:
    params = StrategyParams(alpha=alpha, gamma=gamma)
    r_honest = honest_revenue(params)
    r_greedy = greedy_revenue(params)
    rer = (r_greedy - r_honest) / r_honest if r_honest > 0.0 else None
    return SweepRecord(
        alpha=alpha,
        gamma=gamma,
        revenue_honest=r_honest,
        revenue_greedy_closed=r_greedy,
        rer_closed=rer,
    )


def sweep_revenue(
    alpha_grid: Sequence[float],
    gamma_list: Sequence[float],
    mode: str = "closed",
    depth: int = DEFAULT_DEPTH,
    trials: int = DEFAULT_TRIALS,
    master_seed: int = 0,
    giveup_depth: int = DEFAULT_GIVEUP_DEPTH,
) -> list[SweepRecord]:
    """One record per (alpha, gamma) pair, ordered by (gamma, alpha).

    Closed-form columns are always filled; the oracle and Monte Carlo
    columns are opt-in via ``mode``. Each Monte Carlo cell runs on a seed
    derived from (master_seed, cell index) by the keyed counter rule, so a
    sweep is reproducible and cell-order independent.
    """
    if mode not in SWEEP_MODES:
        raise ValueError(f"mode must be one of {SWEEP_MODES}, got {mode!r}")
    alphas = sorted(_check_grid("alpha_grid", alpha_grid))
    gammas = sorted(_check_grid("gamma_list", gamma_list))

    records = []
    cell = 0
    for gamma in gammas:
        for alpha in alphas:
            rec = _closed_record(alpha, gamma)
            params = StrategyParams(alpha=alpha, gamma=gamma)
            if mode in ("oracle", "all"):
                bounds = absorption_bounds(params, depth)
                rec = replace(rec, revenue_greedy_oracle_lower=bounds.lower, revenue_greedy_oracle_upper=bounds.upper)
            if mode in ("mc", "all"):
                stats = estimate(SimConfig(params, trials=trials, master_seed=trial_seed(master_seed, cell), giveup_depth=giveup_depth))
                rec = replace(rec, revenue_greedy_mc=stats.p_hat, mc_ci=stats.ci95_half_width)
            records.append(rec)
            cell += 1
    return records


def reproduce_table1(check: bool = True) -> list[SweepRecord]:
    """Closed-form records for the golden 6x5 RER grid, ordered by (gamma, alpha).

    With ``check`` on, any cell whose RER (in percent) misses the golden
    value by more than TABLE_TOL_PCT raises ReproductionError naming it.
    """
    records = [_closed_record(alpha, gamma) for gamma in TABLE_GAMMAS for alpha in TABLE_ALPHAS]
    if check:
        failures = []
        for rec in records:
            got = rec.rer_closed * 100.0
            want = TABLE_RER_PCT[(rec.gamma, rec.alpha)]
            if abs(got - want) > TABLE_TOL_PCT:
                failures.append(f"(gamma={rec.gamma}, alpha={rec.alpha}): got {got:.6f}, want {want:.4f}")
        if failures:
            raise ReproductionError(failures)
    return records


def threshold_curve(gamma_grid: Sequence[float], tol: float = 1e-6) -> list[ThresholdRecord]:
    """Profitability threshold alpha* for each gamma, ordered by gamma."""
    gammas = sorted(_check_grid("gamma_grid", gamma_grid))
    return [ThresholdRecord(gamma=g, alpha_star=threshold_alpha(g, tol), tol=tol) for g in gammas]


def rer_heatmap(
    alpha_grid: Sequence[float], gamma_grid: Sequence[float]
) -> list[list[float | None]]:
    """Closed-form RER matrix, rows over gamma_grid, columns over alpha_grid.

    Cells at alpha = 0 hold None (RER undefined there), never a number.
    """
    alphas = _check_grid("alpha_grid", alpha_grid)
    gammas = _check_grid("gamma_grid", gamma_grid)
    matrix = []
    for gamma in gammas:
        row = []
        for alpha in alphas:
            rec = _closed_record(alpha, gamma)
            row.append(rec.rer_closed)
        matrix.append(row)
    return matrix


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _record_fields(records, record_type):
    if records:
        record_type = type(records[0])
    if record_type is None:
        raise ValueError("record_type is required for an empty record list")
    return record_type, [f.name for f in fields(record_type)]


def write_csv(records: Sequence, destination, record_type=None) -> int:
    """Write records as CSV (header row, 10-significant-digit floats, LF).

    Returns the number of bytes written. None fields serialize as empty
    cells.
    """
    _, names = _record_fields(records, record_type)
    path = Path(destination)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for rec in records:
            writer.writerow([_format_value(getattr(rec, n)) for n in names])
    return path.stat().st_size


def write_json(records: Sequence, destination, record_type=None) -> int:
    """Write records as a JSON array of flat objects; returns bytes written."""
    if records:
        _, names = _record_fields(records, record_type)
        payload = [{n: getattr(rec, n) for n in names} for rec in records]
    else:
        payload = []
    path = Path(destination)
    text = json.dumps(payload, indent=2)
    path.write_text(text + "\n", encoding="utf-8")
    return path.stat().st_size


def _parse_cell(text: str) -> float | None:
    return None if text == "" else float(text)


def read_csv(source, record_type) -> list:
    """Parse a CSV written by write_csv back into records."""
    with open(source, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [record_type(**{k: _parse_cell(v) for k, v in row.items()}) for row in reader]


def read_json(source, record_type) -> list:
    with open(source, encoding="utf-8") as fh:
        return [record_type(**row) for row in json.load(fh)]
