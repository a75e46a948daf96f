"""
Random-circuit benchmarks for the inner-product routine.

Random states come from ceil(beta * n * log2 n) uniformly chosen H / P / CNOT
gates applied to |0...0>. Each trial times one ``inner_product`` call on a
fresh pair and records the size of the first state's normalization circuit.
"""
import logging
import math
import time
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, field_validator

from gates import Circuit, cnot, h, p
from geometry import ghz_state
from metric import inner_product
from synth import apply_circuit, basis_norm_circuit
from tableau import StabilizerMatrix

logger = logging.getLogger(__name__)

TRIAL_COLUMNS = ["n", "beta", "trial", "seconds", "gate_count", "s_exponent"]
SPECIAL_COLUMNS = ["case", "n", "trial", "seconds", "s_exponent"]


class BenchConfig(BaseModel):
    n_values: List[int] = Field(default_factory=lambda: [20, 40, 60, 80, 100])
    betas: List[float] = Field(default_factory=lambda: [0.6])
    trials: int = Field(default=5, ge=1)
    seed: int = Field(default=0, ge=0)
    special_cases: bool = True

    @field_validator("n_values")
    @classmethod
    def _n_at_least_two(cls, values: List[int]) -> List[int]:
        if not values:
            raise ValueError("n_values must not be empty")
        if any(n < 2 for n in values):
            raise ValueError("every n must be >= 2")
        return values

    @field_validator("betas")
    @classmethod
    def _beta_positive(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("betas must not be empty")
        if any(not beta > 0 for beta in values):
            raise ValueError("beta must be > 0")
        return values


@dataclass
class SweepResult:
    trials: pd.DataFrame
    special: pd.DataFrame
    summary: pd.DataFrame


def gate_budget(n: int, beta: float) -> int:
    return math.ceil(beta * n * math.log2(n))


def random_circuit(n: int, beta: float, rng: np.random.Generator) -> Circuit:
    """Exactly ``gate_budget(n, beta)`` gates, each H, P or CNOT with probability 1/3."""
    if n < 2:
        raise ValueError("random circuits need n >= 2")
    circuit = Circuit(n)
    for _ in range(gate_budget(n, beta)):
        kind = int(rng.integers(3))
        if kind == 2:
            control = int(rng.integers(n))
            target = int(rng.integers(n - 1))
            if target >= control:
                target += 1
            circuit.append(cnot(control, target))
        else:
            q = int(rng.integers(n))
            circuit.append(h(q) if kind == 0 else p(q))
    return circuit


def random_state(n: int, beta: float, rng: np.random.Generator) -> StabilizerMatrix:
    state = StabilizerMatrix.zero_state(n)
    apply_circuit(state, random_circuit(n, beta, rng))
    return state


def _timed_inner_product(a: StabilizerMatrix, b: StabilizerMatrix):
    start = time.perf_counter()
    result = inner_product(a, b)
    return time.perf_counter() - start, result


def run_sweep(cfg: BenchConfig) -> SweepResult:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    special = []
    for n in cfg.n_values:
        for beta in cfg.betas:
            for trial in range(cfg.trials):
                a = random_state(n, beta, rng)
                b = random_state(n, beta, rng)
                circuit, _ = basis_norm_circuit(a.copy())
                seconds, result = _timed_inner_product(a, b)
                rows.append((n, beta, trial, seconds, len(circuit), result.s_exponent))
            logger.info(f"[BENCH] n={n} beta={beta} trials={cfg.trials} done")

        if cfg.special_cases:
            zero = StabilizerMatrix.zero_state(n)
            ghz = ghz_state(n)
            for trial in range(cfg.trials):
                other = random_state(n, cfg.betas[0], rng)
                for case, base in (("zero", zero), ("ghz", ghz)):
                    seconds, result = _timed_inner_product(base, other)
                    special.append((case, n, trial, seconds, result.s_exponent))

    trials = pd.DataFrame(rows, columns=TRIAL_COLUMNS)
    trials["s_exponent"] = trials["s_exponent"].astype("Int64")
    special_df = pd.DataFrame(special, columns=SPECIAL_COLUMNS)
    special_df["s_exponent"] = special_df["s_exponent"].astype("Int64")
    return SweepResult(trials=trials, special=special_df, summary=summarize(trials))


def summarize(trials: pd.DataFrame) -> pd.DataFrame:
    grouped = trials.groupby(["n", "beta"], as_index=False)
    return grouped.agg(
        mean_seconds=("seconds", "mean"),
        median_seconds=("seconds", "median"),
        std_seconds=("seconds", "std"),
        mean_gate_count=("gate_count", "mean"),
        max_gate_count=("gate_count", "max"),
    )


def loglog_slope(summary: pd.DataFrame, beta: Optional[float] = None, column: str = "median_seconds") -> float:
    """Slope of log(column) against log(n), optionally for one beta."""
    data = summary if beta is None else summary[np.isclose(summary["beta"], beta)]
    slope, _ = np.polyfit(np.log(data["n"].astype(float)), np.log(data[column].astype(float)), 1)
    return float(slope)


def quadratic_fit(summary: pd.DataFrame, column: str = "mean_gate_count"):
    """Least-squares fit of column = c * n^2 through the origin; returns (c, r_squared)."""
    n_squared = summary["n"].astype(float).to_numpy() ** 2
    y = summary[column].astype(float).to_numpy()
    c = float(np.dot(n_squared, y) / np.dot(n_squared, n_squared))
    residual = np.sum((y - c * n_squared) ** 2)
    total = np.sum((y - y.mean()) ** 2)
    r_squared = 1.0 - residual / total if total > 0 else 1.0
    return c, float(r_squared)


def write_csv(trials: pd.DataFrame, path) -> None:
    trials[TRIAL_COLUMNS].to_csv(path, index=False)
