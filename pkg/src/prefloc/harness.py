"""Batch evaluation of preference estimation against simulated oracles.

Each trial hides a uniformly drawn target point, runs the full query loop for
a fixed number of answers, and traces four metrics after every answer:

  mse             squared estimate error averaged over dimensions
  pct_closer      % of a uniform batch closer to the target than the estimate
  constraint_pct  % of collected answers the estimate still satisfies
  log_det_cov     log-determinant of the posterior covariance

Per-trial seeds derive from the master seed, so trials are order-independent
and individually reproducible. Results land in one per-query CSV plus one
aggregate JSON per run.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .attributes import AnsweredQuery, squared_distance
from .model import ChainDivergenceError, McmcConfig
from .oracle import OracleConfig, answer, fit_noise_constant, generate_triplets
from .rng import derive_seed, derived_rng
from .selection import SelectionConfig
from .session import create_session, submit_answer

# Context tags for per-trial seed derivation.
_TAG_TARGET = 0
_TAG_ORACLE = 1
_TAG_SELECTION = 2
_TAG_MCMC = 3
_TAG_CLOSER = 4
_TAG_TRIPLETS = 5

CSV_COLUMNS = ("trial", "t", "mse", "pct_closer", "constraint_pct", "log_det_cov")

# Calibration bracket for the signal-to-noise constant; noiseless data
# legitimately saturates at the upper end.
K_BRACKET = (0.1, 1000.0)


@dataclass(frozen=True)
class ExperimentConfig:
    """One batch of preference-estimation trials."""

    dimension: int = 2
    trials: int = 20
    queries_per_trial: int = 30
    strategy: SelectionConfig = field(default_factory=SelectionConfig)
    k: float = 10.0
    oracle_noise: float = 0.0
    closer_batch: int = 1000
    master_seed: int = 42
    output_path: str | None = None
    mcmc: McmcConfig = field(default_factory=McmcConfig)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.queries_per_trial < 1:
            raise ValueError(f"queries_per_trial must be >= 1, got {self.queries_per_trial}")
        if self.closer_batch < 1:
            raise ValueError(f"closer_batch must be >= 1, got {self.closer_batch}")


@dataclass
class TrialRecord:
    """Metric trace of a single trial; ``per_query`` has one row per answer."""

    trial_index: int
    target: np.ndarray
    per_query: list[dict]
    failed: bool = False
    error: str | None = None


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord]
    aggregate: dict


def metric_mse(estimate, target) -> float:
    """Squared error divided by dimension, so 2D and 4D runs are comparable."""
    estimate = np.asarray(estimate, dtype=float)
    target = np.asarray(target, dtype=float)
    if estimate.shape != target.shape:
        raise ValueError(f"dimension mismatch: {estimate.shape} vs {target.shape}")
    return squared_distance(estimate, target) / estimate.size


def metric_percentage_closer(estimate, target, batch: int, seed) -> float:
    """% of ``batch`` uniform points strictly closer to the target than the estimate."""
    if batch < 1:
        raise ValueError(f"batch must be >= 1, got {batch}")
    estimate = np.asarray(estimate, dtype=float)
    target = np.asarray(target, dtype=float)
    points = np.random.default_rng(seed).random((batch, target.size))
    own = squared_distance(estimate, target)
    closer = ((points - target) ** 2).sum(axis=1) < own
    return 100.0 * float(closer.mean())


def metric_constraint_satisfaction(estimate, answered: list[AnsweredQuery]) -> float:
    """% of answers where the estimate is strictly closer to the preferred member."""
    if not answered:
        raise ValueError("constraint satisfaction needs at least one answered query")
    estimate = np.asarray(estimate, dtype=float)
    satisfied = sum(
        1
        for a in answered
        if squared_distance(estimate, a.preferred) < squared_distance(estimate, a.rejected)
    )
    return 100.0 * satisfied / len(answered)


def run_trial(cfg: ExperimentConfig, trial_index: int) -> TrialRecord:
    """Run one seeded trial of the full query loop, tracing metrics per answer."""
    target = derived_rng(cfg.master_seed, trial_index, _TAG_TARGET).random(cfg.dimension)
    oracle = OracleConfig(
        ideal_point=target,
        noise_stddev=cfg.oracle_noise,
        seed=derive_seed(cfg.master_seed, trial_index, _TAG_ORACLE),
    )
    selection = replace(cfg.strategy, seed=derive_seed(cfg.master_seed, trial_index, _TAG_SELECTION))
    mcmc = replace(cfg.mcmc, seed=derive_seed(cfg.master_seed, trial_index, _TAG_MCMC))

    record = TrialRecord(trial_index=trial_index, target=target, per_query=[])
    try:
        state = create_session(cfg.dimension, selection, cfg.k, mcmc)
        for t in range(1, cfg.queries_per_trial + 1):
            answered = answer(oracle, state.pending, query_index=state.n_answered)
            choice = "first" if np.array_equal(answered.preferred, state.pending.first) else "second"
            state = submit_answer(state, choice)
            estimate = state.posterior.mean
            record.per_query.append(
                {
                    "t": t,
                    "mse": metric_mse(estimate, target),
                    "pct_closer": metric_percentage_closer(
                        estimate,
                        target,
                        cfg.closer_batch,
                        derive_seed(cfg.master_seed, trial_index, _TAG_CLOSER, t),
                    ),
                    "constraint_pct": metric_constraint_satisfaction(
                        estimate, list(state.answered)
                    ),
                    "log_det_cov": state.posterior.log_det_covariance,
                }
            )
    except ChainDivergenceError as exc:
        record.failed = True
        record.error = str(exc)
    return record


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run all trials, aggregate final-query metrics, and write outputs if configured."""
    records = [run_trial(cfg, i) for i in range(cfg.trials)]
    aggregate = _aggregate(cfg, records)
    result = ExperimentResult(config=cfg, records=records, aggregate=aggregate)
    if cfg.output_path is not None:
        write_outputs(result, cfg.output_path)
    return result


def run_noise_sweep(base: ExperimentConfig, noise_levels: list[float]) -> list[dict]:
    """Calibrate the noise constant per level, run the experiment, summarize.

    For each noise level a fresh triplet dataset is generated and the
    signal-to-noise constant is refit before running the trials, mirroring
    the calibration protocol. Levels must be nondecreasing.
    """
    if not noise_levels:
        raise ValueError("noise_levels must be nonempty")
    if any(b < a for a, b in zip(noise_levels, noise_levels[1:])):
        raise ValueError(f"noise_levels must be nondecreasing, got {noise_levels}")

    summaries = []
    for index, level in enumerate(noise_levels):
        triplets = generate_triplets(
            level,
            count=1000,
            dimension=base.dimension,
            seed=derive_seed(base.master_seed, index, _TAG_TRIPLETS),
        )
        fitted_k = fit_noise_constant(triplets, *K_BRACKET)
        level_out = None
        if base.output_path is not None:
            level_out = str(Path(base.output_path) / f"noise_{level:g}")
        cfg = replace(base, oracle_noise=level, k=fitted_k, output_path=level_out)
        result = run_experiment(cfg)
        finals = _final_rows(result.records)
        summaries.append(
            {
                "noise_stddev": level,
                "fitted_k": fitted_k,
                "final_pct_closer": _stats([r["pct_closer"] for r in finals]),
                "final_pct_closer_values": [r["pct_closer"] for r in finals],
                "mean_log_det_cov": (
                    float(np.mean([r["log_det_cov"] for r in finals])) if finals else None
                ),
                "failed_trials": sum(1 for r in result.records if r.failed),
            }
        )
    if base.output_path is not None:
        out = Path(base.output_path)
        out.mkdir(parents=True, exist_ok=True)
        (out / "sweep.json").write_text(json.dumps(summaries, indent=2))
    return summaries


def run_comparison(
    base: ExperimentConfig, strategies: dict[str, SelectionConfig]
) -> dict[str, ExperimentResult]:
    """Run the same seeded trials under each strategy (targets are paired)."""
    results = {}
    for label, strategy in strategies.items():
        out = None
        if base.output_path is not None:
            out = str(Path(base.output_path) / label)
        results[label] = run_experiment(replace(base, strategy=strategy, output_path=out))
    if base.output_path is not None:
        comparison = {label: r.aggregate for label, r in results.items()}
        out_dir = Path(base.output_path)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "comparison.json").write_text(json.dumps(comparison, indent=2))
    return results


def write_outputs(result: ExperimentResult, out_dir) -> None:
    """Write per_query.csv and aggregate.json into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "per_query.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for record in result.records:
            for row in record.per_query:
                writer.writerow(
                    [
                        record.trial_index,
                        row["t"],
                        row["mse"],
                        row["pct_closer"],
                        row["constraint_pct"],
                        row["log_det_cov"],
                    ]
                )
    (out / "aggregate.json").write_text(json.dumps(result.aggregate, indent=2))


def _final_rows(records: list[TrialRecord]) -> list[dict]:
    return [r.per_query[-1] for r in records if not r.failed and r.per_query]


def _stats(values: list[float]) -> dict:
    if not values:
        return {"mean": None, "std": None}
    return {"mean": float(np.mean(values)), "std": float(np.std(values, ddof=0))}


def _aggregate(cfg: ExperimentConfig, records: list[TrialRecord]) -> dict:
    finals = _final_rows(records)
    return {
        "strategy": cfg.strategy.strategy,
        "dimension": cfg.dimension,
        "trials": cfg.trials,
        "queries_per_trial": cfg.queries_per_trial,
        "k_q": cfg.k,
        "oracle_noise": cfg.oracle_noise,
        "master_seed": cfg.master_seed,
        "failed_trials": sum(1 for r in records if r.failed),
        "final_mse": _stats([r["mse"] for r in finals]),
        "final_pct_closer": _stats([r["pct_closer"] for r in finals]),
        "final_constraint_pct": _stats([r["constraint_pct"] for r in finals]),
        "final_log_det_cov": _stats([r["log_det_cov"] for r in finals]),
    }
