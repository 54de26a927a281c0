import csv
import json

import numpy as np
import pytest

from prefloc.attributes import AnsweredQuery
from prefloc.harness import (
    CSV_COLUMNS,
    ExperimentConfig,
    metric_constraint_satisfaction,
    metric_mse,
    metric_percentage_closer,
    run_experiment,
    run_noise_sweep,
    run_trial,
)
from prefloc.model import McmcConfig
from prefloc.selection import SelectionConfig


def _fast_config(**overrides):
    defaults = dict(
        dimension=2,
        trials=2,
        queries_per_trial=3,
        strategy=SelectionConfig(strategy="closed_form"),
        k=10.0,
        oracle_noise=0.0,
        closer_batch=200,
        master_seed=7,
        mcmc=McmcConfig(chains=2, burn_in=300, keep=200),
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


def test_mse_zero_at_target():
    assert metric_mse((0.2, 0.4), (0.2, 0.4)) == 0.0


def test_mse_hand_case():
    assert metric_mse((0.5, 0.5), (0.5, 0.6)) == pytest.approx(0.005, abs=1e-15)


def test_mse_symmetry():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a, b = rng.random(4), rng.random(4)
        assert metric_mse(a, b) == metric_mse(b, a)


def test_mse_dimension_mismatch():
    with pytest.raises(ValueError):
        metric_mse((0.1, 0.2), (0.1, 0.2, 0.3))


def test_pct_closer_zero_at_target():
    assert metric_percentage_closer((0.3, 0.3), (0.3, 0.3), batch=1000, seed=1) == 0.0


def test_pct_closer_opposite_corner():
    value = metric_percentage_closer((1.0, 1.0), (0.0, 0.0), batch=1000, seed=2)
    assert value > 95.0


def test_pct_closer_deterministic():
    a = metric_percentage_closer((0.4, 0.4), (0.6, 0.6), batch=500, seed=3)
    b = metric_percentage_closer((0.4, 0.4), (0.6, 0.6), batch=500, seed=3)
    assert a == b


def test_pct_closer_rejects_bad_batch():
    with pytest.raises(ValueError):
        metric_percentage_closer((0.4, 0.4), (0.6, 0.6), batch=0, seed=3)


def test_constraint_satisfaction_cases():
    # Binary-exact coordinates so the equidistant case is an exact tie.
    q = AnsweredQuery(preferred=(0.25, 0.5), rejected=(0.75, 0.5))
    assert metric_constraint_satisfaction((0.25, 0.5), [q]) == 100.0
    # Equidistant estimate: tie counts as unsatisfied.
    assert metric_constraint_satisfaction((0.5, 0.5), [q]) == 0.0
    assert metric_constraint_satisfaction((0.75, 0.5), [q]) == 0.0
    with pytest.raises(ValueError):
        metric_constraint_satisfaction((0.5, 0.5), [])


def test_single_trial_shape(tmp_path):
    cfg = _fast_config(trials=1, queries_per_trial=1, output_path=str(tmp_path / "run"))
    result = run_experiment(cfg)
    assert len(result.records) == 1
    assert len(result.records[0].per_query) == 1
    row = result.records[0].per_query[0]
    assert set(row) == {"t", "mse", "pct_closer", "constraint_pct", "log_det_cov"}

    csv_path = tmp_path / "run" / "per_query.csv"
    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 2

    aggregate = json.loads((tmp_path / "run" / "aggregate.json").read_text())
    assert aggregate["strategy"] == "closed_form"
    assert aggregate["failed_trials"] == 0
    assert aggregate["final_mse"]["mean"] is not None


def test_per_query_t_strictly_increasing():
    result = run_experiment(_fast_config(queries_per_trial=4))
    for record in result.records:
        ts = [row["t"] for row in record.per_query]
        assert ts == sorted(ts) and len(set(ts)) == len(ts)


def test_experiment_deterministic():
    cfg = _fast_config()
    a = run_experiment(cfg)
    b = run_experiment(cfg)
    assert a.aggregate == b.aggregate
    for ra, rb in zip(a.records, b.records):
        assert ra.per_query == rb.per_query
        assert np.array_equal(ra.target, rb.target)


def test_trials_individually_reproducible():
    cfg = _fast_config(trials=3)
    full = run_experiment(cfg)
    lone = run_trial(cfg, 1)
    assert lone.per_query == full.records[1].per_query


def test_config_validation():
    with pytest.raises(ValueError):
        _fast_config(trials=0)
    with pytest.raises(ValueError):
        _fast_config(queries_per_trial=0)
    with pytest.raises(ValueError):
        _fast_config(closer_batch=0)


def test_noise_sweep_validation():
    cfg = _fast_config()
    with pytest.raises(ValueError):
        run_noise_sweep(cfg, [])
    with pytest.raises(ValueError):
        run_noise_sweep(cfg, [0.2, 0.1])


def test_noise_sweep_zero_level_clamps_k(tmp_path):
    cfg = _fast_config(output_path=str(tmp_path / "sweep"))
    summaries = run_noise_sweep(cfg, [0.0])
    assert len(summaries) == 1
    assert summaries[0]["fitted_k"] == 1000.0
    assert summaries[0]["failed_trials"] == 0
    assert (tmp_path / "sweep" / "sweep.json").exists()
    assert (tmp_path / "sweep" / "noise_0" / "per_query.csv").exists()


def test_noise_sweep_reports_per_level_summaries():
    summaries = run_noise_sweep(_fast_config(trials=1), [0.0, 0.2])
    assert [s["noise_stddev"] for s in summaries] == [0.0, 0.2]
    assert summaries[1]["fitted_k"] < summaries[0]["fitted_k"]
    for s in summaries:
        assert "final_pct_closer" in s and "mean_log_det_cov" in s
