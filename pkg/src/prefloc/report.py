"""Figure rendering from experiment output files.

Reads the per-query CSVs and JSON summaries written by the harness and
renders matplotlib figures next to them. Nothing here recomputes metrics;
figures are a pure view of the delimited output.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

METRIC_LABELS = {
    "mse": "MSE to target",
    "pct_closer": "% of batch closer than estimate",
    "constraint_pct": "% constraints satisfied",
    "log_det_cov": "log det posterior covariance",
}


def load_per_query(csv_path) -> dict[str, np.ndarray]:
    """Load a per-query CSV into column arrays."""
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    if not rows:
        raise ValueError(f"no rows in {csv_path}")
    columns = {}
    for name in rows[0]:
        columns[name] = np.array([float(r[name]) for r in rows])
    return columns


def mean_curve(columns: dict[str, np.ndarray], metric: str):
    """Average a metric over trials at each query count t."""
    ts = np.unique(columns["t"])
    means = np.array([columns[metric][columns["t"] == t].mean() for t in ts])
    return ts, means


def plot_convergence(csv_by_label: dict[str, Path], metric: str, out_path, log_scale=False):
    """One curve per labeled run: the metric's trial average after t queries."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, csv_path in csv_by_label.items():
        ts, means = mean_curve(load_per_query(csv_path), metric)
        ax.plot(ts, means, marker="o", markersize=3, label=label)
    if log_scale:
        ax.set_yscale("log")
    ax.set_xlabel("queries answered")
    ax.set_ylabel(METRIC_LABELS.get(metric, metric))
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return Path(out_path)


def plot_noise_sweep(sweep_json_path, out_path):
    """Final percentage-closer and posterior log-det against the noise level."""
    summaries = json.loads(Path(sweep_json_path).read_text())
    noise = [s["noise_stddev"] for s in summaries]
    pct = [s["final_pct_closer"]["mean"] for s in summaries]
    pct_std = [s["final_pct_closer"]["std"] for s in summaries]
    log_det = [s["mean_log_det_cov"] for s in summaries]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.errorbar(noise, pct, yerr=pct_std, marker="o", capsize=3)
    ax1.set_xlabel("response noise stddev")
    ax1.set_ylabel("% of batch closer than estimate")
    ax1.grid(True, alpha=0.3)
    ax2.plot(noise, log_det, marker="o")
    ax2.set_xlabel("response noise stddev")
    ax2.set_ylabel("mean log det posterior covariance")
    ax2.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return Path(out_path)


def render_report(results_dir, out_dir=None) -> list[Path]:
    """Render every figure the files under ``results_dir`` support.

    Recognizes three layouts: a single run (per_query.csv), a strategy
    comparison (comparison.json plus per-strategy subdirectories), and a
    noise sweep (sweep.json plus per-level subdirectories).
    """
    results = Path(results_dir)
    out = Path(out_dir) if out_dir is not None else results
    out.mkdir(parents=True, exist_ok=True)
    written = []

    if (results / "comparison.json").exists():
        labels = json.loads((results / "comparison.json").read_text()).keys()
        csv_by_label = {
            label: results / label / "per_query.csv"
            for label in labels
            if (results / label / "per_query.csv").exists()
        }
        if csv_by_label:
            written.append(
                plot_convergence(csv_by_label, "mse", out / "mse_vs_queries.png", log_scale=True)
            )
            written.append(
                plot_convergence(csv_by_label, "pct_closer", out / "pct_closer_vs_queries.png")
            )

    if (results / "sweep.json").exists():
        written.append(plot_noise_sweep(results / "sweep.json", out / "noise_sweep.png"))
        csv_by_label = {}
        for summary in json.loads((results / "sweep.json").read_text()):
            level = summary["noise_stddev"]
            csv_path = results / f"noise_{level:g}" / "per_query.csv"
            if csv_path.exists():
                csv_by_label[f"noise={level:g}"] = csv_path
        if csv_by_label:
            written.append(
                plot_convergence(
                    csv_by_label, "log_det_cov", out / "log_det_vs_queries.png"
                )
            )

    if (results / "per_query.csv").exists():
        single = {"run": results / "per_query.csv"}
        written.append(
            plot_convergence(single, "mse", out / "mse_vs_queries.png", log_scale=True)
        )
        written.append(
            plot_convergence(single, "constraint_pct", out / "constraint_vs_queries.png")
        )

    return written
