"""Command-line interface.

``prefloc`` bundles everything; the ``experiment`` group is also installed as
a standalone script so batch runs read naturally:

    experiment run --dim 2 --trials 20 --queries 30 --strategy closed_form \
        --kq 10 --noise 0.0 --seed 42 --out results/
    experiment sweep-noise --levels 0,0.05,0.1,0.2,0.4 --out results/sweep/
    experiment compare --strategies random,best_of_n,closed_form --out results/cmp/
    experiment report --results results/cmp/

Exit code is 0 only when every trial completed.
"""

from __future__ import annotations

import sys

import click

from .harness import ExperimentConfig, run_comparison, run_experiment, run_noise_sweep
from .model import McmcConfig
from .selection import STRATEGIES, SelectionConfig


def _strategy_config(strategy, n_candidates, mean_cut_weight, spacing_stddevs):
    return SelectionConfig(
        strategy=strategy,
        n_candidates=n_candidates,
        mean_cut_weight=mean_cut_weight,
        spacing_stddevs=spacing_stddevs,
        seed=0,
    )


def _experiment_options(fn):
    options = [
        click.option("--dim", default=2, show_default=True, help="Attribute dimensions."),
        click.option("--trials", default=20, show_default=True),
        click.option("--queries", default=30, show_default=True, help="Queries per trial."),
        click.option("--kq", default=10.0, show_default=True, help="Signal-to-noise constant."),
        click.option("--noise", default=0.0, show_default=True, help="Oracle noise stddev."),
        click.option("--seed", default=42, show_default=True, help="Master seed."),
        click.option("--n-candidates", default=500, show_default=True),
        click.option("--lambda", "mean_cut_weight", default=1.0, show_default=True,
                     help="Mean-cut weight in the query utility."),
        click.option("--spacing-stddevs", default=4.0, show_default=True,
                     help="Closed-form pair half-separation in posterior stddevs."),
        click.option("--closer-batch", default=1000, show_default=True),
        click.option("--out", required=True, type=click.Path(), help="Output directory."),
        click.option("--figures/--no-figures", default=True, show_default=True,
                     help="Render figures next to the CSV output."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _base_config(dim, trials, queries, kq, noise, seed, closer_batch, out, strategy_cfg):
    return ExperimentConfig(
        dimension=dim,
        trials=trials,
        queries_per_trial=queries,
        strategy=strategy_cfg,
        k=kq,
        oracle_noise=noise,
        closer_batch=closer_batch,
        master_seed=seed,
        output_path=out,
        mcmc=McmcConfig(),
    )


def _finish(out, figures, failed_trials):
    if figures:
        from .report import render_report

        for path in render_report(out):
            click.echo(f"figure: {path}")
    if failed_trials:
        click.echo(f"{failed_trials} trial(s) failed", err=True)
        sys.exit(1)


@click.group()
def experiment():
    """Simulated-oracle experiments."""


@experiment.command()
@_experiment_options
@click.option("--strategy", default="closed_form", show_default=True,
              type=click.Choice(STRATEGIES))
def run(dim, trials, queries, kq, noise, seed, n_candidates, mean_cut_weight,
        spacing_stddevs, closer_batch, out, figures, strategy):
    """Run one experiment and write per_query.csv plus aggregate.json."""
    cfg = _base_config(dim, trials, queries, kq, noise, seed, closer_batch, out,
                       _strategy_config(strategy, n_candidates, mean_cut_weight, spacing_stddevs))
    result = run_experiment(cfg)
    click.echo(f"final mse: {result.aggregate['final_mse']['mean']:.3e}  "
               f"pct closer: {result.aggregate['final_pct_closer']['mean']:.4f}%  "
               f"constraints: {result.aggregate['final_constraint_pct']['mean']:.2f}%")
    _finish(out, figures, result.aggregate["failed_trials"])


@experiment.command("sweep-noise")
@_experiment_options
@click.option("--strategy", default="closed_form", show_default=True,
              type=click.Choice(STRATEGIES))
@click.option("--levels", default="0,0.05,0.1,0.2,0.4", show_default=True,
              help="Comma-separated nondecreasing noise stddevs.")
def sweep_noise(dim, trials, queries, kq, noise, seed, n_candidates, mean_cut_weight,
                spacing_stddevs, closer_batch, out, figures, strategy, levels):
    """Calibrate the noise constant per level and run the sweep."""
    level_values = [float(x) for x in levels.split(",") if x.strip() != ""]
    cfg = _base_config(dim, trials, queries, kq, noise, seed, closer_batch, out,
                       _strategy_config(strategy, n_candidates, mean_cut_weight, spacing_stddevs))
    summaries = run_noise_sweep(cfg, level_values)
    failed = 0
    for summary in summaries:
        failed += summary["failed_trials"]
        click.echo(f"noise={summary['noise_stddev']:g}  fitted k={summary['fitted_k']:.3f}  "
                   f"pct closer: {summary['final_pct_closer']['mean']:.4f}%  "
                   f"mean log det: {summary['mean_log_det_cov']:.3f}")
    _finish(out, figures, failed)


@experiment.command()
@_experiment_options
@click.option("--strategies", default="random,best_of_n,closed_form", show_default=True,
              help="Comma-separated strategy names to compare on paired trials.")
def compare(dim, trials, queries, kq, noise, seed, n_candidates, mean_cut_weight,
            spacing_stddevs, closer_batch, out, figures, strategies):
    """Run the same seeded trials under several strategies."""
    names = [s.strip() for s in strategies.split(",") if s.strip()]
    for name in names:
        if name not in STRATEGIES:
            raise click.BadParameter(f"unknown strategy {name!r}")
    cfg = _base_config(dim, trials, queries, kq, noise, seed, closer_batch, out,
                       _strategy_config(names[0], n_candidates, mean_cut_weight, spacing_stddevs))
    results = run_comparison(
        cfg,
        {name: _strategy_config(name, n_candidates, mean_cut_weight, spacing_stddevs)
         for name in names},
    )
    failed = 0
    for name, result in results.items():
        failed += result.aggregate["failed_trials"]
        click.echo(f"{name}: final mse {result.aggregate['final_mse']['mean']:.3e}  "
                   f"pct closer {result.aggregate['final_pct_closer']['mean']:.4f}%")
    _finish(out, figures, failed)


@experiment.command()
@click.option("--results", required=True, type=click.Path(exists=True),
              help="Directory written by run/compare/sweep-noise.")
@click.option("--out", type=click.Path(), default=None,
              help="Figure directory (defaults to the results directory).")
def report(results, out):
    """Render figures from previously written results."""
    from .report import render_report

    written = render_report(results, out)
    if not written:
        click.echo("no recognizable result files found", err=True)
        sys.exit(1)
    for path in written:
        click.echo(f"figure: {path}")


@click.group()
def main():
    """Preference localization from paired comparisons."""


main.add_command(experiment)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--snapshot-dir", default="./sessions", show_default=True, type=click.Path(),
              envvar="PREFLOC_SNAPSHOT_DIR")
@click.option("--chains", default=4, show_default=True)
@click.option("--burn-in", default=1000, show_default=True)
@click.option("--keep", default=1000, show_default=True)
def serve(host, port, snapshot_dir, chains, burn_in, keep):
    """Serve the session gateway over HTTP."""
    from .service import serve as serve_app

    serve_app(host, port, snapshot_dir, McmcConfig(chains=chains, burn_in=burn_in, keep=keep))


@main.command()
@click.option("--family", default="color_shape", show_default=True)
@click.option("--a", "attributes", required=True, help="Comma-separated coordinates in [0,1].")
@click.option("--out", required=True, type=click.Path(), help="Output SVG path.")
def render(family, attributes, out):
    """Render one stimulus to an SVG file."""
    from .stimulus import StimulusSpec, render as render_stimulus

    coords = [float(x) for x in attributes.split(",") if x.strip() != ""]
    spec = StimulusSpec(family=family, dimension=len(coords))
    with open(out, "w") as fh:
        fh.write(render_stimulus(spec, coords))
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
