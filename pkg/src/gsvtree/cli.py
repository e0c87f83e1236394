"""Command-line interface.

Subcommands: explain one row, explain every row, run the randomized
oracle-agreement sweep, build a swarm plot, inspect model metrics, and
print the glove-game walkthrough.  Usage and input errors exit 2;
validation violations exit 1.  Output files are written only after the
computation has fully succeeded.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import click
import numpy as np

from .aggregate import explain_dataset, export_csv, load_csv, swarm_points
from .fast import ensemble_gsv
from .games import GloveGame, classic_shapley, grouped_shapley, naive_group_sum
from .groups import FeaturePartition, PartitionError, parse_partition, singleton_partition
from .oracle import brute_force_gsv
from .swarm import render_swarm_svg
from .trees import ModelError, TreeEnsemble, import_xgboost_dump, parse_native, tree_metrics
from .validate import sweep


def _read(path: str, what: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise click.UsageError(f"cannot read {what} file {path!r}: {exc}")


def _load_model(model: str, fmt: str, base_value: float) -> TreeEnsemble:
    text = _read(model, "model")
    try:
        if fmt == "native":
            ensemble = parse_native(text)
            if base_value:
                raise click.UsageError(
                    "--base-value applies to --format xgboost; "
                    "native models carry their own")
            return ensemble
        return import_xgboost_dump(text, base_value=base_value)
    except ModelError as exc:
        raise click.UsageError(f"model file {model!r}: {exc}")


def _load_partition(groups: str | None, ensemble: TreeEnsemble,
                    rest_group: str | None) -> FeaturePartition:
    if groups is None:
        return singleton_partition(ensemble.feature_count,
                                   ensemble.resolved_feature_names())
    try:
        text = Path(groups).read_text()
    except OSError as exc:
        raise click.UsageError(
            f"cannot read partition file {groups!r}: {exc}")
    try:
        return parse_partition(text, ensemble.feature_count,
                               ensemble.feature_names, rest_group)
    except PartitionError as exc:
        raise click.UsageError(f"partition file {groups!r}: {exc}")


def _load_dataset(data: str, ensemble: TreeEnsemble):
    text = _read(data, "data")
    try:
        return load_csv(text, ensemble.resolved_feature_names())
    except ValueError as exc:
        raise click.UsageError(f"data file {data!r}: {exc}")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


model_opt = click.option("--model", required=True, help="Model file path.")
format_opt = click.option("--format", "fmt", default="native",
                          type=click.Choice(["native", "xgboost"]),
                          show_default=True, help="Model file format.")
base_opt = click.option("--base-value", default=0.0, show_default=True,
                        help="Base score for xgboost dumps (they omit it).")
groups_opt = click.option("--groups", default=None,
                          help="Partition file; defaults to one group per feature.")
rest_opt = click.option("--rest-group", default=None,
                        help="Collect unassigned features into a group of this name.")
engine_opt = click.option("--engine", default="fast", show_default=True,
                          type=click.Choice(["fast", "oracle"]),
                          help="fast: path-tracking walk; oracle: brute force.")
out_opt = click.option("--out", default=None,
                       help="Output path (default stdout).")


@click.group()
@click.version_option(package_name="gsvtree")
def main() -> None:
    """Grouped Shapley attributions for decision-tree ensembles."""


@main.command()
@model_opt
@format_opt
@base_opt
@click.option("--data", required=True, help="CSV of input rows.")
@groups_opt
@rest_opt
@click.option("--row", default=0, show_default=True,
              help="Row index within the data file.")
@engine_opt
@out_opt
def explain(model, fmt, base_value, data, groups, rest_group, row, engine, out):
    """Explain a single row as JSON."""
    ensemble = _load_model(model, fmt, base_value)
    partition = _load_partition(groups, ensemble, rest_group)
    dataset = _load_dataset(data, ensemble)
    if not 0 <= row < dataset.n_rows:
        raise click.UsageError(
            f"--row {row} out of range; data has {dataset.n_rows} rows")
    x = dataset.rows[row]
    if engine == "fast":
        result = ensemble_gsv(ensemble, x, partition)
    else:
        result = brute_force_gsv(ensemble, x, partition)
    _emit(result.to_json() + "\n", out)


@main.command("explain-all")
@model_opt
@format_opt
@base_opt
@click.option("--data", required=True, help="CSV of input rows.")
@groups_opt
@rest_opt
@engine_opt
@click.option("--threads", default=1, show_default=True,
              help="Worker threads for row-level parallelism.")
@out_opt
def explain_all(model, fmt, base_value, data, groups, rest_group, engine,
                threads, out):
    """Explain every row, emitting a JSON array in row order."""
    ensemble = _load_model(model, fmt, base_value)
    partition = _load_partition(groups, ensemble, rest_group)
    dataset = _load_dataset(data, ensemble)
    results = explain_dataset(ensemble, dataset, partition,
                              engine=engine, threads=threads)
    text = json.dumps([r.to_dict() for r in results], indent=2) + "\n"
    _emit(text, out)


@main.command()
@click.option("--samples", default=1000, show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--tolerance", default=1e-9, show_default=True)
@click.option("--max-trees", default=5, show_default=True)
@click.option("--max-depth", default=6, show_default=True)
@click.option("--max-features", default=10, show_default=True)
@click.option("--max-groups", default=5, show_default=True)
def validate(samples, seed, tolerance, max_trees, max_depth, max_features,
             max_groups):
    """Check the fast walk against the brute-force oracle on random models."""
    if tolerance < 0:
        raise click.UsageError("--tolerance must be non-negative")
    if samples == 0:
        click.echo("warning: 0 samples requested; nothing was checked",
                   err=True)
    report = sweep(samples=samples, seed=seed, tolerance=tolerance,
                   max_trees=max_trees, max_depth=max_depth,
                   max_features=max_features, max_groups=max_groups)
    click.echo(report.summary())
    if not report.passed:
        sys.exit(1)


@main.command()
@model_opt
@format_opt
@base_opt
@click.option("--data", required=True, help="CSV of input rows.")
@groups_opt
@rest_opt
@engine_opt
@click.option("--seed", default=42, show_default=True,
              help="Jitter seed for point placement.")
@click.option("--threads", default=1, show_default=True)
@click.option("--out", required=True,
              help="Output prefix; writes <prefix>.svg and <prefix>.csv.")
def swarm(model, fmt, base_value, data, groups, rest_group, engine, seed,
          threads, out):
    """Render a swarm plot and its backing CSV for a whole dataset."""
    ensemble = _load_model(model, fmt, base_value)
    partition = _load_partition(groups, ensemble, rest_group)
    dataset = _load_dataset(data, ensemble)
    results = explain_dataset(ensemble, dataset, partition,
                              engine=engine, threads=threads)
    points = swarm_points(dataset, results, partition)
    svg = render_swarm_svg(points, seed=seed)
    csv_text = export_csv(points)
    Path(out + ".svg").write_text(svg)
    Path(out + ".csv").write_text(csv_text)
    click.echo(f"wrote {out}.svg and {out}.csv")


@main.command()
@model_opt
@format_opt
@base_opt
@out_opt
def inspect(model, fmt, base_value, out):
    """Print model metrics as JSON."""
    ensemble = _load_model(model, fmt, base_value)
    m = tree_metrics(ensemble)
    doc = {
        "tree_count": m.tree_count,
        "max_leaves": m.max_leaves,
        "max_depth": m.max_depth,
        "feature_count": ensemble.feature_count,
        "base_value": ensemble.base_value,
        "comparator": ensemble.comparator,
        "walk_cost_bound": m.tree_count * m.max_leaves * m.max_depth ** 2,
    }
    _emit(json.dumps(doc, indent=2) + "\n", out)


@main.command("glove-demo")
@click.option("--left-gloves", default=2, show_default=True,
              help="Number of left-glove players.")
def glove_demo(left_gloves):
    """Walk through the glove game: grouping changes the story."""
    if left_gloves < 1:
        raise click.UsageError("--left-gloves must be at least 1")
    game = GloveGame(left_gloves)
    lefts = list(range(left_gloves))
    right = game.right_player
    groups = game.partition

    click.echo(f"Glove game: {left_gloves} left gloves, 1 right glove; "
               "a completed pair is worth 1.")
    click.echo("")
    click.echo("Per-player attribution:")
    for p in lefts:
        click.echo(f"  left_{p}:  {float(classic_shapley(game.game, p)):.6f}")
    click.echo(f"  right:   {float(classic_shapley(game.game, right)):.6f}")
    naive = naive_group_sum(game.game, groups, 0)
    click.echo("")
    click.echo(f"Sum of per-player values over the left group: {float(naive):.6f}")
    grouped_left = grouped_shapley(game.game, groups, 0)
    grouped_right = grouped_shapley(game.game, groups, 1)
    click.echo("Group-level attribution:")
    click.echo(f"  lefts:   {float(grouped_left):.6f}")
    click.echo(f"  right:   {float(grouped_right):.6f}")
    gap = grouped_left - naive
    click.echo("")
    click.echo(f"Gap (grouped minus summed): {float(gap):+.6f} "
               f"({Fraction(grouped_left)} vs {Fraction(naive)})")
    click.echo("Treating the interchangeable gloves as one player restores "
               "the symmetric half share.")


if __name__ == "__main__":
    main()
