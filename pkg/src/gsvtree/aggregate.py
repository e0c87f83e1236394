"""Dataset-level explanations and swarm-plot point construction.

A swarm point is one (row, group) pair: its attribution value, the raw
per-row aggregate of the group's features (their mean), and that
aggregate min-max normalized across rows for coloring.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .explanation import Explanation
from .fast import ensemble_gsv
from .groups import FeaturePartition
from .oracle import brute_force_gsv
from .trees import TreeEnsemble


@dataclass(frozen=True)
class Dataset:
    """Dense feature matrix with one id per row."""

    rows: np.ndarray  # (n_rows, n_features) float64
    row_ids: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.rows.ndim != 2:
            raise ValueError("rows must be a 2-d array")
        if len(self.row_ids) != len(self.rows):
            raise ValueError("one row id per row required")

    @property
    def n_rows(self) -> int:
        return len(self.rows)


def load_csv(text: str, feature_names: Sequence[str]) -> Dataset:
    """Read a dataset whose header names the model's features.

    Columns are matched by name, in any order; extra columns are
    ignored except ``row_id``, which supplies point ids.  Every feature
    name must be present and every cell numeric.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty CSV") from None
    header = [h.strip() for h in header]
    positions = {}
    for i, h in enumerate(header):
        if h in positions:
            raise ValueError(f"duplicate column {h!r}")
        positions[h] = i
    missing = [n for n in feature_names if n not in positions]
    if missing:
        raise ValueError(f"CSV is missing feature columns: {missing}")
    id_col = positions.get("row_id")

    order = [positions[n] for n in feature_names]
    rows: list[list[float]] = []
    ids: list[str] = []
    for line_no, record in enumerate(reader):
        if not record:
            continue
        try:
            rows.append([float(record[i]) for i in order])
        except (ValueError, IndexError) as exc:
            raise ValueError(f"row {line_no}: {exc}") from exc
        ids.append(record[id_col] if id_col is not None else str(line_no))
    if not rows:
        raise ValueError("CSV has a header but no data rows")
    return Dataset(np.asarray(rows, dtype=np.float64), tuple(ids))


def explain_dataset(
    ensemble: TreeEnsemble,
    dataset: Dataset,
    partition: FeaturePartition,
    engine: str = "fast",
    threads: int = 1,
) -> list[Explanation]:
    """Explain every row; ``engine`` is "fast" or "oracle"."""
    if engine == "fast":
        def explain(x):
            return ensemble_gsv(ensemble, x, partition)
    elif engine in ("oracle", "brute"):
        def explain(x):
            return brute_force_gsv(ensemble, x, partition)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    if threads <= 1 or dataset.n_rows <= 1:
        return [explain(x) for x in dataset.rows]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(explain, dataset.rows))


def aggregate_group_values(dataset: Dataset,
                           partition: FeaturePartition) -> np.ndarray:
    """(n_rows, n_groups) matrix of per-row means of each group's features."""
    out = np.empty((dataset.n_rows, partition.n_groups), dtype=np.float64)
    for g, members in enumerate(partition.groups):
        out[:, g] = dataset.rows[:, list(members)].mean(axis=1)
    return out


def normalize_colors(raw: np.ndarray) -> np.ndarray:
    """Min-max normalize each column to [0, 1]; constant columns map to 0.5."""
    if raw.size == 0:
        raise ValueError("nothing to normalize")
    lo = raw.min(axis=0)
    hi = raw.max(axis=0)
    span = hi - lo
    out = np.empty_like(raw, dtype=np.float64)
    for g in range(raw.shape[1]):
        if span[g] > 0:
            out[:, g] = (raw[:, g] - lo[g]) / span[g]
        else:
            out[:, g] = 0.5
    return out


@dataclass(frozen=True)
class SwarmPoint:
    row_id: str
    group: str
    gsv: float
    color_value: float
    raw_aggregate: float


def swarm_points(
    dataset: Dataset,
    explanations: Sequence[Explanation],
    partition: FeaturePartition,
) -> list[SwarmPoint]:
    """One point per (row, group), rows outer, groups in partition order."""
    if len(explanations) != dataset.n_rows:
        raise ValueError("one explanation per row required")
    raw = aggregate_group_values(dataset, partition)
    colors = normalize_colors(raw)
    points = []
    for r in range(dataset.n_rows):
        exp = explanations[r]
        if exp.group_names != partition.group_names:
            raise ValueError(f"explanation {r} has mismatched groups")
        for g, name in enumerate(partition.group_names):
            points.append(SwarmPoint(
                row_id=dataset.row_ids[r],
                group=name,
                gsv=exp.values[g],
                color_value=float(colors[r, g]),
                raw_aggregate=float(raw[r, g]),
            ))
    return points


def export_csv(points: Sequence[SwarmPoint]) -> str:
    """Serialize points as CSV with a fixed header and shortest-repr floats."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["row_id", "group", "gsv", "color_value", "raw_aggregate"])
    for p in points:
        writer.writerow([p.row_id, p.group, repr(p.gsv),
                         repr(p.color_value), repr(p.raw_aggregate)])
    return buf.getvalue()


def group_order_by_spread(points: Sequence[SwarmPoint]) -> list[str]:
    """Group names sorted by mean |gsv| descending, ties by first appearance."""
    first: dict[str, int] = {}
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for p in points:
        if p.group not in first:
            first[p.group] = len(first)
            sums[p.group] = 0.0
            counts[p.group] = 0
        sums[p.group] += abs(p.gsv)
        counts[p.group] += 1
    return sorted(first, key=lambda g: (-(sums[g] / counts[g]), first[g]))
