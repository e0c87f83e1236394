"""Synthetic models, inputs, and partitions for validation and benchmarks.

Trees are grown top-down with random splits; covers are assigned at the
leaves and summed upward so parent cover always equals the sum of its
children, as a trained model's would.
"""

from __future__ import annotations

import numpy as np

from .groups import FeaturePartition
from .trees import Tree, TreeEnsemble, validate_ensemble


def random_tree(rng: np.random.Generator, n_features: int,
                max_depth: int, leaf_prob: float = 0.3) -> Tree:
    left: list[int] = []
    right: list[int] = []
    feature: list[int] = []
    threshold: list[float] = []
    value: list[float] = []
    cover: list[float] = []

    def grow(d: int) -> int:
        idx = len(left)
        left.append(-1)
        right.append(-1)
        feature.append(-1)
        threshold.append(0.0)
        value.append(0.0)
        cover.append(0.0)
        if d >= max_depth or (d > 0 and rng.random() < leaf_prob):
            value[idx] = float(rng.uniform(-5, 5))
            cover[idx] = float(rng.uniform(0.5, 10))
            return idx
        feature[idx] = int(rng.integers(0, n_features))
        threshold[idx] = float(rng.random())
        a = grow(d + 1)
        b = grow(d + 1)
        left[idx] = a
        right[idx] = b
        cover[idx] = cover[a] + cover[b]
        return idx

    grow(0)
    return Tree(
        np.asarray(left, dtype=np.int32),
        np.asarray(right, dtype=np.int32),
        np.asarray(feature, dtype=np.int32),
        np.asarray(threshold, dtype=np.float64),
        np.asarray(value, dtype=np.float64),
        np.asarray(cover, dtype=np.float64),
    )


def random_ensemble(rng: np.random.Generator, n_trees: int, n_features: int,
                    max_depth: int, base_value: float = 0.0) -> TreeEnsemble:
    trees = tuple(random_tree(rng, n_features, max_depth)
                  for _ in range(n_trees))
    return validate_ensemble(TreeEnsemble(
        trees=trees, feature_count=n_features, base_value=base_value))


def random_partition(rng: np.random.Generator, n_features: int,
                     n_groups: int) -> FeaturePartition:
    """Random balanced-ish partition: shuffle features, cut into n_groups runs."""
    if not 1 <= n_groups <= n_features:
        raise ValueError("need 1 <= n_groups <= n_features")
    perm = rng.permutation(n_features)
    cuts = np.sort(rng.choice(np.arange(1, n_features), size=n_groups - 1,
                              replace=False)) if n_groups > 1 else np.array([], int)
    bounds = [0, *cuts.tolist(), n_features]
    groups = tuple(tuple(int(f) for f in perm[a:b])
                   for a, b in zip(bounds, bounds[1:]))
    names = tuple(f"g{i}" for i in range(n_groups))
    return FeaturePartition(names, groups, n_features)


def banded_partition(n_features: int, n_bands: int, band_size: int,
                     rest_name: str = "rest") -> FeaturePartition:
    """Contiguous equal-width bands plus one group for the remainder.

    The first ``n_bands * band_size`` features form the bands; whatever
    is left becomes a single group named ``rest_name``.  The remainder
    group is omitted when the bands cover everything.
    """
    used = n_bands * band_size
    if used > n_features:
        raise ValueError(
            f"{n_bands} bands of {band_size} exceed {n_features} features"
        )
    names = [f"band{i:02d}" for i in range(n_bands)]
    groups = [tuple(range(i * band_size, (i + 1) * band_size))
              for i in range(n_bands)]
    if used < n_features:
        names.append(rest_name)
        groups.append(tuple(range(used, n_features)))
    return FeaturePartition(tuple(names), tuple(groups), n_features)


def wide_fixture(
    n_trees: int = 100,
    n_bands: int = 11,
    band_size: int = 102,
    n_rest: int = 9,
    max_depth: int = 6,
    seed: int = 7,
) -> tuple[TreeEnsemble, np.ndarray, FeaturePartition]:
    """High-dimensional benchmark ensemble: banded spectra plus a remainder.

    Defaults give 11 * 102 + 9 = 1131 features in 12 groups, the shape
    of a hyperspectral dataset with a handful of handcrafted covariates
    collected into one final group.  Returns (ensemble, input row,
    partition).
    """
    n_features = n_bands * band_size + n_rest
    rng = np.random.default_rng(seed)
    ensemble = random_ensemble(rng, n_trees, n_features, max_depth)
    x = rng.random(n_features)
    partition = banded_partition(n_features, n_bands, band_size,
                                 rest_name="handcrafted")
    return ensemble, x, partition


def sequence_fixture(
    n_steps: int = 7,
    per_step: int = 4,
    n_trees: int = 20,
    max_depth: int = 5,
    seed: int = 11,
) -> tuple[TreeEnsemble, np.ndarray, FeaturePartition]:
    """Time-series shape: one group per acquisition step.

    Features are ``t{step}_v{channel}``; each group collects every
    channel of one step, so attribution reads as importance over time.
    """
    n_features = n_steps * per_step
    names = tuple(f"t{s}_v{c}" for s in range(n_steps) for c in range(per_step))
    rng = np.random.default_rng(seed)
    trees = tuple(random_tree(rng, n_features, max_depth)
                  for _ in range(n_trees))
    ensemble = validate_ensemble(TreeEnsemble(
        trees=trees, feature_count=n_features, feature_names=names))
    x = rng.random(n_features)
    partition = FeaturePartition(
        tuple(f"step{s}" for s in range(n_steps)),
        tuple(tuple(range(s * per_step, (s + 1) * per_step))
              for s in range(n_steps)),
        n_features,
    )
    return ensemble, x, partition
