"""Shared fixtures: the hand-checked two-feature tree and small helpers."""

from __future__ import annotations

import numpy as np
import pytest

from gsvtree.groups import FeaturePartition
from gsvtree.trees import Tree, TreeEnsemble, validate_ensemble

# Frozen reference values for the two-feature fixture at x = (0.3, 0.8),
# re-derived independently by subset enumeration over the conditional
# expectations v(empty)=3.4, v({f0})=14/6, v({f1})=3.8, v(both)=3.0:
#   phi_f0 = (v({f0})-v({})+v(all)-v({f1})) / 2 = -14/15
#   phi_f1 = (v({f1})-v({})+v(all)-v({f0})) / 2 =   8/15
FIXTURE_PHI = (-14.0 / 15.0, 8.0 / 15.0)
FIXTURE_BASE = 3.4
FIXTURE_PREDICTION = 3.0


def make_fixture_tree() -> Tree:
    """Root: f0 <= 0.5 (cover 10); left: f1 <= 0.5 (cover 6) with leaves
    1.0 (cover 2) and 3.0 (cover 4); right: leaf 5.0 (cover 4)."""
    return Tree(
        children_left=np.array([1, 3, -1, -1, -1], dtype=np.int32),
        children_right=np.array([2, 4, -1, -1, -1], dtype=np.int32),
        feature=np.array([0, 1, -1, -1, -1], dtype=np.int32),
        threshold=np.array([0.5, 0.5, 0.0, 0.0, 0.0]),
        value=np.array([0.0, 0.0, 5.0, 1.0, 3.0]),
        cover=np.array([10.0, 6.0, 4.0, 2.0, 4.0]),
    )


@pytest.fixture
def fixture_tree() -> Tree:
    return make_fixture_tree()


@pytest.fixture
def fixture_ensemble(fixture_tree) -> TreeEnsemble:
    return validate_ensemble(TreeEnsemble(
        trees=(fixture_tree,), feature_count=2,
        feature_names=("f0", "f1")))


@pytest.fixture
def fixture_x() -> np.ndarray:
    return np.array([0.3, 0.8])


@pytest.fixture
def two_group_partition() -> FeaturePartition:
    return FeaturePartition(("f0", "f1"), ((0,), (1,)), 2)


@pytest.fixture
def one_group_partition() -> FeaturePartition:
    return FeaturePartition(("all",), ((0, 1),), 2)


def leaf_only_tree(value: float = 2.5, cover: float = 4.0) -> Tree:
    return Tree(
        children_left=np.array([-1], dtype=np.int32),
        children_right=np.array([-1], dtype=np.int32),
        feature=np.array([-1], dtype=np.int32),
        threshold=np.array([0.0]),
        value=np.array([value]),
        cover=np.array([cover]),
    )
