"""Grouped Shapley value (GSV) explanations for decision-tree ensembles.

Feature attributions are computed for predefined groups of features that
are always evaluated as a unit.  Two engines produce identical results:
an exact subset-enumeration oracle and a single-traversal path-tracking
algorithm that runs in polynomial time.
"""

from gsvtree.explanation import Explanation
from gsvtree.fast import ensemble_gsv, tree_gsv
from gsvtree.groups import FeaturePartition, PartitionError, parse_partition
from gsvtree.oracle import brute_force_classic, brute_force_gsv
from gsvtree.trees import (
    ModelError,
    Tree,
    TreeEnsemble,
    import_xgboost_dump,
    parse_native,
    tree_metrics,
)

__version__ = "0.1.0"

__all__ = [
    "Explanation",
    "FeaturePartition",
    "ModelError",
    "PartitionError",
    "Tree",
    "TreeEnsemble",
    "brute_force_classic",
    "brute_force_gsv",
    "ensemble_gsv",
    "import_xgboost_dump",
    "parse_native",
    "parse_partition",
    "tree_gsv",
    "tree_metrics",
]
