"""Conditional expectation over a tree with a subset of features known.

Known features route normally at their splits; unknown features fan out
to both children, weighted by the fraction of training cover that went
each way.  With no features known this is the cover-weighted leaf mean;
with all features known it is the plain prediction.
"""

from __future__ import annotations

from typing import Collection, Sequence

import numpy as np

from .trees import Tree, TreeEnsemble


def expected_value(tree: Tree, x: np.ndarray, known: Collection[int],
                   strict: bool = False) -> float:
    """E[f(X) | X_known = x_known] under the path-cover weighting."""
    known = frozenset(known)
    total = 0.0
    stack = [(0, 1.0)]
    while stack:
        j, w = stack.pop()
        left = int(tree.children_left[j])
        if left < 0:
            total += w * float(tree.value[j])
            continue
        right = int(tree.children_right[j])
        f = int(tree.feature[j])
        if f in known:
            xv = x[f]
            t = tree.threshold[j]
            go_left = xv < t if strict else xv <= t
            stack.append((left if go_left else right, w))
        else:
            parent_cover = tree.cover[j]
            stack.append((left, w * tree.cover[left] / parent_cover))
            stack.append((right, w * tree.cover[right] / parent_cover))
    return total


def expected_value_ensemble(ensemble: TreeEnsemble,
                            x: Sequence[float] | np.ndarray,
                            known: Collection[int]) -> float:
    """Sum of per-tree conditional expectations plus the base value."""
    x = ensemble.check_input(x)
    total = ensemble.base_value
    for tree in ensemble.trees:
        total += expected_value(tree, x, known, ensemble.strict)
    return total
