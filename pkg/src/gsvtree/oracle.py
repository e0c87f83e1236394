"""Exact brute-force group attribution by coalition enumeration.

Evaluates the conditional-expectation game at every coalition of groups
and applies the exact combinatorial weights.  Cost is O(2^k) game
evaluations for k groups, so this is a reference oracle for small k, not
a production path.  The fast tree walk must agree with it everywhere.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .expectation import expected_value_ensemble
from .explanation import Explanation
from .groups import FeaturePartition, singleton_partition
from .trees import TreeEnsemble

# Each extra group doubles the number of game evaluations, and each
# evaluation walks every tree.  Tighter than the abstract-game limit
# because the value function here is far more expensive than a callable.
MAX_GROUPS = 20


def brute_force_gsv(ensemble: TreeEnsemble,
                    x: Sequence[float] | np.ndarray,
                    partition: FeaturePartition) -> Explanation:
    """Exact group attribution by enumerating all 2^k group coalitions."""
    if partition.n_features != ensemble.feature_count:
        raise ValueError(
            f"partition covers {partition.n_features} features, "
            f"model has {ensemble.feature_count}"
        )
    k = partition.n_groups
    if k > MAX_GROUPS:
        raise ValueError(f"{k} groups exceeds the enumeration limit {MAX_GROUPS}")
    x = ensemble.check_input(x)

    cache: dict[int, float] = {}

    def value(mask: int) -> float:
        got = cache.get(mask)
        if got is None:
            known = [f for g in range(k) if mask >> g & 1
                     for f in partition.groups[g]]
            got = expected_value_ensemble(ensemble, x, known)
            cache[mask] = got
        return got

    fact = [math.factorial(i) for i in range(k + 1)]
    values = []
    for g in range(k):
        others = [h for h in range(k) if h != g]
        terms = []
        for bits in range(1 << (k - 1)):
            mask = 0
            for pos, h in enumerate(others):
                if bits >> pos & 1:
                    mask |= 1 << h
            s = bin(mask).count("1")
            weight = fact[s] * fact[k - s - 1] / fact[k]
            terms.append(weight * (value(mask | 1 << g) - value(mask)))
        values.append(math.fsum(terms))

    base = value(0)
    prediction = ensemble.predict(x)
    return Explanation(
        base=base,
        prediction=prediction,
        group_names=partition.group_names,
        values=tuple(values),
    )


def brute_force_classic(ensemble: TreeEnsemble,
                        x: Sequence[float] | np.ndarray) -> Explanation:
    """Per-feature attribution: the singleton-partition special case."""
    partition = singleton_partition(ensemble.feature_count,
                                    ensemble.resolved_feature_names())
    return brute_force_gsv(ensemble, x, partition)
