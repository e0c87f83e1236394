"""Randomized agreement sweep: fast walk against the brute-force oracle.

Each sample draws a model, an input, and a partition, computes the
attribution both ways, and records the worst relative deviation and the
worst efficiency residual.  A violation names the offending sample so
it can be replayed from the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fast import ensemble_gsv
from .groups import singleton_partition
from .oracle import brute_force_gsv
from .synthetic import random_ensemble, random_partition

EFFICIENCY_RTOL = 1e-9
EFFICIENCY_ATOL = 1e-12


def relative_deviation(fast: float, oracle: float) -> float:
    """|fast - oracle| scaled by max(1, |oracle|): absolute near zero."""
    return abs(fast - oracle) / max(1.0, abs(oracle))


@dataclass(frozen=True)
class SweepReport:
    samples: int
    tolerance: float
    max_deviation: float
    max_deviation_sample: int
    max_residual: float
    max_residual_sample: int
    violations: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        lines = [
            f"{verdict}: {self.samples} samples, tolerance {self.tolerance:g}",
            f"  worst deviation {self.max_deviation:.3e} "
            f"(sample {self.max_deviation_sample})",
            f"  worst efficiency residual {self.max_residual:.3e} "
            f"(sample {self.max_residual_sample})",
        ]
        if self.violations:
            shown = ", ".join(str(i) for i in self.violations[:10])
            more = "" if len(self.violations) <= 10 else ", ..."
            lines.append(f"  violations at samples: {shown}{more}")
        return "\n".join(lines)


def sweep(
    samples: int = 100,
    seed: int = 0,
    tolerance: float = 1e-9,
    max_trees: int = 5,
    max_depth: int = 6,
    max_features: int = 10,
    max_groups: int = 5,
    singletons: bool = False,
) -> SweepReport:
    """Run the agreement sweep; ``singletons`` forces one-feature groups."""
    if samples < 0:
        raise ValueError("samples must be non-negative")
    rng = np.random.default_rng(seed)
    max_dev = 0.0
    max_dev_at = -1
    max_res = 0.0
    max_res_at = -1
    violations: list[int] = []
    for i in range(samples):
        n_features = int(rng.integers(1, max_features + 1))
        n_trees = int(rng.integers(1, max_trees + 1))
        depth = int(rng.integers(1, max_depth + 1))
        ensemble = random_ensemble(rng, n_trees, n_features, depth,
                                   base_value=float(rng.uniform(-1, 1)))
        x = rng.random(n_features)
        if singletons:
            partition = singleton_partition(n_features)
        else:
            n_groups = int(rng.integers(1, min(n_features, max_groups) + 1))
            partition = random_partition(rng, n_features, n_groups)

        fast = ensemble_gsv(ensemble, x, partition)
        oracle = brute_force_gsv(ensemble, x, partition)

        dev = max(relative_deviation(f, o)
                  for f, o in zip(fast.values, oracle.values))
        dev = max(dev, relative_deviation(fast.base, oracle.base))
        if dev > max_dev:
            max_dev, max_dev_at = dev, i
        res = abs(fast.efficiency_residual())
        if res > max_res:
            max_res, max_res_at = res, i
        bound = EFFICIENCY_RTOL * abs(fast.prediction) + EFFICIENCY_ATOL
        if dev > tolerance or res > max(bound, tolerance):
            violations.append(i)
    return SweepReport(
        samples=samples,
        tolerance=tolerance,
        max_deviation=max_dev,
        max_deviation_sample=max_dev_at,
        max_residual=max_res,
        max_residual_sample=max_res_at,
        violations=tuple(violations),
    )
