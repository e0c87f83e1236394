"""Explanation result type and its JSON serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Explanation:
    """Per-group attribution for one input row.

    ``values[g]`` is the contribution of group ``group_names[g]``; the
    values sum to ``prediction - base`` up to floating-point error.
    """

    base: float
    prediction: float
    group_names: tuple[str, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.group_names) != len(self.values):
            raise ValueError("group_names and values lengths differ")

    def efficiency_residual(self) -> float:
        """prediction - base - sum(values); zero for an exact attribution."""
        return self.prediction - self.base - math.fsum(self.values)

    def value_of(self, name: str) -> float:
        return self.values[self.group_names.index(name)]

    def to_dict(self) -> dict:
        return {
            "base": self.base,
            "prediction": self.prediction,
            "groups": [
                {"name": name, "gsv": value}
                for name, value in zip(self.group_names, self.values)
            ],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)
