"""Feature partitions: named, disjoint, exhaustive groups of feature indices.

Attribution is computed per group, so the partition is the unit of play.
Groups may be given by feature index or by feature name; an optional rest
group can absorb whatever the file leaves unassigned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class PartitionError(ValueError):
    """Raised for overlapping, incomplete, or unresolvable partitions."""


@dataclass(frozen=True)
class FeaturePartition:
    """Disjoint exhaustive grouping of features 0..n_features-1.

    ``lookup[f]`` is the index of the group containing feature f, so
    membership tests are O(1) during the tree walk.
    """

    group_names: tuple[str, ...]
    groups: tuple[tuple[int, ...], ...]
    n_features: int
    lookup: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        if len(self.group_names) != len(self.groups):
            raise PartitionError("group_names and groups lengths differ")
        if len(set(self.group_names)) != len(self.group_names):
            raise PartitionError("duplicate group names")
        lookup = np.full(self.n_features, -1, dtype=np.int32)
        for g, members in enumerate(self.groups):
            if not members:
                raise PartitionError(f"group {self.group_names[g]!r} is empty")
            for f in members:
                if not 0 <= f < self.n_features:
                    raise PartitionError(
                        f"group {self.group_names[g]!r} references feature {f}, "
                        f"model has {self.n_features}"
                    )
                if lookup[f] >= 0:
                    raise PartitionError(
                        f"feature {f} assigned to both "
                        f"{self.group_names[lookup[f]]!r} and {self.group_names[g]!r}"
                    )
                lookup[f] = g
        unassigned = np.flatnonzero(lookup < 0)
        if unassigned.size:
            raise PartitionError(
                f"features {unassigned.tolist()} not assigned to any group"
            )
        object.__setattr__(self, "lookup", lookup)

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    def group_of(self, feature: int) -> int:
        return int(self.lookup[feature])


def singleton_partition(n_features: int,
                        names: Sequence[str] | None = None) -> FeaturePartition:
    """One group per feature; group attribution then equals per-feature."""
    if names is None:
        names = tuple(f"f{i}" for i in range(n_features))
    return FeaturePartition(
        group_names=tuple(names),
        groups=tuple((i,) for i in range(n_features)),
        n_features=n_features,
    )


def parse_partition(
    text: str,
    n_features: int,
    feature_names: Sequence[str] | None = None,
    rest_group: str | None = None,
) -> FeaturePartition:
    """Parse ``{"groups": [{"name": ..., "features": [...]}, ...]}``.

    Features may be integer indices or names resolvable through
    ``feature_names``.  When ``rest_group`` is given, features the file
    does not mention are collected into one extra group of that name
    instead of failing the completeness check.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PartitionError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("groups"), list):
        raise PartitionError("expected an object with a 'groups' array")
    index_of = {}
    if feature_names is not None:
        index_of = {str(name): i for i, name in enumerate(feature_names)}

    names: list[str] = []
    groups: list[tuple[int, ...]] = []
    for g, raw in enumerate(doc["groups"]):
        if not isinstance(raw, dict) or "name" not in raw:
            raise PartitionError(f"group {g}: expected an object with a 'name'")
        feats = raw.get("features")
        if not isinstance(feats, list):
            raise PartitionError(f"group {raw['name']!r}: 'features' must be a list")
        members = []
        for item in feats:
            if isinstance(item, bool):
                raise PartitionError(f"group {raw['name']!r}: bad feature {item!r}")
            if isinstance(item, int):
                members.append(item)
            elif isinstance(item, str) and item in index_of:
                members.append(index_of[item])
            else:
                raise PartitionError(
                    f"group {raw['name']!r}: cannot resolve feature {item!r}"
                )
        names.append(str(raw["name"]))
        groups.append(tuple(members))

    if rest_group is not None:
        taken = {f for members in groups for f in members}
        rest = tuple(f for f in range(n_features) if f not in taken)
        if rest:
            if rest_group in names:
                raise PartitionError(f"rest group name {rest_group!r} already in use")
            names.append(rest_group)
            groups.append(rest)
    return FeaturePartition(tuple(names), tuple(groups), n_features)
