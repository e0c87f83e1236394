"""Decision-tree ensemble model: array representation, parsing, prediction.

Each tree is stored as parallel node arrays rooted at index 0, with -1
marking absent children.  Two input formats are supported: a native JSON
schema with explicit node arrays, and the JSON dump emitted by XGBoost's
``dump_model(dump_format="json")``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

COVER_RTOL = 1e-6  # relative slack for cover(left) + cover(right) == cover(parent)


class ModelError(ValueError):
    """Raised for malformed or inconsistent model input."""


@dataclass(frozen=True)
class Tree:
    """One decision tree as parallel node arrays; node 0 is the root.

    ``children_left``/``children_right`` hold node indices or -1 for
    leaves; a node is a leaf iff both are -1.  ``cover`` is the training
    weight that reached each node and must stay consistent across splits.
    ``missing`` optionally records the missing-value child from imported
    models; it is carried along but never used for routing (inputs are
    dense).
    """

    children_left: np.ndarray
    children_right: np.ndarray
    feature: np.ndarray
    threshold: np.ndarray
    value: np.ndarray
    cover: np.ndarray
    missing: np.ndarray | None = None

    @property
    def n_nodes(self) -> int:
        return len(self.children_left)

    @property
    def is_leaf(self) -> np.ndarray:
        return self.children_left < 0

    @property
    def n_leaves(self) -> int:
        return int(np.count_nonzero(self.is_leaf))

    @property
    def max_depth(self) -> int:
        depth = np.zeros(self.n_nodes, dtype=np.int32)
        for j in range(self.n_nodes):
            left = self.children_left[j]
            if left >= 0:
                depth[left] = depth[j] + 1
                depth[self.children_right[j]] = depth[j] + 1
        return int(depth.max(initial=0))

    def leaf_mean(self) -> float:
        """Cover-weighted mean of the leaf values (the no-information answer)."""
        leaves = self.is_leaf
        return float(np.sum(self.cover[leaves] * self.value[leaves]) / self.cover[0])


@dataclass(frozen=True)
class TreeEnsemble:
    """Additive ensemble: prediction = base_value + sum of reached leaves."""

    trees: tuple[Tree, ...]
    feature_count: int
    base_value: float = 0.0
    feature_names: tuple[str, ...] | None = None
    comparator: str = "le"  # "le": x <= t goes left; "lt": x < t goes left

    def __post_init__(self) -> None:
        if self.comparator not in ("le", "lt"):
            raise ModelError(f"comparator must be 'le' or 'lt', got {self.comparator!r}")
        if self.feature_names is not None and len(self.feature_names) != self.feature_count:
            raise ModelError(
                f"{len(self.feature_names)} feature names for {self.feature_count} features"
            )

    @property
    def strict(self) -> bool:
        return self.comparator == "lt"

    def resolved_feature_names(self) -> tuple[str, ...]:
        if self.feature_names is not None:
            return self.feature_names
        return tuple(f"f{i}" for i in range(self.feature_count))

    def check_input(self, x: Sequence[float] | np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.feature_count,):
            raise ValueError(
                f"input has shape {x.shape}, expected ({self.feature_count},)"
            )
        if not np.all(np.isfinite(x)):
            raise ValueError("input must be dense and finite")
        return x

    def predict(self, x: Sequence[float] | np.ndarray) -> float:
        x = self.check_input(x)
        total = self.base_value
        for tree in self.trees:
            j = 0
            while tree.children_left[j] >= 0:
                xv = x[tree.feature[j]]
                t = tree.threshold[j]
                go_left = xv < t if self.strict else xv <= t
                j = tree.children_left[j] if go_left else tree.children_right[j]
            total += float(tree.value[j])
        return total


def _validate_tree(tree: Tree, feature_count: int, where: str) -> None:
    n = tree.n_nodes
    if n == 0:
        raise ModelError(f"{where}: tree has no nodes")
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        j = stack.pop()
        left, right = int(tree.children_left[j]), int(tree.children_right[j])
        if (left < 0) != (right < 0):
            raise ModelError(f"{where}: node {j} has exactly one child")
        if tree.cover[j] <= 0:
            raise ModelError(f"{where}: node {j} has non-positive cover {tree.cover[j]}")
        if left < 0:
            continue
        for child in (left, right):
            if not 0 < child < n:
                raise ModelError(f"{where}: node {j} references invalid child {child}")
            if seen[child]:
                raise ModelError(f"{where}: node {child} reached twice")
            seen[child] = True
            stack.append(child)
        f = int(tree.feature[j])
        if not 0 <= f < feature_count:
            raise ModelError(
                f"{where}: node {j} splits on feature {f}, model has {feature_count}"
            )
        if not np.isfinite(tree.threshold[j]):
            raise ModelError(f"{where}: node {j} has non-finite threshold")
        csum = tree.cover[left] + tree.cover[right]
        if abs(csum - tree.cover[j]) > COVER_RTOL * abs(tree.cover[j]):
            raise ModelError(
                f"{where}: node {j} cover {tree.cover[j]} != "
                f"{tree.cover[left]} + {tree.cover[right]} of its children"
            )
    if not seen.all():
        orphans = np.flatnonzero(~seen).tolist()
        raise ModelError(f"{where}: nodes {orphans} unreachable from the root")


def validate_ensemble(ensemble: TreeEnsemble) -> TreeEnsemble:
    if ensemble.feature_count < 1:
        raise ModelError("feature_count must be positive")
    if not ensemble.trees:
        raise ModelError("no trees")
    for t, tree in enumerate(ensemble.trees):
        _validate_tree(tree, ensemble.feature_count, f"tree {t}")
    return ensemble


def _tree_from_nodes(nodes: list[dict], where: str) -> Tree:
    n = len(nodes)
    left = np.full(n, -1, dtype=np.int32)
    right = np.full(n, -1, dtype=np.int32)
    feature = np.full(n, -1, dtype=np.int32)
    threshold = np.zeros(n, dtype=np.float64)
    value = np.zeros(n, dtype=np.float64)
    cover = np.zeros(n, dtype=np.float64)
    missing = np.full(n, -1, dtype=np.int32)
    has_missing = False
    for j, node in enumerate(nodes):
        if not isinstance(node, dict):
            raise ModelError(f"{where}: node {j} is not an object")
        try:
            value[j] = float(node["value"])
            cover[j] = float(node["cover"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelError(f"{where}: node {j} missing numeric value/cover") from exc
        if node.get("left") is not None:
            left[j] = int(node["left"])
            right[j] = int(node["right"]) if node.get("right") is not None else -1
            feature[j] = int(node.get("feature", -1))
            try:
                threshold[j] = float(node["threshold"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ModelError(f"{where}: node {j} has no numeric threshold") from exc
        elif node.get("right") is not None:
            left[j] = -1
            right[j] = int(node["right"])
        if node.get("missing") is not None:
            missing[j] = int(node["missing"])
            has_missing = True
    return Tree(left, right, feature, threshold, value, cover,
                missing if has_missing else None)


def parse_native(text: str) -> TreeEnsemble:
    """Parse the native JSON schema into a validated ensemble.

    Schema: ``{"base_value": number, "comparator": "le"|"lt",
    "feature_names": [...], "trees": [{"nodes": [...]}, ...]}`` where each
    node is ``{"feature", "threshold", "left", "right", "value", "cover"}``
    and node 0 is the root.  ``comparator`` defaults to "le".
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or "trees" not in doc:
        raise ModelError("expected an object with a 'trees' array")
    raw_trees = doc["trees"]
    if not isinstance(raw_trees, list) or not raw_trees:
        raise ModelError("no trees")
    names = doc.get("feature_names")
    if names is not None:
        names = tuple(str(n) for n in names)
    trees = []
    for t, raw in enumerate(raw_trees):
        nodes = raw.get("nodes") if isinstance(raw, dict) else None
        if not isinstance(nodes, list) or not nodes:
            raise ModelError(f"tree {t}: expected a non-empty 'nodes' array")
        trees.append(_tree_from_nodes(nodes, f"tree {t}"))
    feature_count = doc.get("feature_count")
    if feature_count is None:
        if names is not None:
            feature_count = len(names)
        else:
            top = max((int(t.feature.max(initial=-1)) for t in trees), default=-1)
            feature_count = top + 1 if top >= 0 else 1
    ensemble = TreeEnsemble(
        trees=tuple(trees),
        feature_count=int(feature_count),
        base_value=float(doc.get("base_value", 0.0)),
        feature_names=names,
        comparator=doc.get("comparator", "le"),
    )
    return validate_ensemble(ensemble)


def serialize_native(ensemble: TreeEnsemble) -> str:
    """Serialize to the native schema; parse_native round-trips the result."""
    doc: dict = {
        "base_value": ensemble.base_value,
        "comparator": ensemble.comparator,
        "feature_count": ensemble.feature_count,
    }
    if ensemble.feature_names is not None:
        doc["feature_names"] = list(ensemble.feature_names)
    doc["trees"] = []
    for tree in ensemble.trees:
        nodes = []
        for j in range(tree.n_nodes):
            leaf = tree.children_left[j] < 0
            node = {
                "feature": None if leaf else int(tree.feature[j]),
                "threshold": None if leaf else float(tree.threshold[j]),
                "left": None if leaf else int(tree.children_left[j]),
                "right": None if leaf else int(tree.children_right[j]),
                "value": float(tree.value[j]),
                "cover": float(tree.cover[j]),
            }
            if tree.missing is not None and tree.missing[j] >= 0:
                node["missing"] = int(tree.missing[j])
            nodes.append(node)
        doc["trees"].append({"nodes": nodes})
    return json.dumps(doc, indent=2)


_FEATURE_PATTERN = re.compile(r"^f(\d+)$")


def _resolve_feature(split: object, names: Sequence[str] | None, where: str) -> int:
    if isinstance(split, int):
        return split
    split = str(split)
    if names is not None and split in names:
        return list(names).index(split)
    m = _FEATURE_PATTERN.match(split)
    if m:
        return int(m.group(1))
    if split.isdigit():
        return int(split)
    raise ModelError(f"{where}: cannot resolve split feature {split!r}")


def import_xgboost_dump(
    text: str,
    base_value: float = 0.0,
    feature_count: int | None = None,
    feature_names: Sequence[str] | None = None,
) -> TreeEnsemble:
    """Convert an XGBoost JSON dump (array of recursive trees) to an ensemble.

    XGBoost routes ``x < split_condition`` to the "yes" child, so the
    comparator is "lt".  Dumps carry no base value; pass the model's base
    score explicitly.  The "missing" child is recorded per node but inputs
    must be dense.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"malformed JSON: {exc}") from exc
    if isinstance(doc, dict):
        doc = [doc]
    if not isinstance(doc, list):
        raise ModelError("expected a JSON array of tree dumps")
    if not doc:
        raise ModelError("no trees")

    known = {"nodeid", "depth", "split", "split_condition", "yes", "no",
             "missing", "children", "leaf", "cover", "gain"}
    trees = []
    for t, root in enumerate(doc):
        where = f"tree {t}"
        left: list[int] = []
        right: list[int] = []
        feature: list[int] = []
        threshold: list[float] = []
        value: list[float] = []
        cover: list[float] = []
        missing: list[int] = []

        def emit(node: dict) -> int:
            if not isinstance(node, dict):
                raise ModelError(f"{where}: node is not an object")
            unknown = set(node) - known
            if unknown:
                raise ModelError(f"{where}: unsupported node fields {sorted(unknown)}")
            idx = len(left)
            left.append(-1)
            right.append(-1)
            feature.append(-1)
            threshold.append(0.0)
            value.append(0.0)
            cover.append(float(node.get("cover", 0.0)))
            missing.append(-1)
            if "leaf" in node:
                value[idx] = float(node["leaf"])
                return idx
            try:
                threshold[idx] = float(node["split_condition"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ModelError(f"{where}: non-numeric split_condition") from exc
            feature[idx] = _resolve_feature(node.get("split"), feature_names, where)
            children = {c.get("nodeid"): c for c in node.get("children", [])}
            for key, slot in (("yes", left), ("no", right)):
                child_id = node.get(key)
                if child_id not in children:
                    raise ModelError(f"{where}: child {key}={child_id} not present")
                slot[idx] = emit(children[child_id])
            if node.get("missing") == node.get("yes"):
                missing[idx] = left[idx]
            elif node.get("missing") == node.get("no"):
                missing[idx] = right[idx]
            return idx

        emit(root)
        trees.append(Tree(
            np.asarray(left, dtype=np.int32),
            np.asarray(right, dtype=np.int32),
            np.asarray(feature, dtype=np.int32),
            np.asarray(threshold, dtype=np.float64),
            np.asarray(value, dtype=np.float64),
            np.asarray(cover, dtype=np.float64),
            np.asarray(missing, dtype=np.int32),
        ))

    if feature_count is None:
        if feature_names is not None:
            feature_count = len(feature_names)
        else:
            top = max((int(t.feature.max(initial=-1)) for t in trees), default=-1)
            feature_count = top + 1 if top >= 0 else 1
    ensemble = TreeEnsemble(
        trees=tuple(trees),
        feature_count=int(feature_count),
        base_value=float(base_value),
        feature_names=tuple(feature_names) if feature_names is not None else None,
        comparator="lt",
    )
    return validate_ensemble(ensemble)


@dataclass(frozen=True)
class TreeMetrics:
    tree_count: int
    max_leaves: int
    max_depth: int


def tree_metrics(ensemble: TreeEnsemble) -> TreeMetrics:
    """Exact T, L, D of the ensemble, for complexity reporting."""
    return TreeMetrics(
        tree_count=len(ensemble.trees),
        max_leaves=max(t.n_leaves for t in ensemble.trees),
        max_depth=max(t.max_depth for t in ensemble.trees),
    )


def iter_trees(ensemble: TreeEnsemble) -> Iterator[Tree]:
    return iter(ensemble.trees)
