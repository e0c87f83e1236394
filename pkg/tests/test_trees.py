"""Model ingestion: native schema, XGBoost dumps, validation, prediction."""

from __future__ import annotations

import json

import numpy as np
import pytest

from conftest import leaf_only_tree, make_fixture_tree
from gsvtree.trees import (
    ModelError,
    Tree,
    TreeEnsemble,
    import_xgboost_dump,
    parse_native,
    serialize_native,
    tree_metrics,
    validate_ensemble,
)

DEPTH1_NATIVE = json.dumps({
    "base_value": 0.0,
    "feature_names": ["f0"],
    "trees": [{"nodes": [
        {"feature": 0, "threshold": 0.5, "left": 1, "right": 2,
         "value": 0.0, "cover": 4.0},
        {"feature": None, "threshold": None, "left": None, "right": None,
         "value": 2.0, "cover": 3.0},
        {"feature": None, "threshold": None, "left": None, "right": None,
         "value": 10.0, "cover": 1.0},
    ]}],
})


def native_doc(**overrides) -> dict:
    doc = json.loads(DEPTH1_NATIVE)
    doc.update(overrides)
    return doc


class TestParseNative:
    def test_depth1_tree_parses_and_validates(self):
        ensemble = parse_native(DEPTH1_NATIVE)
        assert len(ensemble.trees) == 1
        assert ensemble.feature_count == 1
        assert ensemble.comparator == "le"
        tree = ensemble.trees[0]
        assert tree.n_leaves == 2
        assert tree.max_depth == 1
        assert ensemble.predict(np.array([0.5])) == 2.0   # boundary goes left
        assert ensemble.predict(np.array([0.6])) == 10.0
        assert tree.leaf_mean() == pytest.approx(4.0)

    def test_round_trip(self, fixture_ensemble):
        again = parse_native(serialize_native(fixture_ensemble))
        assert again.feature_count == fixture_ensemble.feature_count
        assert again.base_value == fixture_ensemble.base_value
        assert again.comparator == fixture_ensemble.comparator
        assert again.feature_names == fixture_ensemble.feature_names
        for a, b in zip(again.trees, fixture_ensemble.trees):
            np.testing.assert_array_equal(a.children_left, b.children_left)
            np.testing.assert_array_equal(a.children_right, b.children_right)
            np.testing.assert_array_equal(a.feature, b.feature)
            np.testing.assert_array_equal(a.threshold, b.threshold)
            np.testing.assert_array_equal(a.value, b.value)
            np.testing.assert_array_equal(a.cover, b.cover)

    def test_comparator_lt_honored(self):
        ensemble = parse_native(json.dumps(native_doc(comparator="lt")))
        assert ensemble.strict
        assert ensemble.predict(np.array([0.5])) == 10.0  # boundary goes right

    def test_bad_comparator(self):
        with pytest.raises(ModelError, match="comparator"):
            parse_native(json.dumps(native_doc(comparator="ge")))

    def test_malformed_json(self):
        with pytest.raises(ModelError, match="malformed JSON"):
            parse_native("{not json")

    @pytest.mark.parametrize("text,message", [
        ("[]", "'trees'"),
        ('{"trees": []}', "no trees"),
        ('{"trees": [{}]}', "nodes"),
        ('{"trees": [{"nodes": []}]}', "nodes"),
    ])
    def test_structural_errors(self, text, message):
        with pytest.raises(ModelError, match=message):
            parse_native(text)

    def test_feature_names_length_mismatch(self):
        with pytest.raises(ModelError, match="feature names"):
            parse_native(json.dumps(native_doc(feature_names=["a", "b"],
                                               feature_count=1)))

    def test_base_value_carried(self):
        ensemble = parse_native(json.dumps(native_doc(base_value=1.5)))
        assert ensemble.predict(np.array([0.0])) == 3.5


class TestValidation:
    def mutate(self, **kw) -> Tree:
        tree = make_fixture_tree()
        arrays = {
            "children_left": tree.children_left.copy(),
            "children_right": tree.children_right.copy(),
            "feature": tree.feature.copy(),
            "threshold": tree.threshold.copy(),
            "value": tree.value.copy(),
            "cover": tree.cover.copy(),
        }
        for key, (idx, val) in kw.items():
            arrays[key][idx] = val
        return Tree(**arrays)

    def check(self, tree: Tree, message: str, feature_count: int = 2) -> None:
        with pytest.raises(ModelError, match=message):
            validate_ensemble(TreeEnsemble(trees=(tree,),
                                           feature_count=feature_count))

    def test_valid_fixture_passes(self, fixture_ensemble):
        assert validate_ensemble(fixture_ensemble) is fixture_ensemble

    def test_dangling_child(self):
        self.check(self.mutate(children_left=(1, 9)), "invalid child")

    def test_one_child_node(self):
        self.check(self.mutate(children_right=(1, -1)), "exactly one child")

    def test_nonpositive_cover(self):
        self.check(self.mutate(cover=(0, 0.0)), "non-positive cover")
        self.check(self.mutate(cover=(0, -3.0)), "non-positive cover")

    def test_cover_mismatch(self):
        self.check(self.mutate(cover=(3, 2.5)), "cover")

    def test_cover_slack_within_tolerance(self):
        tree = self.mutate(cover=(3, 2.0 + 5e-6))  # rtol is on parent cover 6
        validate_ensemble(TreeEnsemble(trees=(tree,), feature_count=2))

    def test_feature_out_of_range(self):
        self.check(self.mutate(feature=(1, 7)), "splits on feature")

    def test_node_reached_twice(self):
        self.check(self.mutate(children_right=(1, 3)), "reached twice")

    def test_unreachable_node(self):
        tree = make_fixture_tree()
        extra = Tree(
            np.append(tree.children_left, -1).astype(np.int32),
            np.append(tree.children_right, -1).astype(np.int32),
            np.append(tree.feature, -1).astype(np.int32),
            np.append(tree.threshold, 0.0),
            np.append(tree.value, 1.0),
            np.append(tree.cover, 1.0),
        )
        self.check(extra, "unreachable")

    def test_non_finite_threshold(self):
        self.check(self.mutate(threshold=(0, float("nan"))), "threshold")

    def test_no_trees(self):
        with pytest.raises(ModelError, match="no trees"):
            validate_ensemble(TreeEnsemble(trees=(), feature_count=1))


class TestPredict:
    def test_fixture_paths(self, fixture_ensemble):
        assert fixture_ensemble.predict(np.array([0.3, 0.2])) == 1.0
        assert fixture_ensemble.predict(np.array([0.3, 0.8])) == 3.0
        assert fixture_ensemble.predict(np.array([0.9, 0.1])) == 5.0

    def test_shape_guard(self, fixture_ensemble):
        with pytest.raises(ValueError, match="shape"):
            fixture_ensemble.predict(np.zeros(3))

    def test_dense_guard(self, fixture_ensemble):
        with pytest.raises(ValueError, match="finite"):
            fixture_ensemble.predict(np.array([0.3, np.nan]))

    def test_multi_tree_sum(self, fixture_tree):
        ensemble = validate_ensemble(TreeEnsemble(
            trees=(fixture_tree, leaf_only_tree(2.5)),
            feature_count=2, base_value=1.0))
        assert ensemble.predict(np.array([0.3, 0.8])) == pytest.approx(6.5)


XGB_STUMP = json.dumps([{
    "nodeid": 0, "depth": 0, "split": "f0", "split_condition": 0.5,
    "yes": 1, "no": 2, "missing": 1, "cover": 10.0,
    "children": [
        {"nodeid": 1, "leaf": -1.0, "cover": 6.0},
        {"nodeid": 2, "leaf": 2.0, "cover": 4.0},
    ],
}])


class TestXgboostImport:
    def test_stump(self):
        ensemble = import_xgboost_dump(XGB_STUMP, base_value=0.5)
        assert ensemble.comparator == "lt"
        assert ensemble.feature_count == 1
        assert ensemble.predict(np.array([0.3])) == pytest.approx(-0.5)
        assert ensemble.predict(np.array([0.5])) == pytest.approx(2.5)
        np.testing.assert_array_equal(ensemble.trees[0].missing, [1, -1, -1])

    def test_nested_tree(self):
        dump = json.dumps([{
            "nodeid": 0, "split": "f1", "split_condition": 0.4,
            "yes": 1, "no": 2, "missing": 2, "cover": 9.0,
            "children": [
                {"nodeid": 1, "split": "f0", "split_condition": 0.7,
                 "yes": 3, "no": 4, "missing": 3, "cover": 5.0,
                 "children": [
                     {"nodeid": 3, "leaf": 1.0, "cover": 2.0},
                     {"nodeid": 4, "leaf": 2.0, "cover": 3.0},
                 ]},
                {"nodeid": 2, "leaf": 3.0, "cover": 4.0},
            ],
        }])
        ensemble = import_xgboost_dump(dump)
        assert ensemble.feature_count == 2
        tree = ensemble.trees[0]
        assert tree.n_leaves == 3
        assert tree.max_depth == 2
        assert ensemble.predict(np.array([0.9, 0.1])) == 2.0
        assert ensemble.predict(np.array([0.0, 0.9])) == 3.0

    def test_feature_name_resolution(self):
        dump = json.loads(XGB_STUMP)
        dump[0]["split"] = "temperature"
        ensemble = import_xgboost_dump(json.dumps(dump),
                                       feature_names=["temperature"])
        assert ensemble.feature_count == 1
        assert ensemble.trees[0].feature[0] == 0

    def test_unresolvable_feature(self):
        dump = json.loads(XGB_STUMP)
        dump[0]["split"] = "temperature"
        with pytest.raises(ModelError, match="resolve"):
            import_xgboost_dump(json.dumps(dump))

    def test_no_trees(self):
        with pytest.raises(ModelError, match="no trees"):
            import_xgboost_dump("[]")

    def test_missing_child(self):
        dump = json.loads(XGB_STUMP)
        dump[0]["no"] = 99
        with pytest.raises(ModelError, match="not present"):
            import_xgboost_dump(json.dumps(dump))

    def test_unknown_fields_rejected(self):
        dump = json.loads(XGB_STUMP)
        dump[0]["surprise"] = 1
        with pytest.raises(ModelError, match="unsupported"):
            import_xgboost_dump(json.dumps(dump))

    def test_single_object_accepted(self):
        ensemble = import_xgboost_dump(json.dumps(json.loads(XGB_STUMP)[0]))
        assert len(ensemble.trees) == 1

    def test_oracle_agreement_after_import(self):
        from gsvtree.groups import singleton_partition
        from gsvtree.fast import ensemble_gsv
        from gsvtree.oracle import brute_force_classic

        ensemble = import_xgboost_dump(XGB_STUMP, base_value=0.5)
        x = np.array([0.3])
        fast = ensemble_gsv(ensemble, x, singleton_partition(1))
        oracle = brute_force_classic(ensemble, x)
        np.testing.assert_allclose(fast.values, oracle.values, rtol=1e-12)
        assert fast.base == pytest.approx(0.5 + 0.6 * -1.0 + 0.4 * 2.0)


class TestMetrics:
    def test_fixture_metrics(self, fixture_ensemble):
        m = tree_metrics(fixture_ensemble)
        assert (m.tree_count, m.max_leaves, m.max_depth) == (1, 3, 2)

    def test_mixed_ensemble(self, fixture_tree):
        ensemble = validate_ensemble(TreeEnsemble(
            trees=(leaf_only_tree(), fixture_tree), feature_count=2))
        m = tree_metrics(ensemble)
        assert (m.tree_count, m.max_leaves, m.max_depth) == (2, 3, 2)
