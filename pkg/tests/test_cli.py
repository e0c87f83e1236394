"""Command-line interface behavior, exit codes, and file outputs."""

from __future__ import annotations

import json

import numpy as np
import pytest
from click.testing import CliRunner

from conftest import FIXTURE_PHI, make_fixture_tree
from gsvtree.cli import main
from gsvtree.trees import TreeEnsemble, serialize_native, validate_ensemble


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def workdir(tmp_path):
    ensemble = validate_ensemble(TreeEnsemble(
        trees=(make_fixture_tree(),), feature_count=2,
        feature_names=("f0", "f1")))
    (tmp_path / "model.json").write_text(serialize_native(ensemble))
    (tmp_path / "data.csv").write_text(
        "row_id,f0,f1\n"
        "a,0.3,0.8\n"
        "b,0.9,0.1\n"
        "c,0.2,0.2\n")
    (tmp_path / "groups.json").write_text(json.dumps({
        "groups": [{"name": "first", "features": ["f0"]},
                   {"name": "second", "features": [1]}]}))
    return tmp_path


def args(workdir, *extra: str) -> list[str]:
    return ["--model", str(workdir / "model.json"),
            "--data", str(workdir / "data.csv"),
            "--groups", str(workdir / "groups.json"), *extra]


class TestExplain:
    def test_fixture_row(self, runner, workdir):
        result = runner.invoke(main, ["explain", *args(workdir, "--row", "0")])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert doc["base"] == pytest.approx(3.4)
        assert doc["prediction"] == pytest.approx(3.0)
        assert [g["name"] for g in doc["groups"]] == ["first", "second"]
        np.testing.assert_allclose([g["gsv"] for g in doc["groups"]],
                                   FIXTURE_PHI, atol=1e-9)

    def test_engines_agree_after_rounding(self, runner, workdir):
        fast = runner.invoke(main, ["explain", *args(workdir)])
        oracle = runner.invoke(main,
                               ["explain", *args(workdir, "--engine", "oracle")])
        assert fast.exit_code == oracle.exit_code == 0
        a = json.loads(fast.output)
        b = json.loads(oracle.output)
        rounded = [
            {**doc, "base": round(doc["base"], 9),
             "prediction": round(doc["prediction"], 9),
             "groups": [{"name": g["name"], "gsv": round(g["gsv"], 9)}
                        for g in doc["groups"]]}
            for doc in (a, b)
        ]
        assert rounded[0] == rounded[1]

    def test_default_partition_is_singletons(self, runner, workdir):
        result = runner.invoke(main, [
            "explain", "--model", str(workdir / "model.json"),
            "--data", str(workdir / "data.csv")])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert [g["name"] for g in doc["groups"]] == ["f0", "f1"]

    def test_row_out_of_range(self, runner, workdir):
        result = runner.invoke(main, ["explain", *args(workdir, "--row", "9")])
        assert result.exit_code == 2
        assert "out of range" in result.output

    def test_missing_groups_file_mentions_partition(self, runner, workdir):
        result = runner.invoke(main, [
            "explain", "--model", str(workdir / "model.json"),
            "--data", str(workdir / "data.csv"),
            "--groups", str(workdir / "nope.json")])
        assert result.exit_code == 2
        assert "partition" in result.output

    def test_missing_model_file(self, runner, workdir):
        result = runner.invoke(main, [
            "explain", "--model", str(workdir / "ghost.json"),
            "--data", str(workdir / "data.csv")])
        assert result.exit_code == 2

    def test_unreadable_csv(self, runner, workdir):
        (workdir / "bad.csv").write_text("f0,f1\nx,y\n")
        result = runner.invoke(main, [
            "explain", "--model", str(workdir / "model.json"),
            "--data", str(workdir / "bad.csv")])
        assert result.exit_code == 2

    def test_base_value_rejected_for_native(self, runner, workdir):
        result = runner.invoke(main, [
            "explain", *args(workdir, "--base-value", "1.5")])
        assert result.exit_code == 2
        assert "xgboost" in result.output

    def test_out_file(self, runner, workdir):
        out = workdir / "exp.json"
        result = runner.invoke(main, ["explain", *args(workdir),
                                      "--out", str(out)])
        assert result.exit_code == 0
        assert json.loads(out.read_text())["prediction"] == pytest.approx(3.0)

    def test_rest_group(self, runner, workdir):
        (workdir / "partial.json").write_text(json.dumps({
            "groups": [{"name": "first", "features": [0]}]}))
        result = runner.invoke(main, [
            "explain", "--model", str(workdir / "model.json"),
            "--data", str(workdir / "data.csv"),
            "--groups", str(workdir / "partial.json"),
            "--rest-group", "leftover"])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert [g["name"] for g in doc["groups"]] == ["first", "leftover"]


class TestExplainAll:
    def test_array_in_row_order(self, runner, workdir):
        result = runner.invoke(main, ["explain-all", *args(workdir)])
        assert result.exit_code == 0, result.output
        docs = json.loads(result.output)
        assert len(docs) == 3
        assert docs[0]["prediction"] == pytest.approx(3.0)
        assert docs[1]["prediction"] == pytest.approx(5.0)
        assert docs[2]["prediction"] == pytest.approx(1.0)

    def test_threads_do_not_change_output(self, runner, workdir):
        one = runner.invoke(main, ["explain-all", *args(workdir)])
        four = runner.invoke(main, ["explain-all",
                                    *args(workdir, "--threads", "4")])
        assert one.output == four.output


class TestValidate:
    def test_small_pass(self, runner):
        result = runner.invoke(main, ["validate", "--samples", "25",
                                      "--seed", "3"])
        assert result.exit_code == 0, result.output
        assert "PASS" in result.output

    def test_zero_tolerance_fails_reproducibly(self, runner):
        result = runner.invoke(main, ["validate", "--samples", "25",
                                      "--seed", "3", "--tolerance", "0"])
        assert result.exit_code == 1
        assert "violations at samples" in result.output

    def test_zero_samples_warns_and_passes(self, runner):
        result = runner.invoke(main, ["validate", "--samples", "0"])
        assert result.exit_code == 0
        assert "warning" in result.output
        assert "nothing was checked" in result.output

    def test_negative_tolerance_rejected(self, runner):
        result = runner.invoke(main, ["validate", "--tolerance", "-1"])
        assert result.exit_code == 2


class TestSwarm:
    def test_writes_both_files(self, runner, workdir):
        prefix = workdir / "plot"
        result = runner.invoke(main, ["swarm", *args(workdir),
                                      "--out", str(prefix)])
        assert result.exit_code == 0, result.output
        svg = (workdir / "plot.svg").read_text()
        csv_text = (workdir / "plot.csv").read_text()
        assert svg.count('<g class="swarm"') == 2
        assert csv_text.splitlines()[0] == \
            "row_id,group,gsv,color_value,raw_aggregate"
        assert len(csv_text.splitlines()) == 1 + 3 * 2

    def test_single_row_dataset(self, runner, workdir):
        (workdir / "one.csv").write_text("row_id,f0,f1\nonly,0.3,0.8\n")
        result = runner.invoke(main, [
            "swarm", "--model", str(workdir / "model.json"),
            "--data", str(workdir / "one.csv"),
            "--groups", str(workdir / "groups.json"),
            "--out", str(workdir / "single")])
        assert result.exit_code == 0, result.output
        assert (workdir / "single.svg").read_text().count("<circle") == 2

    def test_unreadable_csv_exits_2_without_partial_output(self, runner,
                                                           workdir):
        result = runner.invoke(main, [
            "swarm", "--model", str(workdir / "model.json"),
            "--data", str(workdir / "missing.csv"),
            "--groups", str(workdir / "groups.json"),
            "--out", str(workdir / "never")])
        assert result.exit_code == 2
        assert not (workdir / "never.svg").exists()
        assert not (workdir / "never.csv").exists()

    def test_deterministic_across_runs(self, runner, workdir):
        for prefix in ("d1", "d2"):
            runner.invoke(main, ["swarm", *args(workdir),
                                 "--seed", "5", "--out",
                                 str(workdir / prefix)])
        assert (workdir / "d1.svg").read_bytes() == \
            (workdir / "d2.svg").read_bytes()
        assert (workdir / "d1.csv").read_bytes() == \
            (workdir / "d2.csv").read_bytes()


class TestInspect:
    def test_metrics_json(self, runner, workdir):
        result = runner.invoke(main, ["inspect", "--model",
                                      str(workdir / "model.json")])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert doc["tree_count"] == 1
        assert doc["max_leaves"] == 3
        assert doc["max_depth"] == 2
        assert doc["feature_count"] == 2
        assert doc["comparator"] == "le"


class TestGloveDemo:
    def test_prints_reference_values(self, runner):
        result = runner.invoke(main, ["glove-demo"])
        assert result.exit_code == 0
        for needle in ("0.166667", "0.666667", "0.5", "0.333333"):
            assert needle in result.output

    def test_left_gloves_variant_keeps_half(self, runner):
        result = runner.invoke(main, ["glove-demo", "--left-gloves", "5"])
        assert result.exit_code == 0
        assert "0.500000" in result.output
        assert "0.833333" in result.output  # right player's classic share

    def test_zero_lefts_rejected(self, runner):
        result = runner.invoke(main, ["glove-demo", "--left-gloves", "0"])
        assert result.exit_code == 2
