# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
import csv
import json
import logging
import math

import pytest

from faster_er.exceptions import MissingGroundTruth
from faster_er.gdd_rules import entity_demand
from faster_er.matchers import OracleMatcher
from faster_er.metrics_bench import (
    NOT_AVAILABLE,
    ablation_suite,
    err_at_k,
    evaluate,
    format_tavg,
    found_pairs,
    ground_truth_pairs,
    is_error,
    query_ground_truth_pairs,
    query_recall,
    recall_curve,
    tavg,
    write_ablation,
    write_report,
)
from faster_er.metrics_bench.models import report_filename
from faster_er.pps_engine import EmittedEntity, RunConfig, run_pipeline


def oracle_run(fixture, **kwargs):
    g, q, truth = fixture
    return run_pipeline(
        g, q, OracleMatcher(ground_truth=truth), RunConfig(**kwargs))


def demand_of(q):
    return entity_demand(q.demand, q.pattern.duplicate_vars)


class TestFormulas:

    def test_query_recall(self):
        gt = {("a", "b"), ("c", "d")}
        assert query_recall({("a", "b"), ("a", "c")}, gt) == 0.5
        assert query_recall(set(), set()) == 1.0
        assert query_recall(set(), gt) == 0.0

    def test_tavg(self):
        assert tavg(100.0, 4) == 25.0
        assert math.isinf(tavg(100.0, 0))
        assert format_tavg(tavg(100.0, 0)) == NOT_AVAILABLE
        assert format_tavg(25.0) == 25.0

    def test_ground_truth_pairs(self):
        gt = {"a": "e1", "b": "e1", "c": "e1", "d": "e2"}
        assert ground_truth_pairs(gt) == {
            ("a", "b"), ("a", "c"), ("b", "c")}
        assert ground_truth_pairs(gt, pids={"a", "c", "d"}) == {("a", "c")}

    def test_query_ground_truth_pairs(self, viewers):
        pairs = query_ground_truth_pairs(*viewers)
        assert len(pairs) == 7
        assert ("v2", "v5") in pairs
        assert ("v11", "v12") not in pairs


class TestErrAtK:

    def test_single_entity_and_demand(self, minor_merge):
        g, q, truth = minor_merge
        stats = oracle_run(minor_merge, validate_demand=False)
        first, second = stats.emissions
        assert is_error(first, demand_of(q), truth)
        assert not is_error(second, demand_of(q), truth)

    def test_mixed_entities(self):
        event = EmittedEntity("a", ("a", "b"), 1, 1.0, True)
        assert is_error(event, [], {"a": "e1", "b": "e2"})
        assert not is_error(event, [], {"a": "e1", "b": "e1"})
        with pytest.raises(MissingGroundTruth):
            is_error(event, [], {"a": "e1"})

    def test_without_validation(self, minor_merge):
        g, q, truth = minor_merge
        stats = oracle_run(minor_merge, validate_demand=False)
        assert err_at_k(stats.emissions, demand_of(q), truth, (1, 2)) == {
            1: 1.0, 2: 0.5}

    def test_clipped(self, minor_merge, caplog):
        g, q, truth = minor_merge
        stats = oracle_run(minor_merge, validate_demand=False)
        with caplog.at_level(logging.WARNING):
            res = err_at_k(stats.emissions, demand_of(q), truth, (5,))
        assert res == {5: 0.5}
        assert "clipped" in caplog.text

    def test_no_emission(self):
        assert err_at_k([], [], {}, (1, 10)) == {1: 0.0, 10: 0.0}

    @pytest.mark.parametrize("name", ["viewers", "minor_merge"])
    def test_zero_with_validation(self, name, request):
        g, q, truth = request.getfixturevalue(name)
        report = evaluate(g, q, OracleMatcher(ground_truth=truth), truth)
        assert report.err_at_k
        assert set(report.err_at_k.values()) == {0.0}


class TestEvaluate:

    def test_viewers(self, viewers):
        g, q, truth = viewers
        report = evaluate(g, q, OracleMatcher(ground_truth=truth), truth,
                          ks=(1, 3))
        assert report.query_recall == pytest.approx(6 / 7)
        assert report.comparisons == 3
        assert report.recall_curve == [
            (0, 0.0), (1, pytest.approx(1 / 7)), (2, pytest.approx(3 / 7)),
            (3, pytest.approx(6 / 7))]
        assert not math.isinf(report.tavg_ms)
        data = report.to_dict()
        assert data["err_at_k"] == {"1": 0.0, "3": 0.0}
        assert data["run"]["comparisons"] == 3

    def test_nothing_found(self, viewers):
        g, q, truth = viewers
        report = evaluate(g, q, OracleMatcher(ground_truth=truth), truth,
                          RunConfig(threshold=5))
        assert report.query_recall == 0.0
        assert report.to_dict()["tavg_ms"] == NOT_AVAILABLE

    @pytest.mark.parametrize("fixture, options", [
        ("viewers", {"threshold": 1}),
        ("viewers", {"threshold": 1, "disable": {"T"}}),
        ("minor_merge", {"validate_demand": False}),
    ])
    def test_progressive(self, fixture, options, request):
        g, q, truth = request.getfixturevalue(fixture)
        stats = oracle_run((g, q, truth), **options)
        curve = recall_curve(stats, query_ground_truth_pairs(g, q, truth))
        recalls = [r for _, r in curve]
        assert recalls == sorted(recalls)
        assert len(stats.clusters()) > 1
        assert stats.emissions[0].emitted_at_comparisons < stats.comparisons

    def test_found_pairs(self, viewers):
        stats = oracle_run(viewers)
        assert len(found_pairs(stats)) == 6


class TestAblation:

    def test_viewers(self, viewers):
        g, q, truth = viewers
        rows = ablation_suite(
            g, q, OracleMatcher(ground_truth=truth), truth)
        by_mode = {row.mode: row for row in rows}
        assert [row.mode for row in rows] == [
            "full", "no-rf", "no-b", "no-pps", "no-t"]
        assert by_mode["full"].relative == 1.0
        assert by_mode["no-t"].comparisons == 5
        assert by_mode["no-t"].relative == pytest.approx(5 / 3)
        assert by_mode["no-t"].recall == by_mode["full"].recall

    def test_full_always_runs(self, viewers):
        g, q, truth = viewers
        rows = ablation_suite(
            g, q, OracleMatcher(ground_truth=truth), modes=("no-t",))
        assert [row.mode for row in rows] == ["full", "no-t"]
        assert rows[0].recall is None
        assert rows[1].to_row() == ["no-t", 5, pytest.approx(5 / 3), ""]


class TestWriters:

    def test_filename(self):
        assert report_filename("Viewers 2", "recall curve", "csv") == \
            "viewers-2-recall-curve.csv"

    def test_report(self, viewers, tmp_path):
        g, q, truth = viewers
        report = evaluate(g, q, OracleMatcher(ground_truth=truth), truth)
        json_path, curve_path = write_report(report, str(tmp_path), "viewers")
        assert json_path.endswith("viewers-report.json")
        with open(json_path) as fp:
            data = json.load(fp)
        assert data["comparisons"] == 3
        with open(curve_path, newline="") as fp:
            rows = list(csv.reader(fp))
        assert rows[0] == ["comparisons", "recall"]
        assert rows[1] == ["0", "0.0"]
        assert len(rows) == 5

    def test_ablation(self, viewers, tmp_path):
        g, q, truth = viewers
        rows = ablation_suite(
            g, q, OracleMatcher(ground_truth=truth), truth)
        path = write_ablation(rows, str(tmp_path / "out"), "viewers")
        with open(path, newline="") as fp:
            table = list(csv.reader(fp))
        assert table[0] == ["mode", "comparisons", "relative", "recall"]
        assert table[1][:3] == ["full", "3", "1.0"]
        assert len(table) == 6
