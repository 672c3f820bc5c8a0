# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
import json
import os

import pytest

from faster_er.cli import EXIT_INPUT, EXIT_OK, EXIT_RUNTIME, main
from faster_er.fixtures import fixture_path


def graph_args(name="viewers", query=None):
    return [
        "--graph-nodes", fixture_path(name, "nodes.csv"),
        "--graph-edges", fixture_path(name, "edges.csv"),
        "--query", query or fixture_path(name, "query.json"),
    ]


def oracle_args(name="viewers", truth=None):
    return [
        "--matcher", "oracle",
        "--ground-truth", truth or fixture_path(name, "ground_truth.csv"),
    ]


def emitted(out):
    return [json.loads(line) for line in out.splitlines() if line]


def viewers_query_with(tmp_path, **changes):
    with open(fixture_path("viewers", "query.json")) as fp:
        data = json.load(fp)
    data.update(changes)
    path = tmp_path / "query.json"
    path.write_text(json.dumps(data))
    return str(path)


class TestQuery:

    def test_stream(self, capsys):
        assert main(["query"] + graph_args() + oracle_args()) == EXIT_OK
        out, err = capsys.readouterr()
        lines = emitted(out)
        assert [line["members"] for line in lines] == [
            ["v3", "v4"], ["v3", "v4", "v10"], ["v3", "v4", "v10", "v11"]]
        stats = json.loads(err.strip().splitlines()[-1])
        assert stats["comparisons"] == 3
        assert stats["pruned"] == 3
        assert lines[0]["elapsed_ms"] <= stats["elapsed_ms"]

    def test_without_transitivity(self, capsys):
        assert main(["query"] + graph_args() + oracle_args()
                    + ["--disable", "T"]) == EXIT_OK
        stats = json.loads(capsys.readouterr()[1].strip().splitlines()[-1])
        assert stats["comparisons"] == 5

    def test_max_results(self, capsys):
        assert main(["query"] + graph_args() + oracle_args()
                    + ["--max-results", "1"]) == EXIT_OK
        assert len(emitted(capsys.readouterr()[0])) == 1

    def test_stats_file(self, tmp_path, capsys):
        path = tmp_path / "stats.json"
        assert main(["query"] + graph_args() + oracle_args()
                    + ["--stats", str(path)]) == EXIT_OK
        assert json.loads(path.read_text())["mode"] == "full"

    def test_stats_in_output_dir(self, tmp_path, capsys):
        assert main(["query"] + graph_args() + oracle_args()
                    + ["--out", str(tmp_path)]) == EXIT_OK
        assert os.path.exists(str(tmp_path / "query-stats.json"))

    def test_dump_blocking(self, tmp_path, capsys):
        path = tmp_path / "blocking.csv"
        assert main(["query"] + graph_args() + oracle_args()
                    + ["--dump-blocking", str(path)]) == EXIT_OK
        assert path.read_text().splitlines()[0] == "pid_a,pid_b,weight,rules"

    def test_similarity_matcher(self, capsys):
        assert main(["query"] + graph_args()
                    + ["--matcher-attrs", "LastName,City", "--tau", "0.5"]
                    ) == EXIT_OK
        assert emitted(capsys.readouterr()[0])

    def test_arcs(self, capsys):
        assert main(["query"] + graph_args() + oracle_args()
                    + ["--weighting", "arcs", "--threshold", "0.4"]
                    ) == EXIT_OK
        stats = json.loads(capsys.readouterr()[1].strip().splitlines()[-1])
        assert stats["weighting"] == "arcs"

    def test_unsatisfiable_demand(self, tmp_path, capsys):
        query = viewers_query_with(tmp_path, demand=[
            {"var": "x", "attr": "Age", "op": ">", "value": 100}])
        assert main(["query"] + graph_args(query=query)
                    + oracle_args()) == EXIT_OK
        assert capsys.readouterr()[0] == ""

    def test_oracle_needs_ground_truth(self, capsys):
        assert main(["query"] + graph_args()
                    + ["--matcher", "oracle"]) == EXIT_INPUT
        assert "--ground-truth" in capsys.readouterr()[1]

    def test_unknown_matcher(self, capsys):
        assert main(["query"] + graph_args()
                    + ["--matcher", "magic"]) == EXIT_INPUT

    def test_unknown_component(self, capsys):
        assert main(["query"] + graph_args() + oracle_args()
                    + ["--disable", "X"]) == EXIT_INPUT

    def test_missing_ground_truth_row(self, tmp_path, capsys):
        truth = tmp_path / "truth.csv"
        truth.write_text("pid,eid\nv3,e-patrick\n")
        assert main(["query"] + graph_args()
                    + oracle_args(truth=str(truth))) == EXIT_RUNTIME
        assert "v4" in capsys.readouterr()[1]

    def test_missing_option(self):
        with pytest.raises(SystemExit) as exc:
            main(["query", "--query", "q.json"])
        assert exc.value.code == 2


class TestValidate:

    def test_ok(self, capsys):
        assert main(["validate"] + graph_args()) == EXIT_OK
        assert capsys.readouterr()[0].startswith(
            "ok: 12 nodes, 11 edges, 4 rule(s), 2 demand predicate(s)")

    def test_dangling_edge(self, tmp_path, capsys):
        edges = tmp_path / "edges.csv"
        edges.write_text("src,label,dst\nv1,watched,v99\n")
        args = graph_args()
        args[3] = str(edges)
        assert main(["validate"] + args) == EXIT_INPUT
        err = capsys.readouterr()[1]
        assert "v99" in err
        assert ":2" in err

    def test_number_too_large(self, tmp_path, capsys):
        nodes = tmp_path / "nodes.csv"
        nodes.write_text(
            'id,label,attrs\nv1,user,"{""Age"":1%s}"\n' % ("0" * 400))
        edges = tmp_path / "edges.csv"
        edges.write_text("src,label,dst\n")
        args = graph_args()
        args[1], args[3] = str(nodes), str(edges)
        assert main(["validate"] + args) == EXIT_INPUT
        assert ":2" in capsys.readouterr()[1]

    def test_undeclared_variable(self, tmp_path, capsys):
        query = viewers_query_with(tmp_path, demand=[
            {"var": "z", "attr": "Age", "op": ">", "value": 18}])
        assert main(["validate"] + graph_args(query=query)) == EXIT_INPUT
        assert "'z'" in capsys.readouterr()[1]

    def test_missing_file(self, tmp_path, capsys):
        args = graph_args()
        args[1] = str(tmp_path / "none.csv")
        assert main(["validate"] + args) == EXIT_INPUT


class TestBench:

    def test_report(self, tmp_path, capsys):
        assert main(["bench"] + graph_args() + oracle_args()
                    + ["--k", "1", "3", "--name", "viewers",
                       "--out", str(tmp_path)]) == EXIT_OK
        paths = capsys.readouterr()[0].split()
        assert [os.path.basename(p) for p in paths] == [
            "viewers-report.json", "viewers-recall-curve.csv"]
        with open(paths[0]) as fp:
            report = json.load(fp)
        assert report["err_at_k"] == {"1": 0.0, "3": 0.0}

    def test_needs_ground_truth(self, tmp_path, capsys):
        assert main(["bench"] + graph_args()
                    + ["--out", str(tmp_path)]) == EXIT_INPUT

    def test_needs_output_dir(self, capsys):
        assert main(["bench"] + graph_args() + oracle_args()) == EXIT_INPUT


class TestAblate:

    def test_table(self, tmp_path, capsys):
        assert main(["ablate"] + graph_args() + oracle_args()
                    + ["--out", str(tmp_path)]) == EXIT_OK
        lines = capsys.readouterr()[0].splitlines()
        assert [line.split(",")[0] for line in lines[:5]] == [
            "full", "no-rf", "no-b", "no-pps", "no-t"]
        assert lines[5].endswith("faster-ablation.csv")


class TestGen:

    def test_files(self, tmp_path, capsys):
        assert main(["gen", "--entities", "30", "--seed", "4",
                     "--out", str(tmp_path)]) == EXIT_OK
        assert sorted(os.listdir(str(tmp_path))) == [
            "edges.csv", "ground_truth.csv", "nodes.csv", "query.json"]
        assert main(["validate",
                     "--graph-nodes", str(tmp_path / "nodes.csv"),
                     "--graph-edges", str(tmp_path / "edges.csv"),
                     "--query", str(tmp_path / "query.json"),
                     "--ground-truth", str(tmp_path / "ground_truth.csv"),
                     ]) == EXIT_OK

    def test_needs_output_dir(self, capsys):
        assert main(["gen", "--entities", "30"]) == EXIT_INPUT

    def test_bad_rate(self, tmp_path, capsys):
        assert main(["gen", "--entities", "30", "--dup-rate", "2",
                     "--out", str(tmp_path)]) == EXIT_INPUT


class TestRules:

    def test_viewers(self, capsys):
        assert main(["rules"] + graph_args()) == EXIT_OK
        lines = capsys.readouterr()[0].splitlines()
        assert lines[0] == \
            "rule,retained,candidates,retention,type_mismatches"
        assert "age,2,11,0.181818,0" in lines
        assert lines[-1].startswith("*,8,11,")
