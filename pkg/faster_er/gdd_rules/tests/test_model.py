# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
import random
from dataclasses import replace
import string

import pytest

from faster_er.gdd_rules import (
    TOTAL_ROW,
    DemandPredicate,
    DistanceConstraint,
    GddRule,
    edit_distance,
    entity_demand,
    eval_constraint,
    eval_demand,
    filter_matches,
    rule_selectivity_report,
)
from faster_er.pattern_match import (
    GraphPattern,
    PatternEdge,
    PatternNode,
    candidate_pairs,
    enumerate_matches,
)
from faster_er.testing import build_graph

VIEWERS_WEIGHTS = {
    ("v2", "v5"): 1,
    ("v11", "v12"): 1,
    ("v3", "v10"): 1,
    ("v3", "v11"): 2,
    ("v4", "v11"): 2,
    ("v4", "v10"): 2,
    ("v10", "v11"): 2,
    ("v3", "v4"): 2,
}


def pair_graph(a_attrs, b_attrs):
    return build_graph(
        [("a", "user", a_attrs), ("b", "user", b_attrs),
         ("p", "platform", {})],
        [("a", "watched", "p"), ("b", "watched", "p")])


def pattern():
    return GraphPattern(
        [PatternNode("x", "user"), PatternNode("x'", "user"),
         PatternNode("y", "platform")],
        [PatternEdge("x", "watched", "y"), PatternEdge("x'", "watched", "y")],
        ("x", "x'"))


def attr_rule(rule_id, attr, metric, threshold, q=None):
    q = q or pattern()
    return GddRule(
        rule_id, q,
        [DistanceConstraint("attr_attr", ("x", "x'"), (attr, attr), metric,
                            threshold)],
        [DistanceConstraint("eid_eid", ("x", "x'"))])


BINDING = {"x": "a", "x'": "b", "y": "p"}


class TestEvalConstraint:
    """Distance constraints on one binding"""

    def test_edit(self):
        g = pair_graph({"Name": "kitten"}, {"Name": "sitting"})
        c = DistanceConstraint("attr_attr", ("x", "x'"), ("Name",), "edit", 3)
        assert eval_constraint(c, BINDING, g)
        c = DistanceConstraint("attr_attr", ("x", "x'"), ("Name",), "edit", 2)
        assert not eval_constraint(c, BINDING, g)

    def test_edit_is_case_sensitive(self):
        assert edit_distance("Smith", "smith") == 1
        assert edit_distance("kitten", "sitting") == 3

    def test_absdiff(self):
        g = pair_graph({"Age": 19}, {"Age": 19})
        c = DistanceConstraint("attr_attr", ("x", "x'"), ("Age",), "absdiff",
                               0)
        assert eval_constraint(c, BINDING, g)
        g = pair_graph({"Age": 19}, {"Age": 22})
        assert not eval_constraint(c, BINDING, g)

    def test_two_attributes(self):
        g = pair_graph({"Phone": "555-1234"}, {"Mobile": "555-1234"})
        c = DistanceConstraint("attr_attr", ("x", "x'"), ("Phone", "Mobile"))
        assert eval_constraint(c, BINDING, g)

    def test_attr_const(self):
        g = pair_graph({"City": "Boston"}, {})
        c = DistanceConstraint("attr_const", ("x",), ("City",), "edit", 1,
                               "Bostn")
        assert eval_constraint(c, BINDING, g)
        absent = DistanceConstraint("attr_const", ("x'",), ("City",), "edit",
                                    1, "Bostn")
        assert not eval_constraint(absent, BINDING, g)

    def test_numeric_constant(self):
        g = pair_graph({"Age": 30}, {})
        c = DistanceConstraint("attr_const", ("x",), ("Age",), "absdiff", 2,
                               "31")
        assert c.constant == 31.0
        assert eval_constraint(c, BINDING, g)

    @pytest.mark.parametrize("metric, left, right", [
        ("edit", 19, 19),
        ("absdiff", "Smith", "Smith"),
        ("exact", "19x", 19),
    ])
    def test_type_mismatch_is_unsatisfied(self, metric, left, right):
        g = pair_graph({"A": left}, {"A": right})
        c = DistanceConstraint("attr_attr", ("x", "x'"), ("A",), metric, 5)
        assert not eval_constraint(c, BINDING, g)

    def test_eid(self):
        g = pair_graph({}, {})
        c = DistanceConstraint("eid_eid", ("x", "x'"))
        assert not eval_constraint(c, BINDING, g)
        assert eval_constraint(c, BINDING, g, {"a": "e1", "b": "e1"})
        assert not eval_constraint(c, BINDING, g, {"a": "e1", "b": "e2"})
        assert not eval_constraint(c, BINDING, g, {"a": "e1"})
        const = DistanceConstraint("eid_const", ("x",), constant="e1")
        assert eval_constraint(const, BINDING, g, {"a": "e1"})

    def test_relations(self, viewers_graph):
        binding = {"x": "v3", "x'": "v11", "y": "v7"}
        watched = DistanceConstraint(
            "rela_const", ("x",), ("watched",), constant="v7")
        assert eval_constraint(watched, binding, viewers_graph)
        label_only = DistanceConstraint("rela_const", ("x",), constant="uses")
        assert eval_constraint(label_only, binding, viewers_graph)
        shared = DistanceConstraint("rela_rela", ("x", "x'"), ("uses",))
        assert eval_constraint(shared, binding, viewers_graph)
        binding = {"x": "v4", "x'": "v11", "y": "v7"}
        assert not eval_constraint(shared, binding, viewers_graph)
        assert not eval_constraint(label_only, binding, viewers_graph)

    @pytest.mark.parametrize("seed", range(10))
    def test_symmetric_attr_attr(self, seed):
        rng = random.Random(seed)
        words = ["".join(rng.choice("abc") for _ in range(rng.randint(0, 6)))
                 for _ in range(2)]
        g = pair_graph({"N": words[0]}, {"N": words[1]})
        c = DistanceConstraint("attr_attr", ("x", "x'"), ("N",), "edit",
                               rng.randint(0, 4))
        swapped = {"x": "b", "x'": "a", "y": "p"}
        assert eval_constraint(c, BINDING, g) == \
            eval_constraint(c, swapped, g)

    @pytest.mark.parametrize("seed", range(20))
    def test_edit_triangle_inequality(self, seed):
        rng = random.Random(seed)
        a, b, c = (
            "".join(rng.choice(string.ascii_letters[:5])
                    for _ in range(rng.randint(0, 8)))
            for _ in range(3))
        assert edit_distance(a, c) <= edit_distance(a, b) + \
            edit_distance(b, c)


class TestDemandPredicate:
    """Selection predicates"""

    def test_numbers(self):
        p = DemandPredicate("x", "Age", ">", 18)
        assert p.value == 18.0
        assert p.holds({"Age": 19.0})
        assert not p.holds({"Age": 18.0})
        assert not p.holds({})
        assert not p.holds({"Age": "nineteen"})

    def test_aliases(self):
        assert DemandPredicate("x", "Age", "≥", 18).op == ">="
        assert DemandPredicate("x", "Age", "≤", 18).op == "<="

    def test_text(self):
        assert DemandPredicate("x", "City", "<", "Boston").holds(
            {"City": "Austin"})
        assert DemandPredicate("x", "City", "contains", "ost").holds(
            {"City": "Boston"})
        assert DemandPredicate("x", "City", "=", "Boston").holds(
            {"City": "Boston"})

    def test_contains_needs_text(self):
        with pytest.raises(ValueError):
            DemandPredicate("x", "Age", "contains", 3)

    def test_unknown_operator(self):
        with pytest.raises(ValueError):
            DemandPredicate("x", "Age", "!=", 3)

    def test_entity_demand(self, viewers_query):
        preds = entity_demand(viewers_query.demand, ("x", "x'"))
        assert [str(p) for p in preds] == ["x.Age > 18.0"]
        assert entity_demand(viewers_query.demand, None) == []

    def test_eval_demand(self):
        preds = [DemandPredicate("x", "Age", ">", 18),
                 DemandPredicate("x", "City", "=", "Boston")]
        assert eval_demand(preds, {"Age": 30.0, "City": "Boston"}) == []
        assert eval_demand(preds, {"Age": 17.0, "City": "Boston"}) == \
            preds[:1]


class TestFilterMatches:
    """Stage 2 filtering"""

    def test_viewers_weights(self, viewers_graph, viewers_query):
        matches = enumerate_matches(
            viewers_graph, viewers_query.pattern, viewers_query.demand)
        filtered = filter_matches(
            matches, list(viewers_query.rules), viewers_graph)
        assert {pair: len(ids) for pair, ids in filtered} == VIEWERS_WEIGHTS
        assert dict(filtered)[("v3", "v4")] == {"last-name", "age"}
        assert dict(filtered)[("v11", "v12")] == {"phone"}
        assert [pair for pair, _ in filtered][:3] == [
            ("v2", "v5"), ("v3", "v4"), ("v3", "v10")]

    def test_subset_of_candidates(self, viewers_graph, viewers_query):
        matches = enumerate_matches(viewers_graph, viewers_query.pattern)
        candidates = set(candidate_pairs(matches, viewers_query.pattern))
        for pair, _ in filter_matches(
                matches, list(viewers_query.rules), viewers_graph):
            assert pair in candidates

    def test_no_rule_holds(self, viewers_graph, viewers_query):
        q = viewers_query.pattern
        rule = GddRule(
            "nobody", q,
            [DistanceConstraint("attr_const", ("x",), ("LastName",), "edit",
                                0, "Nobody")],
            [DistanceConstraint("eid_eid", ("x", "x'"))])
        matches = enumerate_matches(viewers_graph, q)
        assert filter_matches(matches, [rule], viewers_graph) == []
        assert filter_matches(matches, [], viewers_graph) == []

    def test_two_of_four_rules(self):
        g = pair_graph(
            {"LastName": "Smith", "FirstName": "Ann", "Phone": "111-2222",
             "Age": 40},
            {"LastName": "Smith", "FirstName": "Bartholomew",
             "Phone": "999-8888", "Age": 40})
        rules = [
            attr_rule("last-name", "LastName", "edit", 3),
            attr_rule("first-name", "FirstName", "edit", 3),
            attr_rule("phone", "Phone", "edit", 3),
            attr_rule("age", "Age", "absdiff", 0),
        ]
        filtered = filter_matches(
            enumerate_matches(g, pattern()), rules, g)
        assert filtered == [(("a", "b"), frozenset(["last-name", "age"]))]

    def test_rule_counted_once_per_pair(self):
        g = build_graph(
            [("a", "user", {"N": "x"}), ("b", "user", {"N": "x"}),
             ("p1", "platform", {}), ("p2", "platform", {})],
            [("a", "watched", "p1"), ("b", "watched", "p1"),
             ("a", "watched", "p2"), ("b", "watched", "p2")])
        matches = enumerate_matches(g, pattern())
        assert len(matches) == 2
        filtered = filter_matches(
            matches, [attr_rule("n", "N", "exact", 0)], g)
        assert filtered == [(("a", "b"), frozenset(["n"]))]

    def test_conjunction_never_grows(self, viewers_graph, viewers_query):
        q = viewers_query.pattern
        loose = attr_rule("r", "LastName", "edit", 3, q)
        strict = GddRule("r", q, loose.lhs + (DistanceConstraint(
            "attr_attr", ("x", "x'"), ("Age",), "absdiff", 0),), loose.rhs)
        matches = enumerate_matches(viewers_graph, q, viewers_query.demand)
        wide = {p for p, _ in filter_matches(matches, [loose], viewers_graph)}
        narrow = {
            p for p, _ in filter_matches(matches, [strict], viewers_graph)}
        assert narrow <= wide
        assert narrow == {("v3", "v4"), ("v10", "v11")}


class TestSelectivity:
    """Per rule retention report"""

    def test_viewers(self, viewers_graph, viewers_query):
        rows = {r.rule_id: r for r in
                rule_selectivity_report(viewers_query, viewers_graph)}
        assert rows["age"].retained == 2
        assert rows["age"].candidates == 11
        assert rows["last-name"].retained == 7
        assert rows["first-name"].retained == 3
        assert rows["phone"].retained == 1
        assert rows[TOTAL_ROW].retained == 8
        assert rows[TOTAL_ROW].retention == pytest.approx(8 / 11)
        assert all(r.type_mismatches == 0 for r in rows.values())

    def test_rule_without_pairs(self, viewers_graph, viewers_query):
        q = viewers_query.pattern
        rule = GddRule(
            "nobody", q,
            [DistanceConstraint("attr_const", ("x",), ("LastName",), "edit",
                                0, "Nobody")],
            [DistanceConstraint("eid_eid", ("x", "x'"))])
        query = replace(viewers_query, rules=(rule,))
        rows = rule_selectivity_report(query, viewers_graph)
        assert rows[0].retained == 0
        assert rows[0].retention == 0.0

    def test_identical_rules(self, viewers_graph, viewers_query):
        q = viewers_query.pattern
        query = replace(viewers_query, rules=(
            attr_rule("a", "LastName", "edit", 3, q),
            attr_rule("b", "LastName", "edit", 3, q)))
        first, second, _ = rule_selectivity_report(query, viewers_graph)
        assert (first.retained, first.retention) == \
            (second.retained, second.retention)

    def test_type_mismatch_column(self, viewers_graph, viewers_query):
        q = viewers_query.pattern
        query = replace(viewers_query, rules=(
            attr_rule("age-edit", "Age", "edit", 3, q),))
        rows = rule_selectivity_report(query, viewers_graph)
        assert rows[0].retained == 0
        assert rows[0].type_mismatches == 11
