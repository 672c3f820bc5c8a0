# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Graph differential dependency rules

Distance constraints over pattern variables, rules made of a conjunctive
left-hand side, and the Stage 2 filter keeping the candidate pairs that
satisfy at least one rule.
"""
from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, FrozenSet, List, Optional, Tuple

from rapidfuzz.distance import Levenshtein

from ..exceptions import BadThreshold, SchemaError, UndeclaredVariable
from ..graph_store import AttrValue, is_number, is_text, pair_key
from ..graph_store.models import coerce_value
from ..pattern_match import GraphPattern, Match, candidate_pairs
from ..pattern_match import enumerate_matches
from .predicates import DemandPredicate

logger = getLogger(__name__)

KINDS = (
    "attr_const", "attr_attr", "eid_const", "eid_eid",
    "rela_const", "rela_rela",
)
METRICS = ("edit", "absdiff", "exact")
WEIGHTINGS = ("count", "arcs")
AGGREGATES = ("min", "max", "avg", "vote", "any")


def edit_distance(a, b):
    """Unnormalized, case sensitive Levenshtein distance"""
    return Levenshtein.distance(a, b)


def metric_distance(metric, a, b):
    """Distance between two values, None when the metric does not apply"""
    if a is None or b is None:
        return None
    if metric == "edit":
        if is_text(a) and is_text(b):
            return edit_distance(a, b)
        return None
    if metric == "absdiff":
        if is_number(a) and is_number(b):
            return abs(a - b)
        return None
    if metric == "exact":
        if is_number(a) != is_number(b):
            return None
        return 0 if a == b else 1
    raise ValueError("unknown metric %r" % metric)


def metric_mismatch(metric, a, b):
    """True when both values are present but the metric cannot compare
    them (edit on numbers, absdiff on text, mixed types)"""
    if a is None or b is None:
        return False
    return metric_distance(metric, a, b) is None


@dataclass(frozen=True)
class DistanceConstraint:
    """One distance constraint; which fields matter depends on ``kind``:

    * attr_const: x.attrs[0] against ``constant``
    * attr_attr: x.attrs[0] against x'.attrs[1] (attrs[0] when only one)
    * eid_const / eid_eid: entity ids, exact only
    * rela_const: x has a relation labeled attrs[0] towards ``constant``,
      or, without attrs, any relation labeled ``constant``
    * rela_rela: x and x' share a neighbor through relations labeled
      attrs[0] (any label without attrs)
    """
    kind: str
    vars: Tuple[str, ...]
    attrs: Tuple[str, ...] = ()
    metric: str = "exact"
    threshold: float = 0
    constant: Optional[AttrValue] = None

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "attrs", tuple(self.attrs))
        if self.kind == "attr_const":
            object.__setattr__(self, "constant", coerce_value(self.constant))
        elif self.constant is not None:
            object.__setattr__(self, "constant", str(self.constant))

    def validate(self, where="constraint"):
        if self.kind not in KINDS:
            raise SchemaError(where, "unknown kind %r" % self.kind)
        if self.metric not in METRICS:
            raise SchemaError(where, "unknown metric %r" % self.metric)
        if self.threshold < 0:
            raise BadThreshold(self.threshold)
        two = self.kind in ("attr_attr", "eid_eid", "rela_rela")
        if len(self.vars) != (2 if two else 1):
            raise SchemaError(where, "%s takes %d variable(s)"
                              % (self.kind, 2 if two else 1))
        if two and self.vars[0] == self.vars[1]:
            raise SchemaError(where, "%s needs two distinct variables"
                              % self.kind)
        if self.kind.startswith(("eid", "rela")):
            if self.threshold != 0:
                raise BadThreshold(
                    self.threshold, "must be 0 for %s" % self.kind)
            if self.metric != "exact":
                raise SchemaError(where, "%s only supports the exact metric"
                                  % self.kind)
        if self.kind == "attr_const":
            if len(self.attrs) != 1:
                raise SchemaError(where, "attr_const needs one attribute")
            if self.constant is None:
                raise SchemaError(where, "attr_const needs a constant")
        if self.kind == "attr_attr" and len(self.attrs) not in (1, 2):
            raise SchemaError(where, "attr_attr needs one or two attributes")
        if self.kind in ("eid_const", "rela_const") and self.constant is None:
            raise SchemaError(where, "%s needs a constant" % self.kind)
        if self.kind.startswith("rela") and len(self.attrs) > 1:
            raise SchemaError(where, "%s takes at most one relation label"
                              % self.kind)

    @property
    def left_attr(self):
        return self.attrs[0] if self.attrs else None

    @property
    def right_attr(self):
        if len(self.attrs) > 1:
            return self.attrs[1]
        return self.left_attr

    def to_dict(self):
        res = {
            "kind": self.kind, "vars": list(self.vars),
            "metric": self.metric, "threshold": self.threshold,
        }
        if self.attrs:
            res["attrs"] = list(self.attrs)
        if self.constant is not None:
            res["constant"] = self.constant
        return res


@dataclass(frozen=True)
class GddRule:
    id: str
    pattern: GraphPattern
    lhs: Tuple[DistanceConstraint, ...]
    rhs: Tuple[DistanceConstraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(self.rhs))

    def validate(self):
        declared = set(self.pattern.vars)
        for side, constraints in (("lhs", self.lhs), ("rhs", self.rhs)):
            for i, constraint in enumerate(constraints):
                where = "rules/%s/%s/%d" % (self.id, side, i)
                constraint.validate(where)
                for var in constraint.vars:
                    if var not in declared:
                        raise UndeclaredVariable(var, where)
        if not self.rhs:
            raise SchemaError("rules/%s/rhs" % self.id, "rhs is empty")
        duplicates = self.pattern.duplicate_vars
        for i, constraint in enumerate(self.rhs):
            where = "rules/%s/rhs/%d" % (self.id, i)
            if duplicates is None:
                if constraint.kind not in ("eid_eid", "eid_const"):
                    raise SchemaError(where, "rhs must be eid-typed")
            elif constraint.kind != "eid_eid" or set(
                    constraint.vars) != set(duplicates):
                raise SchemaError(
                    where, "rhs must be eid_eid on the duplicate variables")

    def holds(self, m, g, ground_truth=None):
        return all(
            eval_constraint(c, m, g, ground_truth=ground_truth)
            for c in self.lhs)


@dataclass(frozen=True)
class Query:
    pattern: GraphPattern
    rules: Tuple[GddRule, ...]
    demand: Tuple[DemandPredicate, ...] = ()
    weighting: str = "count"
    threshold: float = 2
    aggregation: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "demand", tuple(self.demand))

    def validate(self):
        if not self.rules:
            raise SchemaError("rules", "a query needs at least one rule")
        if isinstance(self.threshold, bool) or not isinstance(
                self.threshold, (int, float)) or self.threshold < 0:
            raise BadThreshold(self.threshold)
        if self.weighting not in WEIGHTINGS:
            raise SchemaError("weighting", "unknown weighting %r"
                              % self.weighting)
        for attr, how in self.aggregation.items():
            if how not in AGGREGATES:
                raise SchemaError("aggregation/%s" % attr,
                                  "unknown aggregate %r" % how)
        declared = set(self.pattern.vars)
        for i, predicate in enumerate(self.demand):
            if predicate.var not in declared:
                raise UndeclaredVariable(predicate.var, "demand/%d" % i)
        ids = [r.id for r in self.rules]
        if len(set(ids)) != len(ids):
            raise SchemaError("rules", "rule ids must be unique")
        for rule in self.rules:
            if rule.pattern != self.pattern:
                raise SchemaError("rules/%s" % rule.id,
                                  "rules of a query share its pattern")
            rule.validate()
        return self


def _relations(g, node_id, label):
    h = g.handle(node_id)
    return {
        g.node_id(other) for lab, other in g.incident(h)
        if label is None or lab == label
    }


def eval_constraint(c: DistanceConstraint, m: Match, g,
                    ground_truth=None) -> bool:
    """True iff the constraint holds on the match.

    Absent attributes, unknown eids and type mismatches are unsatisfied.
    Entity ids come from ``ground_truth`` (pid -> eid) when given.
    """
    binding = m.binding if isinstance(m, Match) else m
    ids = [binding[v] for v in c.vars]
    if c.kind == "attr_const":
        value = g.node(ids[0]).attrs.get(c.left_attr)
        distance = metric_distance(c.metric, value, c.constant)
    elif c.kind == "attr_attr":
        left = g.node(ids[0]).attrs.get(c.left_attr)
        right = g.node(ids[1]).attrs.get(c.right_attr)
        distance = metric_distance(c.metric, left, right)
    elif c.kind in ("eid_const", "eid_eid"):
        if ground_truth is None:
            return False
        left = ground_truth.get(ids[0])
        if c.kind == "eid_const":
            right = c.constant
        else:
            right = ground_truth.get(ids[1])
        if left is None or right is None:
            return False
        return str(left) == str(right)
    elif c.kind == "rela_const":
        if c.left_attr is None:
            h = g.handle(ids[0])
            return any(lab == c.constant for lab, _ in g.incident(h))
        return c.constant in _relations(g, ids[0], c.left_attr)
    else:
        shared = _relations(g, ids[0], c.left_attr) & _relations(
            g, ids[1], c.left_attr)
        return bool(shared)
    return distance is not None and distance <= c.threshold


def filter_matches(matches: List[Match], rules: List[GddRule], g,
                   ground_truth=None
                   ) -> List[Tuple[Tuple[str, str], FrozenSet[str]]]:
    """Stage 2: (pair, satisfied rule ids) for pairs satisfying any rule.

    A rule counts once per pair whatever the number of matches binding it.
    """
    if not rules:
        return []
    q = rules[0].pattern
    if q.duplicate_vars is None:
        return []
    satisfied = {}
    for m in matches:
        pair = m.pair(q)
        done = satisfied.setdefault(pair, set())
        if len(done) == len(rules):
            continue
        binding = m.binding
        for rule in rules:
            if rule.id in done:
                continue
            if rule.holds(binding, g, ground_truth=ground_truth):
                done.add(rule.id)
    res = [
        (pair, frozenset(ids)) for pair, ids in satisfied.items() if ids]
    res.sort(key=lambda item: pair_key(item[0]))
    logger.info(
        "constraint filtering: %d of %d candidate pairs retained",
        len(res), len(satisfied))
    return res


@dataclass
class SelectivityRow:
    rule_id: str
    retained: int
    candidates: int
    retention: float
    type_mismatches: int = 0

    def to_dict(self):
        return {
            "rule": self.rule_id,
            "retained": self.retained,
            "candidates": self.candidates,
            "retention": self.retention,
            "type_mismatches": self.type_mismatches,
        }


TOTAL_ROW = "*"


def _mismatches(rule, matches, q, g):
    pairs = set()
    for m in matches:
        binding = m.binding
        for c in rule.lhs:
            if c.kind not in ("attr_const", "attr_attr"):
                continue
            left = g.node(binding[c.vars[0]]).attrs.get(c.left_attr)
            if c.kind == "attr_const":
                right = c.constant
            else:
                right = g.node(binding[c.vars[1]]).attrs.get(c.right_attr)
            if metric_mismatch(c.metric, left, right):
                pairs.add(m.pair(q) if q.duplicate_vars else m)
                break
    return len(pairs)


def rule_selectivity_report(q: Query, g,
                            ground_truth=None) -> List[SelectivityRow]:
    """Per rule retained pairs and retention fraction over Stage 1
    candidates, plus a total row (id ``*``) for the rule set."""
    matches = enumerate_matches(g, q.pattern, q.demand)
    candidates = candidate_pairs(matches, q.pattern)
    total = len(candidates)
    filtered = filter_matches(matches, list(q.rules), g, ground_truth)

    def ratio(n):
        return float(n) / total if total else 0.0

    rows = []
    for rule in q.rules:
        retained = sum(1 for _, ids in filtered if rule.id in ids)
        rows.append(SelectivityRow(
            rule_id=rule.id,
            retained=retained,
            candidates=total,
            retention=ratio(retained),
            type_mismatches=_mismatches(rule, matches, q.pattern, g),
        ))
        if rows[-1].type_mismatches:
            logger.warning(
                "rule %s: metric does not fit the attribute types on %d"
                " pair(s)", rule.id, rows[-1].type_mismatches)
    rows.append(SelectivityRow(
        rule_id=TOTAL_ROW,
        retained=len(filtered),
        candidates=total,
        retention=ratio(len(filtered)),
        type_mismatches=sum(r.type_mismatches for r in rows),
    ))
    return rows
