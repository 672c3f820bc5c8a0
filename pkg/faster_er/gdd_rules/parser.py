# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Query file reader

A query file is a JSON document validated against ``query.schema.json``
(shipped with the package and in the documentation), then checked for the
cross references JSON Schema cannot express: declared variables, rhs shape,
thresholds.
"""
import json
import os
from logging import getLogger

from jsonschema import Draft202012Validator

from .. import config
from ..exceptions import PatternError, SchemaError
from ..pattern_match import GraphPattern, PatternEdge, PatternNode, WILDCARD
from .models import DistanceConstraint, GddRule, Query
from .predicates import DemandPredicate

logger = getLogger(__name__)

here = os.path.abspath(os.path.dirname(__file__))
SCHEMA_PATH = os.path.join(here, "query.schema.json")

_validator = None


def get_validator():
    global _validator
    if _validator is None:
        with open(SCHEMA_PATH, "r", encoding="utf-8") as fp:
            _validator = Draft202012Validator(json.load(fp))
    return _validator


def _json_path(error):
    return "/".join(str(p) for p in error.absolute_path)


def check_schema(data):
    errors = sorted(
        get_validator().iter_errors(data),
        key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        error = errors[0]
        raise SchemaError(_json_path(error), error.message)


def _pattern(data):
    try:
        return GraphPattern(
            nodes=[
                PatternNode(n["var"], n.get("label", WILDCARD))
                for n in data["nodes"]
            ],
            edges=[
                PatternEdge(e["src"], e.get("label", WILDCARD), e["dst"])
                for e in data.get("edges", [])
            ],
            duplicate_vars=(
                tuple(data["duplicates"]) if "duplicates" in data else None),
        )
    except PatternError as exc:
        raise SchemaError("pattern", str(exc))


def _constraint(data, where):
    try:
        return DistanceConstraint(
            kind=data["kind"],
            vars=tuple(data["vars"]),
            attrs=tuple(data.get("attrs", ())),
            metric=data.get("metric", "exact"),
            threshold=data.get("threshold", 0),
            constant=data.get("constant"),
        )
    except ValueError as exc:
        raise SchemaError(where, str(exc))


def _demand(data, i):
    try:
        return DemandPredicate(
            var=data["var"],
            attr=data["attr"],
            op=data["op"],
            value=data["value"],
        )
    except ValueError as exc:
        raise SchemaError("demand/%d" % i, str(exc))


def parse_query_data(data, source="<query>") -> Query:
    """Build a validated Query from an already decoded JSON document"""
    check_schema(data)
    pattern = _pattern(data["pattern"])
    rules = [
        GddRule(
            id=rule["id"],
            pattern=pattern,
            lhs=[
                _constraint(c, "rules/%s/lhs/%d" % (rule["id"], i))
                for i, c in enumerate(rule["lhs"])
            ],
            rhs=[
                _constraint(c, "rules/%s/rhs/%d" % (rule["id"], i))
                for i, c in enumerate(rule["rhs"])
            ],
        )
        for rule in data["rules"]
    ]
    query = Query(
        pattern=pattern,
        rules=rules,
        demand=[_demand(d, i) for i, d in enumerate(data.get("demand", []))],
        weighting=data.get("weighting", config.get("faster_weighting")),
        threshold=data.get("threshold", config.get("faster_threshold")),
        aggregation=dict(data.get("aggregation", {})),
    ).validate()
    logger.debug(
        "parsed query %s: %d rule(s), %d demand predicate(s)",
        source, len(query.rules), len(query.demand))
    return query


def parse_query(path) -> Query:
    """Read and validate a query file"""
    try:
        with open(path, "r", encoding="utf-8") as fp:
            data = json.load(fp)
    except json.JSONDecodeError as exc:
        raise SchemaError("", "invalid JSON at line %d: %s" % (
            exc.lineno, exc.msg))
    return parse_query_data(data, source=path)


def query_to_data(query: Query):
    """Inverse of :func:`parse_query_data`"""
    pattern = query.pattern
    pattern_data = {
        "nodes": [{"var": n.var, "label": n.label} for n in pattern.nodes],
        "edges": [
            {"src": e.src, "label": e.label, "dst": e.dst}
            for e in pattern.edges
        ],
    }
    if pattern.duplicate_vars is not None:
        pattern_data["duplicates"] = list(pattern.duplicate_vars)
    return {
        "pattern": pattern_data,
        "demand": [p.to_dict() for p in query.demand],
        "rules": [
            {
                "id": rule.id,
                "lhs": [c.to_dict() for c in rule.lhs],
                "rhs": [c.to_dict() for c in rule.rhs],
            }
            for rule in query.rules
        ],
        "weighting": query.weighting,
        "threshold": query.threshold,
        "aggregation": dict(query.aggregation),
    }
