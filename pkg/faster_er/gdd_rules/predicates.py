# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Demand predicates

Selection conditions of an on-demand query, such as ``x.Age > 18``. They
are checked on single nodes while matching and again on the aggregated
attributes of a resolved entity before it is emitted.
"""
import operator
from dataclasses import dataclass
from logging import getLogger

from ..graph_store import AttrValue, is_number, is_text
from ..graph_store.models import coerce_value

logger = getLogger(__name__)

OPERATORS = {
    "<": operator.lt,
    "<=": operator.le,
    "=": operator.eq,
    ">=": operator.ge,
    ">": operator.gt,
}
ALIASES = {"≤": "<=", "≥": ">=", "==": "="}
CONTAINS = "contains"


class AnyOf(frozenset):
    """Values of an attribute aggregated by existence: a predicate holds
    when one of them satisfies it"""

    def __repr__(self):
        return "AnyOf(%r)" % (sorted(map(str, self)),)


def normalize_op(op):
    return ALIASES.get(op, op)


@dataclass(frozen=True)
class DemandPredicate:
    var: str
    attr: str
    op: str
    value: AttrValue

    def __post_init__(self):
        op = normalize_op(self.op)
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "value", coerce_value(self.value))
        if self.value is None:
            raise ValueError("demand on %s.%s needs a value"
                             % (self.var, self.attr))
        if op != CONTAINS and op not in OPERATORS:
            raise ValueError("unknown demand operator %r" % self.op)
        if op == CONTAINS and not is_text(self.value):
            raise ValueError("'contains' needs a text value")

    def holds_value(self, value):
        """Check one attribute value; absent or mismatched types fail"""
        if value is None:
            return False
        if self.op == CONTAINS:
            return is_text(value) and self.value in value
        if is_number(self.value) != is_number(value):
            return False
        return OPERATORS[self.op](value, self.value)

    def holds(self, attrs):
        value = attrs.get(self.attr)
        if isinstance(value, AnyOf):
            return any(self.holds_value(v) for v in value)
        return self.holds_value(value)

    def to_dict(self):
        value = self.value
        if is_number(value) and value.is_integer():
            value = int(value)
        return {
            "var": self.var, "attr": self.attr, "op": self.op,
            "value": value,
        }

    def __str__(self):
        return "%s.%s %s %r" % (self.var, self.attr, self.op, self.value)


def entity_demand(demand, duplicate_vars):
    """Predicates that bear on the resolved entity: those on x or x',
    without repeats (x.Age > 18 and x'.Age > 18 check the same thing)."""
    res = []
    seen = set()
    for predicate in demand:
        if predicate.var not in (duplicate_vars or ()):
            continue
        key = (predicate.attr, predicate.op, predicate.value)
        if key in seen:
            continue
        seen.add(key)
        res.append(predicate)
    return res


def eval_demand(predicates, attrs):
    """Return the predicates of ``predicates`` failing on ``attrs``"""
    failed = [p for p in predicates if not p.holds(attrs)]
    if failed:
        logger.debug(
            "demand failed: %s", ", ".join(str(p) for p in failed))
    return failed
