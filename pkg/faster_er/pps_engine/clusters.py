# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Transitive clusters of matched profiles and their aggregated view"""
from collections import Counter
from itertools import count
from logging import getLogger
from typing import Dict, Iterable, List, Mapping

from ..gdd_rules.predicates import AnyOf
from ..graph_store import is_number, node_sort_key

logger = getLogger(__name__)

NUMERIC_AGGREGATES = {
    "min": min,
    "max": max,
    "avg": lambda values: float(sum(values)) / len(values),
}
# used when the query gives no aggregate for an attribute
DEFAULT_NUMERIC = "max"
DEFAULT_TEXT = "vote"


def _value_key(value):
    return (0, value, "") if is_number(value) else (1, 0, value)


def vote(values):
    """Most frequent value, ties to the smallest"""
    counts = Counter(values)
    best = max(counts.values())
    return min((v for v, n in counts.items() if n == best), key=_value_key)


def aggregate(how, values):
    """Aggregate the present values of one attribute, None if none"""
    values = [v for v in values if v is not None]
    if not values:
        return None
    numbers = [v for v in values if is_number(v)]
    if how is None:
        how = DEFAULT_NUMERIC if len(numbers) == len(values) else DEFAULT_TEXT
    if how in NUMERIC_AGGREGATES:
        if numbers:
            return NUMERIC_AGGREGATES[how](numbers)
        how = DEFAULT_TEXT
    if how == "any":
        return AnyOf(values)
    return vote(values)


def aggregate_view(members: Iterable[str], aggregation: Mapping[str, str],
                   g) -> Dict[str, object]:
    """Entity level attributes of ``members``.

    Attributes absent from every member stay absent. An ``any`` attribute
    keeps every member value as an :class:`AnyOf`.
    """
    members = list(members)
    if not members:
        raise ValueError("cannot aggregate an empty cluster")
    attrs = [g.node(pid).attrs for pid in members]
    names = sorted({name for a in attrs for name in a})
    return {
        name: aggregate(aggregation.get(name), [a.get(name) for a in attrs])
        for name in names
    }


class Cluster:
    """Union-find over profile ids.

    A root marked emitted survives every later union, the earliest emitted
    one when both sides were emitted. Otherwise the root is the smallest id
    in natural order.
    """

    def __init__(self, g=None, aggregation=None):
        self.g = g
        self.aggregation = dict(aggregation or {})
        self.parent = {}
        self._members = {}
        self._views = {}
        self._emitted = {}
        self._emission_order = count(1)

    def __contains__(self, pid):
        return pid in self.parent

    def add(self, pid):
        if pid not in self.parent:
            self.parent[pid] = pid
            self._members[pid] = [pid]
        return pid

    def find(self, pid):
        self.add(pid)
        root = pid
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[pid] != root:
            nxt = self.parent[pid]
            self.parent[pid] = root
            pid = nxt
        return root

    def same(self, a, b):
        return self.find(a) == self.find(b)

    def union(self, a, b):
        """Merge the sets of ``a`` and ``b``, return the resulting root"""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        root, child = sorted((ra, rb), key=self._root_key)
        self._emitted.pop(child, None)
        self.parent[child] = root
        self._members[root] = sorted(
            self._members[root] + self._members.pop(child), key=node_sort_key)
        self._views.pop(child, None)
        if self.g is not None:
            self._views[root] = aggregate_view(
                self._members[root], self.aggregation, self.g)
        logger.debug("cluster %s now has %d members", root,
                     len(self._members[root]))
        return root

    def _root_key(self, root):
        emitted = self._emitted.get(root)
        return (emitted is None, emitted or 0, node_sort_key(root))

    def mark_emitted(self, pid):
        """Pin the current root of ``pid`` so that growth keeps it"""
        root = self.find(pid)
        if root not in self._emitted:
            self._emitted[root] = next(self._emission_order)
        return root

    def is_emitted(self, pid):
        return self.find(pid) in self._emitted

    def members(self, pid) -> List[str]:
        return list(self._members[self.find(pid)])

    def view(self, pid):
        root = self.find(pid)
        if root not in self._views:
            self._views[root] = aggregate_view(
                self._members[root], self.aggregation, self.g)
        return dict(self._views[root])

    def roots(self) -> List[str]:
        return sorted(self._members, key=node_sort_key)

    def clusters(self, min_size=2) -> List[List[str]]:
        return [
            list(self._members[root]) for root in self.roots()
            if len(self._members[root]) >= min_size
        ]
