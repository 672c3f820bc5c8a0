# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Graph patterns and their homomorphic matches

Stage 1 of the resolver: find every binding of a small pattern into the
property graph, with the query's demand predicates checked while binding.
"""
from dataclasses import dataclass
from logging import getLogger
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from .. import config
from ..exceptions import PatternError, UnboundVariableInDemand
from ..graph_store import PropertyGraph, canonical_pair, pair_key

logger = getLogger(__name__)

WILDCARD = "*"


def labels_match(l1, l2):
    return l1 == l2 or l1 == WILDCARD or l2 == WILDCARD


@dataclass(frozen=True)
class PatternNode:
    var: str
    label: str = WILDCARD


@dataclass(frozen=True)
class PatternEdge:
    src: str
    label: str
    dst: str


@dataclass(frozen=True)
class GraphPattern:
    """Pattern nodes and edges plus the designated duplicate pair (x, x')"""
    nodes: Tuple[PatternNode, ...]
    edges: Tuple[PatternEdge, ...]
    duplicate_vars: Optional[Tuple[str, str]] = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        if self.duplicate_vars is not None:
            object.__setattr__(
                self, "duplicate_vars", tuple(self.duplicate_vars))
        self.validate()

    def validate(self):
        if not self.nodes:
            raise PatternError("pattern has no node")
        names = [n.var for n in self.nodes]
        if len(set(names)) != len(names):
            raise PatternError("pattern variables must be unique: %r" % names)
        limit = config.get("faster_max_pattern_vars")
        if limit and len(names) > limit:
            raise PatternError(
                "pattern has %d variables, at most %d are supported"
                % (len(names), limit))
        declared = set(names)
        for edge in self.edges:
            for end in (edge.src, edge.dst):
                if end not in declared:
                    raise PatternError(
                        "edge endpoint %r is not a declared variable" % end)
        if self.duplicate_vars is not None:
            self._validate_duplicates(declared)
        if not self._connected():
            raise PatternError("pattern is not weakly connected")

    def _validate_duplicates(self, declared):
        if len(self.duplicate_vars) != 2:
            raise PatternError("duplicates must name exactly two variables")
        x, x2 = self.duplicate_vars
        if x == x2:
            raise PatternError("duplicates must be two distinct variables")
        for var in (x, x2):
            if var not in declared:
                raise PatternError(
                    "duplicate variable %r is not declared" % var)
        if not labels_match(self.label_of(x), self.label_of(x2)):
            raise PatternError(
                "duplicate variables %r and %r have different labels"
                % (x, x2))

    def _connected(self):
        graph = nx.Graph()
        graph.add_nodes_from(self.vars)
        graph.add_edges_from((e.src, e.dst) for e in self.edges)
        return nx.is_connected(graph)

    @property
    def vars(self) -> List[str]:
        return [n.var for n in self.nodes]

    def label_of(self, var):
        for node in self.nodes:
            if node.var == var:
                return node.label
        raise PatternError("unknown variable %r" % var)

    def adjacency(self) -> Dict[str, set]:
        res = {n.var: set() for n in self.nodes}
        for edge in self.edges:
            res[edge.src].add(edge.dst)
            res[edge.dst].add(edge.src)
        return res

    def is_symmetric(self):
        """True when swapping x and x' maps the pattern onto itself"""
        if self.duplicate_vars is None:
            return False
        x, x2 = self.duplicate_vars

        def swap(var):
            return {x: x2, x2: x}.get(var, var)

        if self.label_of(x) != self.label_of(x2):
            return False
        edges = {(e.src, e.label, e.dst) for e in self.edges}
        swapped = {(swap(s), lab, swap(d)) for s, lab, d in edges}
        return edges == swapped


class Match:
    """A total binding of pattern variables to node ids"""

    __slots__ = ("_items",)

    def __init__(self, binding: Mapping[str, str]):
        self._items = tuple(sorted(binding.items()))

    @property
    def binding(self) -> Dict[str, str]:
        return dict(self._items)

    def __getitem__(self, var):
        return dict(self._items)[var]

    def __eq__(self, other):
        return isinstance(other, Match) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __repr__(self):
        return "<Match %s>" % ", ".join("%s=%s" % kv for kv in self._items)

    def pair(self, q: GraphPattern):
        if q.duplicate_vars is None:
            raise PatternError("pattern declares no duplicate variables")
        x, x2 = q.duplicate_vars
        binding = self.binding
        return canonical_pair(binding[x], binding[x2])


def _check_demand(q, demand):
    declared = set(q.vars)
    by_var = {}
    for predicate in demand:
        if predicate.var not in declared:
            raise UnboundVariableInDemand(predicate.var)
        by_var.setdefault(predicate.var, []).append(predicate)
    return by_var


def _label_candidates(g, label):
    if label == WILDCARD:
        return tuple(g.all_handles())
    return tuple(sorted(
        set(g.handles_with_label(label))
        | set(g.handles_with_label(WILDCARD))))


def _step(g, handle, label, forward):
    """Handles one pattern edge away from ``handle``"""
    adjacent = g.out_handles if forward else g.in_handles
    if label == WILDCARD:
        return set(adjacent(handle))
    return set(adjacent(handle, label)) | set(adjacent(handle, WILDCARD))


def _plan(g, q):
    """Binding order: smallest candidate set first, then stay connected"""
    sizes = {n.var: len(_label_candidates(g, n.label)) for n in q.nodes}
    position = {var: i for i, var in enumerate(q.vars)}
    adjacency = q.adjacency()
    order = [min(q.vars, key=lambda v: (sizes[v], position[v]))]
    while len(order) < len(q.nodes):
        bound = set(order)
        frontier = {
            v for b in order for v in adjacency[b] if v not in bound}
        order.append(min(frontier, key=lambda v: (sizes[v], position[v])))
    return order


def collapse_swaps(bindings, q, key):
    """Drop the x/x' mirror of a binding when both orientations exist.

    ``bindings`` is a list of dicts, ``key`` orders node references; the
    orientation with the lower reference on x is kept.
    """
    if q.duplicate_vars is None:
        return list(bindings)
    x, x2 = q.duplicate_vars

    def frozen(b):
        return tuple(sorted(b.items()))

    present = {frozen(b) for b in bindings}
    res = []
    for b in bindings:
        if key(b[x]) > key(b[x2]):
            mirror = dict(b)
            mirror[x], mirror[x2] = b[x2], b[x]
            if frozen(mirror) in present:
                continue
        res.append(b)
    return res


def enumerate_matches(g: PropertyGraph, q: GraphPattern,
                      demand: Iterable = ()) -> List[Match]:
    """All homomorphisms of ``q`` into ``g`` satisfying ``demand``.

    x and x' never bind the same node; mirror matches are collapsed; the
    result is sorted on bound ids in pattern variable order.
    """
    by_var = _check_demand(q, list(demand))
    order = _plan(g, q)
    x, x2 = q.duplicate_vars or (None, None)
    labels = {n.var: n.label for n in q.nodes}

    # pattern edges checked when each variable gets bound
    checks = {var: [] for var in order}
    loops = {var: [] for var in order}
    for i, var in enumerate(order):
        earlier = set(order[:i])
        for edge in q.edges:
            if edge.src == var and edge.dst == var:
                loops[var].append(edge.label)
            elif edge.dst == var and edge.src in earlier:
                checks[var].append((edge.src, edge.label, True))
            elif edge.src == var and edge.dst in earlier:
                checks[var].append((edge.dst, edge.label, False))

    label_candidates = {
        var: _label_candidates(g, labels[var]) for var in order}
    found = []
    binding = {}

    def candidates(var):
        if not checks[var]:
            return label_candidates[var]
        pool = None
        for other, label, forward in checks[var]:
            step = _step(g, binding[other], label, forward)
            pool = step if pool is None else pool & step
            if not pool:
                return ()
        allowed = labels[var]
        return sorted(
            h for h in pool if labels_match(allowed, g.label_of(h)))

    def accept(var, h):
        for label in loops[var]:
            if h not in _step(g, h, label, True):
                return False
        if x is not None and var in (x, x2):
            other = x2 if var == x else x
            if binding.get(other) == h:
                return False
        attrs = g.attrs_of(h)
        return all(p.holds(attrs) for p in by_var.get(var, ()))

    def backtrack(i):
        if i == len(order):
            found.append(dict(binding))
            return
        var = order[i]
        for h in candidates(var):
            if accept(var, h):
                binding[var] = h
                backtrack(i + 1)
                del binding[var]

    backtrack(0)
    kept = collapse_swaps(found, q, key=lambda h: h)
    variables = q.vars
    kept.sort(key=lambda b: tuple(b[v] for v in variables))
    matches = [
        Match({v: g.node_id(h) for v, h in b.items()}) for b in kept]
    logger.info(
        "pattern matching: %d bindings, %d matches after mirror collapse",
        len(found), len(matches))
    return matches


def candidate_pairs(matches: Iterable[Match], q: GraphPattern):
    """Distinct (x, x') pairs of the matches, smaller id first, sorted"""
    if q.duplicate_vars is None:
        return []
    pairs = {m.pair(q) for m in matches}
    return sorted(pairs, key=pair_key)
