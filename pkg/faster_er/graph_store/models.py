# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Property graph model

An immutable, in-memory directed labeled multigraph with per-node attribute
maps. Node ids are opaque strings in files; internally every node gets a
dense integer handle assigned in natural id order, so sorting handles sorts
ids.
"""
import csv
import json
import math
import re
from dataclasses import dataclass, field, replace
from logging import getLogger
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from ..exceptions import (
    DanglingEdge,
    DuplicateNodeId,
    MalformedRow,
    UnknownNode,
)

logger = getLogger(__name__)

AttrValue = Union[str, float]
"""A text or finite number value; an absent attribute is a missing key"""

NODE_HEADER = ["id", "label", "attrs"]
EDGE_HEADER = ["src", "label", "dst"]
GROUND_TRUTH_HEADER = ["pid", "eid"]

DIRECTIONS = ("out", "in", "both")

_DIGITS = re.compile(r"(\d+)")
_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)$")


def node_sort_key(node_id):
    """Natural ordering key: digit runs compare as integers (v3 < v10)"""
    parts = _DIGITS.split(node_id)
    return (
        tuple(int(p) if i % 2 else p for i, p in enumerate(parts)),
        node_id,
    )


def pair_key(pair):
    return (node_sort_key(pair[0]), node_sort_key(pair[1]))


def canonical_pair(a, b):
    """Unordered pair as a tuple, smaller id first"""
    if node_sort_key(b) < node_sort_key(a):
        return (b, a)
    return (a, b)


def coerce_value(raw):
    """Type one raw attribute value.

    Numbers stay numbers, strings that read as a finite decimal become
    numbers, everything else is text. None means absent. Raises ValueError
    on non-finite numbers and nested structures.
    """
    if raw is None:
        return None
    if isinstance(raw, bool):
        return "true" if raw else "false"
    if isinstance(raw, (int, float)):
        value = _finite_float(raw)
        if value is None:
            raise ValueError("non-finite number %s" % _shorten(raw))
        return value
    if isinstance(raw, str):
        if _DECIMAL.match(raw.strip()):
            value = _finite_float(raw.strip())
            if value is not None:
                return value
        return raw
    raise ValueError("unsupported attribute value %r" % (raw,))


def _finite_float(raw):
    try:
        value = float(raw)
    except OverflowError:
        return None
    return value if math.isfinite(value) else None


def _shorten(raw, width=20):
    text = repr(raw)
    return text if len(text) <= width else text[:width] + "..."


def is_number(value):
    return isinstance(value, float)


def is_text(value):
    return isinstance(value, str)


def _reject_constant(name):
    raise ValueError("non-finite number %s" % name)


def _unique_pairs(pairs):
    res = {}
    for key, value in pairs:
        if key in res:
            raise ValueError("duplicate attribute key %r" % key)
        res[key] = value
    return res


def parse_attrs(text):
    """Parse the JSON object literal of a node row into typed attributes"""
    if not text.strip():
        return {}
    data = json.loads(
        text,
        object_pairs_hook=_unique_pairs,
        parse_constant=_reject_constant,
    )
    if not isinstance(data, dict):
        raise ValueError("attrs must be a JSON object")
    attrs = {}
    for key, raw in data.items():
        value = coerce_value(raw)
        if value is not None:
            attrs[key] = value
    return attrs


def format_attrs(attrs):
    data = {}
    for key in sorted(attrs):
        value = attrs[key]
        if is_number(value) and value.is_integer():
            value = int(value)
        data[key] = value
    return json.dumps(data, ensure_ascii=False, separators=(",", ":"))


@dataclass(frozen=True)
class Node:
    id: str
    label: str
    attrs: Mapping[str, AttrValue] = field(default_factory=dict)


@dataclass(frozen=True, order=True)
class Edge:
    src: str
    label: str
    dst: str


@dataclass
class EntityProfile:
    """Entity view of one node: pid, optional eid, type, attributes and
    relations (relation label, neighbor pid), one per incident edge."""
    pid: str
    type: str
    attrs: Mapping[str, AttrValue]
    relations: List[Tuple[str, str]]
    eid: Optional[str] = None


class PropertyGraph:
    """Immutable property graph with label and adjacency indices.

    Safe for concurrent readers once built.
    """

    def __init__(self, nodes: Iterable[Node], edges: Iterable[Edge] = ()):
        nodes = list(nodes)
        by_id = {}
        for node in nodes:
            if node.id in by_id:
                raise DuplicateNodeId(node.id)
            if not node.label:
                raise ValueError("node %r has an empty label" % node.id)
            by_id[node.id] = node

        self._ids = sorted(by_id, key=node_sort_key)
        self._handles = {nid: h for h, nid in enumerate(self._ids)}
        self._nodes = [by_id[nid] for nid in self._ids]

        label_index = {}
        for h, node in enumerate(self._nodes):
            label_index.setdefault(node.label, []).append(h)
        self._label_index = {k: tuple(v) for k, v in label_index.items()}

        out_index = [dict() for _ in self._ids]
        in_index = [dict() for _ in self._ids]
        edge_set = set()
        for edge in edges:
            for end in (edge.src, edge.dst):
                if end not in self._handles:
                    raise DanglingEdge(end)
            if edge in edge_set:
                raise ValueError("duplicate edge %r" % (edge,))
            edge_set.add(edge)
            src, dst = self._handles[edge.src], self._handles[edge.dst]
            out_index[src].setdefault(edge.label, []).append(dst)
            in_index[dst].setdefault(edge.label, []).append(src)

        self._out = [
            {k: tuple(sorted(v)) for k, v in d.items()} for d in out_index
        ]
        self._in = [
            {k: tuple(sorted(v)) for k, v in d.items()} for d in in_index
        ]
        self._edges = frozenset(edge_set)

    def __len__(self):
        return len(self._ids)

    def __contains__(self, node_id):
        return node_id in self._handles

    def __eq__(self, other):
        if not isinstance(other, PropertyGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def __repr__(self):
        return "<PropertyGraph: %d nodes, %d edges>" % (
            len(self._ids), len(self._edges))

    @property
    def nodes(self) -> List[Node]:
        return list(self._nodes)

    @property
    def edges(self):
        return self._edges

    @property
    def label_index(self) -> Dict[str, frozenset]:
        return {
            label: frozenset(self._ids[h] for h in handles)
            for label, handles in self._label_index.items()
        }

    def node(self, node_id) -> Node:
        try:
            return self._nodes[self._handles[node_id]]
        except KeyError:
            raise UnknownNode(node_id)

    def count_edges(self, label=None):
        if label is None:
            return len(self._edges)
        return sum(1 for e in self._edges if e.label == label)

    # handle level API, used by the pattern matcher

    def handle(self, node_id):
        try:
            return self._handles[node_id]
        except KeyError:
            raise UnknownNode(node_id)

    def node_id(self, handle):
        return self._ids[handle]

    def label_of(self, handle):
        return self._nodes[handle].label

    def attrs_of(self, handle):
        return self._nodes[handle].attrs

    def all_handles(self):
        return range(len(self._ids))

    def handles_with_label(self, label):
        return self._label_index.get(label, ())

    def out_handles(self, handle, label=None):
        return self._adjacent(self._out[handle], label)

    def in_handles(self, handle, label=None):
        return self._adjacent(self._in[handle], label)

    def incident(self, handle):
        """(edge label, neighbor handle) for every incident edge"""
        res = []
        for label, dsts in self._out[handle].items():
            res.extend((label, d) for d in dsts)
        for label, srcs in self._in[handle].items():
            res.extend((label, s) for s in srcs)
        return res

    def degree(self, handle):
        return sum(len(v) for v in self._out[handle].values()) + sum(
            len(v) for v in self._in[handle].values())

    @staticmethod
    def _adjacent(index, label):
        if label is not None:
            return index.get(label, ())
        if len(index) == 1:
            return next(iter(index.values()))
        return tuple(sorted({h for hs in index.values() for h in hs}))


def _open_rows(path, header):
    """Yield (line number, row) after checking the header"""
    with open(path, "r", encoding="utf-8", newline="") as fp:
        reader = csv.reader(fp)
        try:
            first = next(reader)
        except StopIteration:
            raise MalformedRow(path, 1, "missing header %s" % ",".join(header))
        if first != header:
            raise MalformedRow(
                path, reader.line_num,
                "expected header %s, got %s" % (
                    ",".join(header), ",".join(first)))
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise MalformedRow(
                    path, reader.line_num,
                    "expected %d fields, got %d" % (len(header), len(row)))
            yield reader.line_num, row


def read_nodes(path):
    nodes = []
    seen = set()
    for line, (node_id, label, attrs) in _open_rows(path, NODE_HEADER):
        if not node_id:
            raise MalformedRow(path, line, "empty node id")
        if not label:
            raise MalformedRow(path, line, "empty label")
        if node_id in seen:
            raise DuplicateNodeId(node_id, path, line)
        seen.add(node_id)
        try:
            typed = parse_attrs(attrs)
        except ValueError as exc:
            raise MalformedRow(path, line, "bad attrs: %s" % exc)
        nodes.append(Node(node_id, label, typed))
    return nodes


def read_edges(path, known_ids):
    edges = []
    seen = set()
    for line, (src, label, dst) in _open_rows(path, EDGE_HEADER):
        if not label:
            raise MalformedRow(path, line, "empty edge label")
        for end in (src, dst):
            if end not in known_ids:
                raise DanglingEdge(end, path, line)
        edge = Edge(src, label, dst)
        if edge in seen:
            raise MalformedRow(
                path, line, "parallel edge with the same label")
        seen.add(edge)
        edges.append(edge)
    return edges


def load_graph(nodes_file, edges_file) -> PropertyGraph:
    """Load a graph from the nodes / edges CSV files"""
    nodes = read_nodes(nodes_file)
    edges = read_edges(edges_file, {n.id for n in nodes})
    graph = PropertyGraph(nodes, edges)
    logger.info(
        "loaded graph %s / %s: %d nodes, %d edges",
        nodes_file, edges_file, len(graph), len(graph.edges))
    return graph


def dump_graph(g: PropertyGraph, nodes_file, edges_file):
    """Write ``g`` back in the flat-file format, nodes in id order"""
    with open(nodes_file, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(NODE_HEADER)
        for node in g.nodes:
            writer.writerow([node.id, node.label, format_attrs(node.attrs)])

    edges = sorted(
        g.edges,
        key=lambda e: (node_sort_key(e.src), e.label, node_sort_key(e.dst)))
    with open(edges_file, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(EDGE_HEADER)
        for edge in edges:
            writer.writerow([edge.src, edge.label, edge.dst])


def load_ground_truth(path) -> Dict[str, str]:
    """Read the pid -> eid ground truth side-file"""
    truth = {}
    for line, (pid, eid) in _open_rows(path, GROUND_TRUTH_HEADER):
        if not pid or not eid:
            raise MalformedRow(path, line, "empty pid or eid")
        if pid in truth:
            raise DuplicateNodeId(pid, path, line)
        truth[pid] = eid
    logger.debug("loaded %d ground truth rows from %s", len(truth), path)
    return truth


def dump_ground_truth(truth, path):
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(GROUND_TRUTH_HEADER)
        for pid in sorted(truth, key=node_sort_key):
            writer.writerow([pid, truth[pid]])


def profile_of(g: PropertyGraph, node_id, ground_truth=None) -> EntityProfile:
    """Entity profile of a node; eid is only known through ground truth"""
    h = g.handle(node_id)
    node = g.node(node_id)
    relations = [(label, g.node_id(x)) for label, x in g.incident(h)]
    relations.sort(key=lambda r: (r[0], node_sort_key(r[1])))
    profile = EntityProfile(
        pid=node_id,
        type=node.label,
        attrs=dict(node.attrs),
        relations=relations,
    )
    return attach_ground_truth(profile, ground_truth)


def attach_ground_truth(profile: EntityProfile, ground_truth) -> EntityProfile:
    """Copy of ``profile`` with its eid looked up in ``ground_truth``"""
    if ground_truth is None:
        return profile
    return replace(profile, eid=ground_truth.get(profile.pid))


def neighbors(g: PropertyGraph, node_id, edge_label=None, direction="out"):
    """Neighbor ids in natural id order, deduplicated"""
    if direction not in DIRECTIONS:
        raise ValueError("direction must be one of %r" % (DIRECTIONS,))
    h = g.handle(node_id)
    found = set()
    if direction in ("out", "both"):
        found.update(g.out_handles(h, edge_label))
    if direction in ("in", "both"):
        found.update(g.in_handles(h, edge_label))
    return [g.node_id(x) for x in sorted(found)]
