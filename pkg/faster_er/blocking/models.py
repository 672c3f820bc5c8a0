# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Blocking graph and profile ordering.

Profiles are the nodes, filtered pairs the weighted edges. Blocks are the
connected components; the ARCS weighting divides a pair's rule count by
the size of the blocks both profiles share.
"""
import csv
from collections import Counter
from dataclasses import dataclass
from logging import getLogger
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Set,
    Tuple,
)

import networkx as nx

from .. import config
from ..exceptions import UnknownProfile
from ..gdd_rules.models import WEIGHTINGS
from ..graph_store import canonical_pair, node_sort_key, pair_key

logger = getLogger(__name__)

BLOCKING_HEADER = ["pid_a", "pid_b", "weight", "rules"]

BlockAssigner = Callable[[nx.Graph], Dict[str, Set[int]]]


def component_blocks(graph: nx.Graph) -> Dict[str, Set[int]]:
    """One block per connected component, numbered by smallest pid"""
    components = sorted(
        (sorted(c, key=node_sort_key) for c in nx.connected_components(graph)),
        key=lambda members: node_sort_key(members[0]))
    return {
        pid: {block} for block, members in enumerate(components)
        for pid in members
    }


class BlockingGraph:
    """Weighted candidate graph over entity profiles"""

    def __init__(self, graph: nx.Graph, weighting="count",
                 assignment: Dict[str, Set[int]] = None):
        self.graph = graph
        self.weighting = weighting
        if assignment is None:
            assignment = component_blocks(graph)
        assignment = {
            pid: ids for pid, ids in assignment.items()
            if pid in graph and ids}
        self.block_of = {pid: min(ids) for pid, ids in assignment.items()}
        members = {}
        for pid in sorted(assignment, key=node_sort_key):
            for block in assignment[pid]:
                members.setdefault(block, []).append(pid)
        self._members = {k: tuple(v) for k, v in members.items()}
        self.blocks = [self._members[k] for k in sorted(self._members)]

    def __len__(self):
        return self.graph.number_of_nodes()

    def __contains__(self, pid):
        return pid in self.graph

    def __repr__(self):
        return "<BlockingGraph %s: %d profiles, %d edges, %d blocks>" % (
            self.weighting, len(self), self.graph.number_of_edges(),
            len(self.blocks))

    @property
    def nodes(self) -> List[str]:
        return sorted(self.graph.nodes, key=node_sort_key)

    @property
    def edges(self) -> Dict[Tuple[str, str], Tuple[float, FrozenSet[str]]]:
        res = {}
        for a, b, data in self.graph.edges(data=True):
            res[canonical_pair(a, b)] = (data["weight"], data["rules"])
        return res

    def block_size(self, block):
        return len(self._members.get(block, ()))

    def degree(self, pid):
        return self.graph.degree(pid)


def build_blocking_graph(filtered: Iterable[Tuple[Tuple[str, str], Iterable]],
                         weighting="count",
                         block_assigner: BlockAssigner = None
                         ) -> BlockingGraph:
    """Stage 3 input: one edge per filtered pair.

    ``count`` weights an edge with the number of rules its pair satisfies.
    ``arcs`` first builds the count graph, assigns blocks on it (connected
    components unless ``block_assigner`` says otherwise), then reweights
    every edge to the sum over shared blocks of rules / block size. The
    blocks reported by the result are the ones the weights were built on.
    """
    if weighting not in WEIGHTINGS:
        raise ValueError("unknown weighting %r" % weighting)
    graph = nx.Graph()
    for (a, b), rules in filtered:
        rules = frozenset(rules)
        if not rules:
            continue
        graph.add_edge(a, b, weight=len(rules), rules=rules)

    assignment = None
    if block_assigner is not None:
        assignment = block_assigner(graph)
    if weighting == "arcs" and graph.number_of_edges():
        if assignment is None:
            assignment = component_blocks(graph)
        sizes = Counter(k for ids in assignment.values() for k in ids)
        dropped = []
        for a, b, data in graph.edges(data=True):
            common = assignment.get(a, set()) & assignment.get(b, set())
            data["weight"] = sum(
                float(len(data["rules"])) / sizes[k] for k in common)
            if data["weight"] <= 0:
                dropped.append((a, b))
        if dropped:
            logger.debug(
                "arcs: %d pair(s) share no block and leave the graph",
                len(dropped))
            graph.remove_edges_from(dropped)
            graph.remove_nodes_from(
                [pid for pid, deg in dict(graph.degree).items() if not deg])

    bg = BlockingGraph(graph, weighting=weighting, assignment=assignment)
    logger.info(
        "blocking graph: %d profiles, %d edges, %d blocks (%s)",
        len(bg), graph.number_of_edges(), len(bg.blocks), weighting)
    return bg


@dataclass(frozen=True)
class ProfileEntry:
    pid: str
    block: Optional[int]
    avg_weight: float


class SortedProfileList:
    """Profiles by average incident weight, heaviest first, ties by pid"""

    def __init__(self, entries: Iterable[ProfileEntry]):
        self.entries = tuple(entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    @property
    def pids(self) -> List[str]:
        return [e.pid for e in self.entries]


def sorted_profiles(bg: BlockingGraph) -> SortedProfileList:
    entries = []
    for pid in bg.graph.nodes:
        weights = [w for _, _, w in bg.graph.edges(pid, data="weight")]
        entries.append(ProfileEntry(
            pid=pid,
            block=bg.block_of.get(pid),
            avg_weight=float(sum(weights)) / len(weights),
        ))
    entries.sort(key=lambda e: (-e.avg_weight, node_sort_key(e.pid)))
    return SortedProfileList(entries)


def candidates_of(bg: BlockingGraph, pid) -> List[Tuple[str, float]]:
    """Neighbors of ``pid`` with their weights, heaviest first"""
    if pid not in bg.graph:
        raise UnknownProfile(pid)
    res = [
        (other, data["weight"])
        for other, data in bg.graph.adj[pid].items()
    ]
    res.sort(key=lambda item: (-item[1], node_sort_key(item[0])))
    return res


def weight_of(bg: BlockingGraph, a, b):
    """Edge weight of (a, b), 0 when the pair never entered the graph"""
    data = bg.graph.get_edge_data(a, b)
    return data["weight"] if data else 0


def meets_threshold(weight, threshold, weighting="count"):
    """``weight >= threshold``, exact on counts, with tolerance on arcs"""
    if weighting == "arcs":
        return weight >= threshold - config.get("faster_arcs_tolerance")
    return weight >= threshold


def _format_weight(weight):
    weight = float(weight)
    if weight.is_integer():
        return str(int(weight))
    return repr(round(weight, 12))


def dump_blocking_graph(bg: BlockingGraph, path):
    """Write the edges as CSV ``pid_a,pid_b,weight,rules``"""
    with open(path, "w", newline="") as fp:
        writer = csv.writer(fp)
        writer.writerow(BLOCKING_HEADER)
        for pair, (weight, rules) in sorted(
                bg.edges.items(), key=lambda item: pair_key(item[0])):
            writer.writerow([
                pair[0], pair[1], _format_weight(weight),
                ";".join(sorted(rules)),
            ])
    logger.info("blocking graph written to %s", path)
