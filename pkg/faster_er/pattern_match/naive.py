# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Reference enumerator

Tries every assignment of nodes to pattern variables. Exponential in the
pattern size; only meant to cross-check :func:`enumerate_matches` on tiny
graphs.
"""
import itertools

from ..graph_store import node_sort_key
from .models import Match, collapse_swaps, labels_match


def _edge_labels(g):
    index = {}
    for edge in g.edges:
        index.setdefault((edge.src, edge.dst), set()).add(edge.label)
    return index


def _edge_exists(index, src, label, dst):
    return any(labels_match(label, found)
               for found in index.get((src, dst), ()))


def enumerate_matches_naive(g, q, demand=()):
    ids = [n.id for n in g.nodes]
    index = _edge_labels(g)
    variables = q.vars
    x, x2 = q.duplicate_vars or (None, None)
    found = []
    for assignment in itertools.product(ids, repeat=len(variables)):
        binding = dict(zip(variables, assignment))
        if x is not None and binding[x] == binding[x2]:
            continue
        if not all(
                labels_match(n.label, g.node(binding[n.var]).label)
                for n in q.nodes):
            continue
        if not all(
                _edge_exists(index, binding[e.src], e.label, binding[e.dst])
                for e in q.edges):
            continue
        if not all(
                p.holds(g.node(binding[p.var]).attrs) for p in demand):
            continue
        found.append(binding)
    kept = collapse_swaps(found, q, key=node_sort_key)
    kept.sort(key=lambda b: tuple(node_sort_key(b[v]) for v in variables))
    return [Match(b) for b in kept]
