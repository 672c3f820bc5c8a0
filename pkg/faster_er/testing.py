# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Shared pytest fixtures, star-imported by every ``tests/conftest.py``"""
import pytest
from anyblok.config import Configuration

from .fixtures import fixture_path
from .gdd_rules import parse_query
from .graph_store import Edge, Node, PropertyGraph, load_graph
from .graph_store import load_ground_truth
from .graph_store.models import coerce_value


def build_graph(nodes, edges=()):
    """Graph from ``(id, label, attrs)`` and ``(src, label, dst)`` tuples"""
    return PropertyGraph(
        [
            Node(node_id, label, {
                k: coerce_value(v) for k, v in (attrs or {}).items()})
            for node_id, label, attrs in nodes
        ],
        [Edge(*edge) for edge in edges],
    )


TEXT_VALUES = ("ann", "anne", "bob", "bobby", "cat")


def random_graph(rng, max_nodes=30, max_attrs=3):
    """Random user/item graph with attributes A, B (text) and C (number)
    and a ground truth grouping about three nodes per entity"""
    n = rng.randint(2, max_nodes)
    names = ("A", "B", "C")[:rng.randint(1, max_attrs)]
    nodes = []
    for i in range(n):
        attrs = {}
        for name in names:
            if rng.random() < 0.15:
                continue
            if name == "C" or rng.random() < 0.05:
                attrs[name] = rng.randint(15, 22)
            else:
                attrs[name] = rng.choice(TEXT_VALUES)
        nodes.append(("n%d" % i, rng.choice(("user", "item")), attrs))
    edges = set()
    for _ in range(rng.randint(0, 2 * n)):
        edges.add((rng.choice(nodes)[0], rng.choice(("e", "f")),
                   rng.choice(nodes)[0]))
    truth = {
        node_id: "e%d" % rng.randrange(max(1, n // 3))
        for node_id, _, _ in nodes
    }
    return build_graph(nodes, sorted(edges)), truth


def load_fixture(name):
    g = load_graph(fixture_path(name, "nodes.csv"),
                   fixture_path(name, "edges.csv"))
    q = parse_query(fixture_path(name, "query.json"))
    gt = load_ground_truth(fixture_path(name, "ground_truth.csv"))
    return g, q, gt


@pytest.fixture(autouse=True)
def restore_configuration():
    saved = dict(Configuration.configuration)
    yield
    Configuration.configuration.clear()
    Configuration.configuration.update(saved)


@pytest.fixture(scope="session")
def viewers():
    return load_fixture("viewers")


@pytest.fixture(scope="session")
def viewers_graph(viewers):
    return viewers[0]


@pytest.fixture(scope="session")
def viewers_query(viewers):
    return viewers[1]


@pytest.fixture(scope="session")
def viewers_truth(viewers):
    return viewers[2]


@pytest.fixture(scope="session")
def minor_merge():
    return load_fixture("minor_merge")
