# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Seeded synthetic dirty graphs.

Users watch platforms and use devices. Some users are duplicated with
typos on their text attributes; the duplicates watch the platform of
their original so that the bundled query pairs them.
"""
import json
import math
import os
import random
import string
import time
from collections import Counter
from dataclasses import dataclass
from logging import getLogger
from typing import Dict, List, Optional, Sequence

from ..gdd_rules import Query, parse_query_data
from ..graph_store import (
    Edge,
    Node,
    PropertyGraph,
    dump_graph,
    dump_ground_truth,
)
from ..matchers import OracleMatcher
from ..pps_engine import run_pipeline

logger = getLogger(__name__)

FIRST_NAMES = (
    "Aaron", "Alice", "Amber", "Andrew", "Anna", "Brian", "Carla", "Chris",
    "Daniel", "Diana", "Edward", "Elena", "Frank", "Grace", "Hannah",
    "Henry", "Irene", "Jacob", "Julia", "Kevin", "Laura", "Leon", "Linda",
    "Marcus", "Maria", "Nadia", "Nathan", "Olivia", "Oscar", "Patrick",
    "Paula", "Quentin", "Rachel", "Robert", "Sofia", "Steven", "Tessa",
    "Thomas", "Ursula", "Victor",
)
LAST_NAMES = (
    "Adams", "Baker", "Bennett", "Brooks", "Carter", "Collins", "Cooper",
    "Davis", "Donovan", "Edwards", "Evans", "Fisher", "Foster", "Garcia",
    "Gray", "Hayes", "Hughes", "Jenkins", "Kelly", "Lopez", "Martin",
    "Meyer", "Morgan", "Nelson", "Owens", "Parker", "Perry", "Powell",
    "Reed", "Rivera", "Russell", "Sanders", "Smith", "Stewart", "Sullivan",
    "Turner", "Walker", "Watson", "Wright", "Young",
)
CITIES = (
    "Austin", "Boston", "Chicago", "Denver", "Houston", "Miami", "Phoenix",
    "Portland", "Seattle", "Tampa",
)
DEVICES = ("Pixel 7", "iPhone 14", "Galaxy S23", "Fire TV", "Roku Ultra")
USERS_PER_PLATFORM = 25
USERS_PER_DEVICE = 50
TEXT_ATTRS = ("FirstName", "LastName", "Phone", "City")


def _rule(rule_id, attr, metric, threshold):
    return {
        "id": rule_id,
        "lhs": [{
            "kind": "attr_attr", "vars": ["x", "x'"], "attrs": [attr, attr],
            "metric": metric, "threshold": threshold,
        }],
        "rhs": [{
            "kind": "eid_eid", "vars": ["x", "x'"], "metric": "exact",
            "threshold": 0,
        }],
    }


SYNTHETIC_QUERY = {
    "pattern": {
        "nodes": [
            {"var": "x", "label": "user"},
            {"var": "x'", "label": "user"},
            {"var": "y", "label": "platform"},
        ],
        "edges": [
            {"src": "x", "label": "watched", "dst": "y"},
            {"src": "x'", "label": "watched", "dst": "y"},
        ],
        "duplicates": ["x", "x'"],
    },
    "demand": [
        {"var": "x", "attr": "Age", "op": ">", "value": 18},
        {"var": "x'", "attr": "Age", "op": ">", "value": 18},
    ],
    "rules": [
        _rule("last-name", "LastName", "edit", 1),
        _rule("first-name", "FirstName", "edit", 1),
        _rule("phone", "Phone", "edit", 1),
        _rule("age", "Age", "absdiff", 1),
    ],
    "weighting": "count",
    "threshold": 2,
    "aggregation": {"Age": "max", "City": "vote"},
}


def typo(rng: random.Random, text):
    """One random substitution, deletion, insertion or transposition"""
    if len(text) < 2:
        return text + rng.choice(string.ascii_lowercase)
    i = rng.randrange(len(text) - 1)
    op = rng.choice(("sub", "del", "ins", "swap"))
    letter = rng.choice(string.ascii_lowercase)
    if op == "sub":
        return text[:i] + letter + text[i + 1:]
    if op == "del":
        return text[:i] + text[i + 1:]
    if op == "ins":
        return text[:i] + letter + text[i:]
    return text[:i] + text[i + 1] + text[i] + text[i + 2:]


@dataclass
class SyntheticDataset:
    graph: PropertyGraph
    ground_truth: Dict[str, str]
    query: Query
    clusters: int
    paths: Optional[Dict[str, str]] = None

    @property
    def duplicate_pairs(self):
        sizes = Counter(self.ground_truth.values())
        return sum(n * (n - 1) // 2 for n in sizes.values())


def _user(rng):
    return {
        "FirstName": rng.choice(FIRST_NAMES),
        "LastName": rng.choice(LAST_NAMES),
        "Phone": "%03d-555-%04d" % (rng.randrange(200, 1000),
                                    rng.randrange(10000)),
        "Age": float(rng.randrange(10, 81)),
        "City": rng.choice(CITIES),
    }


def _noisy_copy(rng, attrs, attr_noise):
    copy = dict(attrs)
    for attr in TEXT_ATTRS:
        if rng.random() < attr_noise:
            copy[attr] = typo(rng, copy[attr])
    if rng.random() < attr_noise / 4:
        copy["Age"] = copy["Age"] + rng.choice((-1.0, 1.0))
    return copy


def gen_synthetic(n_entities, dup_rate=0.1, attr_noise=0.2, seed=0,
                  out_dir=None) -> SyntheticDataset:
    """Generate a dirty user/platform graph, its ground truth and query.

    Each entity gets one duplicate with probability ``dup_rate`` (a second
    one a quarter of the time). Writes ``nodes.csv``, ``edges.csv``,
    ``ground_truth.csv`` and ``query.json`` when ``out_dir`` is given.
    """
    if n_entities < 1:
        raise ValueError("n_entities must be positive")
    if not 0 <= dup_rate <= 1 or not 0 <= attr_noise <= 1:
        raise ValueError("dup_rate and attr_noise must lie in [0, 1]")
    rng = random.Random(seed)
    n_platforms = max(1, math.ceil(n_entities / USERS_PER_PLATFORM))
    n_devices = max(1, math.ceil(n_entities / USERS_PER_DEVICE))

    # (eid, attrs, platforms, device) per user record, originals first
    records = []
    clusters = 0
    for i in range(n_entities):
        eid = "e%d" % (i + 1)
        attrs = _user(rng)
        platforms = [rng.randrange(n_platforms)]
        if rng.random() < 0.2:
            platforms.append(rng.randrange(n_platforms))
        device = rng.randrange(n_devices) if rng.random() < 0.3 else None
        records.append((eid, attrs, sorted(set(platforms)), device))
        if rng.random() < dup_rate:
            clusters += 1
            copies = 2 if rng.random() < 0.25 else 1
            for _ in range(copies):
                records.append((
                    eid, _noisy_copy(rng, attrs, attr_noise),
                    [platforms[0]], None))
    rng.shuffle(records)

    nodes = []
    edges = []
    truth = {}
    for i in range(n_platforms):
        pid = "p%d" % (i + 1)
        nodes.append(Node(pid, "platform", {"Name": "Platform %d" % (i + 1)}))
        truth[pid] = "e-%s" % pid
    for i in range(n_devices):
        pid = "d%d" % (i + 1)
        nodes.append(Node(pid, "device", {"Model": DEVICES[i % len(DEVICES)]}))
        truth[pid] = "e-%s" % pid
    for i, (eid, attrs, platforms, device) in enumerate(records):
        pid = "u%d" % (i + 1)
        nodes.append(Node(pid, "user", attrs))
        truth[pid] = eid
        for platform in platforms:
            edges.append(Edge(pid, "watched", "p%d" % (platform + 1)))
        if device is not None:
            edges.append(Edge(pid, "uses", "d%d" % (device + 1)))

    dataset = SyntheticDataset(
        graph=PropertyGraph(nodes, edges),
        ground_truth=truth,
        query=parse_query_data(SYNTHETIC_QUERY, "synthetic"),
        clusters=clusters,
    )
    logger.info(
        "synthetic graph (seed %s): %d nodes, %d edges, %d duplicate"
        " clusters", seed, len(nodes), len(edges), clusters)
    if out_dir is not None:
        dataset.paths = write_dataset(dataset, out_dir)
    return dataset


def write_dataset(dataset: SyntheticDataset, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        name: os.path.join(out_dir, name)
        for name in ("nodes.csv", "edges.csv", "ground_truth.csv",
                     "query.json")
    }
    dump_graph(dataset.graph, paths["nodes.csv"], paths["edges.csv"])
    dump_ground_truth(dataset.ground_truth, paths["ground_truth.csv"])
    with open(paths["query.json"], "w", encoding="utf-8") as fp:
        json.dump(SYNTHETIC_QUERY, fp, indent=2, ensure_ascii=False)
        fp.write("\n")
    logger.info("synthetic dataset written to %s", out_dir)
    return paths


@dataclass(frozen=True)
class ScalingPoint:
    entities: int
    edges: int
    seconds: float


def scaling_run(sizes: Sequence[int], seed=0, repeats=3, dup_rate=0.1,
                attr_noise=0.2) -> List[ScalingPoint]:
    """Best of ``repeats`` warm runs of the full pipeline per graph size"""
    points = []
    for size in sizes:
        dataset = gen_synthetic(size, dup_rate, attr_noise, seed)
        matcher = OracleMatcher(dataset.ground_truth)
        run_pipeline(dataset.graph, dataset.query, matcher)
        best = math.inf
        for _ in range(repeats):
            start = time.perf_counter()
            run_pipeline(dataset.graph, dataset.query, matcher)
            best = min(best, time.perf_counter() - start)
        points.append(ScalingPoint(
            entities=size, edges=len(dataset.graph.edges), seconds=best))
        logger.info("scaling: %d entities, %d edges, %.4f s", size,
                    points[-1].edges, best)
    return points
