# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Progressive profile scheduling.

Profiles are visited by decreasing average blocking weight. Each visit
compares the profile with its candidates whose edge weight reaches the
threshold, skips pairs already in the same cluster and emits the
cluster as soon as its aggregated attributes satisfy the query demand.
"""
import json
import time
from dataclasses import dataclass, field
from logging import getLogger
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

from ..blocking import (
    build_blocking_graph,
    candidates_of,
    meets_threshold,
    sorted_profiles,
)
from ..exceptions import InputError, MatcherFailure, RuntimeResolutionError
from ..gdd_rules import Query, entity_demand, eval_demand, filter_matches
from ..graph_store import canonical_pair, node_sort_key, profile_of
from ..pattern_match import candidate_pairs, enumerate_matches
from .clusters import Cluster

logger = getLogger(__name__)

COMPONENTS = ("RF", "B", "PPS", "T")
MODES = {
    "full": frozenset(),
    "no-rf": frozenset(["RF", "B"]),
    "no-b": frozenset(["B"]),
    "no-pps": frozenset(["PPS"]),
    "no-t": frozenset(["T"]),
}
NO_RF_RULE = "*"


@dataclass(frozen=True)
class RunConfig:
    """How one resolution run behaves.

    ``threshold`` None keeps the query's own. Disabling RF also disables
    B since blocking weights come from rule filtering.
    """
    threshold: Optional[float] = None
    disable: FrozenSet[str] = frozenset()
    validate_demand: bool = True
    max_comparisons: Optional[int] = None
    max_results: Optional[int] = None

    def __post_init__(self):
        disable = frozenset(c.strip().upper() for c in self.disable)
        unknown = disable - set(COMPONENTS)
        if unknown:
            raise InputError(
                "unknown component(s) to disable: %s (choose among %s)"
                % (", ".join(sorted(unknown)), ", ".join(COMPONENTS)))
        if "RF" in disable:
            disable |= {"B"}
        object.__setattr__(self, "disable", disable)
        for name in ("max_comparisons", "max_results"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise InputError("%s must not be negative" % name)

    @classmethod
    def from_disable(cls, disable=None, **kwargs):
        """Build from a comma separated list such as ``"T,PPS"``"""
        if isinstance(disable, str):
            disable = [c for c in disable.split(",") if c.strip()]
        return cls(disable=frozenset(disable or ()), **kwargs)

    @classmethod
    def for_mode(cls, mode, **kwargs):
        if mode not in MODES:
            raise InputError("unknown mode %r" % mode)
        return cls(disable=MODES[mode], **kwargs)

    @property
    def mode(self):
        for name, disable in MODES.items():
            if disable == self.disable:
                return name
        return "no-" + "-".join(sorted(c.lower() for c in self.disable))

    @property
    def transitivity(self):
        return "T" not in self.disable


@dataclass(frozen=True)
class EmittedEntity:
    root: str
    members: Tuple[str, ...]
    emitted_at_comparisons: int
    elapsed_ms: float
    demand_ok: bool
    satisfied_demand: Tuple = ()
    view: Dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "root": self.root,
            "members": list(self.members),
            "comparisons": self.emitted_at_comparisons,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "demand_ok": self.demand_ok,
        }

    def pairs(self):
        members = self.members
        return {
            canonical_pair(a, b)
            for i, a in enumerate(members) for b in members[i + 1:]
        }


@dataclass
class RunStats:
    mode: str = "full"
    threshold: float = 0
    weighting: str = "count"
    matches: int = 0
    candidate_pairs: int = 0
    retained_pairs: int = 0
    profiles: int = 0
    compared_pairs: List[Tuple[str, str]] = field(default_factory=list)
    pruned_pairs: List[Tuple[str, str]] = field(default_factory=list)
    inferred_pairs: List[Tuple[str, str]] = field(default_factory=list)
    matched_pairs: List[Tuple[str, str]] = field(default_factory=list)
    emissions: List[EmittedEntity] = field(default_factory=list)
    elapsed_ms: float = 0.0
    first_emission_ms: Optional[float] = None
    stopped_early: bool = False

    @property
    def comparisons(self):
        return len(self.compared_pairs)

    @property
    def pruned(self):
        return len(self.pruned_pairs)

    @property
    def skipped_transitive(self):
        return len(self.inferred_pairs)

    @property
    def beta(self):
        """Share of the Stage 1 candidate pairs kept by the rules"""
        if not self.candidate_pairs:
            return 0.0
        return float(self.retained_pairs) / self.candidate_pairs

    @property
    def avg_comparisons_per_profile(self):
        if not self.profiles:
            return 0.0
        return float(self.comparisons) / self.profiles

    def clusters(self):
        """Final member set of every surviving root. Roots keep their id
        across growth; a root absorbed by another cluster is dropped"""
        res = {}
        for event in self.emissions:
            for pid in event.members:
                res.pop(pid, None)
            res[event.root] = event.members
        return res

    def to_dict(self):
        return {
            "mode": self.mode,
            "threshold": self.threshold,
            "weighting": self.weighting,
            "matches": self.matches,
            "candidate_pairs": self.candidate_pairs,
            "retained_pairs": self.retained_pairs,
            "beta": self.beta,
            "profiles": self.profiles,
            "comparisons": self.comparisons,
            "avg_comparisons_per_profile": self.avg_comparisons_per_profile,
            "pruned": self.pruned,
            "skipped_transitive": self.skipped_transitive,
            "matched_pairs": [list(p) for p in self.matched_pairs],
            "emissions": len(self.emissions),
            "elapsed_ms": round(self.elapsed_ms, 3),
            "first_emission_ms": (
                None if self.first_emission_ms is None
                else round(self.first_emission_ms, 3)),
            "stopped_early": self.stopped_early,
        }


def ndjson_sink(stream) -> Callable[[EmittedEntity], None]:
    """Sink writing one JSON object per emission, flushed right away"""

    def sink(event):
        stream.write(json.dumps(event.to_dict()) + "\n")
        stream.flush()

    return sink


def _weighted_schedule(bg):
    for entry in sorted_profiles(bg):
        for other, weight in candidates_of(bg, entry.pid):
            yield entry.pid, other, weight


def _pid_schedule(bg):
    for pid in bg.nodes:
        for other in sorted(bg.graph.adj[pid], key=node_sort_key):
            yield pid, other, None


def _input_schedule(filtered):
    for (a, b), _ in filtered:
        yield a, b, None


class _Run:
    """State of one :func:`run_pipeline` call"""

    def __init__(self, g, q, matcher, cfg, sink, ground_truth):
        self.g = g
        self.q = q
        self.matcher = matcher
        self.cfg = cfg
        self.sink = sink
        self.ground_truth = ground_truth
        self.cluster = Cluster(g, q.aggregation)
        self.demand = entity_demand(q.demand, q.pattern.duplicate_vars)
        self.profiles = {}
        self.emitted = {}
        self.start = time.perf_counter()
        self.stats = RunStats(mode=cfg.mode, weighting=q.weighting)

    def elapsed_ms(self):
        return (time.perf_counter() - self.start) * 1000.0

    def profile(self, pid):
        if pid not in self.profiles:
            self.profiles[pid] = profile_of(self.g, pid, self.ground_truth)
        return self.profiles[pid]

    def compare(self, pair):
        try:
            decision = self.matcher(self.profile(pair[0]),
                                    self.profile(pair[1]))
        except RuntimeResolutionError:
            raise
        except Exception as exc:
            raise MatcherFailure(pair, exc) from exc
        self.stats.compared_pairs.append(pair)
        logger.debug("compare %s %s: %s", pair[0], pair[1], decision)
        return decision.is_match

    def emit(self, root):
        members = tuple(self.cluster.members(root))
        view = self.cluster.view(root)
        failed = eval_demand(self.demand, view)
        if failed and self.cfg.validate_demand:
            logger.debug("cluster %s held back: demand not met", root)
            return
        elapsed = self.elapsed_ms()
        event = EmittedEntity(
            root=root,
            members=members,
            emitted_at_comparisons=self.stats.comparisons,
            elapsed_ms=elapsed,
            demand_ok=not failed,
            satisfied_demand=tuple(
                p for p in self.demand if p not in failed),
            view=view,
        )
        self.cluster.mark_emitted(root)
        if self.stats.first_emission_ms is None:
            self.stats.first_emission_ms = elapsed
        self.stats.emissions.append(event)
        if self.sink is not None:
            self.sink(event)

    def budget_spent(self):
        cfg = self.cfg
        if cfg.max_results is not None and \
                len(self.stats.emissions) >= cfg.max_results:
            return True
        return cfg.max_comparisons is not None and \
            self.stats.comparisons >= cfg.max_comparisons

    def schedule(self, filtered):
        """Pair stream of the run and the weighting its weights follow,
        None when no threshold applies"""
        disable = self.cfg.disable
        if "PPS" in disable and "B" not in disable:
            self.stats.profiles = len(
                {pid for pair, _ in filtered for pid in pair})
            return _input_schedule(filtered), None
        bg = build_blocking_graph(filtered, self.q.weighting)
        self.stats.profiles = len(bg)
        if "B" in disable:
            return _pid_schedule(bg), None
        return _weighted_schedule(bg), bg.weighting

    def run(self):
        g, q, cfg, stats = self.g, self.q, self.cfg, self.stats
        threshold = q.threshold if cfg.threshold is None else cfg.threshold
        matches = enumerate_matches(g, q.pattern, q.demand)
        candidates = candidate_pairs(matches, q.pattern)
        if "RF" in cfg.disable:
            filtered = [(pair, frozenset([NO_RF_RULE])) for pair in candidates]
            threshold = min(threshold, 1)
        else:
            filtered = filter_matches(
                matches, list(q.rules), g, self.ground_truth)
        stats.threshold = threshold
        stats.matches = len(matches)
        stats.candidate_pairs = len(candidates)
        stats.retained_pairs = len(filtered)

        schedule, weighting = self.schedule(filtered)
        visited = set()
        for a, b, weight in schedule:
            pair = canonical_pair(a, b)
            if pair in visited:
                continue
            visited.add(pair)
            if weighting is not None and \
                    not meets_threshold(weight, threshold, weighting):
                stats.pruned_pairs.append(pair)
                continue
            if cfg.transitivity and self.cluster.same(a, b):
                stats.inferred_pairs.append(pair)
                continue
            if self.budget_spent():
                stats.stopped_early = True
                break
            if not self.compare(pair):
                continue
            stats.matched_pairs.append(pair)
            if self.cluster.same(a, b):
                continue
            self.emit(self.cluster.union(a, b))
            if self.budget_spent():
                stats.stopped_early = True
                break

        stats.elapsed_ms = self.elapsed_ms()
        logger.info(
            "resolution (%s, threshold %s): %d comparisons, %d pruned,"
            " %d inferred, %d emissions in %.1f ms", stats.mode, threshold,
            stats.comparisons, stats.pruned, stats.skipped_transitive,
            len(stats.emissions), stats.elapsed_ms)
        return stats


def run_pipeline(g, q: Query, matcher, cfg: RunConfig = None,
                 sink: Callable[[EmittedEntity], None] = None,
                 ground_truth=None) -> RunStats:
    """Resolve the entities of ``q`` on ``g``, emitting clusters to ``sink``
    as they form. ``ground_truth`` only serves rules with eid constraints
    on their left hand side."""
    return _Run(g, q, matcher, cfg or RunConfig(), sink, ground_truth).run()
