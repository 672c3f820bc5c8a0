# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Evaluation of resolution runs against a ground truth"""
import csv
import json
import math
import os
from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from slugify import slugify

from ..exceptions import MissingGroundTruth
from ..gdd_rules import entity_demand, eval_demand
from ..graph_store import canonical_pair, node_sort_key
from ..pattern_match import candidate_pairs, enumerate_matches
from ..pps_engine import MODES, RunConfig, RunStats, run_pipeline

logger = getLogger(__name__)

NOT_AVAILABLE = "n/a"
DEFAULT_KS = (1, 5, 10, 20, 50, 100)
ABLATION_HEADER = ["mode", "comparisons", "relative", "recall"]
CURVE_HEADER = ["comparisons", "recall"]


def query_recall(found_pairs, gt_pairs) -> float:
    gt_pairs = set(gt_pairs)
    if not gt_pairs:
        return 1.0
    return float(len(set(found_pairs) & gt_pairs)) / len(gt_pairs)


def tavg(total_ms, emitted_true_matches) -> float:
    """Average time per emitted true match, infinite when none"""
    if emitted_true_matches <= 0:
        return math.inf
    return float(total_ms) / emitted_true_matches


def format_tavg(value):
    return NOT_AVAILABLE if math.isinf(value) else value


def ground_truth_pairs(gt: Mapping[str, str], pids=None):
    """Every pair of distinct pids sharing an eid"""
    by_eid = {}
    for pid, eid in gt.items():
        if pids is None or pid in pids:
            by_eid.setdefault(eid, []).append(pid)
    res = set()
    for members in by_eid.values():
        members.sort(key=node_sort_key)
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                res.add(canonical_pair(a, b))
    return res


def query_ground_truth_pairs(g, q, gt: Mapping[str, str]):
    """Ground truth duplicate pairs among the Stage 1 candidates of ``q``
    under its demand"""
    matches = enumerate_matches(g, q.pattern, q.demand)
    res = set()
    for a, b in candidate_pairs(matches, q.pattern):
        if a in gt and b in gt and gt[a] == gt[b]:
            res.add((a, b))
    return res


def found_pairs(stats: RunStats):
    """Pairs inside the emitted member sets"""
    res = set()
    for event in stats.emissions:
        res |= event.pairs()
    return res


def recall_curve(stats: RunStats, gt_pairs) -> List[Tuple[int, float]]:
    """(comparisons, recall) after each emission, starting from zero"""
    gt_pairs = set(gt_pairs)
    found = set()
    curve = [(0, query_recall(found, gt_pairs))]
    for event in stats.emissions:
        found |= event.pairs()
        curve.append(
            (event.emitted_at_comparisons, query_recall(found, gt_pairs)))
    return curve


def is_error(event, demand, gt: Mapping[str, str]):
    """An emission is wrong when its members are not one true entity or
    its aggregated attributes miss the demand"""
    eids = set()
    for pid in event.members:
        if pid not in gt:
            raise MissingGroundTruth(pid)
        eids.add(gt[pid])
    return len(eids) != 1 or bool(eval_demand(demand, event.view))


def err_at_k(emissions: Sequence, demand, gt: Mapping[str, str],
             ks: Iterable[int] = DEFAULT_KS) -> Dict[int, float]:
    """Error rate over the first k emissions for every k.

    ``demand`` holds entity level predicates; k beyond the number of
    emissions is clipped.
    """
    errors = [is_error(e, demand, gt) for e in emissions]
    res = {}
    for k in ks:
        clipped = min(k, len(errors))
        if clipped != k:
            logger.warning(
                "Err@%d asked with %d emission(s) only, clipped to Err@%d",
                k, len(errors), clipped)
        res[k] = (
            float(sum(errors[:clipped])) / clipped if clipped else 0.0)
    return res


@dataclass
class MetricsReport:
    query_recall: float = 0.0
    tavg_ms: float = math.inf
    err_at_k: Dict[int, float] = field(default_factory=dict)
    comparisons: int = 0
    relative_comparisons: Dict[str, float] = field(default_factory=dict)
    recall_curve: List[Tuple[int, float]] = field(default_factory=list)
    stats: Optional[RunStats] = None

    def to_dict(self):
        res = {
            "query_recall": self.query_recall,
            "tavg_ms": format_tavg(self.tavg_ms),
            "err_at_k": {str(k): v for k, v in self.err_at_k.items()},
            "comparisons": self.comparisons,
            "relative_comparisons": dict(self.relative_comparisons),
            "recall_curve": [list(point) for point in self.recall_curve],
        }
        if self.stats is not None:
            res["run"] = self.stats.to_dict()
        return res


def evaluate(g, q, matcher, gt: Mapping[str, str], cfg: RunConfig = None,
             ks: Iterable[int] = DEFAULT_KS, sink=None) -> MetricsReport:
    """Run the pipeline once and measure it"""
    stats = run_pipeline(g, q, matcher, cfg, sink=sink, ground_truth=gt)
    wanted = query_ground_truth_pairs(g, q, gt)
    found = found_pairs(stats)
    true_found = found & ground_truth_pairs(gt)
    demand = entity_demand(q.demand, q.pattern.duplicate_vars)
    report = MetricsReport(
        query_recall=query_recall(found, wanted),
        tavg_ms=tavg(stats.elapsed_ms, len(true_found)),
        err_at_k=err_at_k(stats.emissions, demand, gt, ks),
        comparisons=stats.comparisons,
        relative_comparisons={stats.mode: 1.0},
        recall_curve=recall_curve(stats, wanted),
        stats=stats,
    )
    logger.info(
        "%s: recall %.3f over %d wanted pair(s), %d comparisons",
        stats.mode, report.query_recall, len(wanted), stats.comparisons)
    return report


@dataclass
class AblationRow:
    mode: str
    comparisons: int
    relative: float
    recall: Optional[float] = None

    def to_row(self):
        return [
            self.mode, self.comparisons, round(self.relative, 6),
            "" if self.recall is None else round(self.recall, 6),
        ]


def _relative(comparisons, reference):
    if reference:
        return float(comparisons) / reference
    return 1.0 if not comparisons else math.inf


def ablation_suite(g, q, matcher, gt: Mapping[str, str] = None,
                   modes: Sequence[str] = tuple(MODES),
                   **options) -> List[AblationRow]:
    """One run per mode, comparisons relative to the full pipeline"""
    if "full" not in modes:
        modes = ("full",) + tuple(modes)
    wanted = query_ground_truth_pairs(g, q, gt) if gt is not None else None
    runs = {}
    for mode in modes:
        cfg = RunConfig.for_mode(mode, **options)
        runs[mode] = run_pipeline(g, q, matcher, cfg, ground_truth=gt)
    reference = runs["full"].comparisons
    rows = []
    for mode in modes:
        stats = runs[mode]
        rows.append(AblationRow(
            mode=mode,
            comparisons=stats.comparisons,
            relative=_relative(stats.comparisons, reference),
            recall=(
                None if wanted is None
                else query_recall(found_pairs(stats), wanted)),
        ))
        logger.info("ablation %s: %d comparisons (x%.2f)", mode,
                    stats.comparisons, rows[-1].relative)
    return rows


def report_filename(name, suffix, ext):
    return "%s.%s" % (slugify("%s %s" % (name, suffix)), ext)


def write_report(report: MetricsReport, out_dir, name="faster"):
    """Write the JSON report and the recall curve CSV, return both paths"""
    os.makedirs(out_dir, exist_ok=True)
    json_path = os.path.join(out_dir, report_filename(name, "report", "json"))
    with open(json_path, "w", encoding="utf-8") as fp:
        json.dump(report.to_dict(), fp, indent=2, sort_keys=True)
    curve_path = os.path.join(
        out_dir, report_filename(name, "recall curve", "csv"))
    with open(curve_path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(CURVE_HEADER)
        for comparisons, recall in report.recall_curve:
            writer.writerow([comparisons, round(recall, 6)])
    logger.info("report written to %s and %s", json_path, curve_path)
    return json_path, curve_path


def write_ablation(rows: Sequence[AblationRow], out_dir, name="faster"):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, report_filename(name, "ablation", "csv"))
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(ABLATION_HEADER)
        for row in rows:
            writer.writerow(row.to_row())
    logger.info("ablation table written to %s", path)
    return path