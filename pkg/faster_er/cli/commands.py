# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""``faster`` command line.

Exit codes: 0 on success, 2 on bad input (files, query, flags), 3 when
resolution itself fails.
"""
import argparse
import csv
import json
import logging
import logging.config
import os
import sys
from dataclasses import replace
from logging import getLogger

from anyblok.config import ConfigurationException
from slugify import slugify

from .. import config
from ..blocking import build_blocking_graph, dump_blocking_graph
from ..exceptions import InputError, RuntimeResolutionError
from ..gdd_rules import filter_matches, parse_query, rule_selectivity_report
from ..graph_store import load_graph, load_ground_truth
from ..matchers import get_matcher
from ..metrics_bench import (
    DEFAULT_KS,
    ablation_suite,
    evaluate,
    gen_synthetic,
    write_ablation,
    write_report,
)
from ..pattern_match import enumerate_matches
from ..pps_engine import MODES, RunConfig, ndjson_sink, run_pipeline

logger = getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RUNTIME = 3
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _csv_list(text):
    return [item.strip() for item in text.split(",") if item.strip()]


def _graph_parser():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--graph-nodes", required=True,
                        help="nodes CSV: id,label,attrs")
    parser.add_argument("--graph-edges", required=True,
                        help="edges CSV: src,label,dst")
    parser.add_argument("--query", required=True, help="query JSON")
    parser.add_argument("--ground-truth", help="ground truth CSV: pid,eid")
    return parser


def _run_parser():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--matcher", default="similarity",
                        help="matcher name (oracle, similarity or any"
                             " registered one)")
    parser.add_argument("--matcher-attrs", type=_csv_list,
                        help="attributes compared by the similarity matcher")
    parser.add_argument("--tau", type=float,
                        help="similarity matcher acceptance score")
    parser.add_argument("--threshold", type=float,
                        help="override the query blocking threshold")
    parser.add_argument("--weighting", choices=("count", "arcs"),
                        help="override the query edge weighting")
    parser.add_argument("--disable", default="",
                        help="components to disable, e.g. T,PPS")
    parser.add_argument("--no-validate-demand", action="store_true",
                        help="emit clusters without checking the demand")
    parser.add_argument("--max-results", type=int)
    parser.add_argument("--max-comparisons", type=int)
    return parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="faster",
        description="On-demand entity resolution over property graphs")
    parser.add_argument("--logging-config",
                        help="logging configuration file (fileConfig format)")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True
    graph, run = _graph_parser(), _run_parser()

    cmd = commands.add_parser(
        "query", parents=[graph, run],
        help="resolve the query and stream entities as NDJSON")
    cmd.add_argument("--stats", help="where to write the run statistics")
    cmd.add_argument("--dump-blocking", help="write the blocking graph CSV")
    cmd.add_argument("--out", help="output directory")
    cmd.set_defaults(func=cmd_query)

    cmd = commands.add_parser(
        "validate", parents=[graph], help="check the input files only")
    cmd.set_defaults(func=cmd_validate)

    cmd = commands.add_parser(
        "bench", parents=[graph, run],
        help="measure recall, Tavg and Err@k of one run")
    cmd.add_argument("--k", type=int, nargs="+", default=list(DEFAULT_KS))
    cmd.add_argument("--name", default="faster")
    cmd.add_argument("--out", help="output directory")
    cmd.set_defaults(func=cmd_bench)

    cmd = commands.add_parser(
        "ablate", parents=[graph, run],
        help="compare the pipeline with components disabled")
    cmd.add_argument("--modes", type=_csv_list, default=list(MODES))
    cmd.add_argument("--name", default="faster")
    cmd.add_argument("--out", help="output directory")
    cmd.set_defaults(func=cmd_ablate)

    cmd = commands.add_parser(
        "gen", help="generate a seeded synthetic dataset")
    cmd.add_argument("--entities", type=int, required=True)
    cmd.add_argument("--dup-rate", type=float, default=0.1)
    cmd.add_argument("--attr-noise", type=float, default=0.2)
    cmd.add_argument("--seed", type=int, default=0)
    cmd.add_argument("--out", help="output directory")
    cmd.set_defaults(func=cmd_gen)

    cmd = commands.add_parser(
        "rules", parents=[graph],
        help="print how many candidate pairs each rule retains")
    cmd.set_defaults(func=cmd_rules)
    return parser


def setup_logging(path=None):
    if path:
        logging.config.fileConfig(path, disable_existing_loggers=False)
    else:
        logging.basicConfig(
            level=logging.WARNING, stream=sys.stderr, format=LOG_FORMAT)


def configure(args):
    """Copy the command line options into the configuration"""
    config.update(
        faster_threshold=getattr(args, "threshold", None),
        faster_weighting=getattr(args, "weighting", None),
        faster_tau=getattr(args, "tau", None),
        faster_output_dir=getattr(args, "out", None),
    )


def load_inputs(args):
    g = load_graph(args.graph_nodes, args.graph_edges)
    q = parse_query(args.query)
    if getattr(args, "weighting", None):
        q = replace(q, weighting=args.weighting).validate()
    gt = load_ground_truth(args.ground_truth) if args.ground_truth else None
    return g, q, gt


def make_matcher(args, gt):
    if args.matcher == "oracle" and gt is None:
        raise InputError("the oracle matcher needs --ground-truth")
    return get_matcher(
        args.matcher, ground_truth=gt, attrs=args.matcher_attrs,
        tau=config.get("faster_tau"))


def run_config(args):
    return RunConfig.from_disable(
        args.disable,
        threshold=args.threshold,
        validate_demand=not args.no_validate_demand,
        max_comparisons=args.max_comparisons,
        max_results=args.max_results,
    )


def _write_json(data, path):
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(data, fp, indent=2, sort_keys=True)
        fp.write("\n")


def cmd_query(args):
    g, q, gt = load_inputs(args)
    matcher = make_matcher(args, gt)
    cfg = run_config(args)
    if args.dump_blocking:
        matches = enumerate_matches(g, q.pattern, q.demand)
        bg = build_blocking_graph(
            filter_matches(matches, list(q.rules), g, gt), q.weighting)
        dump_blocking_graph(bg, args.dump_blocking)
    stats = run_pipeline(
        g, q, matcher, cfg, sink=ndjson_sink(sys.stdout), ground_truth=gt)
    stats_path = args.stats
    out_dir = config.get("faster_output_dir")
    if stats_path is None and out_dir:
        name = os.path.splitext(os.path.basename(args.query))[0]
        stats_path = os.path.join(out_dir, "%s.json" % slugify(
            "%s stats" % name))
    if stats_path:
        _write_json(stats.to_dict(), stats_path)
        logger.info("run statistics written to %s", stats_path)
    else:
        sys.stderr.write(json.dumps(stats.to_dict()) + "\n")
    return EXIT_OK


def cmd_validate(args):
    g, q, gt = load_inputs(args)
    sys.stdout.write(
        "ok: %d nodes, %d edges, %d rule(s), %d demand predicate(s)%s\n" % (
            len(g), len(g.edges), len(q.rules), len(q.demand),
            "" if gt is None else ", %d ground truth row(s)" % len(gt)))
    return EXIT_OK


def cmd_bench(args):
    g, q, gt = load_inputs(args)
    if gt is None:
        raise InputError("bench needs --ground-truth")
    out_dir = config.require("faster_output_dir")
    report = evaluate(g, q, make_matcher(args, gt), gt, run_config(args),
                      ks=args.k)
    for path in write_report(report, out_dir, args.name):
        sys.stdout.write(path + "\n")
    return EXIT_OK


def cmd_ablate(args):
    g, q, gt = load_inputs(args)
    out_dir = config.require("faster_output_dir")
    cfg = run_config(args)
    rows = ablation_suite(
        g, q, make_matcher(args, gt), gt, modes=args.modes,
        threshold=cfg.threshold, validate_demand=cfg.validate_demand)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    for row in rows:
        writer.writerow(row.to_row())
    sys.stdout.write(write_ablation(rows, out_dir, args.name) + "\n")
    return EXIT_OK


def cmd_gen(args):
    out_dir = config.require("faster_output_dir")
    dataset = gen_synthetic(
        args.entities, args.dup_rate, args.attr_noise, args.seed, out_dir)
    sys.stdout.write(
        "%d nodes, %d edges, %d duplicate cluster(s) in %s\n" % (
            len(dataset.graph), len(dataset.graph.edges), dataset.clusters,
            out_dir))
    return EXIT_OK


def cmd_rules(args):
    g, q, gt = load_inputs(args)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(
        ["rule", "retained", "candidates", "retention", "type_mismatches"])
    for row in rule_selectivity_report(q, g, gt):
        writer.writerow([
            row.rule_id, row.retained, row.candidates,
            round(row.retention, 6), row.type_mismatches,
        ])
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.logging_config)
    try:
        configure(args)
        return args.func(args)
    except (InputError, ConfigurationException, ValueError) as exc:
        sys.stderr.write("faster: error: %s\n" % exc)
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write("faster: error: %s\n" % exc)
        return EXIT_INPUT
    except RuntimeResolutionError as exc:
        logger.debug("resolution failed", exc_info=True)
        sys.stderr.write("faster: resolution failed: %s\n" % exc)
        return EXIT_RUNTIME
