# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Matching functions.

The pipeline only ever calls ``matcher(a, b)`` on two entity profiles and
reads back a :class:`MatchDecision`.
"""
from dataclasses import dataclass
from logging import getLogger
from typing import Mapping, Optional, Sequence

from rapidfuzz.distance import Levenshtein

from .. import config
from ..exceptions import InputError, MissingGroundTruth, UnknownMatcher
from ..graph_store import EntityProfile, is_number, is_text

logger = getLogger(__name__)

ENTRY_POINT_GROUP = "faster_er.matchers"


@dataclass(frozen=True)
class MatchDecision:
    is_match: bool
    score: Optional[float] = None


def oracle_match(a: EntityProfile, b: EntityProfile,
                 gt: Mapping[str, str]) -> MatchDecision:
    for profile in (a, b):
        if profile.pid not in gt:
            raise MissingGroundTruth(profile.pid)
    return MatchDecision(is_match=gt[a.pid] == gt[b.pid])


def attr_similarity(left, right):
    if left is None or right is None:
        return 0.0
    if is_text(left) and is_text(right):
        return Levenshtein.normalized_similarity(left, right)
    if is_number(left) and is_number(right):
        return 1.0 if left == right else 0.0
    return 0.0


def similarity_match(a: EntityProfile, b: EntityProfile,
                     attrs: Sequence[str], tau: float) -> MatchDecision:
    """Mean per attribute similarity against ``tau``.

    Text scores ``1 - edit / longest length``, numbers score 1 only when
    equal, an attribute missing on either side scores 0.
    """
    if not 0 <= tau <= 1:
        raise ValueError("tau must lie in [0, 1], got %r" % (tau,))
    if not attrs:
        return MatchDecision(is_match=tau <= 0, score=0.0)
    score = sum(
        attr_similarity(a.attrs.get(attr), b.attrs.get(attr))
        for attr in attrs) / len(attrs)
    return MatchDecision(is_match=score >= tau, score=score)


class OracleMatcher:
    """Labels a pair from the ground truth"""

    name = "oracle"

    def __init__(self, ground_truth=None, **_):
        if ground_truth is None:
            raise InputError("the oracle matcher needs a ground truth")
        self.ground_truth = ground_truth

    def __call__(self, a, b):
        return oracle_match(a, b, self.ground_truth)

    def __repr__(self):
        return "<OracleMatcher %d profiles>" % len(self.ground_truth)


class SimilarityMatcher:
    """Edit distance similarity over ``attrs`` (every attribute the two
    profiles carry when no list is given)"""

    name = "similarity"

    def __init__(self, attrs=None, tau=None, **_):
        self.attrs = tuple(attrs) if attrs else None
        self.tau = config.get("faster_tau") if tau is None else tau
        if not 0 <= self.tau <= 1:
            raise InputError("tau must lie in [0, 1], got %r" % (self.tau,))

    def __call__(self, a, b):
        attrs = self.attrs or sorted(set(a.attrs) | set(b.attrs))
        return similarity_match(a, b, attrs, self.tau)

    def __repr__(self):
        return "<SimilarityMatcher tau=%s attrs=%s>" % (
            self.tau, ",".join(self.attrs or ("*",)))


BUILTIN_MATCHERS = {
    OracleMatcher.name: OracleMatcher,
    SimilarityMatcher.name: SimilarityMatcher,
}


def _entry_points():
    from importlib.metadata import entry_points

    eps = entry_points()
    if hasattr(eps, "select"):
        return eps.select(group=ENTRY_POINT_GROUP)
    return eps.get(ENTRY_POINT_GROUP, ())


def available_matchers():
    names = set(BUILTIN_MATCHERS)
    names.update(ep.name for ep in _entry_points())
    return sorted(names)


def get_matcher(name, **options):
    """Instantiate the matcher registered under ``name``"""
    factory = BUILTIN_MATCHERS.get(name)
    if factory is None:
        for ep in _entry_points():
            if ep.name == name:
                factory = ep.load()
                break
    if factory is None:
        raise UnknownMatcher(name, available_matchers())
    matcher = factory(**options)
    logger.debug("matcher %r ready: %r", name, matcher)
    return matcher
