# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
from .models import (  # noqa
    ENTRY_POINT_GROUP,
    MatchDecision,
    OracleMatcher,
    SimilarityMatcher,
    available_matchers,
    get_matcher,
    oracle_match,
    similarity_match,
)
