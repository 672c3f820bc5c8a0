# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
from .models import (  # noqa
    AGGREGATES,
    DistanceConstraint,
    GddRule,
    Query,
    SelectivityRow,
    TOTAL_ROW,
    edit_distance,
    eval_constraint,
    filter_matches,
    metric_distance,
    rule_selectivity_report,
)
from .parser import parse_query, parse_query_data, query_to_data  # noqa
from .predicates import (  # noqa
    AnyOf,
    DemandPredicate,
    entity_demand,
    eval_demand,
)
