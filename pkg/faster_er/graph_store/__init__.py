# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
from .models import (  # noqa
    AttrValue,
    Edge,
    EntityProfile,
    Node,
    PropertyGraph,
    attach_ground_truth,
    canonical_pair,
    dump_graph,
    dump_ground_truth,
    is_number,
    is_text,
    load_graph,
    load_ground_truth,
    neighbors,
    node_sort_key,
    pair_key,
    profile_of,
)
