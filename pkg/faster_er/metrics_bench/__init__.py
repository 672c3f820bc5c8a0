# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
from .models import (  # noqa
    DEFAULT_KS,
    NOT_AVAILABLE,
    AblationRow,
    MetricsReport,
    ablation_suite,
    err_at_k,
    evaluate,
    format_tavg,
    found_pairs,
    ground_truth_pairs,
    is_error,
    query_ground_truth_pairs,
    query_recall,
    recall_curve,
    tavg,
    write_ablation,
    write_report,
)
from .synthetic import (  # noqa
    SYNTHETIC_QUERY,
    ScalingPoint,
    SyntheticDataset,
    gen_synthetic,
    scaling_run,
    typo,
)
