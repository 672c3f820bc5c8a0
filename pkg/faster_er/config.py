# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Runtime settings

Settings are stored in the AnyBlok ``Configuration`` registry so that a
host application configuring AnyBlok can also drive the resolver. Missing
entries fall back to :data:`DEFAULTS`.
"""
from logging import getLogger

from anyblok.config import Configuration, ConfigurationException

logger = getLogger(__name__)

DEFAULTS = {
    "faster_threshold": 2,
    "faster_weighting": "count",
    "faster_tau": 0.8,
    "faster_arcs_tolerance": 1e-9,
    "faster_max_pattern_vars": 6,
    "faster_output_dir": None,
}


def get(key):
    """Return the configured value of ``key`` or its default"""
    return Configuration.get(key, DEFAULTS.get(key))


def update(**kwargs):
    """Set several entries, ignoring the ones left to None"""
    for key, value in kwargs.items():
        if value is None:
            continue
        logger.debug("configuration %s = %r", key, value)
        Configuration.set(key, value)


def require(key):
    """Return a mandatory entry, raise ConfigurationException if unset"""
    value = get(key)
    if value is None:
        raise ConfigurationException(
            "You must set a %s configuration entry (or the matching command"
            " line option)." % key
        )
    return value
