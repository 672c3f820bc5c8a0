# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Small bundled datasets"""
import os

here = os.path.abspath(os.path.dirname(__file__))


def fixture_dir(name):
    path = os.path.join(here, name)
    if not os.path.isdir(path):
        raise FileNotFoundError("no fixture named %r" % name)
    return path


def fixture_path(name, filename):
    return os.path.join(fixture_dir(name), filename)
