# This file is a part of the faster_er project
#
#    Copyright (C) 2026 faster_er contributors
#
# This Source Code Form is subject to the terms of the Mozilla Public License,
# v. 2.0. If a copy of the MPL was not distributed with this file,You can
# obtain one at http://mozilla.org/MPL/2.0/.
"""Exceptions raised by faster_er.

Everything derives from :class:`FasterError`. :class:`InputError` covers
bad files, bad queries and bad flags; the command line maps it to exit code
2. :class:`RuntimeResolutionError` covers failures while resolving and maps
to exit code 3.
"""


class FasterError(Exception):
    """Root of every faster_er error"""


class InputError(FasterError):
    """Invalid input file, query or option"""


class RuntimeResolutionError(FasterError):
    """Failure while the pipeline runs"""


class MalformedRow(InputError):
    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        super().__init__("%s:%d: %s" % (self.path, line, message))


class DuplicateNodeId(InputError):
    def __init__(self, node_id, path=None, line=None):
        self.node_id = node_id
        self.line = line
        where = ""
        if path is not None:
            where = " (%s:%s)" % (path, line)
        super().__init__("duplicate node id %r%s" % (node_id, where))


class DanglingEdge(InputError):
    def __init__(self, node_id, path=None, line=None):
        self.node_id = node_id
        self.line = line
        where = ""
        if path is not None:
            where = " (%s:%s)" % (path, line)
        super().__init__(
            "edge references missing node %r%s" % (node_id, where))


class UnknownNode(InputError):
    def __init__(self, node_id):
        self.node_id = node_id
        super().__init__("unknown node %r" % (node_id,))


class UnknownProfile(InputError):
    def __init__(self, pid):
        self.pid = pid
        super().__init__("profile %r is not in the blocking graph" % (pid,))


class PatternError(InputError):
    """Structurally invalid graph pattern"""


class UnboundVariableInDemand(InputError):
    def __init__(self, var):
        self.var = var
        super().__init__("demand references undeclared variable %r" % var)


class SchemaError(InputError):
    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__("%s: %s" % (path or "<root>", message))


class UndeclaredVariable(InputError):
    def __init__(self, var, where=None):
        self.var = var
        self.where = where
        msg = "undeclared variable %r" % var
        if where:
            msg += " in %s" % where
        super().__init__(msg)


class BadThreshold(InputError):
    def __init__(self, value, reason="must be a non-negative number"):
        self.value = value
        super().__init__("bad threshold %r: %s" % (value, reason))


class UnknownMatcher(InputError):
    def __init__(self, name, known=()):
        self.name = name
        super().__init__(
            "unknown matcher %r (known: %s)" % (name, ", ".join(known)))


class MissingGroundTruth(RuntimeResolutionError):
    def __init__(self, pid):
        self.pid = pid
        super().__init__("no ground truth entry for profile %r" % (pid,))


class MatcherFailure(RuntimeResolutionError):
    def __init__(self, pair, cause):
        self.pair = tuple(pair)
        self.cause = cause
        super().__init__(
            "matcher failed on pair (%s, %s): %s" % (pair[0], pair[1], cause))
