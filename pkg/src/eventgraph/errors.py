"""Exception types raised across the pipeline."""

from __future__ import annotations


class EventGraphError(Exception):
    """Base class for all pipeline errors."""


class MalformedJson(EventGraphError):
    pass


class MissingField(EventGraphError):
    def __init__(self, name: str):
        super().__init__(f"missing field: {name}")
        self.name = name


class EmptyBody(EventGraphError):
    pass


class MalformedXml(EventGraphError):
    pass


class EmptyFeed(EventGraphError):
    pass


class DimsMismatch(EventGraphError):
    pass


class MalformedLine(EventGraphError):
    def __init__(self, line_no: int, reason: str = ""):
        super().__init__(f"malformed line {line_no}" + (f": {reason}" if reason else ""))
        self.line_no = line_no


class EmptyTable(EventGraphError):
    pass


class TooFewVectors(EventGraphError):
    pass


class KTooLarge(EventGraphError):
    pass


class ZeroVector(EventGraphError):
    pass


class UnknownNode(EventGraphError):
    def __init__(self, node_id: int):
        super().__init__(f"unknown node: {node_id}")
        self.node_id = node_id


class UnknownEdge(EventGraphError):
    def __init__(self, edge_id: int):
        super().__init__(f"unknown edge: {edge_id}")
        self.edge_id = edge_id


class CorruptSnapshot(EventGraphError):
    def __init__(self, path: str, line_no: int):
        super().__init__(f"corrupt snapshot {path}:{line_no}")
        self.path = path
        self.line_no = line_no


class EmptyQuery(EventGraphError):
    pass


class QuerySyntaxError(EventGraphError):
    def __init__(self, position: int, reason: str):
        super().__init__(f"query syntax error at {position}: {reason}")
        self.position = position
        self.reason = reason
