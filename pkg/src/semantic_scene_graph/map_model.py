"""Road network as a directed graph of lane segments.

Segments are nodes. Edges carry one of three kinds: ``consecutive``
(predecessor -> successor, directed), ``adjacent`` (side by side) and
``overlapping`` (crossing or merging geometry). The last two are stored once
and traversed in both directions.

Map files are JSON::

    {
      "segments": [{"id": "A", "centerline": [[0, 0], [10, 0]], "width": 3.5}],
      "edges": [{"from": "A", "to": "B", "kind": "consecutive"}]
    }
"""
from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .geometry import chord_lengths, polyline_distance

DEFAULT_OVERLAP_TOLERANCE = 0.5
_MIN_POINT_SEPARATION = 1e-9


class MapError(ValueError):
    """Base class for map loading problems."""


class MapSyntaxError(MapError):
    """The document is not well-formed JSON or has the wrong shape."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class MapValidationError(MapError):
    """The document parses but describes an invalid road graph."""


class RoadEdgeKind(str, enum.Enum):
    CONSECUTIVE = "consecutive"
    ADJACENT = "adjacent"
    OVERLAPPING = "overlapping"

    @property
    def symmetric(self) -> bool:
        return self is not RoadEdgeKind.CONSECUTIVE


@dataclass(frozen=True)
class RoadSegment:
    """One elementary lane piece with its centerline in driving direction."""

    id: str
    centerline: tuple[tuple[float, float], ...]
    width: float | None = None
    regulatory: tuple[Any, ...] | None = None

    @cached_property
    def points(self) -> np.ndarray:
        pts = np.asarray(self.centerline, dtype=float)
        pts.setflags(write=False)
        return pts

    @cached_property
    def length(self) -> float:
        return float(chord_lengths(self.points).sum())


def segment_length(segment: RoadSegment) -> float:
    """Length of the segment centerline in meters (sum of chord lengths)."""
    return segment.length


@dataclass(frozen=True)
class RoadEdge:
    source: str
    target: str
    kind: RoadEdgeKind

    @property
    def pair(self) -> frozenset[str]:
        return frozenset((self.source, self.target))


class RoadGraph:
    """Validated, immutable road graph.

    ``segment_index`` maps every id to its position in lexicographic id
    order; exports use it to encode segments numerically.
    """

    def __init__(self, segments: Iterable[RoadSegment], edges: Iterable[RoadEdge]):
        self._segments = tuple(segments)
        self._edges = tuple(edges)
        self._by_id: dict[str, RoadSegment] = {}
        for seg in self._segments:
            if seg.id in self._by_id:
                raise MapValidationError(f"duplicate segment id {seg.id!r}")
            _check_centerline(seg)
            self._by_id[seg.id] = seg

        self._out: dict[str, dict[RoadEdgeKind, list[str]]] = {
            sid: {kind: [] for kind in RoadEdgeKind} for sid in self._by_id
        }
        seen: set[tuple] = set()
        for edge in self._edges:
            for end in (edge.source, edge.target):
                if end not in self._by_id:
                    raise MapValidationError(
                        f"edge {edge.source!r} -> {edge.target!r} ({edge.kind.value}) "
                        f"references undefined segment {end!r}"
                    )
            if edge.source == edge.target:
                raise MapValidationError(f"self-loop edge on segment {edge.source!r}")
            key = (edge.kind, edge.pair) if edge.kind.symmetric else (edge.kind, edge.source, edge.target)
            if key in seen:
                raise MapValidationError(
                    f"duplicate {edge.kind.value} edge {edge.source!r} -> {edge.target!r}"
                )
            seen.add(key)
            self._out[edge.source][edge.kind].append(edge.target)
            if edge.kind.symmetric:
                self._out[edge.target][edge.kind].append(edge.source)
        for kinds in self._out.values():
            for targets in kinds.values():
                targets.sort()

        self.segment_index: dict[str, int] = {
            sid: i for i, sid in enumerate(sorted(self._by_id))
        }
        # Memo for structures derived from the immutable graph (paths, projection tables).
        self._derived: dict[Any, Any] = {}

    @property
    def segments(self) -> tuple[RoadSegment, ...]:
        return self._segments

    @property
    def edges(self) -> tuple[RoadEdge, ...]:
        return self._edges

    def __len__(self) -> int:
        return len(self._segments)

    def __contains__(self, segment_id: object) -> bool:
        return segment_id in self._by_id

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RoadGraph):
            return NotImplemented
        return self._segments == other._segments and self._edges == other._edges

    __hash__ = object.__hash__

    def __repr__(self) -> str:
        return f"RoadGraph({len(self._segments)} segments, {len(self._edges)} edges)"

    def segment(self, segment_id: str) -> RoadSegment:
        try:
            return self._by_id[segment_id]
        except KeyError:
            raise KeyError(f"unknown segment {segment_id!r}") from None

    def neighbors(self, segment_id: str, kind: RoadEdgeKind) -> list[str]:
        """Segments reachable over one edge of ``kind``.

        Consecutive lookups only follow the driving direction.
        """
        if segment_id not in self._out:
            raise KeyError(f"unknown segment {segment_id!r}")
        return list(self._out[segment_id][RoadEdgeKind(kind)])

    def joined(self, a: str, b: str, kind: RoadEdgeKind) -> bool:
        """True if an edge of ``kind`` leads from ``a`` to ``b`` in traversal terms."""
        return b in self._out[a][kind]

    def with_edges(self, extra: Iterable[RoadEdge]) -> RoadGraph:
        return RoadGraph(self._segments, self._edges + tuple(extra))


def neighbors(graph: RoadGraph, segment_id: str, kind: RoadEdgeKind) -> list[str]:
    return graph.neighbors(segment_id, kind)


def _check_centerline(seg: RoadSegment) -> None:
    pts = seg.points
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise MapValidationError(f"segment {seg.id!r}: centerline must be a list of [x, y] pairs")
    if len(pts) < 2:
        raise MapValidationError(f"segment {seg.id!r}: centerline needs at least 2 points")
    if not np.isfinite(pts).all():
        raise MapValidationError(f"segment {seg.id!r}: centerline has non-finite coordinates")
    gaps = chord_lengths(pts)
    if (gaps <= _MIN_POINT_SEPARATION).any():
        k = int(np.argmax(gaps <= _MIN_POINT_SEPARATION))
        raise MapValidationError(
            f"segment {seg.id!r}: degenerate centerline, points {k} and {k + 1} coincide"
        )
    if seg.width is not None and not (math.isfinite(seg.width) and seg.width > 0):
        raise MapValidationError(f"segment {seg.id!r}: width must be a positive number")


def _parse_segment(raw: Any, pos: int) -> RoadSegment:
    if not isinstance(raw, dict):
        raise MapSyntaxError(f"segments[{pos}] is not an object")
    sid = raw.get("id")
    if not isinstance(sid, str) or not sid:
        raise MapSyntaxError(f"segments[{pos}] has no string 'id'")
    line = raw.get("centerline")
    if not isinstance(line, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(_is_number(c) for c in p) for p in line
    ):
        raise MapSyntaxError(f"segment {sid!r}: 'centerline' must be a list of [x, y] numbers")
    width = raw.get("width")
    if width is not None and not _is_number(width):
        raise MapSyntaxError(f"segment {sid!r}: 'width' must be a number")
    regulatory = raw.get("regulatory")
    if regulatory is not None and not isinstance(regulatory, list):
        raise MapSyntaxError(f"segment {sid!r}: 'regulatory' must be a list")
    return RoadSegment(
        id=sid,
        centerline=tuple((float(x), float(y)) for x, y in line),
        width=None if width is None else float(width),
        regulatory=None if regulatory is None else tuple(regulatory),
    )


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _parse_edge(raw: Any, pos: int) -> RoadEdge:
    if not isinstance(raw, dict):
        raise MapSyntaxError(f"edges[{pos}] is not an object")
    src, dst, kind = raw.get("from"), raw.get("to"), raw.get("kind")
    if not isinstance(src, str) or not isinstance(dst, str):
        raise MapSyntaxError(f"edges[{pos}] needs string 'from' and 'to'")
    try:
        kind = RoadEdgeKind(kind)
    except ValueError:
        raise MapSyntaxError(
            f"edge {src!r} -> {dst!r}: unknown kind {kind!r} "
            "(expected consecutive, adjacent or overlapping)"
        ) from None
    return RoadEdge(src, dst, kind)


def parse_map(text: str) -> RoadGraph:
    """Parse and validate a JSON map document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapSyntaxError(f"malformed map document: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise MapSyntaxError("map document must be a JSON object")
    segs, edges = doc.get("segments"), doc.get("edges", [])
    if not isinstance(segs, list) or not isinstance(edges, list):
        raise MapSyntaxError("map document needs a 'segments' list and an 'edges' list")
    return RoadGraph(
        [_parse_segment(s, i) for i, s in enumerate(segs)],
        [_parse_edge(e, i) for i, e in enumerate(edges)],
    )


def load_map(path: str | Path) -> RoadGraph:
    return parse_map(Path(path).read_text(encoding="utf-8"))


def serialize_map(graph: RoadGraph) -> str:
    segments = []
    for seg in graph.segments:
        entry: dict[str, Any] = {"id": seg.id, "centerline": [list(p) for p in seg.centerline]}
        if seg.width is not None:
            entry["width"] = seg.width
        if seg.regulatory is not None:
            entry["regulatory"] = list(seg.regulatory)
        segments.append(entry)
    edges = [{"from": e.source, "to": e.target, "kind": e.kind.value} for e in graph.edges]
    return json.dumps({"segments": segments, "edges": edges}, indent=2) + "\n"


def geometric_overlaps(graph: RoadGraph, tolerance: float = DEFAULT_OVERLAP_TOLERANCE) -> set[frozenset[str]]:
    """Unordered segment pairs whose centerlines come within ``tolerance``.

    Pairs already joined by a consecutive or adjacent edge are left out.
    """
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    topological = {
        e.pair for e in graph.edges if e.kind is not RoadEdgeKind.OVERLAPPING
    }
    found = set()
    for a, b in itertools.combinations(graph.segments, 2):
        pair = frozenset((a.id, b.id))
        if pair in topological:
            continue
        if polyline_distance(a.points, b.points, cutoff=tolerance) <= tolerance:
            found.add(pair)
    return found


def detect_overlaps(graph: RoadGraph, tolerance: float = DEFAULT_OVERLAP_TOLERANCE) -> list[RoadEdge]:
    """Overlapping edges implied by geometry but missing from the graph.

    Adding the result to the graph and running again yields nothing new.
    """
    declared = {e.pair for e in graph.edges if e.kind is RoadEdgeKind.OVERLAPPING}
    missing = geometric_overlaps(graph, tolerance) - declared
    return [
        RoadEdge(*sorted(pair), RoadEdgeKind.OVERLAPPING)
        for pair in sorted(missing, key=sorted)
    ]


@dataclass
class OverlapAudit:
    """Declared-versus-geometric overlap comparison for a map."""

    undeclared: list[tuple[str, str]] = field(default_factory=list)
    disjoint: list[tuple[str, str]] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.undeclared and not self.disjoint


def audit_overlaps(graph: RoadGraph, tolerance: float = DEFAULT_OVERLAP_TOLERANCE) -> OverlapAudit:
    geometric = geometric_overlaps(graph, tolerance)
    declared = {e.pair for e in graph.edges if e.kind is RoadEdgeKind.OVERLAPPING}
    return OverlapAudit(
        undeclared=sorted(tuple(sorted(p)) for p in geometric - declared),
        disjoint=sorted(tuple(sorted(p)) for p in declared - geometric),
    )
