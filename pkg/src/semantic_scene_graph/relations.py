"""Road-graph path search and semantic classification of participant pairs.

A pair of projection identities (i on segment a, j on segment b) is related

* longitudinally if an all-consecutive path links a and b,
* laterally if such a path uses exactly one adjacent edge,
* intersecting if paths leaving a and b reach two segments joined by an
  overlapping edge.

Longitudinal and lateral links are searched from both ends, so j behind i
yields a negative ``d_F``. Path offsets treat an adjacent hop as a sideways
move: the neighbour lane is entered at the same arc length.
"""
from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .map_model import DEFAULT_OVERLAP_TOLERANCE, MapError, RoadEdgeKind, RoadGraph
from .geometry import contact_arc_length
from .matching import ProjectionIdentity

CONSECUTIVE = RoadEdgeKind.CONSECUTIVE
ADJACENT = RoadEdgeKind.ADJACENT
OVERLAPPING = RoadEdgeKind.OVERLAPPING


class MapInconsistencyError(MapError):
    """An overlapping edge joins two centerlines that never come close."""


class RelationClass(str, enum.Enum):
    # Order is the one-hot order used by the edge attribute export.
    LONGITUDINAL = "longitudinal"
    LATERAL = "lateral"
    INTERSECTING = "intersecting"


RELATION_ORDER = {cls: k for k, cls in enumerate(RelationClass)}
INTERSECTING = RelationClass.INTERSECTING


@dataclass(frozen=True)
class PathSearchConfig:
    """``max_total_length`` bounds how far along the path a segment may start."""

    max_total_length: float = 150.0
    overlap_tolerance: float = DEFAULT_OVERLAP_TOLERANCE

    def __post_init__(self):
        if not self.max_total_length > 0:
            raise ValueError("max_total_length must be positive")
        if self.overlap_tolerance < 0:
            raise ValueError("overlap_tolerance must be non-negative")


@dataclass(frozen=True)
class RoadPath:
    """A walk through the road graph starting at ``segments[0]``.

    ``offsets[k]`` is the along-road distance from the start of the first
    segment to the start of ``segments[k]``.
    """

    segments: tuple[str, ...]
    kinds: tuple[RoadEdgeKind, ...]
    offsets: tuple[float, ...]
    total_length: float

    @property
    def reach(self) -> float:
        return self.offsets[-1]

    def offset_of(self, segment_id: str) -> float:
        try:
            return self.offsets[self.segments.index(segment_id)]
        except ValueError:
            raise ValueError(f"segment {segment_id!r} is not on path {self.segments}") from None

    def prefix_kinds(self, segment_id: str) -> tuple[RoadEdgeKind, ...]:
        return self.kinds[: self.segments.index(segment_id)]


def make_path(graph: RoadGraph, segment_ids: Sequence[str]) -> RoadPath:
    """Build a :class:`RoadPath` from an explicit segment sequence."""
    if not segment_ids:
        raise ValueError("a path needs at least one segment")
    kinds, offsets = [], [0.0]
    for prev, nxt in zip(segment_ids, segment_ids[1:]):
        if graph.joined(prev, nxt, CONSECUTIVE):
            kinds.append(CONSECUTIVE)
            offsets.append(offsets[-1] + graph.segment(prev).length)
        elif graph.joined(prev, nxt, ADJACENT):
            kinds.append(ADJACENT)
            offsets.append(offsets[-1])
        else:
            raise ValueError(f"no consecutive or adjacent edge from {prev!r} to {nxt!r}")
    total = sum(graph.segment(s).length for s in segment_ids)
    return RoadPath(tuple(segment_ids), tuple(kinds), tuple(offsets), total)


def find_paths(graph: RoadGraph, start_segment: str, config: PathSearchConfig = PathSearchConfig()) -> list[RoadPath]:
    """All simple paths from ``start_segment`` over consecutive and adjacent edges.

    A path holds at most one adjacent edge and is kept while the offset of its
    last segment stays within ``config.max_total_length``. The trivial path is
    included and the list is sorted by segment-id sequence. Results are cached
    on the graph.
    """
    key = ("paths", start_segment, config.max_total_length)
    cached = graph._derived.get(key)
    if cached is not None:
        return cached
    graph.segment(start_segment)
    bound = config.max_total_length
    found: list[RoadPath] = []

    def extend(segs, kinds, offsets, total, lateral_used):
        found.append(RoadPath(tuple(segs), tuple(kinds), tuple(offsets), total))
        here = segs[-1]
        steps = [(n, CONSECUTIVE, offsets[-1] + graph.segment(here).length)
                 for n in graph.neighbors(here, CONSECUTIVE)]
        if not lateral_used:
            steps += [(n, ADJACENT, offsets[-1]) for n in graph.neighbors(here, ADJACENT)]
        for nxt, kind, off in steps:
            if off > bound or nxt in segs:
                continue
            segs.append(nxt)
            kinds.append(kind)
            offsets.append(off)
            extend(segs, kinds, offsets, total + graph.segment(nxt).length,
                   lateral_used or kind is ADJACENT)
            segs.pop()
            kinds.pop()
            offsets.pop()

    extend([start_segment], [], [0.0], graph.segment(start_segment).length, False)
    found.sort(key=lambda p: p.segments)
    graph._derived[key] = found
    return found


def classify_path(edge_kinds: Iterable[RoadEdgeKind]) -> RelationClass | None:
    """Relation class implied by the edge kinds along a path, or None."""
    kinds = list(edge_kinds)
    lateral = sum(k is ADJACENT for k in kinds)
    crossing = sum(k is OVERLAPPING for k in kinds)
    if crossing == 1:
        return RelationClass.INTERSECTING
    if crossing == 0 and lateral == 0:
        return RelationClass.LONGITUDINAL
    if crossing == 0 and lateral == 1:
        return RelationClass.LATERAL
    return None


def compute_dF(path: RoadPath, target_segment: str, s_i: float, s_j: float) -> float:
    """Signed along-road distance from i (on the path start) to j (on ``target_segment``)."""
    return path.offset_of(target_segment) + s_j - s_i


def crossing_arc_length(
    graph: RoadGraph, segment_id: str, other_id: str, tolerance: float = DEFAULT_OVERLAP_TOLERANCE
) -> float:
    """Arc length on ``segment_id`` where it first meets ``other_id``.

    Exact crossings win; otherwise the start of the stretch where the two
    centerlines run within ``tolerance``.
    """
    key = ("crossing", segment_id, other_id, tolerance)
    s_x = graph._derived.get(key)
    if s_x is None:
        s_x = contact_arc_length(graph.segment(segment_id).points, graph.segment(other_id).points, tolerance)
        if s_x is None:
            raise MapInconsistencyError(
                f"segments {segment_id!r} and {other_id!r} are marked overlapping "
                f"but their centerlines never come within {tolerance} m"
            )
        graph._derived[key] = s_x
    return s_x


def compute_dip(
    path: RoadPath,
    overlap_segment: str,
    s_i: float,
    graph: RoadGraph,
    crossing_segment: str,
    tolerance: float = DEFAULT_OVERLAP_TOLERANCE,
) -> float:
    """Signed distance from i to the point where ``overlap_segment`` meets ``crossing_segment``."""
    return path.offset_of(overlap_segment) + crossing_arc_length(graph, overlap_segment, crossing_segment, tolerance) - s_i


class Relation(NamedTuple):
    """Directed, classified edge between two participants.

    Exactly one of ``d_F`` and ``d_ip`` is set. ``witness`` is the edge-kind
    sequence of the road path that produced the relation, read from
    ``segment_a`` to ``segment_b``.
    """

    source: int
    target: int
    relation_class: RelationClass
    d_F: float | None
    d_ip: float | None
    segment_a: str
    segment_b: str
    d_t_i: float
    phi_i: float
    d_t_j: float
    phi_j: float
    probability_i: float = 1.0
    probability_j: float = 1.0
    witness: tuple[RoadEdgeKind, ...] = ()

    @property
    def distance(self) -> float:
        return self.d_ip if self.relation_class is RelationClass.INTERSECTING else self.d_F

    def sort_key(self):
        return (self.source, self.target, RELATION_ORDER[self.relation_class],
                abs(self.distance), self.segment_a, self.segment_b)


# Per class: list of (base distance, witness). Longitudinal/lateral distances are
# base + s_j - s_i, intersecting ones base - s_i.
PairTemplates = dict


def pair_templates(
    segment_a: str,
    segment_b: str,
    paths_a: Sequence[RoadPath],
    paths_b: Sequence[RoadPath],
    graph: RoadGraph,
    tolerance: float = DEFAULT_OVERLAP_TOLERANCE,
) -> PairTemplates:
    """Position-independent relation candidates between two segments."""
    found: dict[RelationClass, dict[float, tuple]] = defaultdict(dict)

    def add(cls, base, witness):
        if cls is None:
            return
        slot = found[cls]
        if base not in slot or witness < slot[base]:
            slot[base] = witness

    for path in paths_a:
        if segment_b in path.segments:
            prefix = path.prefix_kinds(segment_b)
            add(classify_path(prefix), path.offset_of(segment_b), prefix)
    for path in paths_b:
        if segment_a in path.segments:
            prefix = path.prefix_kinds(segment_a)
            add(classify_path(prefix), -path.offset_of(segment_a), tuple(reversed(prefix)))

    where_b: dict[str, list[tuple[RoadPath, int]]] = defaultdict(list)
    for path in paths_b:
        for m, seg in enumerate(path.segments):
            where_b[seg].append((path, m))
    for path in paths_a:
        for k, u in enumerate(path.segments):
            for v in graph.neighbors(u, OVERLAPPING):
                hits = where_b.get(v)
                if not hits:
                    continue
                base = path.offsets[k] + crossing_arc_length(graph, u, v, tolerance)
                for other, m in hits:
                    witness = path.kinds[:k] + (OVERLAPPING,) + tuple(reversed(other.kinds[:m]))
                    add(classify_path(witness), base, witness)

    return {cls: sorted(found[cls].items()) for cls in RelationClass if cls in found}


def instantiate(
    templates: PairTemplates, identity_i: ProjectionIdentity, identity_j: ProjectionIdentity
) -> list[Relation]:
    """Turn pair templates into relations, keeping the smallest |distance| per class."""
    pi, pj = identity_i.projection, identity_j.projection
    out = []
    for cls, entries in templates.items():
        shift = -pi.s if cls is INTERSECTING else pj.s - pi.s
        if len(entries) == 1:
            base, witness = entries[0]
        else:
            base, witness = min(entries, key=lambda e: (abs(e[0] + shift), e[0] + shift, e[1]))
        dist = base + shift
        out.append(Relation(
            identity_i.participant_id, identity_j.participant_id, cls,
            None if cls is INTERSECTING else dist,
            dist if cls is INTERSECTING else None,
            identity_i.segment_id, identity_j.segment_id,
            pi.d_t, pi.phi, pj.d_t, pj.phi,
            identity_i.probability, identity_j.probability, witness,
        ))
    return out


def relate_pair(
    identity_i: ProjectionIdentity,
    identity_j: ProjectionIdentity,
    paths_i: Sequence[RoadPath],
    paths_j: Sequence[RoadPath],
    graph: RoadGraph,
    tolerance: float = DEFAULT_OVERLAP_TOLERANCE,
) -> list[Relation]:
    """Relations from identity i to identity j, at most one per relation class.

    ``paths_i`` and ``paths_j`` are the :func:`find_paths` results for the two
    identities' segments.
    """
    if identity_i.participant_id == identity_j.participant_id:
        raise ValueError("cannot relate two identities of the same participant")
    templates = pair_templates(identity_i.segment_id, identity_j.segment_id, paths_i, paths_j, graph, tolerance)
    return instantiate(templates, identity_i, identity_j)
