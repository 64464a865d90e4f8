"""Assignment of traffic participants to lane segments (projection identities)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .frenet import Centerline, FrenetProjection, MatchParams, lateral_score, matching_probability
from .ingest import ObjectClass, SceneState, TrafficParticipantState
from .map_model import RoadGraph


@dataclass(frozen=True)
class ProjectionIdentity:
    participant_id: int
    segment_id: str
    projection: FrenetProjection
    probability: float


@dataclass(frozen=True)
class MatchConfig:
    """Thresholds for turning projections into identities.

    Vehicles keep every segment within ``max_lateral_distance`` whose match
    probability reaches ``min_probability``. Pedestrians ignore orientation and
    keep up to ``pedestrian_max_segments`` segments within ``pedestrian_radius``.
    """

    match_params: MatchParams = field(default_factory=MatchParams)
    max_lateral_distance: float = 5.0
    min_probability: float = 0.05
    pedestrian_radius: float = 3.0
    pedestrian_max_segments: int = 3

    def __post_init__(self):
        if not (self.max_lateral_distance > 0 and self.pedestrian_radius > 0):
            raise ValueError("distance thresholds must be positive")
        if not 0 < self.min_probability < 1:
            raise ValueError("min_probability must lie in (0, 1)")
        if self.pedestrian_max_segments < 1:
            raise ValueError("pedestrian_max_segments must be at least 1")


class _CenterlineTable:
    """All centerlines of a map stacked for one-shot distance screening."""

    def __init__(self, graph: RoadGraph):
        self.ids = [seg.id for seg in graph.segments]
        self.lines = [Centerline(seg.points) for seg in graph.segments]
        self.start = np.concatenate([c.start for c in self.lines])
        self.delta = np.concatenate([c.delta for c in self.lines])
        self.len2 = np.concatenate([c.seg_len2 for c in self.lines])
        counts = [len(c.start) for c in self.lines]
        self.offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))

    def nearby(self, x: float, y: float, radius: float) -> list[int]:
        rel = np.array((x, y)) - self.start
        t = np.clip(np.einsum("ij,ij->i", rel, self.delta) / self.len2, 0.0, 1.0)
        off = rel - t[:, None] * self.delta
        d2 = np.einsum("ij,ij->i", off, off)
        best = np.minimum.reduceat(d2, self.offsets)
        # Slack keeps borderline segments; the exact projection decides.
        return np.flatnonzero(best <= (radius + 1e-6) ** 2).tolist()


def _table(graph: RoadGraph) -> _CenterlineTable:
    table = graph._derived.get("centerlines")
    if table is None:
        table = graph._derived["centerlines"] = _CenterlineTable(graph)
    return table


def match_participant(
    state: TrafficParticipantState, graph: RoadGraph, config: MatchConfig = MatchConfig()
) -> list[ProjectionIdentity]:
    """Projection identities of one participant, most probable first."""
    table = _table(graph)
    pedestrian = state.object_class is ObjectClass.PEDESTRIAN
    radius = config.pedestrian_radius if pedestrian else config.max_lateral_distance

    found = []
    for k in table.nearby(state.x, state.y, radius):
        proj = table.lines[k].project(state.x, state.y, state.psi)
        if abs(proj.d_t) > radius:
            continue
        if pedestrian:
            prob = lateral_score(proj.d_t, config.match_params.sigma_d)
        else:
            prob = matching_probability(proj.d_t, proj.phi, config.match_params)
            if prob < config.min_probability:
                continue
        if prob <= 0.0:
            continue
        found.append(ProjectionIdentity(state.participant_id, table.ids[k], proj, prob))

    if pedestrian:
        found.sort(key=lambda m: (abs(m.projection.d_t), m.segment_id))
        found = found[: config.pedestrian_max_segments]
    found.sort(key=lambda m: (-m.probability, m.segment_id))
    return found


def match_scene(
    scene: SceneState, graph: RoadGraph, config: MatchConfig = MatchConfig()
) -> dict[int, list[ProjectionIdentity]]:
    """Identities for every participant that matched at least one segment.

    Participants without any identity are left out; this is the relevance
    filter that drops e.g. parked cars far from any lane.
    """
    out = {}
    for state in scene.participants:
        identities = match_participant(state, graph, config)
        if identities:
            out[state.participant_id] = identities
    return out
