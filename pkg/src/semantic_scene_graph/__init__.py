"""Semantic scene graphs for traffic scenes.

Object lists are matched onto a topological lane map; every participant
becomes a node and lane-relative relations (longitudinal, lateral,
intersecting) become attributed edges. Graphs export to DOT and to a
TUDataset-style numeric layout.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .export import edge_vector, export_dataset, node_vector, to_dot
from .frenet import FrenetProjection, MatchParams, matching_probability, project_point
from .ingest import (
    ObjectClass,
    ObjectListError,
    Recording,
    SceneState,
    TrafficParticipantState,
    load_object_list,
    parse_object_list,
    scene_at,
)
from .map_model import (
    MapError,
    MapSyntaxError,
    MapValidationError,
    RoadEdge,
    RoadEdgeKind,
    RoadGraph,
    RoadSegment,
    detect_overlaps,
    load_map,
    neighbors,
    parse_map,
    segment_length,
    serialize_map,
)
from .matching import MatchConfig, ProjectionIdentity, match_participant, match_scene
from .relations import (
    PathSearchConfig,
    Relation,
    RelationClass,
    RoadPath,
    classify_path,
    compute_dF,
    compute_dip,
    find_paths,
    relate_pair,
)
from .scene_graph import SceneGraph, SceneNode, build_recording, build_scene_graph

__version__ = "0.1.0"


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture file, e.g. ``fixture_path("crossing_map.json")``."""
    return Path(str(resources.files(__package__) / "fixtures" / name))


__all__ = [
    "FrenetProjection", "MapError", "MapSyntaxError", "MapValidationError",
    "MatchConfig", "MatchParams", "ObjectClass", "ObjectListError", "PathSearchConfig",
    "ProjectionIdentity", "Recording", "Relation", "RelationClass", "RoadEdge", "RoadEdgeKind",
    "RoadGraph", "RoadPath", "RoadSegment", "SceneGraph", "SceneNode", "SceneState",
    "TrafficParticipantState", "build_recording", "build_scene_graph", "classify_path",
    "compute_dF", "compute_dip", "detect_overlaps", "edge_vector", "export_dataset",
    "find_paths", "fixture_path", "load_map", "load_object_list", "match_participant",
    "match_scene", "matching_probability", "neighbors", "node_vector", "parse_map",
    "parse_object_list", "project_point", "relate_pair", "scene_at", "segment_length",
    "serialize_map", "to_dot",
]
