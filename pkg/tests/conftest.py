import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from semantic_scene_graph import fixture_path, load_map, load_object_list  # noqa: E402
from semantic_scene_graph.map_model import RoadEdge, RoadEdgeKind, RoadGraph, RoadSegment  # noqa: E402
from semantic_scene_graph.matching import ProjectionIdentity  # noqa: E402
from semantic_scene_graph.frenet import FrenetProjection  # noqa: E402


@pytest.fixture(scope="session")
def crossing_map():
    return load_map(fixture_path("crossing_map.json"))


@pytest.fixture(scope="session")
def crossing_scene():
    return load_object_list(fixture_path("crossing_scene.csv")).scenes[0]


def make_graph(segments: dict, edges=()):
    """segments: id -> centerline points; edges: (from, to, kind-string) triples."""
    return RoadGraph(
        [RoadSegment(k, tuple(map(tuple, v))) for k, v in segments.items()],
        [RoadEdge(a, b, RoadEdgeKind(kind)) for a, b, kind in edges],
    )


def identity(pid, segment, s, d_t=0.0, phi=0.0, probability=1.0):
    return ProjectionIdentity(pid, segment, FrenetProjection(s, d_t, phi), probability)


def pytest_terminal_summary(terminalreporter):
    verdicts = getattr(sys.modules.get("test_acceptance"), "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for line in verdicts:
            terminalreporter.write_line(line)
