import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_graph
from oracles import dense_min_distance
from semantic_scene_graph import fixture_path
from semantic_scene_graph.map_model import (
    MapSyntaxError,
    MapValidationError,
    RoadEdge,
    RoadEdgeKind,
    RoadSegment,
    audit_overlaps,
    detect_overlaps,
    neighbors,
    parse_map,
    segment_length,
    serialize_map,
)

MINIMAL = {
    "segments": [
        {"id": "A", "centerline": [[0, 0], [10, 0]]},
        {"id": "B", "centerline": [[10, 0], [20, 0]]},
    ],
    "edges": [{"from": "A", "to": "B", "kind": "consecutive"}],
}


def test_parse_minimal_map():
    g = parse_map(json.dumps(MINIMAL))
    assert len(g) == 2
    assert len(g.edges) == 1
    assert g.segment_index == {"A": 0, "B": 1}


def test_segment_index_is_lexicographic_not_document_order():
    doc = {"segments": [{"id": "z", "centerline": [[0, 0], [1, 0]]},
                        {"id": "a", "centerline": [[0, 1], [1, 1]]}]}
    assert parse_map(json.dumps(doc)).segment_index == {"a": 0, "z": 1}


def test_dangling_edge_names_the_missing_segment():
    doc = json.loads(json.dumps(MINIMAL))
    doc["edges"].append({"from": "A", "to": "Z", "kind": "adjacent"})
    with pytest.raises(MapValidationError, match="'Z'"):
        parse_map(json.dumps(doc))


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d["segments"].append({"id": "A", "centerline": [[5, 5], [6, 6]]}), "duplicate segment id 'A'"),
    (lambda d: d["segments"][0].update(centerline=[[0, 0]]), "at least 2 points"),
    (lambda d: d["segments"][0].update(centerline=[[0, 0], [0, 0]]), "degenerate"),
    (lambda d: d["edges"].append({"from": "A", "to": "A", "kind": "adjacent"}), "self-loop"),
    (lambda d: d["edges"].append({"from": "A", "to": "B", "kind": "consecutive"}), "duplicate consecutive"),
])
def test_semantic_errors(mutate, message):
    doc = json.loads(json.dumps(MINIMAL))
    mutate(doc)
    with pytest.raises(MapValidationError, match=message):
        parse_map(json.dumps(doc))


def test_symmetric_edges_are_duplicates_in_either_direction():
    doc = json.loads(json.dumps(MINIMAL))
    doc["edges"] += [{"from": "A", "to": "B", "kind": "adjacent"},
                     {"from": "B", "to": "A", "kind": "adjacent"}]
    with pytest.raises(MapValidationError, match="duplicate adjacent"):
        parse_map(json.dumps(doc))


def test_syntax_error_reports_position():
    with pytest.raises(MapSyntaxError) as err:
        parse_map('{"segments": [\n  {"id": "A",,}\n]}')
    assert err.value.line == 2
    assert "line 2" in str(err.value)


def test_unknown_edge_kind_is_rejected():
    doc = json.loads(json.dumps(MINIMAL))
    doc["edges"][0]["kind"] = "diagonal"
    with pytest.raises(MapSyntaxError, match="diagonal"):
        parse_map(json.dumps(doc))


@pytest.mark.parametrize("points, expected", [
    ([(0, 0), (10, 0)], 10.0),
    ([(0, 0), (3, 4)], 5.0),
    ([(0, 0), (10, 0), (10, 10)], 20.0),
])
def test_segment_length(points, expected):
    assert segment_length(RoadSegment("s", tuple(points))) == pytest.approx(expected, abs=1e-12)


def test_crossing_fixture_edge_kinds(crossing_map):
    kinds = sorted((e.source, e.target, e.kind.value) for e in crossing_map.edges)
    raw = json.loads(fixture_path("crossing_map.json").read_text())
    assert kinds == sorted((e["from"], e["to"], e["kind"]) for e in raw["edges"])
    assert {s.id for s in crossing_map.segments} == set("ABCDEFH")


def test_fixture_neighbors(crossing_map):
    assert neighbors(crossing_map, "B", RoadEdgeKind.OVERLAPPING) == ["C"]
    assert neighbors(crossing_map, "C", RoadEdgeKind.OVERLAPPING) == ["B", "D"]
    assert neighbors(crossing_map, "E", RoadEdgeKind.ADJACENT) == ["A"]
    assert neighbors(crossing_map, "A", RoadEdgeKind.ADJACENT) == ["E"]
    # Consecutive lookups follow the driving direction only.
    assert neighbors(crossing_map, "A", RoadEdgeKind.CONSECUTIVE) == ["B"]
    assert neighbors(crossing_map, "B", RoadEdgeKind.CONSECUTIVE) == ["F"]
    assert neighbors(crossing_map, "F", RoadEdgeKind.CONSECUTIVE) == []


def test_neighbors_of_isolated_segment_and_unknown_id():
    g = make_graph({"X": [(0, 0), (1, 0)]})
    assert neighbors(g, "X", RoadEdgeKind.CONSECUTIVE) == []
    with pytest.raises(KeyError):
        neighbors(g, "nope", RoadEdgeKind.CONSECUTIVE)


def test_fixture_regulatory_info_is_retained(crossing_map):
    assert crossing_map.segment("A").regulatory == ({"type": "traffic_light", "id": "tl_west"},)


def test_round_trip_fixture(crossing_map):
    assert parse_map(serialize_map(crossing_map)) == crossing_map


def test_segment_index_stable_for_identical_bytes():
    text = fixture_path("crossing_map.json").read_text()
    assert parse_map(text).segment_index == parse_map(text).segment_index


def test_crossing_centerlines_overlap():
    g = make_graph({"v": [(0, -5), (0, 5)], "h": [(-5, 0), (5, 0)]})
    found = detect_overlaps(g)
    assert [(e.source, e.target, e.kind) for e in found] == [("h", "v", RoadEdgeKind.OVERLAPPING)]


def test_parallel_centerlines_do_not_overlap():
    g = make_graph({"a": [(0, 0), (10, 0)], "b": [(0, 10), (10, 10)]})
    assert detect_overlaps(g, 0.5) == []


def test_merging_centerlines_overlap():
    left, right = [(-10, -5), (0, 0)], [(-10, 5), (0, 0)]
    # Dense 1 cm pairwise sampling puts the closest approach within the tolerance.
    assert dense_min_distance(left, right) <= 0.5
    g = make_graph({"l": left, "r": right})
    assert len(detect_overlaps(g, 0.5)) == 1


def test_overlaps_skip_topologically_joined_pairs():
    g = make_graph({"a": [(0, 0), (10, 0)], "b": [(10, 0), (20, 0)], "c": [(0, 0.2), (10, 0.2)]},
                   [("a", "b", "consecutive"), ("a", "c", "adjacent")])
    assert [tuple(sorted((e.source, e.target))) for e in detect_overlaps(g)] == [("b", "c")]


def test_detect_overlaps_is_idempotent(crossing_map):
    g = make_graph({"v": [(0, -5), (0, 5)], "h": [(-5, 0), (5, 0)], "d": [(-5, -5), (5, 5)]})
    grown = g.with_edges(detect_overlaps(g))
    assert len(grown.edges) == 3
    assert detect_overlaps(grown) == []
    assert detect_overlaps(crossing_map) == []


def test_audit_flags_geometrically_disjoint_overlap():
    g = make_graph({"a": [(0, 0), (10, 0)], "b": [(0, 50), (10, 50)]}, [("a", "b", "overlapping")])
    audit = audit_overlaps(g)
    assert audit.disjoint == [("a", "b")]
    assert not audit.clean


coords = st.floats(-50, 50, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.tuples(coords, coords), min_size=2, max_size=4), min_size=2, max_size=5))
def test_overlap_pairs_independent_of_document_order(lines):
    segs = {}
    for k, pts in enumerate(lines):
        if all(math.dist(p, q) > 1e-3 for p, q in zip(pts, pts[1:])):
            segs[f"s{k}"] = pts
    if len(segs) < 2:
        return
    forward = make_graph(segs)
    backward = make_graph(dict(reversed(list(segs.items()))))

    def pairs(g):
        return {frozenset((e.source, e.target)) for e in detect_overlaps(g)}

    assert pairs(forward) == pairs(backward)


def test_edge_endpoint_must_exist_when_building_directly():
    with pytest.raises(MapValidationError):
        make_graph({"a": [(0, 0), (1, 0)]}, [("a", "b", "consecutive")])
    assert RoadEdge("a", "b", RoadEdgeKind.ADJACENT).pair == frozenset("ab")
