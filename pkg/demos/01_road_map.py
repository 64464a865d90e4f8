"""Load the bundled lane map, inspect its topology and audit overlap edges.

Run: python3 demos/01_road_map.py
"""
from __future__ import annotations

from semantic_scene_graph import RoadEdgeKind, fixture_path, load_map, neighbors
from semantic_scene_graph.map_model import audit_overlaps, geometric_overlaps

graph = load_map(fixture_path("crossing_map.json"))
print(f"{len(graph)} segments, {len(graph.edges)} edges")
for seg in graph.segments:
    print(f"  {seg.id}: {seg.length:6.2f} m, index {graph.segment_index[seg.id]}")

# Consecutive edges only go forward; adjacent and overlapping work both ways.
for sid in ("A", "C", "E"):
    print(sid, {k.value: neighbors(graph, sid, k) for k in RoadEdgeKind})

# Declared overlaps should agree with geometry.
print("geometric overlaps:", sorted(tuple(sorted(pair)) for pair in geometric_overlaps(graph)))
audit = audit_overlaps(graph)
print("audit clean:", audit.clean)
