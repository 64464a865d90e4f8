"""Build the scene graph of the five-vehicle fixture and print it as DOT.

Run: python3 demos/04_scene_graph.py
"""
from __future__ import annotations

from collections import Counter

from semantic_scene_graph import build_scene_graph, fixture_path, load_map, load_object_list, to_dot

graph = load_map(fixture_path("crossing_map.json"))
scene = load_object_list(fixture_path("crossing_scene.csv")).scenes[0]
sg = build_scene_graph(scene, graph)

for node in sg.nodes:
    ids = ", ".join(f"{m.segment_id} ({m.probability:.2f})" for m in node.identities)
    print(f"node {node.participant_id}: {node.object_class.value}, {node.speed:.1f} m/s, identities {ids}")
print("edge classes:", dict(Counter(e.relation_class.value for e in sg.edges)))

# Vehicle 1 sits between A and E, so its edges come in parallel pairs.
for e in sg.edges_between(1, 3):
    print(f"1 -> 3 from {e.segment_a}: d_ip={e.d_ip:.2f}")

print()
print(to_dot(sg))
