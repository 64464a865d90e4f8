"""Bounded path search and the three relation classes.

Run: python3 demos/03_relations.py
"""
from __future__ import annotations

from semantic_scene_graph import (
    FrenetProjection,
    PathSearchConfig,
    ProjectionIdentity,
    find_paths,
    fixture_path,
    load_map,
    relate_pair,
)

graph = load_map(fixture_path("crossing_map.json"))
config = PathSearchConfig(max_total_length=150.0)

print("paths from A:")
for path in find_paths(graph, "A", config):
    kinds = " ".join(k.value[:3] for k in path.kinds) or "-"
    print(f"  {'>'.join(path.segments):<12} kinds [{kinds}] offsets {path.offsets}")


def relate(i, a, s_i, j, b, s_j):
    mi = ProjectionIdentity(i, a, FrenetProjection(s_i, 0.0, 0.0), 1.0)
    mj = ProjectionIdentity(j, b, FrenetProjection(s_j, 0.0, 0.0), 1.0)
    for r in relate_pair(mi, mj, find_paths(graph, a, config), find_paths(graph, b, config), graph):
        what = f"d_ip={r.d_ip:+.2f}" if r.d_ip is not None else f"d_F={r.d_F:+.2f}"
        print(f"  {i}@{a} -> {j}@{b}: {r.relation_class.value:<12} {what}  via {[k.value for k in r.witness]}")


relate(2, "E", 8.0, 4, "D", 10.0)   # same corridor, 4 ahead of 2
relate(4, "D", 10.0, 2, "E", 8.0)   # the reverse edge carries a negative distance
relate(1, "A", 20.0, 4, "D", 10.0)  # neighbouring lane, then onwards
relate(1, "A", 20.0, 3, "H", 15.0)  # routes that cross
