"""Generate a synthetic two-road crossing, simulate traffic and time the build.

Run: python3 demos/06_synthetic_throughput.py [frames] [participants]
"""
from __future__ import annotations

import sys
import time

from semantic_scene_graph import build_recording, parse_object_list
from semantic_scene_graph.synthetic import grid_map, traffic_recording

frames = int(sys.argv[1]) if len(sys.argv) > 1 else 200
participants = int(sys.argv[2]) if len(sys.argv) > 2 else 30

graph = grid_map()
print(f"map: {len(graph)} segments, {len(graph.edges)} edges")
recording = parse_object_list(traffic_recording(graph, n_frames=frames, n_participants=participants))

start = time.perf_counter()
graphs = build_recording(recording, graph)
elapsed = time.perf_counter() - start

edges = sum(len(g.edges) for g in graphs)
nodes = sum(len(g.nodes) for g in graphs)
print(f"{len(graphs)} scenes, {nodes} nodes, {edges} edges in {elapsed:.2f} s "
      f"({len(graphs) / elapsed:.0f} scenes/s)")
