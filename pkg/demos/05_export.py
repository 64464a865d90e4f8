"""Export a short recording as TUDataset-style text files and read them back.

Run: python3 demos/05_export.py [output-dir]
"""
from __future__ import annotations

import sys
import tempfile
from pathlib import Path

import numpy as np

from semantic_scene_graph import build_recording, export_dataset, fixture_path, load_map, load_object_list

graph = load_map(fixture_path("crossing_map.json"))
recording = load_object_list(fixture_path("crossing_drive.csv"))
graphs = build_recording(recording, graph)

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
paths = export_dataset(graphs, graph, out / "drive")
for key, path in paths.items():
    print(f"{key:<16} {len(path.read_text().splitlines()):4d} rows  {path}")

# The files load straight into numpy.
A = np.loadtxt(paths["A"], delimiter=",", dtype=int, ndmin=2)
indicator = np.loadtxt(paths["graph_indicator"], dtype=int, ndmin=1)
B = np.loadtxt(paths["node_attributes"], delimiter=",", ndmin=2)
C = np.loadtxt(paths["edge_attributes"], delimiter=",", ndmin=2)
print("nodes per graph:", np.bincount(indicator)[1:].tolist())
print("relation counts (lon, lat, int):", C[:, :3].sum(axis=0).astype(int).tolist())
print("mean speed:", round(float(B[:, 5].mean()), 2), "m/s;", "first edge:", A[0].tolist(), C[0].round(2).tolist())
