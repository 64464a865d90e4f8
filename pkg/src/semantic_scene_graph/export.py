"""Scene graph serialization: Graphviz DOT and TUDataset-style text matrices.

The dataset export writes four files next to each other::

    <prefix>_A.txt                 "i, j" per edge, 1-based node ids, global over all graphs
    <prefix>_graph_indicator.txt   1-based graph number per node
    <prefix>_node_attributes.txt   one-hot class (car, pedestrian, bike, truck, other), speed
    <prefix>_edge_attributes.txt   one-hot relation (lon, lat, int), d_F, d_ip,
                                   a, d_t_i, phi_i, b, d_t_j, phi_j

Row k of the edge attribute file belongs to row k of the A file. The unused
distance of an edge (d_F of intersecting edges, d_ip otherwise) is written as 0.
"""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .ingest import ObjectClass
from .map_model import RoadGraph
from .relations import Relation, RelationClass
from .scene_graph import SceneGraph, SceneNode

NODE_ATTRIBUTES = 6
EDGE_ATTRIBUTES = 11


def _num(value: float) -> str:
    text = f"{value:.6f}"
    return "0.000000" if text == "-0.000000" else text


def _quote(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


_RELATION_NAME = {cls: cls.value for cls in RelationClass}


def to_dot(graph: SceneGraph) -> str:
    """Directed DOT document for one scene graph."""
    ts = graph.timestamp
    name = f"scene_t{ts}" if ts >= 0 else _quote(f"scene_t{ts}")
    if not graph.nodes:
        return f"digraph {name} {{ }}\n"
    lines = [f"digraph {name} {{"]
    for node in graph.nodes:
        pid = node.participant_id
        lines.append(
            f'  "{pid}" [label="{pid}", participant_id="{pid}", '
            f'class="{node.object_class.value}", speed="{_num(node.speed)}"];'
        )
    quoted = {}
    for rel in graph.edges:
        cls = rel.relation_class
        for sid in (rel.segment_a, rel.segment_b):
            if sid not in quoted:
                quoted[sid] = _quote(sid)
        dist = (f'd_ip="{_num(rel.d_ip)}"' if cls is RelationClass.INTERSECTING
                else f'd_F="{_num(rel.d_F)}"')
        lines.append(
            f'  "{rel.source}" -> "{rel.target}" [relation="{_RELATION_NAME[cls]}", '
            f'{dist}, segment_a={quoted[rel.segment_a]}, '
            f'd_t_i="{_num(rel.d_t_i)}", phi_i="{_num(rel.phi_i)}", segment_b={quoted[rel.segment_b]}, '
            f'd_t_j="{_num(rel.d_t_j)}", phi_j="{_num(rel.phi_j)}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


_CLASS_ONE_HOT = {cls: tuple(float(c is cls) for c in ObjectClass) for cls in ObjectClass}
_RELATION_ONE_HOT = {cls: tuple(float(c is cls) for c in RelationClass) for cls in RelationClass}


def _node_row(node: SceneNode) -> tuple:
    return _CLASS_ONE_HOT[node.object_class] + (node.speed,)


def _edge_row(rel: Relation, segment_index: dict[str, int]) -> tuple:
    try:
        a, b = segment_index[rel.segment_a], segment_index[rel.segment_b]
    except KeyError as exc:
        raise KeyError(f"unknown segment {exc.args[0]!r}") from None
    return _RELATION_ONE_HOT[rel.relation_class] + (
        rel.d_F or 0.0, rel.d_ip or 0.0, a, rel.d_t_i, rel.phi_i, b, rel.d_t_j, rel.phi_j,
    )


def node_vector(node: SceneNode) -> np.ndarray:
    """[car, pedestrian, bike, truck, other, speed]."""
    return np.array(_node_row(node))


def edge_vector(relation: Relation, graph: RoadGraph) -> np.ndarray:
    """[lon, lat, int, d_F, d_ip, a, d_t_i, phi_i, b, d_t_j, phi_j] with a, b as segment indices."""
    return np.array(_edge_row(relation, graph.segment_index))


def _rows(matrix, width: int) -> str:
    fmt = ", ".join(["%.6f"] * width) + "\n"
    text = "".join(fmt % tuple(row) for row in matrix)
    # Numbers are ", "-delimited, so this only ever hits a whole rounded-to-zero field.
    return text.replace("-0.000000", "0.000000")


def export_dataset(graphs: Sequence[SceneGraph], graph: RoadGraph, prefix: str | Path) -> dict[str, Path]:
    """Write the four dataset files for a batch of scene graphs.

    Returns the written paths keyed by ``A``, ``graph_indicator``,
    ``node_attributes`` and ``edge_attributes``.
    """
    if not graphs:
        raise ValueError("export_dataset needs at least one scene graph")
    prefix = Path(prefix)
    adjacency, indicator, node_rows, edge_rows = [], [], [], []
    first = 1
    for number, scene in enumerate(graphs, start=1):
        index = {n.participant_id: first + k for k, n in enumerate(scene.nodes)}
        for node in scene.nodes:
            indicator.append(f"{number}\n")
            node_rows.append(_node_row(node))
        for rel in scene.edges:
            adjacency.append(f"{index[rel.source]}, {index[rel.target]}\n")
            edge_rows.append(_edge_row(rel, graph.segment_index))
        first += len(scene.nodes)

    contents = {
        "A": "".join(adjacency),
        "graph_indicator": "".join(indicator),
        "node_attributes": _rows(node_rows, NODE_ATTRIBUTES),
        "edge_attributes": _rows(edge_rows, EDGE_ATTRIBUTES),
    }
    written = {}
    for key, text in contents.items():
        path = prefix.parent / f"{prefix.name}_{key}.txt"
        try:
            path.write_text(text, encoding="utf-8", newline="\n")
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
        written[key] = path
    return written
