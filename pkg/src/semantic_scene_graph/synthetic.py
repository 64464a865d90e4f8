"""Synthetic maps and recordings for benchmarks and demos.

``grid_map`` lays out two east-bound and two north-bound two-lane roads
(40 segments of 50 m). ``traffic_recording`` drives participants along
lanes at constant speed, wrapping at the road end.
"""
from __future__ import annotations

import math

import numpy as np

from .ingest import CSV_HEADER
from .map_model import RoadEdge, RoadEdgeKind, RoadGraph, RoadSegment, detect_overlaps

LANE_WIDTH = 3.5
SEGMENT_LENGTH = 50.0


def _road(prefix: str, origin, heading, n_segments: int):
    """Two parallel lanes (left lane offset to the left of ``heading``)."""
    ux, uy = math.cos(heading), math.sin(heading)
    lx, ly = -uy, ux
    segments, edges = [], []
    for lane in (0, 1):
        ids = []
        for k in range(n_segments):
            x0 = origin[0] + ux * k * SEGMENT_LENGTH + lx * lane * LANE_WIDTH
            y0 = origin[1] + uy * k * SEGMENT_LENGTH + ly * lane * LANE_WIDTH
            mid = (x0 + ux * SEGMENT_LENGTH / 2, y0 + uy * SEGMENT_LENGTH / 2)
            end = (x0 + ux * SEGMENT_LENGTH, y0 + uy * SEGMENT_LENGTH)
            sid = f"{prefix}{lane}_{k}"
            segments.append(RoadSegment(sid, ((x0, y0), mid, end), LANE_WIDTH))
            ids.append(sid)
        edges += [RoadEdge(a, b, RoadEdgeKind.CONSECUTIVE) for a, b in zip(ids, ids[1:])]
    edges += [RoadEdge(f"{prefix}0_{k}", f"{prefix}1_{k}", RoadEdgeKind.ADJACENT) for k in range(n_segments)]
    return segments, edges


def grid_map(n_segments: int = 5) -> RoadGraph:
    segments, edges = [], []
    span = n_segments * SEGMENT_LENGTH
    for prefix, origin, heading in (
        ("h", (0.0, 0.0), 0.0),
        ("g", (0.0, 0.5 * span), 0.0),
        ("v", (0.25 * span, -0.25 * span), math.pi / 2),
        ("w", (0.75 * span, -0.25 * span), math.pi / 2),
    ):
        s, e = _road(prefix, origin, heading, n_segments)
        segments += s
        edges += e
    graph = RoadGraph(segments, edges)
    return graph.with_edges(detect_overlaps(graph))


def traffic_recording(
    graph: RoadGraph,
    n_frames: int = 1000,
    n_participants: int = 30,
    dt_ms: int = 40,
    seed: int = 0,
    pedestrian_share: float = 0.1,
) -> str:
    """Object-list CSV text of participants moving along lane centerlines."""
    rng = np.random.default_rng(seed)
    lanes: dict[str, list[RoadSegment]] = {}
    for seg in graph.segments:
        lanes.setdefault(seg.id.split("_")[0], []).append(seg)
    lane_ids = sorted(lanes)
    polylines = {}
    for lid in lane_ids:
        pts = np.concatenate([lanes[lid][0].points[:1]] + [s.points[1:] for s in lanes[lid]])
        polylines[lid] = (pts, np.concatenate(([0.0], np.cumsum(np.hypot(*np.diff(pts, axis=0).T)))))

    classes = ["car", "car", "car", "truck", "bike", "other"]
    actors = []
    for pid in range(1, n_participants + 1):
        lid = lane_ids[rng.integers(len(lane_ids))]
        pedestrian = rng.random() < pedestrian_share
        actors.append(dict(
            pid=pid,
            lane=lid,
            cls="pedestrian" if pedestrian else classes[rng.integers(len(classes))],
            s0=rng.uniform(0, polylines[lid][1][-1]),
            speed=rng.uniform(0.8, 1.6) if pedestrian else rng.uniform(5.0, 15.0),
            lateral=rng.normal(0.0, 0.4) + (rng.choice([-4.0, 4.0]) if pedestrian else 0.0),
            size=(0.6, 0.6) if pedestrian else (1.8, 4.5),
        ))

    rows = [",".join(CSV_HEADER)]
    for frame in range(n_frames):
        t = frame * dt_ms
        for a in actors:
            pts, cum = polylines[a["lane"]]
            s = (a["s0"] + a["speed"] * t / 1000.0) % cum[-1]
            k = min(int(np.searchsorted(cum, s, side="right")) - 1, len(pts) - 2)
            d = pts[k + 1] - pts[k]
            heading = math.atan2(d[1], d[0])
            frac = (s - cum[k]) / (cum[k + 1] - cum[k])
            x = pts[k, 0] + frac * d[0] - math.sin(heading) * a["lateral"]
            y = pts[k, 1] + frac * d[1] + math.cos(heading) * a["lateral"]
            vx, vy = a["speed"] * math.cos(heading), a["speed"] * math.sin(heading)
            w, length = a["size"]
            rows.append(f"{t},{a['pid']},{a['cls']},{x:.3f},{y:.3f},{heading:.5f},"
                        f"{vx:.3f},{vy:.3f},0.0,0.0,{w},{length}")
    return "\n".join(rows) + "\n"
