"""Planar polyline helpers shared by the map model and the Frenet projection."""
from __future__ import annotations

import math

import numpy as np

# Below this, two subsegments are treated as parallel.
_PARALLEL_EPS = 1e-12


def as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) point array, got shape {arr.shape}")
    return arr


def chord_lengths(points: np.ndarray) -> np.ndarray:
    return np.hypot(*np.diff(points, axis=0).T)


def cumulative_length(points: np.ndarray) -> np.ndarray:
    """Arc length at every vertex, starting with 0."""
    return np.concatenate(([0.0], np.cumsum(chord_lengths(points))))


def wrap_angle(angle: float) -> float:
    """Wrap an angle to the half-open interval (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def point_segment_distance(p, a, b) -> float:
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0.0 else min(1.0, max(0.0, float((p - a) @ ab) / denom))
    q = a + t * ab
    return math.hypot(p[0] - q[0], p[1] - q[1])


def _cross(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def segment_intersection(p0, p1, q0, q1) -> float | None:
    """Smallest parameter t in [0, 1] along p0->p1 where it meets q0->q1.

    Touching endpoints count as an intersection. For collinear overlapping
    pieces the start of the shared stretch is returned.
    """
    r = p1 - p0
    s = q1 - q0
    rxs = _cross(r, s)
    qp = q0 - p0
    scale = max(float(np.abs(r).max()), float(np.abs(s).max()), 1.0)
    if abs(rxs) > _PARALLEL_EPS * scale * scale:
        t = _cross(qp, s) / rxs
        u = _cross(qp, r) / rxs
        tol = 1e-12
        if -tol <= t <= 1 + tol and -tol <= u <= 1 + tol:
            return min(1.0, max(0.0, t))
        return None
    if abs(_cross(qp, r)) > _PARALLEL_EPS * scale * scale:
        return None
    rr = float(r @ r)
    if rr == 0.0:
        return None
    t0 = float(qp @ r) / rr
    t1 = t0 + float(s @ r) / rr
    lo, hi = min(t0, t1), max(t0, t1)
    if hi < 0.0 or lo > 1.0:
        return None
    return max(0.0, lo)


def segment_segment_distance(p0, p1, q0, q1) -> float:
    if segment_intersection(p0, p1, q0, q1) is not None:
        return 0.0
    return min(
        point_segment_distance(p0, q0, q1),
        point_segment_distance(p1, q0, q1),
        point_segment_distance(q0, p0, p1),
        point_segment_distance(q1, p0, p1),
    )


def _bbox_gap(p: np.ndarray, q: np.ndarray) -> float:
    pmin, pmax = p.min(axis=0), p.max(axis=0)
    qmin, qmax = q.min(axis=0), q.max(axis=0)
    gap = np.maximum(0.0, np.maximum(pmin - qmax, qmin - pmax))
    return float(np.hypot(*gap))


def polyline_distance(p: np.ndarray, q: np.ndarray, cutoff: float = math.inf) -> float:
    """Exact minimum distance between two polylines.

    Returns early with a value above ``cutoff`` when the bounding boxes are
    already further apart than that.
    """
    gap = _bbox_gap(p, q)
    if gap > cutoff:
        return gap
    best = math.inf
    for i in range(len(p) - 1):
        for j in range(len(q) - 1):
            d = segment_segment_distance(p[i], p[i + 1], q[j], q[j + 1])
            if d < best:
                best = d
                if best == 0.0:
                    return 0.0
    return best


def first_crossing(p: np.ndarray, q: np.ndarray) -> float | None:
    """Arc length along ``p`` of its earliest exact contact with ``q``."""
    cum = cumulative_length(p)
    for i in range(len(p) - 1):
        hits = [
            t
            for j in range(len(q) - 1)
            if (t := segment_intersection(p[i], p[i + 1], q[j], q[j + 1])) is not None
        ]
        if hits:
            return float(cum[i] + min(hits) * (cum[i + 1] - cum[i]))
    return None


def first_within(p: np.ndarray, q: np.ndarray, tolerance: float) -> float | None:
    """Arc length along ``p`` of the first point lying within ``tolerance`` of ``q``.

    The distance from a point moving linearly along one subsegment to another
    subsegment is convex in the motion parameter, so each pair is solved by a
    golden-section minimum search followed by bisection on the descending side.
    """
    cum = cumulative_length(p)
    for i in range(len(p) - 1):
        a, b = p[i], p[i + 1]
        best_t = None
        for j in range(len(q) - 1):
            c, d = q[j], q[j + 1]

            def dist(t, c=c, d=d):
                return point_segment_distance(a + t * (b - a), c, d)

            if dist(0.0) <= tolerance:
                best_t = 0.0
                break
            lo, hi = 0.0, 1.0
            inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
            x1, x2 = hi - inv_phi * (hi - lo), lo + inv_phi * (hi - lo)
            f1, f2 = dist(x1), dist(x2)
            for _ in range(80):
                if f1 <= f2:
                    hi, x2, f2 = x2, x1, f1
                    x1 = hi - inv_phi * (hi - lo)
                    f1 = dist(x1)
                else:
                    lo, x1, f1 = x1, x2, f2
                    x2 = lo + inv_phi * (hi - lo)
                    f2 = dist(x2)
            t_min = (lo + hi) / 2.0
            for t_probe in (t_min, 1.0):
                if dist(t_probe) <= tolerance:
                    t_min = t_probe
                    break
            else:
                continue
            lo, hi = 0.0, t_min
            for _ in range(80):
                mid = (lo + hi) / 2.0
                if dist(mid) <= tolerance:
                    hi = mid
                else:
                    lo = mid
            if best_t is None or hi < best_t:
                best_t = hi
        if best_t is not None:
            return float(cum[i] + best_t * (cum[i + 1] - cum[i]))
    return None


def contact_arc_length(p: np.ndarray, q: np.ndarray, tolerance: float) -> float | None:
    """Where ``p`` first meets ``q``: exact contact if any, otherwise the start of
    the stretch where the two run within ``tolerance`` of each other."""
    s = first_crossing(p, q)
    if s is not None:
        return s
    return first_within(p, q, tolerance)


__all__ = [
    "as_points",
    "chord_lengths",
    "contact_arc_length",
    "cumulative_length",
    "first_crossing",
    "first_within",
    "point_segment_distance",
    "polyline_distance",
    "segment_intersection",
    "wrap_angle",
]
