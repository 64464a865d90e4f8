"""Projection of planar poses onto lane centerlines and the Gaussian match score."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import as_points, cumulative_length, wrap_angle

# Two subsegment distances closer than this count as a tie; the smaller arc length wins.
TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FrenetProjection:
    """Pose in the frame of one centerline.

    Attributes:
        s: arc length of the matched point, clamped to [0, length].
        d_t: lateral offset, positive to the left of the driving direction.
        phi: yaw minus the centerline heading at the matched point, in (-pi, pi].
    """

    s: float
    d_t: float
    phi: float


@dataclass(frozen=True)
class MatchParams:
    sigma_d: float = 1.5
    sigma_p: float = 0.7

    def __post_init__(self):
        if not (self.sigma_d > 0 and self.sigma_p > 0):
            raise ValueError("sigma_d and sigma_p must be positive")


class Centerline:
    """Precomputed subsegment arrays of one polyline."""

    __slots__ = ("start", "delta", "seg_len", "seg_len2", "cum", "heading")

    def __init__(self, points):
        pts = as_points(points)
        self.start = pts[:-1]
        self.delta = np.diff(pts, axis=0)
        self.seg_len2 = np.einsum("ij,ij->i", self.delta, self.delta)
        self.seg_len = np.sqrt(self.seg_len2)
        self.cum = cumulative_length(pts)
        self.heading = np.arctan2(self.delta[:, 1], self.delta[:, 0])

    @property
    def length(self) -> float:
        return float(self.cum[-1])

    def distances(self, x: float, y: float) -> tuple[np.ndarray, np.ndarray]:
        """Distance to every subsegment and the clamped foot parameter on each."""
        rel = np.array((x, y)) - self.start
        t = np.clip(np.einsum("ij,ij->i", rel, self.delta) / self.seg_len2, 0.0, 1.0)
        off = rel - t[:, None] * self.delta
        return np.hypot(off[:, 0], off[:, 1]), t

    def min_distance(self, x: float, y: float) -> float:
        return float(self.distances(x, y)[0].min())

    def project(self, x: float, y: float, psi: float) -> FrenetProjection:
        dist, t = self.distances(x, y)
        k = int(np.argmax(dist <= dist.min() + TIE_TOLERANCE))
        tk = float(t[k])
        dx, dy = self.delta[k]
        qx, qy = self.start[k, 0] + tk * dx, self.start[k, 1] + tk * dy
        ox, oy = x - qx, y - qy
        magnitude = math.hypot(ox, oy)
        side = dx * oy - dy * ox
        s = min(float(self.cum[k] + tk * self.seg_len[k]), self.length)
        return FrenetProjection(
            s=s,
            d_t=-magnitude if side < 0 else magnitude,
            phi=wrap_angle(psi - float(self.heading[k])),
        )


def project_point(centerline, x: float, y: float, psi: float) -> FrenetProjection:
    """Project pose (x, y, psi) onto the nearest point of a polyline.

    The global minimum over all subsegments is taken. Poses beyond either end
    clamp to s = 0 or s = length.

    >>> p = project_point([(0, 0), (10, 0)], 5.0, 1.0, 0.0)
    >>> (p.s, p.d_t, p.phi)
    (5.0, 1.0, 0.0)
    """
    line = centerline if isinstance(centerline, Centerline) else Centerline(centerline)
    return line.project(x, y, psi)


def lateral_score(d_t: float, sigma_d: float) -> float:
    return math.exp(-(d_t * d_t) / (2.0 * sigma_d * sigma_d))


def orientation_score(phi: float, sigma_p: float) -> float:
    c = math.cos(phi) - 1.0
    return math.exp(-(c * c) / (2.0 * sigma_p * sigma_p))


def matching_probability(d_t: float, phi: float, params: MatchParams = MatchParams()) -> float:
    """Product of the lateral and orientation Gaussian scores, 1.0 at perfect alignment."""
    return lateral_score(d_t, params.sigma_d) * orientation_score(phi, params.sigma_p)
