"""Wall line fitting on the re-oriented mesh, projected to the X-Z plane.

Each side's candidate vertices come from an outer percentile slab (or an
explicit user region hint); a seeded RANSAC fits an unconstrained 2D
line per side, refined by least squares on the inliers. The four lines
intersect into the wall quadrilateral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InsufficientInliers, NonConvexQuad
from .mesh import TriangleMesh

SIDES = ("left", "far", "right", "near")  # low x, high z, high x, low z


@dataclass
class WallFitParams:
    slab_fraction: float = 0.10
    inlier_threshold_m: float = 0.02
    iterations: int = 500
    seed: int = 0
    min_points: int = 20
    # optional per-side region hints: side -> ((xmin, zmin), (xmax, zmax))
    region_hints: dict = field(default_factory=dict)


@dataclass
class Line2D:
    point: tuple[float, float]
    direction: tuple[float, float]  # unit

    def distance(self, pts: np.ndarray) -> np.ndarray:
        px, pz = self.point
        dx, dz = self.direction
        return np.abs((pts[:, 0] - px) * dz - (pts[:, 1] - pz) * dx)

    def angle_deg(self) -> float:
        """Angle to the nearest coordinate axis, in [0, 45]."""
        a = math.degrees(math.atan2(self.direction[1], self.direction[0])) % 90.0
        return min(a, 90.0 - a)


@dataclass
class WallQuad:
    lines: dict  # side -> Line2D
    corners: np.ndarray  # (4, 2) in order left-far, right-far, right-near, left-near


def _candidates(xz: np.ndarray, side: str, params: WallFitParams) -> np.ndarray:
    hint = params.region_hints.get(side)
    if hint is not None:
        (x0, z0), (x1, z1) = hint
        mask = (
            (xz[:, 0] >= x0) & (xz[:, 0] <= x1) & (xz[:, 1] >= z0) & (xz[:, 1] <= z1)
        )
        return xz[mask]
    q = params.slab_fraction
    if side == "left":
        return xz[xz[:, 0] <= np.quantile(xz[:, 0], q)]
    if side == "right":
        return xz[xz[:, 0] >= np.quantile(xz[:, 0], 1 - q)]
    if side == "near":
        return xz[xz[:, 1] <= np.quantile(xz[:, 1], q)]
    return xz[xz[:, 1] >= np.quantile(xz[:, 1], 1 - q)]


def _pca_line(pts: np.ndarray) -> Line2D:
    centroid = pts.mean(axis=0)
    u, s, vt = np.linalg.svd(pts - centroid, full_matrices=False)
    d = vt[0]
    return Line2D((float(centroid[0]), float(centroid[1])), (float(d[0]), float(d[1])))


def ransac_line(pts: np.ndarray, params: WallFitParams, side: str, seed: int) -> Line2D:
    if len(pts) < params.min_points:
        raise InsufficientInliers(side, f"side {side!r}: {len(pts)} candidate points")
    rng = np.random.default_rng(seed)
    best_count = -1
    best_inliers = None
    for _ in range(params.iterations):
        i, j = rng.choice(len(pts), size=2, replace=False)
        p, q = pts[i], pts[j]
        d = q - p
        norm = np.linalg.norm(d)
        if norm < 1e-12:
            continue
        line = Line2D((float(p[0]), float(p[1])), (float(d[0] / norm), float(d[1] / norm)))
        inliers = line.distance(pts) <= params.inlier_threshold_m
        count = int(inliers.sum())
        if count > best_count:
            best_count = count
            best_inliers = inliers
    if best_inliers is None or best_count < params.min_points:
        raise InsufficientInliers(side, f"side {side!r}: best hypothesis had {best_count} inliers")
    return _pca_line(pts[best_inliers])


def _intersect_lines(a: Line2D, b: Line2D) -> tuple[float, float]:
    (px, pz), (dx, dz) = a.point, a.direction
    (qx, qz), (ex, ez) = b.point, b.direction
    den = dx * ez - dz * ex
    if abs(den) < 1e-12:
        raise NonConvexQuad("adjacent wall lines are parallel")
    t = ((qx - px) * ez - (qz - pz) * ex) / den
    return px + t * dx, pz + t * dz


def _corner_angles(corners: np.ndarray) -> list[float]:
    angles = []
    for i in range(4):
        a = corners[(i - 1) % 4] - corners[i]
        b = corners[(i + 1) % 4] - corners[i]
        cosang = np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b))
        angles.append(math.degrees(math.acos(np.clip(cosang, -1, 1))))
    return angles


def fit_wall_lines(mesh: TriangleMesh, params: WallFitParams | None = None) -> WallQuad:
    params = params or WallFitParams()
    mesh.require_nonempty()
    xz = mesh.vertices[:, [0, 2]]
    lines = {}
    for si, side in enumerate(SIDES):
        pts = _candidates(xz, side, params)
        lines[side] = ransac_line(pts, params, side, params.seed + si)
    corners = np.array([
        _intersect_lines(lines["left"], lines["far"]),
        _intersect_lines(lines["far"], lines["right"]),
        _intersect_lines(lines["right"], lines["near"]),
        _intersect_lines(lines["near"], lines["left"]),
    ])
    # simple + convex: consistent cross-product sign all the way around
    signs = []
    for i in range(4):
        a = corners[(i + 1) % 4] - corners[i]
        b = corners[(i + 2) % 4] - corners[(i + 1) % 4]
        signs.append(np.sign(a[0] * b[1] - a[1] * b[0]))
    if len({s for s in signs if s != 0}) != 1:
        raise NonConvexQuad("fitted wall lines form a non-convex quadrilateral")
    angles = _corner_angles(corners)
    if any(not (60.0 <= ang <= 120.0) for ang in angles):
        raise NonConvexQuad(f"corner angles {angles} outside [60, 120] degrees")
    return WallQuad(lines, corners)
