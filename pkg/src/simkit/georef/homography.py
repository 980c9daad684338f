"""Planar collineation estimation via the normalized DLT.

Used both for pixel -> UTM geo-registration and for warping a fitted
wall quadrilateral onto its best-fit axis-parallel rectangle.
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateConfiguration, PointAtInfinity


class Homography:
    """3x3 collineation, normalized so H[2,2] == 1 when nonzero."""

    def __init__(self, matrix: np.ndarray):
        H = np.asarray(matrix, dtype=float)
        if H.shape != (3, 3):
            raise DegenerateConfiguration(f"expected 3x3 matrix, got {H.shape}")
        # pixel->UTM maps are legitimately ill-scaled (cond ~ 1e15), so only
        # reject exact singularity here; estimate_homography checks rank on
        # the Hartley-normalized system where conditioning is meaningful
        d = np.linalg.det(H)
        if not np.isfinite(d) or d == 0.0 or not np.all(np.isfinite(H)):
            raise DegenerateConfiguration("collineation matrix is singular")
        if abs(H[2, 2]) > 1e-12 * float(np.abs(H).max()):
            H = H / H[2, 2]
        self.matrix = H

    def inverse(self) -> "Homography":
        return Homography(np.linalg.inv(self.matrix))

    def __matmul__(self, other: "Homography") -> "Homography":
        return Homography(self.matrix @ other.matrix)


def _normalization(points: np.ndarray) -> np.ndarray:
    """Hartley similarity: centroid to origin, mean distance sqrt(2)."""
    centroid = points.mean(axis=0)
    dists = np.linalg.norm(points - centroid, axis=1)
    mean_dist = dists.mean()
    if mean_dist < 1e-12:
        raise DegenerateConfiguration("all points coincide")
    s = np.sqrt(2.0) / mean_dist
    return np.array([
        [s, 0.0, -s * centroid[0]],
        [0.0, s, -s * centroid[1]],
        [0.0, 0.0, 1.0],
    ])


def _any_three_collinear(points: np.ndarray, tol: float = 1e-9) -> bool:
    n = len(points)
    centered = points - points.mean(axis=0)  # scale from spread, not magnitude
    scale = max(1e-12, float(np.abs(centered).max()))
    points = centered
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a, b, c = points[i], points[j], points[k]
                cross = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
                if abs(cross) < tol * scale * scale:
                    return True
    return False


def estimate_homography(pairs) -> Homography:
    """Fit H mapping src -> dst from >= 4 correspondences ((x,y),(u,v)).

    Hartley-normalizes both sets, solves the stacked 2n x 9 system by SVD,
    and denormalizes. Exact for 4 generic pairs; algebraic least squares
    beyond that.
    """
    src = np.array([p[0] for p in pairs], dtype=float)
    dst = np.array([p[1] for p in pairs], dtype=float)
    if len(src) < 4:
        raise DegenerateConfiguration(f"need >= 4 correspondences, got {len(src)}")
    if len(src) == 4 and (_any_three_collinear(src) or _any_three_collinear(dst)):
        raise DegenerateConfiguration("3 of 4 points are collinear or coincident")

    T_src = _normalization(src)
    T_dst = _normalization(dst)
    src_h = np.column_stack([src, np.ones(len(src))]) @ T_src.T
    dst_h = np.column_stack([dst, np.ones(len(dst))]) @ T_dst.T

    rows = []
    for (x, y, _), (u, v, _) in zip(src_h, dst_h):
        rows.append([0, 0, 0, -x, -y, -1, v * x, v * y, v])
        rows.append([x, y, 1, 0, 0, 0, -u * x, -u * y, -u])
    A = np.asarray(rows)
    _, s, vt = np.linalg.svd(A)
    if s[-2] < 1e-12 * s[0]:
        raise DegenerateConfiguration("correspondences do not determine a collineation")
    Hn = vt[-1].reshape(3, 3)
    H = np.linalg.inv(T_dst) @ Hn @ T_src
    return Homography(H)


def apply_homography(H: Homography, point) -> tuple[float, float]:
    x, y = point
    v = H.matrix @ np.array([x, y, 1.0])
    if abs(v[2]) < 1e-12 * max(1.0, abs(v[0]), abs(v[1])):
        raise PointAtInfinity(f"point {point} maps to infinity")
    return float(v[0] / v[2]), float(v[1] / v[2])


def apply_homography_many(H: Homography, points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    hom = np.column_stack([pts, np.ones(len(pts))]) @ H.matrix.T
    w = hom[:, 2]
    if np.any(np.abs(w) < 1e-12 * np.maximum(1.0, np.abs(hom[:, :2]).max(axis=1))):
        raise PointAtInfinity("a point maps to infinity")
    return hom[:, :2] / w[:, None]
