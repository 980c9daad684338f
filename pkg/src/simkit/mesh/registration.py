"""Registration of a rectified room mesh onto a floor-plan space.

The mesh footprint (its axis-aligned bounding rectangle in the X-Z
plane) is mapped onto the space's bounding rectangle in pixel
coordinates: an optional rotation about Y in quarter turns, then
per-axis scales, then a translation aligning the bounding-box minima.
The rotation cannot be recovered from geometry alone, so callers either
pass it explicitly or take the suggestion (aspect-ratio match) and
confirm it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import AspectMismatch, MissingCorrespondence
from .mesh import TriangleMesh

ROTATION_CHOICES = (0, 90, 180, 270)
ASPECT_WARN_RATIO = 0.25


@dataclass
class RegistrationTransform:
    rotation_deg: int
    scale_x: float  # px per meter along the plan x axis
    scale_z: float  # px per meter along the plan y axis
    offset: tuple[float, float]  # plan pixel position of the rotated bbox minimum
    mesh_min: tuple[float, float]  # rotated-frame bbox minimum (meters)

    def apply(self, points_xz: np.ndarray) -> np.ndarray:
        """Map rectified-frame (X, Z) points to floor-plan pixels."""
        pts = np.asarray(points_xz, dtype=float).reshape(-1, 2)
        a = math.radians(self.rotation_deg)
        c, s = math.cos(a), math.sin(a)
        x = pts[:, 0] * c + pts[:, 1] * s
        z = -pts[:, 0] * s + pts[:, 1] * c
        px = (x - self.mesh_min[0]) * self.scale_x + self.offset[0]
        py = (z - self.mesh_min[1]) * self.scale_z + self.offset[1]
        return np.column_stack([px, py])


def _bbox(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return points.min(axis=0), points.max(axis=0)


def _rotated_xz(mesh: TriangleMesh, rotation_deg: int) -> np.ndarray:
    a = math.radians(rotation_deg)
    c, s = math.cos(a), math.sin(a)
    xz = mesh.vertices[:, [0, 2]]
    return np.column_stack([xz[:, 0] * c + xz[:, 1] * s, -xz[:, 0] * s + xz[:, 1] * c])


def suggest_rotation(mesh: TriangleMesh, room_polygon_px: np.ndarray) -> tuple[int, float]:
    """Rotation choice whose footprint aspect ratio best matches the room.

    Returns (rotation_deg, ratio_error) where ratio_error is
    |log(ar_mesh) - log(ar_room)| for the winning choice. 0 and 180 are
    equivalent here, as are 90 and 270: the smaller angle is suggested.
    """
    room = np.asarray(room_polygon_px, dtype=float).reshape(-1, 2)
    rmin, rmax = _bbox(room)
    ar_room = (rmax[0] - rmin[0]) / (rmax[1] - rmin[1])
    best = None
    for rot in (0, 90):
        mmin, mmax = _bbox(_rotated_xz(mesh, rot))
        ar_mesh = (mmax[0] - mmin[0]) / (mmax[1] - mmin[1])
        err = abs(math.log(ar_mesh) - math.log(ar_room))
        if best is None or err < best[1]:
            best = (rot, err)
    return best


def register_to_space(
    mesh: TriangleMesh,
    room_polygon_px,
    rotation_deg: int | None = None,
) -> tuple[RegistrationTransform, list[str]]:
    """Build the mesh -> floor-plan pixel transform.

    Returns (transform, warnings). An explicit rotation is required; the
    suggestion from `suggest_rotation` must be confirmed by the caller.
    """
    if rotation_deg is None:
        rot, err = suggest_rotation(mesh, room_polygon_px)
        raise MissingCorrespondence(
            f"rotation choice required; suggestion: {rot} deg "
            f"(aspect log-error {err:.3f})"
        )
    if rotation_deg not in ROTATION_CHOICES:
        raise MissingCorrespondence(f"rotation must be one of {ROTATION_CHOICES}")
    room = np.asarray(room_polygon_px, dtype=float).reshape(-1, 2)
    rmin, rmax = _bbox(room)
    mesh.require_nonempty()
    rotated = _rotated_xz(mesh, rotation_deg)
    mmin, mmax = _bbox(rotated)
    width_m = mmax[0] - mmin[0]
    depth_m = mmax[1] - mmin[1]
    if width_m <= 0 or depth_m <= 0:
        raise MissingCorrespondence("mesh footprint has zero extent")
    scale_x = (rmax[0] - rmin[0]) / width_m
    scale_z = (rmax[1] - rmin[1]) / depth_m
    warnings = []
    ratio = abs(math.log((width_m / depth_m) / ((rmax[0] - rmin[0]) / (rmax[1] - rmin[1]))))
    if ratio > math.log(1 + ASPECT_WARN_RATIO):
        warnings.append(
            f"{AspectMismatch.code}: mesh/room aspect ratios differ by {math.expm1(ratio):.0%}"
        )
    transform = RegistrationTransform(
        rotation_deg=rotation_deg,
        scale_x=float(scale_x),
        scale_z=float(scale_z),
        offset=(float(rmin[0]), float(rmin[1])),
        mesh_min=(float(mmin[0]), float(mmin[1])),
    )
    return transform, warnings
