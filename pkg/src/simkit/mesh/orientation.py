"""Re-orientation of a room scan about the vertical axis.

Wall-like faces (|n_y| < 0.5) vote with their area in a histogram of
normal azimuths folded modulo 90 degrees; the refined mode gives the
rotation that axis-aligns the walls, and the residual 90-degree choice
puts the longer footprint extent along Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import EmptyMesh, NoDominantOrientation
from .mesh import TriangleMesh

WALL_NY_MAX = 0.5
DOMINANCE_FRACTION = 0.20  # mode bin must hold this share of wall area


@dataclass
class AngleHistogram:
    bin_width_deg: float
    bins: np.ndarray  # accumulated face area per bin over [0, 90)

    @property
    def n_bins(self) -> int:
        return len(self.bins)

    def mode_bin(self) -> int:
        return int(np.argmax(self.bins))

    def refined_mode_deg(self) -> float:
        """Mode refined by a parabola through the mode and its two
        circular neighbors, after a light [1, 2, 1] circular smoothing
        that stabilizes the fit when two bins nearly tie."""
        smooth = (np.roll(self.bins, 1) + 2 * self.bins + np.roll(self.bins, -1)) / 4
        i = int(np.argmax(smooth))
        n = self.n_bins
        ym = float(smooth[(i - 1) % n])
        y0 = float(smooth[i])
        yp = float(smooth[(i + 1) % n])
        denom = ym - 2 * y0 + yp
        shift = 0.0 if abs(denom) < 1e-30 else 0.5 * (ym - yp) / denom
        shift = min(max(shift, -0.5), 0.5)
        return ((i + shift) * self.bin_width_deg) % 90.0


def normal_histogram(mesh: TriangleMesh, bin_width_deg: float = 1.0) -> AngleHistogram:
    mesh.require_nonempty()
    if 90.0 % bin_width_deg != 0:
        raise ValueError("bin width must divide 90")
    n_bins = int(round(90.0 / bin_width_deg))
    normals = mesh.face_normals()
    areas = mesh.face_areas()
    wall = np.abs(normals[:, 1]) < WALL_NY_MAX
    bins = np.zeros(n_bins)
    if wall.any():
        az = np.degrees(np.arctan2(normals[wall, 0], normals[wall, 2])) % 90.0
        # bins are centered on multiples of the bin width so exactly
        # axis-aligned walls land on the center of bin 0
        idx = np.floor(az / bin_width_deg + 0.5).astype(int) % n_bins
        np.add.at(bins, idx, areas[wall])
    return AngleHistogram(bin_width_deg, bins)


def rotate_y(mesh: TriangleMesh, angle_deg: float) -> TriangleMesh:
    """Rotate about Y so a normal azimuth phi (from +Z toward +X) becomes
    phi + angle_deg."""
    a = math.radians(angle_deg)
    c, s = math.cos(a), math.sin(a)
    v = mesh.vertices
    x = v[:, 0] * c + v[:, 2] * s
    z = -v[:, 0] * s + v[:, 2] * c
    out = mesh.copy()
    out.vertices = np.column_stack([x, v[:, 1], z])
    return out


def reorient(
    mesh: TriangleMesh, bin_width_deg: float = 1.0
) -> tuple[TriangleMesh, float]:
    """Axis-align the dominant wall direction; returns (mesh', theta_deg)
    where the mesh was rotated by -theta_deg (azimuth sense)."""
    hist = normal_histogram(mesh, bin_width_deg)
    total = float(hist.bins.sum())
    if total <= 0:
        raise NoDominantOrientation("no wall-like faces")
    if float(hist.bins[hist.mode_bin()]) < DOMINANCE_FRACTION * total:
        raise NoDominantOrientation(
            f"mode bin holds {hist.bins[hist.mode_bin()] / total:.1%} of wall area"
        )
    theta = hist.refined_mode_deg()
    out = rotate_y(mesh, -theta)
    extent = out.vertices.max(axis=0) - out.vertices.min(axis=0)
    if extent[0] > extent[2]:  # long side to Z
        out = rotate_y(out, -90.0)
        theta += 90.0
    return out, theta
