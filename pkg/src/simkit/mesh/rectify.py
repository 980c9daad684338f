"""Rectification: warp the mesh so the fitted wall quadrilateral becomes
its best-fitting axis-parallel rectangle.

The rectangle is the componentwise least-squares fit under the fixed
corner correspondence: the left edge sits at the mean x of the two left
corners, and likewise for the right, near, and far edges. An exact
four-point collineation maps the quad corners to the rectangle corners
and is applied to the (X, Z) coordinates of every vertex; Y is left
untouched.
"""

from __future__ import annotations

import numpy as np

from ..georef.homography import Homography, estimate_homography, apply_homography_many
from .mesh import TriangleMesh
from .walls import WallQuad


def best_fit_rectangle(quad: WallQuad) -> np.ndarray:
    """Axis-parallel rectangle corners matching the quad's corner order
    (left-far, right-far, right-near, left-near)."""
    c = quad.corners
    left = (c[0, 0] + c[3, 0]) / 2
    right = (c[1, 0] + c[2, 0]) / 2
    far = (c[0, 1] + c[1, 1]) / 2
    near = (c[2, 1] + c[3, 1]) / 2
    return np.array([
        [left, far],
        [right, far],
        [right, near],
        [left, near],
    ])


def rectify(mesh: TriangleMesh, quad: WallQuad) -> tuple[TriangleMesh, Homography]:
    """Apply the quad -> rectangle collineation to all vertices' (X, Z)."""
    rect = best_fit_rectangle(quad)
    pairs = [((p[0], p[1]), (r[0], r[1])) for p, r in zip(quad.corners, rect)]
    H = estimate_homography(pairs)
    out = mesh.copy()
    xz = apply_homography_many(H, out.vertices[:, [0, 2]])
    out.vertices = np.column_stack([xz[:, 0], out.vertices[:, 1], xz[:, 1]])
    return out, H
