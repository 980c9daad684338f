"""Top-down raster of a labeled mesh for the super-pixel picker UI.

Faces are painted onto an orthographic X-Z image in ascending max-Y
order (painter's algorithm, higher surfaces drawn last), each
super-pixel in a distinct color from a golden-ratio hue walk. A JSON
legend sidecar maps label ids to their colors so a client can translate
picked pixels back to super-pixel ids.
"""

from __future__ import annotations

import colorsys
import json

import numpy as np
from PIL import Image, ImageDraw

from ..errors import InvariantViolation
from .mesh import TriangleMesh

GOLDEN_RATIO_CONJUGATE = 0.6180339887498949


def label_color(label: int) -> tuple[int, int, int]:
    hue = (label * GOLDEN_RATIO_CONJUGATE) % 1.0
    r, g, b = colorsys.hsv_to_rgb(hue, 0.65, 0.95)
    return int(r * 255), int(g * 255), int(b * 255)


def topdown_raster(
    mesh: TriangleMesh, labels: np.ndarray, width_px: int = 800
) -> tuple[Image.Image, dict]:
    """Render the labeled mesh from above; returns (image, legend).

    The legend records the pixel-per-meter scale and world origin so
    picker clicks can be mapped back, plus label -> hex color.
    """
    if len(labels) != mesh.n_faces:
        raise InvariantViolation("label count does not match face count")
    mesh.require_nonempty()
    xz = mesh.vertices[:, [0, 2]]
    lo = xz.min(axis=0)
    hi = xz.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    scale = (width_px - 2) / span[0]
    height_px = int(np.ceil(span[1] * scale)) + 2

    def to_px(p):
        # z grows downward in the image so the far wall is at the top
        return (1 + (p[0] - lo[0]) * scale, height_px - 1 - (p[1] - lo[1]) * scale)

    img = Image.new("RGB", (width_px, height_px), (255, 255, 255))
    draw = ImageDraw.Draw(img)
    tops = mesh.vertices[mesh.faces, 1].max(axis=1)
    for fi in np.argsort(tops, kind="stable"):
        tri = [to_px(xz[v]) for v in mesh.faces[fi]]
        draw.polygon(tri, fill=label_color(int(labels[fi])))

    legend = {
        "width_px": width_px,
        "height_px": height_px,
        "px_per_meter": float(scale),
        "origin_xz": [float(lo[0]), float(lo[1])],
        "colors": {
            str(int(l)): "#%02X%02X%02X" % label_color(int(l))
            for l in np.unique(labels)
        },
    }
    return img, legend


def save_raster(path_png: str, path_legend: str, img: Image.Image, legend: dict) -> None:
    img.save(path_png, format="PNG")
    with open(path_legend, "w") as fh:
        json.dump(legend, fh, indent=1, sort_keys=True)
        fh.write("\n")
