"""Object assignment and cuboid extraction.

A human assigns super-pixel ids to named objects; each object becomes
the sub-mesh union of its super-pixels' faces, then an axis-aligned
bounding box in the rectified frame. Footprints are mapped through the
registration transform to floor-plan pixels; the box height is its top
(max Y), since exported cuboids stand on the ground.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import (
    DegenerateBox,
    EmptyObject,
    InvariantViolation,
    OverlappingAssignment,
    UnknownSuperpixel,
)
from .mesh import TriangleMesh
from .registration import RegistrationTransform

MIN_EXTENT_M = 0.02  # floor for thin objects (whiteboards, doors)


@dataclass
class ObjectAssignment:
    name: str
    superpixels: tuple[int, ...]
    color: str | None = None


@dataclass
class ObjectBox:
    name: str
    min_corner: np.ndarray  # (3,) rectified-frame meters
    max_corner: np.ndarray
    footprint_px: list  # 4 (x, y) pixel corners
    height_m: float
    min_y_m: float
    superpixels: tuple[int, ...] = ()
    color: str | None = None


def parse_assignments(text: str) -> list[ObjectAssignment]:
    """Assignments file: JSON list of {name, superpixels, color?}."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvariantViolation(f"assignments file is not valid JSON: {exc}") from None
    if not isinstance(raw, list):
        raise InvariantViolation("assignments file must be a JSON list")
    out = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict) or "name" not in entry or "superpixels" not in entry:
            raise InvariantViolation(f"assignment {i} needs 'name' and 'superpixels'")
        name = str(entry["name"])
        if not name or name != name.strip():
            raise InvariantViolation(f"assignment {i}: bad object name {name!r}")
        sp = entry["superpixels"]
        if not isinstance(sp, list) or not all(isinstance(v, int) for v in sp):
            raise InvariantViolation(f"assignment {i}: superpixels must be an int list")
        out.append(ObjectAssignment(name, tuple(sp), entry.get("color")))
    return out


def assign_objects(
    mesh: TriangleMesh, labels: np.ndarray, assignments: list[ObjectAssignment]
) -> list[tuple[ObjectAssignment, TriangleMesh]]:
    """Slice the labeled mesh into per-object sub-meshes."""
    known = set(int(v) for v in np.unique(labels))
    claimed: dict[int, str] = {}
    out = []
    for a in assignments:
        for sp in a.superpixels:
            if sp not in known:
                raise UnknownSuperpixel(f"object {a.name!r} references unknown super-pixel {sp}")
            if sp in claimed and claimed[sp] != a.name:
                raise OverlappingAssignment(
                    f"super-pixel {sp} claimed by both {claimed[sp]!r} and {a.name!r}"
                )
            claimed[sp] = a.name
        mask = np.isin(labels, list(a.superpixels))
        if not mask.any():
            raise EmptyObject(f"object {a.name!r} has no faces")
        faces = mesh.faces[mask]
        used = np.zeros(mesh.n_vertices, dtype=bool)
        used[faces.ravel()] = True
        remap = np.cumsum(used) - 1
        out.append((a, TriangleMesh(mesh.vertices[used], remap[faces])))
    return out


def object_boxes(
    objects: list[tuple[ObjectAssignment, TriangleMesh]],
    transform: RegistrationTransform,
) -> list[ObjectBox]:
    boxes = []
    for assignment, sub in objects:
        if sub.n_faces == 0:
            raise DegenerateBox(f"object {assignment.name!r} sub-mesh is empty")
        lo = sub.vertices.min(axis=0)
        hi = sub.vertices.max(axis=0)
        # keep thin objects visible on the plan
        for axis in (0, 2):
            if hi[axis] - lo[axis] < MIN_EXTENT_M:
                mid = (hi[axis] + lo[axis]) / 2
                lo[axis] = mid - MIN_EXTENT_M / 2
                hi[axis] = mid + MIN_EXTENT_M / 2
        corners_xz = np.array([
            [lo[0], lo[2]],
            [hi[0], lo[2]],
            [hi[0], hi[2]],
            [lo[0], hi[2]],
        ])
        footprint = transform.apply(corners_xz)
        area = abs(
            (footprint[1, 0] - footprint[0, 0]) * (footprint[3, 1] - footprint[0, 1])
            - (footprint[1, 1] - footprint[0, 1]) * (footprint[3, 0] - footprint[0, 0])
        )
        if area <= 0:
            raise DegenerateBox(f"object {assignment.name!r} footprint has zero area")
        boxes.append(
            ObjectBox(
                name=assignment.name,
                min_corner=lo,
                max_corner=hi,
                footprint_px=[(float(x), float(y)) for x, y in footprint],
                height_m=float(hi[1]),
                min_y_m=float(lo[1]),
                superpixels=assignment.superpixels,
                color=assignment.color,
            )
        )
    return boxes
