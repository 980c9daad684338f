"""Data model for the floor-plan tracer.

Coordinates are screen pixels with y growing downward. A space's corner
ring is stored clockwise as seen on screen, which makes the standard
shoelace sum positive under this convention.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from enum import IntEnum

from ..errors import InvariantViolation

SNAP_TOL = 2.0  # px; line duplication and wall-point snapping


class SpaceType(IntEnum):
    ROOM = 0
    CORRIDOR = 1
    RESTROOM = 2
    STAIRCASE = 3
    ELEVATOR = 4

    @classmethod
    def from_name(cls, name: str) -> "SpaceType":
        try:
            return cls[name.upper()]
        except KeyError:
            raise InvariantViolation(f"unknown space type {name!r}") from None


@dataclass
class GridLine:
    id: int
    kind: str  # horizontal | vertical | oblique
    offset: float = 0.0  # y for horizontal, x for vertical
    angle_deg: float = 0.0  # oblique only, measured from +x axis
    anchor: tuple[float, float] | None = None  # oblique only
    ghost: bool = False

    def point_and_direction(self) -> tuple[tuple[float, float], tuple[float, float]]:
        if self.kind == "horizontal":
            return (0.0, self.offset), (1.0, 0.0)
        if self.kind == "vertical":
            return (self.offset, 0.0), (0.0, 1.0)
        a = math.radians(self.angle_deg)
        assert self.anchor is not None
        return self.anchor, (math.cos(a), math.sin(a))

    def distance_to(self, x: float, y: float) -> float:
        (px, py), (dx, dy) = self.point_and_direction()
        # perpendicular distance to the infinite line
        return abs((x - px) * dy - (y - py) * dx)


@dataclass
class Corner:
    id: int
    x: float
    y: float
    source: tuple[int, int]  # ids of the two generating lines


@dataclass
class EntranceCorner:
    id: int  # separate id-space from Corner
    x: float
    y: float
    host_wall: tuple[str, int]  # (space id or "" while drafting, 1-based wall index)


@dataclass
class Entrance:
    id: str  # "e1", "e2", ...
    wall_index: int  # 1-based index into the space's edge sequence
    endpoints: tuple[int, int]  # EntranceCorner ids


@dataclass
class Space:
    id: str  # "s1", "s2", ...
    space_type: SpaceType
    name: str
    corners: list[int]  # Corner ids, clockwise
    wall_flags: list[bool]  # flag[i] covers edge (corners[i], corners[i+1 mod n])
    entrances: list[Entrance] = field(default_factory=list)


@dataclass
class FloorModel:
    image_width: int
    image_height: int
    lines: list[GridLine] = field(default_factory=list)
    corners: list[Corner] = field(default_factory=list)
    entrance_corners: list[EntranceCorner] = field(default_factory=list)
    spaces: list[Space] = field(default_factory=list)
    corners_stale: bool = False
    _next_line_id: int = 1
    _next_entrance_no: int = 1

    def copy(self) -> "FloorModel":
        return copy.deepcopy(self)

    def corner_by_id(self, cid: int) -> Corner:
        for c in self.corners:
            if c.id == cid:
                return c
        raise InvariantViolation(f"unknown corner id {cid}")

    def entrance_corner_by_id(self, eid: int) -> EntranceCorner:
        for c in self.entrance_corners:
            if c.id == eid:
                return c
        raise InvariantViolation(f"unknown entrance corner id {eid}")

    def line_by_id(self, lid: int) -> GridLine:
        for ln in self.lines:
            if ln.id == lid:
                return ln
        raise InvariantViolation(f"unknown line id {lid}")


def shoelace_area(points: list[tuple[float, float]]) -> float:
    """Signed shoelace sum /2; positive for screen-clockwise rings (y-down)."""
    n = len(points)
    s = 0.0
    for i in range(n):
        x0, y0 = points[i]
        x1, y1 = points[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return s / 2.0


def validate_space(model: FloorModel, space: Space) -> None:
    """Raise InvariantViolation naming the failing corner/edge."""
    n = len(space.corners)
    if n < 3:
        raise InvariantViolation(f"space {space.id or space.name!r}: ring needs >= 3 corners, got {n}")
    if len(set(space.corners)) != n:
        raise InvariantViolation(f"space {space.id or space.name!r}: duplicate corner ids in ring")
    if len(space.wall_flags) != n:
        raise InvariantViolation(
            f"space {space.id or space.name!r}: {len(space.wall_flags)} wall flags for {n} edges"
        )
    if not space.name or any(ch.isspace() for ch in space.name):
        raise InvariantViolation(f"space name {space.name!r} is empty or contains whitespace")
    pts = []
    for cid in space.corners:
        c = model.corner_by_id(cid)
        pts.append((c.x, c.y))
    if shoelace_area(pts) <= 0:
        raise InvariantViolation(f"space {space.id or space.name!r}: ring is not clockwise (screen convention)")
    for ent in space.entrances:
        if not (1 <= ent.wall_index <= n):
            raise InvariantViolation(f"entrance {ent.id}: wall index {ent.wall_index} out of range 1..{n}")
        if not space.wall_flags[ent.wall_index - 1]:
            raise InvariantViolation(f"entrance {ent.id}: edge {ent.wall_index} carries no wall")
        if ent.endpoints[0] == ent.endpoints[1]:
            raise InvariantViolation(f"entrance {ent.id}: endpoints coincide")
        for eid in ent.endpoints:
            model.entrance_corner_by_id(eid)


def validate_model(model: FloorModel) -> None:
    seen = set()
    for sp in model.spaces:
        if sp.id in seen:
            raise InvariantViolation(f"duplicate space id {sp.id}")
        seen.add(sp.id)
        validate_space(model, sp)
