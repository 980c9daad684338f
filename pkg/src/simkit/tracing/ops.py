"""Tracing operations: the single engine behind the CLI, the HTTP service
and the browser tracer.

All ops mutate a FloorModel in place and are deterministic: replaying the
same op sequence on an empty model always reproduces the same ids,
coordinates and orderings.
"""

from __future__ import annotations

import math

from ..errors import (
    DegenerateRing,
    DuplicateLine,
    EntranceOnEdge,
    IndexOutOfRange,
    InvariantViolation,
    LineInUse,
    NoLineNear,
    NotAWall,
    PointOffWall,
    ZeroWidthEntrance,
)
from .model import (
    SNAP_TOL,
    Corner,
    Entrance,
    EntranceCorner,
    FloorModel,
    GridLine,
    Space,
    SpaceType,
    validate_space,
)

ID_MATCH_TOL = 0.5  # px; recomputed intersections within this keep their id


def add_line(
    model: FloorModel,
    kind: str,
    offset: float | None = None,
    anchor: tuple[float, float] | None = None,
    angle_deg: float | None = None,
    ghost: bool = False,
) -> int:
    if kind not in ("horizontal", "vertical", "oblique"):
        raise InvariantViolation(f"unknown line kind {kind!r}")
    if kind == "oblique":
        if anchor is None or angle_deg is None:
            raise InvariantViolation("oblique line needs an anchor point and an angle")
        line = GridLine(0, kind, angle_deg=angle_deg % 180.0, anchor=anchor, ghost=ghost)
    else:
        if offset is None:
            raise InvariantViolation(f"{kind} line needs an offset")
        limit = model.image_height if kind == "horizontal" else model.image_width
        if not (0 <= offset <= limit):
            raise InvariantViolation(f"offset {offset} outside image bounds [0, {limit}]")
        for other in model.lines:
            if other.kind == kind and abs(other.offset - offset) <= SNAP_TOL:
                raise DuplicateLine(
                    f"a {kind} line at offset {other.offset} already exists within {SNAP_TOL} px"
                )
        line = GridLine(0, kind, offset=float(offset), ghost=ghost)
    line.id = model._next_line_id
    model._next_line_id += 1
    model.lines.append(line)
    model.corners_stale = True
    return line.id


def remove_line(model: FloorModel, point: tuple[float, float]) -> int:
    x, y = point
    best = None
    best_d = SNAP_TOL
    for line in model.lines:
        d = line.distance_to(x, y)
        if d <= best_d:
            best, best_d = line, d
    if best is None:
        raise NoLineNear(f"no line within {SNAP_TOL} px of ({x}, {y})")
    dependent = {c.id for c in model.corners if best.id in c.source}
    for sp in model.spaces:
        used = dependent.intersection(sp.corners)
        if used:
            raise LineInUse(
                f"line {best.id} generates corner(s) {sorted(used)} referenced by space {sp.id}"
            )
    model.lines.remove(best)
    model.corners = [c for c in model.corners if best.id not in c.source]
    model.corners_stale = True
    return best.id


def _intersect(a: GridLine, b: GridLine) -> tuple[float, float] | None:
    (px, py), (dx, dy) = a.point_and_direction()
    (qx, qy), (ex, ey) = b.point_and_direction()
    den = dx * ey - dy * ex
    if abs(den) < 1e-12:
        return None
    t = ((qx - px) * ey - (qy - py) * ex) / den
    return px + t * dx, py + t * dy


def compute_corners(model: FloorModel) -> list[Corner]:
    """Intersect every line pair inside the image and refresh the corner set.

    Intersections coinciding with an existing corner (within ID_MATCH_TOL)
    keep its id; new ones get fresh ids, assigned in (round(y), round(x))
    lexicographic order starting past the current maximum.
    """
    hits: list[tuple[float, float, int, int]] = []
    lines = model.lines
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            pt = _intersect(lines[i], lines[j])
            if pt is None:
                continue
            x, y = pt
            if 0 <= x <= model.image_width and 0 <= y <= model.image_height:
                hits.append((x, y, lines[i].id, lines[j].id))

    old = list(model.corners)
    new_corners: list[Corner] = []
    fresh: list[tuple[float, float, int, int]] = []
    for x, y, la, lb in hits:
        match = None
        for c in old:
            if abs(c.x - x) <= ID_MATCH_TOL and abs(c.y - y) <= ID_MATCH_TOL:
                match = c
                break
        if match is not None:
            old.remove(match)
            new_corners.append(Corner(match.id, x, y, (la, lb)))
        else:
            fresh.append((x, y, la, lb))

    next_id = max((c.id for c in model.corners), default=0) + 1
    fresh.sort(key=lambda h: (round(h[1]), round(h[0])))
    for x, y, la, lb in fresh:
        new_corners.append(Corner(next_id, x, y, (la, lb)))
        next_id += 1

    new_corners.sort(key=lambda c: c.id)
    model.corners = new_corners
    model.corners_stale = False
    return list(model.corners)


def sort_clockwise(
    corner_ids: list[int] | set[int],
    coords: dict[int, tuple[float, float]],
) -> list[int]:
    """Order corners clockwise (screen y-down) about their centroid,
    canonically starting at the smallest id."""
    ids = sorted(corner_ids)
    if len(ids) < 3:
        raise DegenerateRing(f"need >= 3 corners, got {len(ids)}")
    pts = [coords[i] for i in ids]
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    # collinearity: all cross products against the first direction vanish
    span = max(
        abs((pts[i][0] - pts[0][0]) * (pts[j][1] - pts[0][1])
            - (pts[j][0] - pts[0][0]) * (pts[i][1] - pts[0][1]))
        for i in range(len(pts))
        for j in range(len(pts))
    )
    if span < 1e-9:
        raise DegenerateRing("all corners are collinear")
    # ascending atan2 is counter-clockwise in math axes, i.e. clockwise on
    # screen with y pointing down
    ordered = sorted(ids, key=lambda i: math.atan2(coords[i][1] - cy, coords[i][0] - cx))
    start = ordered.index(min(ordered))
    return ordered[start:] + ordered[:start]


def candidate_walls(ring: list[int]) -> list[tuple[int, int]]:
    n = len(ring)
    return [(ring[i], ring[(i + 1) % n]) for i in range(n)]


def set_wall(space: Space, edge_index: int, present: bool) -> Space:
    n = len(space.corners)
    if not (1 <= edge_index <= n):
        raise IndexOutOfRange(f"edge index {edge_index} out of range 1..{n}")
    if not present:
        for ent in space.entrances:
            if ent.wall_index == edge_index:
                raise EntranceOnEdge(f"edge {edge_index} hosts entrance {ent.id}")
    space.wall_flags[edge_index - 1] = present
    return space


def _project_to_segment(
    p: tuple[float, float], a: tuple[float, float], b: tuple[float, float]
) -> tuple[tuple[float, float], float, float]:
    """Orthogonal projection of p onto line ab; returns (point, t, distance)."""
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    L2 = dx * dx + dy * dy
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / L2
    qx, qy = ax + t * dx, ay + t * dy
    d = math.hypot(p[0] - qx, p[1] - qy)
    return (qx, qy), t, d


def add_entrance(
    model: FloorModel,
    space: Space,
    wall_index: int,
    p1: tuple[float, float],
    p2: tuple[float, float],
) -> Entrance:
    n = len(space.corners)
    if not (1 <= wall_index <= n):
        raise IndexOutOfRange(f"wall index {wall_index} out of range 1..{n}")
    if not space.wall_flags[wall_index - 1]:
        raise NotAWall(f"edge {wall_index} of space {space.id or space.name!r} carries no wall")
    a = model.corner_by_id(space.corners[wall_index - 1])
    b = model.corner_by_id(space.corners[wall_index % n])
    seg_a, seg_b = (a.x, a.y), (b.x, b.y)
    projected = []
    for p in (p1, p2):
        q, t, d = _project_to_segment(p, seg_a, seg_b)
        wall_len = math.dist(seg_a, seg_b)
        t_tol = SNAP_TOL / wall_len if wall_len > 0 else 0.0
        if d > SNAP_TOL or t < -t_tol or t > 1 + t_tol:
            raise PointOffWall(f"point {p} is not on wall {wall_index} within {SNAP_TOL} px")
        projected.append((q, min(max(t, 0.0), 1.0)))
    if math.dist(projected[0][0], projected[1][0]) < 1e-9:
        raise ZeroWidthEntrance("entrance endpoints coincide after projection")
    eid_nums = []
    next_ec = max((c.id for c in model.entrance_corners), default=0) + 1
    for (q, _t) in projected:
        model.entrance_corners.append(
            EntranceCorner(next_ec, q[0], q[1], (space.id, wall_index))
        )
        eid_nums.append(next_ec)
        next_ec += 1
    ent = Entrance(f"e{model._next_entrance_no}", wall_index, (eid_nums[0], eid_nums[1]))
    model._next_entrance_no += 1
    space.entrances.append(ent)
    return ent


def finalize_space(
    model: FloorModel,
    corner_ids: list[int] | set[int],
    flags: list[bool],
    entrances: list[Entrance] | None,
    name: str,
    space_type: SpaceType | int | str,
    explicit_order: bool = False,
) -> str:
    """Validate and append a Space; returns its sequential id ("s1", "s2"...)."""
    if isinstance(space_type, str):
        space_type = SpaceType.from_name(space_type)
    else:
        space_type = SpaceType(space_type)
    coords = {}
    for cid in corner_ids:
        c = model.corner_by_id(cid)
        coords[cid] = (c.x, c.y)
    if explicit_order:
        ring = list(corner_ids)
    else:
        ring = sort_clockwise(corner_ids, coords)
    sid = f"s{len(model.spaces) + 1}"
    space = Space(sid, space_type, name, ring, list(flags), list(entrances or []))
    validate_space(model, space)
    for ent in space.entrances:
        for eid in ent.endpoints:
            ec = model.entrance_corner_by_id(eid)
            ec.host_wall = (sid, ent.wall_index)
    model.spaces.append(space)
    return sid
