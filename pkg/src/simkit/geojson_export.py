"""GeoJSON (RFC 7946) export of geo-registered floor models and objects.

Exterior rings are closed and counter-clockwise in (lon, lat); staircases
expand into three stepped features; elevators get their own color. Wall
gaps (open edges) and entrances cannot be polygon geometry, so they ride
along as metadata arrays inside feature properties.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import InvariantViolation, MissingGeoCorner, UnregisteredModel
from .georef.register import GeoTable
from .tracing.model import FloorModel, Space, SpaceType

DEG_PRECISION = 7  # ~1 cm
METER_PRECISION = 3


@dataclass
class StyleConfig:
    room_height_m: float = 2.5
    room_color: str = "#FFD966"
    corridor_color: str = "#FFD966"
    restroom_color: str = "#FFD966"
    staircase_color: str = "#2E8B57"
    elevator_color: str = "#1E40AF"
    object_color: str = "#8B5A2B"
    staircase_step_fractions: tuple[float, ...] = (1 / 3, 2 / 3, 1.0)

    def __post_init__(self):
        if self.room_height_m <= 0:
            raise InvariantViolation("room height must be positive")
        fr = tuple(self.staircase_step_fractions)
        self.staircase_step_fractions = fr
        if any(b <= a for a, b in zip(fr, fr[1:])) or abs(fr[-1] - 1.0) > 1e-12:
            raise InvariantViolation("step fractions must be strictly increasing and end at 1")

    def color_for(self, space_type: SpaceType) -> str:
        return {
            SpaceType.ROOM: self.room_color,
            SpaceType.CORRIDOR: self.corridor_color,
            SpaceType.RESTROOM: self.restroom_color,
            SpaceType.STAIRCASE: self.staircase_color,
            SpaceType.ELEVATOR: self.elevator_color,
        }[space_type]

    @classmethod
    def from_json(cls, text: str) -> "StyleConfig":
        raw = json.loads(text)
        return cls(**raw)


def _round_lonlat(p: tuple[float, float]) -> list[float]:
    return [round(p[0], DEG_PRECISION), round(p[1], DEG_PRECISION)]


def _ring_ccw(ring: list[list[float]]) -> list[list[float]]:
    """Make an open ring counter-clockwise in (lon, lat), keeping its start."""
    area = 0.0
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        area += x0 * y1 - x1 * y0
    if area < 0:
        ring = [ring[0]] + ring[1:][::-1]
    return ring


def _polygon(ring_lonlat: list[list[float]]) -> dict:
    ring = _ring_ccw(ring_lonlat)
    return {"type": "Polygon", "coordinates": [ring + [ring[0]]]}


def _space_ring_px(model: FloorModel, space: Space) -> list[tuple[float, float]]:
    pts = []
    for cid in space.corners:
        c = model.corner_by_id(cid)
        pts.append((c.x, c.y))
    return pts


def _space_metadata(model: FloorModel, space: Space, geo: GeoTable) -> dict:
    open_edges = []
    n = len(space.corners)
    for i, flag in enumerate(space.wall_flags):
        if not flag:
            a = space.corners[i]
            b = space.corners[(i + 1) % n]
            open_edges.append([
                _round_lonlat(_lonlat_for(geo, a)),
                _round_lonlat(_lonlat_for(geo, b)),
            ])
    entrances = []
    for ent in space.entrances:
        pts = []
        for eid in ent.endpoints:
            if eid not in geo.entrance_corners:
                raise MissingGeoCorner(f"entrance corner {eid} has no geodetic position")
            lat, lon = geo.entrance_corners[eid]
            pts.append(_round_lonlat((lon, lat)))
        entrances.append({"id": ent.id, "wall_index": ent.wall_index, "points": pts})
    return {"open_edges": open_edges, "entrances": entrances}


def _lonlat_for(geo: GeoTable, corner_id: int) -> tuple[float, float]:
    if corner_id not in geo.corners:
        raise MissingGeoCorner(f"corner {corner_id} has no geodetic position")
    lat, lon = geo.corners[corner_id]
    return lon, lat


def staircase_steps(
    polygon_px: list[tuple[float, float]], style: StyleConfig
) -> tuple[list[list[tuple[float, float]]], list[float], bool]:
    """Split a quadrilateral footprint into equal strips along its longer
    axis; returns (strip polygons, heights, fallback_flag).

    Non-quadrilateral footprints fall back to the whole polygon at full
    height with the flag set.
    """
    h = style.room_height_m
    if len(polygon_px) != 4:
        return [list(polygon_px)], [h], True

    p = polygon_px
    xs = [q[0] for q in p]
    ys = [q[1] for q in p]
    long_axis = (1.0, 0.0) if (max(xs) - min(xs)) >= (max(ys) - min(ys)) else (0.0, 1.0)

    def alignment(a, b):
        dx, dy = b[0] - a[0], b[1] - a[1]
        L = math.hypot(dx, dy)
        return abs(dx * long_axis[0] + dy * long_axis[1]) / L if L > 0 else 0.0

    # split along the opposite-edge pair better aligned with the long axis
    pair02 = (alignment(p[0], p[1]) + alignment(p[3], p[2])) / 2
    pair13 = (alignment(p[1], p[2]) + alignment(p[0], p[3])) / 2
    if pair02 >= pair13:
        top_a, top_b, bot_a, bot_b = p[0], p[1], p[3], p[2]
    else:
        top_a, top_b, bot_a, bot_b = p[1], p[2], p[0], p[3]

    def lerp(a, b, t):
        return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)

    cuts = [0.0] + [f for f in style.staircase_step_fractions]
    strips = []
    for t0, t1 in zip(cuts, cuts[1:]):
        strips.append([
            lerp(top_a, top_b, t0),
            lerp(top_a, top_b, t1),
            lerp(bot_a, bot_b, t1),
            lerp(bot_a, bot_b, t0),
        ])
    # strip positions reuse the fractions as cut points; heights climb with them
    heights = [f * h for f in style.staircase_step_fractions]
    return strips, heights, False


def _feature(ring_lonlat, props: dict) -> dict:
    return {"type": "Feature", "properties": props, "geometry": _polygon(ring_lonlat)}


def export_feature_collection(
    model: FloorModel, geo: GeoTable | None, style: StyleConfig | None = None
) -> dict:
    """One polygon feature per space (three per staircase), geodetic
    coordinates, deterministic construction order."""
    if geo is None:
        raise UnregisteredModel("model has no geodetic registration; provide anchors first")
    style = style or StyleConfig()
    features = []
    for sp in model.spaces:
        stype = SpaceType(sp.space_type)
        ring_px = _space_ring_px(model, sp)
        meta = _space_metadata(model, sp, geo)
        base_props = {
            "name": sp.name,
            "space_id": sp.id,
            "space_type": stype.name.lower(),
            "color": style.color_for(stype),
            "base_height": 0.0,
            **meta,
        }
        if stype == SpaceType.STAIRCASE:
            strips, heights, fallback = staircase_steps(ring_px, style)
            for i, (strip, height) in enumerate(zip(strips, heights), start=1):
                ring = [_round_lonlat(geo.pixel_point_to_lonlat(q)) for q in strip]
                props = dict(base_props)
                props["height"] = round(height, METER_PRECISION)
                props["step"] = i
                if fallback:
                    props["step_fallback"] = True
                features.append(_feature(ring, props))
        else:
            ring = [_round_lonlat(_lonlat_for(geo, cid)) for cid in sp.corners]
            props = dict(base_props)
            props["height"] = round(style.room_height_m, METER_PRECISION)
            features.append(_feature(ring, props))
    return {"type": "FeatureCollection", "features": features}


def object_to_feature(box, geo: GeoTable, style: StyleConfig | None = None) -> dict:
    """Cuboid footprint feature for a populated object.

    `box` carries: name, footprint_px (4 pixel corners), height_m (top of
    the box), min_y_m, and an optional color.
    """
    style = style or StyleConfig()
    ring = [_round_lonlat(geo.pixel_point_to_lonlat(q)) for q in box.footprint_px]
    props = {
        "name": box.name,
        "kind": "object",
        "color": box.color or style.object_color,
        "height": round(box.height_m, METER_PRECISION),
        "base_height": 0.0,
        "min_y": round(box.min_y_m, METER_PRECISION),
    }
    return _feature(ring, props)


def merge_object_features(doc: dict, object_features: list[dict]) -> tuple[dict, list[str]]:
    """Append object features, replacing same-name objects; returns the
    merged document and the names that were replaced."""
    replaced = []
    kept = []
    new_names = {f["properties"]["name"] for f in object_features}
    for f in doc.get("features", []):
        props = f.get("properties", {})
        if props.get("kind") == "object" and props.get("name") in new_names:
            replaced.append(props["name"])
            continue
        kept.append(f)
    return {"type": "FeatureCollection", "features": kept + object_features}, replaced


def dumps_geojson(doc: dict) -> bytes:
    """Deterministic serialization: sorted keys, no whitespace drift."""
    return (json.dumps(doc, sort_keys=True, separators=(",", ": "), indent=1) + "\n").encode()


def validate_document(doc: dict) -> list[str]:
    """Structural RFC 7946 checks; returns a list of problems (empty = valid)."""
    problems = []
    if doc.get("type") != "FeatureCollection":
        problems.append("root type is not FeatureCollection")
        return problems
    for i, f in enumerate(doc.get("features", [])):
        where = f"feature {i}"
        if f.get("type") != "Feature":
            problems.append(f"{where}: type is not Feature")
            continue
        geom = f.get("geometry")
        if not isinstance(geom, dict) or geom.get("type") != "Polygon":
            problems.append(f"{where}: geometry is not a Polygon")
            continue
        for ring in geom.get("coordinates", []):
            if len(ring) < 4:
                problems.append(f"{where}: ring has fewer than 4 positions")
                continue
            if ring[0] != ring[-1]:
                problems.append(f"{where}: ring is not closed")
            for pos in ring:
                if len(pos) < 2 or not all(math.isfinite(v) for v in pos[:2]):
                    problems.append(f"{where}: non-finite coordinate {pos}")
                elif not (-180.0 <= pos[0] <= 180.0 and -90.0 <= pos[1] <= 90.0):
                    problems.append(f"{where}: coordinate out of lon/lat range {pos}")
            area = 0.0
            open_ring = ring[:-1]
            for j in range(len(open_ring)):
                x0, y0 = open_ring[j][:2]
                x1, y1 = open_ring[(j + 1) % len(open_ring)][:2]
                area += x0 * y1 - x1 * y0
            if area <= 0:
                problems.append(f"{where}: exterior ring is not counter-clockwise")
    return problems
