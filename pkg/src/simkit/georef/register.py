"""Geodetic registration: anchors -> UTM -> DLT collineation -> every corner.

The anchor file is plain text, one record per line:

    # corner_id latitude longitude
    1 36.9991 -122.0609
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DegenerateConfiguration, OutOfUtmRange, ZoneSpanError
from ..tracing.model import FloorModel
from .homography import Homography, apply_homography, estimate_homography
from .utm import UtmCoord, utm_to_wgs84, utm_zone, wgs84_to_utm


@dataclass(frozen=True)
class GeoAnchor:
    corner_id: int
    latitude_deg: float
    longitude_deg: float


@dataclass
class GeoTable:
    """(lat, lon) for every wall corner and entrance corner of a model."""

    corners: dict[int, tuple[float, float]]
    entrance_corners: dict[int, tuple[float, float]]
    zone: int
    hemisphere: str
    pixel_to_utm: Homography

    def pixel_point_to_lonlat(self, point: tuple[float, float]) -> tuple[float, float]:
        e, n = apply_homography(self.pixel_to_utm, point)
        lat, lon = utm_to_wgs84(UtmCoord(self.zone, self.hemisphere, e, n))
        return lon, lat


def load_anchors(text: str) -> list[GeoAnchor]:
    anchors = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise OutOfUtmRange(f"anchor line {no}: expected 'corner_id lat lon', got {raw!r}")
        anchors.append(GeoAnchor(int(parts[0]), float(parts[1]), float(parts[2])))
    return anchors


def georegister(model: FloorModel, anchors: list[GeoAnchor]) -> GeoTable:
    """Map every corner of the model to geodetic coordinates.

    All anchors must fall in one UTM zone and hemisphere; with exactly
    four generic anchors the collineation reproduces them exactly.
    """
    if len(anchors) < 4:
        raise DegenerateConfiguration(f"need >= 4 anchors, got {len(anchors)}")

    zones = {utm_zone(a.longitude_deg) for a in anchors}
    if len(zones) > 1:
        raise ZoneSpanError(f"anchors span UTM zones {sorted(zones)}")
    zone = zones.pop()
    hemis = {"N" if a.latitude_deg >= 0 else "S" for a in anchors}
    if len(hemis) > 1:
        raise ZoneSpanError("anchors span both hemispheres")
    hemisphere = hemis.pop()

    pairs = []
    for a in anchors:
        c = model.corner_by_id(a.corner_id)
        u = wgs84_to_utm(a.latitude_deg, a.longitude_deg, zone=zone)
        pairs.append(((c.x, c.y), (u.easting, u.northing)))
    H = estimate_homography(pairs)

    def to_lat_lon(x: float, y: float) -> tuple[float, float]:
        e, n = apply_homography(H, (x, y))
        return utm_to_wgs84(UtmCoord(zone, hemisphere, e, n))

    corners = {c.id: to_lat_lon(c.x, c.y) for c in model.corners}
    ecorners = {c.id: to_lat_lon(c.x, c.y) for c in model.entrance_corners}
    return GeoTable(corners, ecorners, zone, hemisphere, H)
