from .homography import Homography, apply_homography, estimate_homography
from .register import GeoAnchor, georegister, load_anchors
from .utm import UtmCoord, utm_to_wgs84, utm_zone, wgs84_to_utm, zone_central_meridian

__all__ = [
    "Homography",
    "apply_homography",
    "estimate_homography",
    "GeoAnchor",
    "georegister",
    "load_anchors",
    "UtmCoord",
    "utm_to_wgs84",
    "utm_zone",
    "wgs84_to_utm",
    "zone_central_meridian",
]
