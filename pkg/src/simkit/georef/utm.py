"""WGS84 <-> UTM conversion.

Transverse Mercator on the WGS84 ellipsoid via the Krüger series carried
to n^6, which is accurate to well under a millimeter anywhere inside a
zone. Scale 0.9996, false easting 500 km, false northing 10000 km in the
southern hemisphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import OutOfUtmRange

WGS84_A = 6378137.0
WGS84_INV_F = 298.257223563
K0 = 0.9996
FALSE_EASTING = 500000.0
FALSE_NORTHING_SOUTH = 10000000.0
MAX_LAT = 84.0  # spec'd UTM validity band

_F = 1.0 / WGS84_INV_F
_N = _F / (2.0 - _F)
_E = math.sqrt(_F * (2.0 - _F))  # first eccentricity

# rectifying radius
_A_BAR = WGS84_A / (1 + _N) * (1 + _N**2 / 4 + _N**4 / 64 + _N**6 / 256)

# Krüger series coefficients to n^6 (forward alpha, inverse beta)
_ALPHA = (
    _N / 2 - 2 * _N**2 / 3 + 5 * _N**3 / 16 + 41 * _N**4 / 180
    - 127 * _N**5 / 288 + 7891 * _N**6 / 37800,
    13 * _N**2 / 48 - 3 * _N**3 / 5 + 557 * _N**4 / 1440
    + 281 * _N**5 / 630 - 1983433 * _N**6 / 1935360,
    61 * _N**3 / 240 - 103 * _N**4 / 140 + 15061 * _N**5 / 26880
    + 167603 * _N**6 / 181440,
    49561 * _N**4 / 161280 - 179 * _N**5 / 168 + 6601661 * _N**6 / 7257600,
    34729 * _N**5 / 80640 - 3418889 * _N**6 / 1995840,
    212378941 * _N**6 / 319334400,
)
_BETA = (
    _N / 2 - 2 * _N**2 / 3 + 37 * _N**3 / 96 - _N**4 / 360
    - 81 * _N**5 / 512 + 96199 * _N**6 / 604800,
    _N**2 / 48 + _N**3 / 15 - 437 * _N**4 / 1440
    + 46 * _N**5 / 105 - 1118711 * _N**6 / 3870720,
    17 * _N**3 / 480 - 37 * _N**4 / 840 - 209 * _N**5 / 4480
    + 5569 * _N**6 / 90720,
    4397 * _N**4 / 161280 - 11 * _N**5 / 504 - 830251 * _N**6 / 7257600,
    4583 * _N**5 / 161280 - 108847 * _N**6 / 3991680,
    20648693 * _N**6 / 638668800,
)


@dataclass(frozen=True)
class UtmCoord:
    zone: int  # 1..60
    hemisphere: str  # "N" | "S"
    easting: float  # meters
    northing: float  # meters


def utm_zone(lon_deg: float) -> int:
    lon = ((lon_deg + 180.0) % 360.0) - 180.0
    return int((lon + 180.0) // 6.0) + 1


def zone_central_meridian(zone: int) -> float:
    return -183.0 + 6.0 * zone


def wgs84_to_utm(lat_deg: float, lon_deg: float, zone: int | None = None) -> UtmCoord:
    """Project a WGS84 point; the zone defaults to the one containing lon."""
    if not (-MAX_LAT <= lat_deg <= MAX_LAT):
        raise OutOfUtmRange(f"latitude {lat_deg} outside +/-{MAX_LAT}")
    if not (-180.0 <= lon_deg < 360.0):
        raise OutOfUtmRange(f"longitude {lon_deg} out of range")
    if zone is None:
        zone = utm_zone(lon_deg)
    elif not (1 <= zone <= 60):
        raise OutOfUtmRange(f"zone {zone} outside 1..60")

    phi = math.radians(lat_deg)
    lam = math.radians(lon_deg - zone_central_meridian(zone))

    # conformal latitude
    s = (2 * math.sqrt(_N)) / (1 + _N)
    t = math.sinh(math.atanh(math.sin(phi)) - s * math.atanh(s * math.sin(phi)))
    xi_p = math.atan2(t, math.cos(lam))
    eta_p = math.atanh(math.sin(lam) / math.sqrt(1 + t * t))

    xi = xi_p
    eta = eta_p
    for j, a in enumerate(_ALPHA, start=1):
        xi += a * math.sin(2 * j * xi_p) * math.cosh(2 * j * eta_p)
        eta += a * math.cos(2 * j * xi_p) * math.sinh(2 * j * eta_p)

    easting = FALSE_EASTING + K0 * _A_BAR * eta
    northing = K0 * _A_BAR * xi
    hemisphere = "N" if lat_deg >= 0 else "S"
    if hemisphere == "S":
        northing += FALSE_NORTHING_SOUTH
    return UtmCoord(zone, hemisphere, easting, northing)


def utm_to_wgs84(coord: UtmCoord) -> tuple[float, float]:
    """Inverse projection; round-trips with wgs84_to_utm to < 1e-9 degrees."""
    if not (1 <= coord.zone <= 60):
        raise OutOfUtmRange(f"zone {coord.zone} outside 1..60")
    if coord.hemisphere not in ("N", "S"):
        raise OutOfUtmRange(f"bad hemisphere {coord.hemisphere!r}")
    if not (100000.0 < coord.easting < 900000.0):
        raise OutOfUtmRange(f"easting {coord.easting} outside in-zone range (100000, 900000)")
    if not (0.0 <= coord.northing <= FALSE_NORTHING_SOUTH):
        raise OutOfUtmRange(f"northing {coord.northing} out of range")

    northing = coord.northing
    if coord.hemisphere == "S":
        northing -= FALSE_NORTHING_SOUTH
    xi = northing / (K0 * _A_BAR)
    eta = (coord.easting - FALSE_EASTING) / (K0 * _A_BAR)

    xi_p = xi
    eta_p = eta
    for j, b in enumerate(_BETA, start=1):
        xi_p -= b * math.sin(2 * j * xi) * math.cosh(2 * j * eta)
        eta_p -= b * math.cos(2 * j * xi) * math.sinh(2 * j * eta)

    t_p = math.sin(xi_p) / math.sqrt(math.sinh(eta_p) ** 2 + math.cos(xi_p) ** 2)
    lam = math.atan2(math.sinh(eta_p), math.cos(xi_p))

    # invert the conformal-latitude map by Newton iteration on tan(phi)
    t = t_p
    for _ in range(25):
        sig = math.sinh(_E * math.atanh(_E * t / math.sqrt(1 + t * t)))
        ft = t * math.sqrt(1 + sig * sig) - sig * math.sqrt(1 + t * t) - t_p
        dft = (
            (math.sqrt(1 + sig * sig) * math.sqrt(1 + t * t) - sig * t)
            * (1 - _E * _E)
            * math.sqrt(1 + t * t)
            / (1 + (1 - _E * _E) * t * t)
        )
        dt = ft / dft
        t -= dt
        if abs(dt) < 1e-16 * max(1.0, abs(t)):
            break

    lat = math.degrees(math.atan(t))
    lon = zone_central_meridian(coord.zone) + math.degrees(lam)
    return lat, lon
