import math
import random

import numpy as np
import pytest

from geodesy_oracle import meridian_arc_quadrature, snyder_forward
from simkit.errors import DegenerateConfiguration, OutOfUtmRange, PointAtInfinity, ZoneSpanError
from simkit.georef import (
    GeoAnchor,
    Homography,
    UtmCoord,
    apply_homography,
    estimate_homography,
    georegister,
    utm_to_wgs84,
    utm_zone,
    wgs84_to_utm,
)
from simkit.georef.utm import zone_central_meridian
from simkit.tracing import FloorModel
from simkit.tracing.model import Corner


class TestUtmForward:
    def test_central_meridian_equator(self):
        for zone in (1, 10, 31, 60):
            u = wgs84_to_utm(0.0, zone_central_meridian(zone))
            assert u.zone == zone
            assert u.easting == pytest.approx(500000.0, abs=1e-6)
            assert u.northing == pytest.approx(0.0, abs=1e-6)

    def test_matches_snyder_oracle_within_1mm(self):
        rng = random.Random(42)
        for _ in range(60):
            lat = rng.uniform(-80, 80)
            zone = rng.randrange(1, 61)
            cm = zone_central_meridian(zone)
            lon = cm + rng.uniform(-2.8, 2.8)
            u = wgs84_to_utm(lat, lon, zone=zone)
            ex, ny = snyder_forward(lat, lon, cm)
            if lat < 0:
                ny += 10000000.0
            assert u.easting == pytest.approx(ex, abs=1e-3)
            assert u.northing == pytest.approx(ny, abs=1e-3)

    def test_central_meridian_northing_matches_quadrature(self):
        for lat in (10.0, 36.9741, 60.0, -33.5):
            u = wgs84_to_utm(lat, zone_central_meridian(10), zone=10)
            arc = 0.9996 * meridian_arc_quadrature(abs(lat))
            expected = arc if lat >= 0 else 10000000.0 - arc
            assert u.northing == pytest.approx(expected, abs=1e-4)
            assert u.easting == pytest.approx(500000.0, abs=1e-9)

    def test_out_of_range_latitude(self):
        with pytest.raises(OutOfUtmRange):
            wgs84_to_utm(85.0, 0.0)
        with pytest.raises(OutOfUtmRange):
            wgs84_to_utm(-85.0, 0.0)

    def test_zone_from_longitude(self):
        assert utm_zone(-180.0) == 1
        assert utm_zone(-122.06) == 10
        assert utm_zone(0.0) == 31
        assert utm_zone(179.9) == 60

    def test_southern_hemisphere_false_northing(self):
        u = wgs84_to_utm(-10.0, zone_central_meridian(23))
        assert u.hemisphere == "S"
        assert u.northing < 10000000.0
        assert u.northing > 8000000.0


class TestUtmInverse:
    def test_false_easting_maps_to_central_meridian(self):
        for zone in (7, 33):
            lat, lon = utm_to_wgs84(UtmCoord(zone, "N", 500000.0, 0.0))
            assert lat == pytest.approx(0.0, abs=1e-12)
            assert lon == pytest.approx(zone_central_meridian(zone), abs=1e-12)

    def test_round_trip_100_points(self):
        rng = random.Random(7)
        worst = 0.0
        for _ in range(100):
            lat = rng.uniform(-84, 84)
            zone = rng.randrange(1, 61)
            lon = zone_central_meridian(zone) + rng.uniform(-2.9, 2.9)
            u = wgs84_to_utm(lat, lon, zone=zone)
            lat2, lon2 = utm_to_wgs84(u)
            worst = max(worst, abs(lat2 - lat), abs(lon2 - lon))
        assert worst < 1e-9

    def test_easting_zero_rejected(self):
        with pytest.raises(OutOfUtmRange):
            utm_to_wgs84(UtmCoord(10, "N", 0.0, 0.0))

    def test_bad_zone_rejected(self):
        with pytest.raises(OutOfUtmRange):
            utm_to_wgs84(UtmCoord(0, "N", 500000.0, 0.0))


class TestConformality:
    def test_small_square_distortion_below_0p1_percent(self):
        # 10 m x 10 m geodetic square near a mid-latitude anchor
        lat0, lon0 = 36.97, -122.03
        # build the square in geodetic space from metric offsets using the
        # exact ellipsoid curvature radii at lat0
        a, f = 6378137.0, 1 / 298.257223563
        e2 = f * (2 - f)
        sin2 = math.sin(math.radians(lat0)) ** 2
        M = a * (1 - e2) / (1 - e2 * sin2) ** 1.5
        N = a / math.sqrt(1 - e2 * sin2)
        dlat = math.degrees(10.0 / M)
        dlon = math.degrees(10.0 / (N * math.cos(math.radians(lat0))))
        p00 = wgs84_to_utm(lat0, lon0)
        p10 = wgs84_to_utm(lat0, lon0 + dlon)
        p01 = wgs84_to_utm(lat0 + dlat, lon0)
        side_x = math.hypot(p10.easting - p00.easting, p10.northing - p00.northing)
        side_y = math.hypot(p01.easting - p00.easting, p01.northing - p00.northing)
        assert abs(side_x - 10.0) / 10.0 < 1e-3
        assert abs(side_y - 10.0) / 10.0 < 1e-3


UNIT_SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


class TestHomography:
    def test_identity_on_unit_square(self):
        H = estimate_homography([(p, p) for p in UNIT_SQUARE])
        assert np.allclose(H.matrix, np.eye(3), atol=1e-12)

    def test_synthetic_8_point_recovery(self):
        H_true = np.array([
            [1.2, 0.1, 5.0],
            [-0.2, 0.9, -3.0],
            [1e-4, -2e-4, 1.0],
        ])
        rng = random.Random(3)
        src = [(rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(8)]
        Ht = Homography(H_true)
        pairs = [(p, apply_homography(Ht, p)) for p in src]
        H = estimate_homography(pairs)
        assert np.allclose(H.matrix, H_true / H_true[2, 2], rtol=1e-9, atol=1e-9)
        errs = [
            math.dist(apply_homography(H, p), q) for p, q in pairs
        ]
        rms = math.sqrt(sum(e * e for e in errs) / len(errs))
        assert rms < 1e-9 * 100  # relative to the 100-unit data scale

    def test_four_point_fit_is_exact(self):
        src = UNIT_SQUARE
        dst = [(0.0, 0.0), (2.0, 0.1), (2.2, 1.9), (-0.1, 2.0)]
        H = estimate_homography(list(zip(src, dst)))
        for p, q in zip(src, dst):
            assert math.dist(apply_homography(H, p), q) < 1e-9

    def test_collinear_points_rejected(self):
        src = [(0, 0), (1, 1), (2, 2), (3, 3)]
        dst = UNIT_SQUARE
        with pytest.raises(DegenerateConfiguration):
            estimate_homography(list(zip(src, dst)))

    def test_scale_invariance_of_induced_map(self):
        H_true = np.array([[1.1, 0.2, 3.0], [0.0, 0.95, -1.0], [1e-5, 2e-5, 1.0]])
        Ht = Homography(H_true)
        rng = random.Random(11)
        src = [(rng.uniform(0, 50), rng.uniform(0, 50)) for _ in range(6)]
        pairs = [(p, apply_homography(Ht, p)) for p in src]
        H1 = estimate_homography(pairs)
        k = 1000.0
        pairs_scaled = [((p[0] * k, p[1] * k), q) for p, q in pairs]
        H2 = estimate_homography(pairs_scaled)
        for p, _q in pairs:
            a = apply_homography(H1, p)
            b = apply_homography(H2, (p[0] * k, p[1] * k))
            assert math.dist(a, b) < 1e-9

    def test_apply_identity_and_translation(self):
        assert apply_homography(Homography(np.eye(3)), (3, 7)) == (3, 7)
        T = np.eye(3)
        T[0, 2] = 5.0
        assert apply_homography(Homography(T), (0, 0)) == (5.0, 0.0)

    def test_inverse_round_trip(self):
        H = Homography(np.array([[2.0, 0.3, 1.0], [0.1, 1.5, -2.0], [1e-4, 0.0, 1.0]]))
        Hi = H.inverse()
        rng = random.Random(5)
        for _ in range(20):
            p = (rng.uniform(-10, 10), rng.uniform(-10, 10))
            q = apply_homography(Hi, apply_homography(H, p))
            assert math.dist(p, q) < 1e-9

    def test_point_at_infinity(self):
        H = Homography(np.array([[1.0, 0, 0], [0, 1.0, 0], [0, -1.0, 1.0]]))
        with pytest.raises(PointAtInfinity):
            apply_homography(H, (0.0, 1.0))


def model_with_corners(coords):
    m = FloorModel(1000, 1000)
    for cid, (x, y) in coords.items():
        m.corners.append(Corner(cid, x, y, (0, 0)))
    return m


class TestGeoregister:
    def make_rect_fixture(self):
        """Anchors built by inverse-projecting a UTM rectangle, so the
        pixel->UTM map is exactly affine and midpoints are preserved."""
        zone = 10
        e0, n0 = 580000.0, 4090000.0
        utm_rect = [(e0, n0), (e0 + 40, n0), (e0 + 40, n0 + 20), (e0, n0 + 20)]
        px_rect = [(0, 200), (400, 200), (400, 0), (0, 0)]  # y flips to northing
        coords = {i + 1: p for i, p in enumerate(px_rect)}
        coords[5] = (200.0, 100.0)  # pixel midpoint
        model = model_with_corners(coords)
        anchors = []
        for cid, (e, n) in zip([1, 2, 3, 4], utm_rect):
            lat, lon = utm_to_wgs84(UtmCoord(zone, "N", e, n))
            anchors.append(GeoAnchor(cid, lat, lon))
        return model, anchors, zone, (e0 + 20, n0 + 10)

    def test_anchors_reproject_exactly(self):
        model, anchors, _zone, _mid = self.make_rect_fixture()
        table = georegister(model, anchors)
        for a in anchors:
            lat, lon = table.corners[a.corner_id]
            assert lat == pytest.approx(a.latitude_deg, abs=1e-8)
            assert lon == pytest.approx(a.longitude_deg, abs=1e-8)

    def test_midpoint_maps_to_midpoint(self):
        model, anchors, zone, mid_utm = self.make_rect_fixture()
        table = georegister(model, anchors)
        lat, lon = table.corners[5]
        mid_lat, mid_lon = utm_to_wgs84(UtmCoord(zone, "N", *mid_utm))
        assert lat == pytest.approx(mid_lat, abs=1e-9)
        assert lon == pytest.approx(mid_lon, abs=1e-9)

    def test_zone_span_rejected(self):
        model = model_with_corners({1: (0, 0), 2: (10, 0), 3: (10, 10), 4: (0, 10)})
        anchors = [
            GeoAnchor(1, 36.9, -122.0),  # zone 10
            GeoAnchor(2, 36.9, -119.0),  # zone 11
            GeoAnchor(3, 36.8, -122.0),
            GeoAnchor(4, 36.8, -119.0),
        ]
        with pytest.raises(ZoneSpanError):
            georegister(model, anchors)

    def test_too_few_anchors(self):
        model = model_with_corners({1: (0, 0), 2: (10, 0), 3: (10, 10)})
        anchors = [GeoAnchor(i, 36.9, -122.0) for i in (1, 2, 3)]
        with pytest.raises(DegenerateConfiguration):
            georegister(model, anchors)

    def test_six_noisy_anchors_rms_within_noise(self):
        zone = 10
        rng = np.random.default_rng(19)
        e0, n0 = 580000.0, 4090000.0
        px = [(0, 0), (400, 0), (400, 200), (0, 200), (200, 0), (0, 100)]
        scale = 0.1  # m per px
        true_utm = [(e0 + x * scale, n0 + (200 - y) * scale) for x, y in px]
        noise = rng.normal(0.0, 0.5, size=(6, 2))
        coords = {i + 1: p for i, p in enumerate(px)}
        model = model_with_corners(coords)
        anchors = []
        for i, ((e, n), (de, dn)) in enumerate(zip(true_utm, noise)):
            lat, lon = utm_to_wgs84(UtmCoord(zone, "N", e + de, n + dn))
            anchors.append(GeoAnchor(i + 1, lat, lon))
        table = georegister(model, anchors)
        errs = []
        for i, (e, n) in enumerate(true_utm):
            lat, lon = table.corners[i + 1]
            u = wgs84_to_utm(lat, lon, zone=zone)
            errs.append((u.easting - e) ** 2 + (u.northing - n) ** 2)
        rms = math.sqrt(sum(errs) / len(errs))
        assert rms <= 0.5 * 2  # within the 0.5 m noise scale
