import json
import math

import pytest

from simkit.errors import InvariantViolation, MissingGeoCorner, UnregisteredModel
from simkit.geojson_export import (
    StyleConfig,
    dumps_geojson,
    export_feature_collection,
    merge_object_features,
    object_to_feature,
    staircase_steps,
    validate_document,
)
from simkit.georef import UtmCoord, utm_to_wgs84, wgs84_to_utm
from simkit.tracing import finalize_space
from simkit.tracing.script import replay_script


def single_room_geo():
    script = """
    add_line horizontal 100
    add_line horizontal 300
    add_line vertical 100
    add_line vertical 500
    compute_corners
    begin_space
    pick_corner 1
    pick_corner 2
    pick_corner 3
    pick_corner 4
    set_wall 1 on
    set_wall 2 on
    set_wall 3 on
    set_wall 4 on
    finalize_space 217 room
    """
    model, _ = replay_script(script, 600, 400)
    from simkit.georef import GeoAnchor, georegister

    anchors = []
    e0, n0, scale = 587000.0, 4140000.0, 0.1
    for c in model.corners:
        lat, lon = utm_to_wgs84(UtmCoord(10, "N", e0 + c.x * scale, n0 + (400 - c.y) * scale))
        anchors.append(GeoAnchor(c.id, lat, lon))
    return model, georegister(model, anchors)


class TestExport:
    def test_single_room_feature(self):
        model, geo = single_room_geo()
        doc = export_feature_collection(model, geo)
        assert validate_document(doc) == []
        assert len(doc["features"]) == 1
        f = doc["features"][0]
        ring = f["geometry"]["coordinates"][0]
        assert len(ring) == 5
        assert ring[0] == ring[-1]
        props = f["properties"]
        assert props["name"] == "217"
        assert props["height"] == 2.5
        assert props["base_height"] == 0.0

    def test_four_rooms_valid_and_countlaw(self, four_rooms_model, four_rooms_geo):
        doc = export_feature_collection(four_rooms_model, four_rooms_geo)
        assert validate_document(doc) == []
        assert len(doc["features"]) == 4

    def test_unregistered_model(self, four_rooms_model):
        with pytest.raises(UnregisteredModel):
            export_feature_collection(four_rooms_model, None)

    def test_missing_geo_corner(self, four_rooms_model, four_rooms_geo):
        del four_rooms_geo.corners[1]
        with pytest.raises(MissingGeoCorner):
            export_feature_collection(four_rooms_model, four_rooms_geo)

    def test_empty_model_valid(self):
        from simkit.georef.homography import Homography
        from simkit.georef.register import GeoTable
        import numpy as np

        from simkit.tracing import FloorModel

        geo = GeoTable({}, {}, 10, "N", Homography(np.eye(3)))
        doc = export_feature_collection(FloorModel(100, 100), geo)
        assert doc == {"type": "FeatureCollection", "features": []}
        assert validate_document(doc) == []

    def test_staircase_three_features_increasing_green(self, four_rooms_model, four_rooms_geo):
        four_rooms_model.spaces[1].space_type = 3
        style = StyleConfig()
        doc = export_feature_collection(four_rooms_model, four_rooms_geo, style)
        assert validate_document(doc) == []
        assert len(doc["features"]) == 4 + 2  # one space became three features
        steps = [f for f in doc["features"] if f["properties"].get("step")]
        assert len(steps) == 3
        heights = [f["properties"]["height"] for f in steps]
        assert heights == sorted(heights) and len(set(heights)) == 3
        assert all(f["properties"]["color"] == style.staircase_color for f in steps)

    def test_elevator_blue(self, four_rooms_model, four_rooms_geo):
        four_rooms_model.spaces[2].space_type = 4
        style = StyleConfig()
        doc = export_feature_collection(four_rooms_model, four_rooms_geo, style)
        f = [x for x in doc["features"] if x["properties"]["name"] == "103"][0]
        assert f["properties"]["color"] == style.elevator_color

    def test_entrance_and_open_edge_metadata(self, four_rooms_model, four_rooms_geo):
        doc = export_feature_collection(four_rooms_model, four_rooms_geo)
        f101 = [x for x in doc["features"] if x["properties"]["name"] == "101"][0]
        assert len(f101["properties"]["entrances"]) == 1
        ent = f101["properties"]["entrances"][0]
        assert ent["id"] == "e1" and len(ent["points"]) == 2
        assert f101["properties"]["open_edges"] == []

    def test_deterministic_bytes(self, four_rooms_model, four_rooms_geo):
        doc1 = export_feature_collection(four_rooms_model, four_rooms_geo)
        doc2 = export_feature_collection(four_rooms_model, four_rooms_geo)
        assert dumps_geojson(doc1) == dumps_geojson(doc2)

    def test_coordinates_round_trip_through_utm(self, four_rooms_model, four_rooms_geo):
        doc = export_feature_collection(four_rooms_model, four_rooms_geo)
        for f in doc["features"]:
            for lon, lat in f["geometry"]["coordinates"][0]:
                u = wgs84_to_utm(lat, lon)
                lat2, lon2 = utm_to_wgs84(u)
                assert abs(lat2 - lat) < 1e-9 and abs(lon2 - lon) < 1e-9


class TestStaircaseSteps:
    def test_3x9_rectangle_three_square_strips(self):
        rect = [(0, 0), (9, 0), (9, 3), (0, 3)]
        strips, heights, fallback = staircase_steps(rect, StyleConfig())
        assert not fallback
        assert len(strips) == 3
        h = StyleConfig().room_height_m
        assert heights == pytest.approx([h / 3, 2 * h / 3, h])
        for k, strip in enumerate(strips):
            xs = sorted({round(p[0], 9) for p in strip})
            ys = sorted({round(p[1], 9) for p in strip})
            assert xs == pytest.approx([3 * k, 3 * (k + 1)])
            assert ys == pytest.approx([0, 3])

    def test_square_tie_splits_along_x(self):
        sq = [(0, 0), (6, 0), (6, 6), (0, 6)]
        strips, _h, fallback = staircase_steps(sq, StyleConfig())
        assert not fallback
        xs0 = sorted({round(p[0], 9) for p in strips[0]})
        assert xs0 == pytest.approx([0, 2])

    def test_pentagon_fallback(self):
        pent = [(0, 0), (4, 0), (5, 2), (2, 4), (0, 2)]
        strips, heights, fallback = staircase_steps(pent, StyleConfig())
        assert fallback
        assert len(strips) == 1
        assert heights == [StyleConfig().room_height_m]

    def test_vertical_rectangle_splits_along_y(self):
        rect = [(0, 0), (3, 0), (3, 9), (0, 9)]
        strips, _h, fallback = staircase_steps(rect, StyleConfig())
        assert not fallback
        ys0 = sorted({round(p[1], 9) for p in strips[0]})
        assert ys0 == pytest.approx([0, 3])


class _Box:
    def __init__(self, name, footprint_px, height_m, min_y_m=0.0, color=None):
        self.name = name
        self.footprint_px = footprint_px
        self.height_m = height_m
        self.min_y_m = min_y_m
        self.color = color


class TestObjects:
    def test_table_feature(self, four_rooms_geo):
        box = _Box("table", [(150, 150), (160, 150), (160, 160), (150, 160)], 0.75)
        f = object_to_feature(box, four_rooms_geo)
        assert f["properties"]["height"] == 0.75
        assert f["properties"]["base_height"] == 0.0
        assert f["properties"]["name"] == "table"
        ring = f["geometry"]["coordinates"][0]
        assert len(ring) == 5 and ring[0] == ring[-1]

    def test_two_objects_appended(self, four_rooms_model, four_rooms_geo):
        doc = export_feature_collection(four_rooms_model, four_rooms_geo)
        objs = [
            object_to_feature(_Box("table", [(150, 150), (160, 150), (160, 160), (150, 160)], 0.75), four_rooms_geo),
            object_to_feature(_Box("couch", [(350, 150), (380, 150), (380, 170), (350, 170)], 0.9), four_rooms_geo),
        ]
        merged, replaced = merge_object_features(doc, objs)
        assert replaced == []
        assert len(merged["features"]) == 6
        assert validate_document(merged) == []

    def test_replace_by_name(self, four_rooms_model, four_rooms_geo):
        doc = export_feature_collection(four_rooms_model, four_rooms_geo)
        b1 = object_to_feature(_Box("table", [(150, 150), (160, 150), (160, 160), (150, 160)], 0.75), four_rooms_geo)
        doc, _ = merge_object_features(doc, [b1])
        b2 = object_to_feature(_Box("table", [(150, 150), (170, 150), (170, 160), (150, 160)], 0.80), four_rooms_geo)
        merged, replaced = merge_object_features(doc, [b2])
        assert replaced == ["table"]
        tables = [f for f in merged["features"] if f["properties"]["name"] == "table"]
        assert len(tables) == 1
        assert tables[0]["properties"]["height"] == 0.8

    def test_feature_count_law(self, four_rooms_model, four_rooms_geo):
        four_rooms_model.spaces[0].space_type = 3  # one staircase
        doc = export_feature_collection(four_rooms_model, four_rooms_geo)
        objs = [
            object_to_feature(_Box(f"obj{i}", [(150 + i, 150), (160 + i, 150), (160 + i, 160), (150 + i, 160)], 0.5), four_rooms_geo)
            for i in range(3)
        ]
        merged, _ = merge_object_features(doc, objs)
        # 3 non-staircase spaces + 3*1 staircase + 3 objects
        assert len(merged["features"]) == 3 + 3 + 3


class TestStyleConfig:
    def test_fraction_validation(self):
        with pytest.raises(InvariantViolation):
            StyleConfig(staircase_step_fractions=(0.5, 0.4, 1.0))
        with pytest.raises(InvariantViolation):
            StyleConfig(staircase_step_fractions=(0.3, 0.6, 0.9))

    def test_from_json(self):
        cfg = StyleConfig.from_json(json.dumps({"room_height_m": 3.0, "elevator_color": "#0000FF"}))
        assert cfg.room_height_m == 3.0
        assert cfg.elevator_color == "#0000FF"
