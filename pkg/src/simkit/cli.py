"""Command-line front end for the whole pipeline.

Every stage reads and writes plain files so runs are reproducible and
diffable; all randomness is controlled by explicit seed flags.
"""

from __future__ import annotations

import functools
import json
import sys

import click
import numpy as np

from .errors import InvariantViolation, SimkitError
from .geojson_export import (
    StyleConfig,
    dumps_geojson,
    export_feature_collection,
    merge_object_features,
    object_to_feature,
    validate_document,
)
from .georef.register import georegister, load_anchors
from .mesh import (
    ObjectBox,
    SegmentationParams,
    WallFitParams,
    WallQuad,
    assign_objects,
    fit_wall_lines,
    load_mesh,
    object_boxes,
    parse_assignments,
    rectify,
    register_to_space,
    reorient,
    save_mesh,
    superpixelate,
    topdown_raster,
)
from .mesh.raster import save_raster
from .mesh.registration import RegistrationTransform
from .mesh.walls import Line2D
from .simio import parse_sim, write_sim
from .tracing.script import replay_script


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SimkitError as exc:
            click.echo(f"error [{exc.code}]: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _load_mesh_file(path: str, swap_yz: bool = False):
    with open(path, "rb") as fh:
        return load_mesh(fh.read(), swap_yz=swap_yz)


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


@click.group()
def main():
    """Floor-plan tracing, geo-registration, and map population toolkit."""


# --- tracing / conversion --------------------------------------------------

@main.command()
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.option("--image-width", default=2000, show_default=True)
@click.option("--image-height", default=2000, show_default=True)
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_handle_errors
def trace(script, image_width, image_height, output):
    """Replay an op script and write the traced model as a .sim file."""
    model, warnings = replay_script(_read_text(script), image_width, image_height)
    for w in warnings:
        click.echo(f"warning: {w}", err=True)
    with open(output, "wb") as fh:
        fh.write(write_sim(model))
    click.echo(
        f"{len(model.lines)} lines, {len(model.corners)} corners, "
        f"{len(model.spaces)} spaces, "
        f"{sum(len(s.entrances) for s in model.spaces)} entrances -> {output}"
    )


@main.command()
@click.argument("sim_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("anchors", type=click.Path(exists=True, dir_okay=False))
@click.option("--style", "style_path", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_handle_errors
def convert(sim_file, anchors, style_path, output):
    """Geo-register a .sim model and export a GeoJSON FeatureCollection."""
    with open(sim_file, "rb") as fh:
        model = parse_sim(fh.read())
    geo = georegister(model, load_anchors(_read_text(anchors)))
    style = StyleConfig.from_json(_read_text(style_path)) if style_path else StyleConfig()
    doc = export_feature_collection(model, geo, style)
    problems = validate_document(doc)
    if problems:
        raise InvariantViolation("; ".join(problems))
    with open(output, "wb") as fh:
        fh.write(dumps_geojson(doc))
    click.echo(f"{len(doc['features'])} features -> {output}")


# --- mesh stages -----------------------------------------------------------

@main.group()
def mesh():
    """Map-population stages; each reads the previous stage's artifact."""


@mesh.command("reorient")
@click.argument("ply", type=click.Path(exists=True, dir_okay=False))
@click.option("--swap-yz", is_flag=True, help="input scan is Z-up")
@click.option("--bin-width", default=1.0, show_default=True)
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_handle_errors
def mesh_reorient(ply, swap_yz, bin_width, output):
    """Axis-align the dominant wall direction, long side along Z."""
    loaded, report = _load_mesh_file(ply, swap_yz=swap_yz)
    if report["dropped_degenerate_faces"]:
        click.echo(
            f"warning: dropped {report['dropped_degenerate_faces']} degenerate faces",
            err=True,
        )
    out, theta = reorient(loaded, bin_width_deg=bin_width)
    with open(output, "wb") as fh:
        fh.write(save_mesh(out))
    click.echo(f"theta_deg: {theta:.4f}")


def _quad_to_json(quad: WallQuad) -> dict:
    return {
        "lines": {
            side: {"point": list(line.point), "direction": list(line.direction)}
            for side, line in quad.lines.items()
        },
        "corners": [list(map(float, c)) for c in quad.corners],
    }


def _quad_from_json(raw: dict) -> WallQuad:
    lines = {
        side: Line2D(tuple(v["point"]), tuple(v["direction"]))
        for side, v in raw["lines"].items()
    }
    return WallQuad(lines, np.array(raw["corners"], dtype=float))


@mesh.command("fitwalls")
@click.argument("ply", type=click.Path(exists=True, dir_okay=False))
@click.option("--slab", default=0.10, show_default=True, help="outer percentile slab fraction")
@click.option("--threshold", default=0.02, show_default=True, help="inlier threshold (m)")
@click.option("--iterations", default=500, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--min-points", default=20, show_default=True)
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_handle_errors
def mesh_fitwalls(ply, slab, threshold, iterations, seed, min_points, output):
    """Fit the four wall lines and write the quadrilateral as JSON."""
    loaded, _ = _load_mesh_file(ply)
    params = WallFitParams(
        slab_fraction=slab,
        inlier_threshold_m=threshold,
        iterations=iterations,
        seed=seed,
        min_points=min_points,
    )
    quad = fit_wall_lines(loaded, params)
    _write_json(output, _quad_to_json(quad))
    click.echo(f"quad corners: {[list(np.round(c, 4)) for c in quad.corners]}")


@mesh.command("rectify")
@click.argument("ply", type=click.Path(exists=True, dir_okay=False))
@click.argument("quad_json", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_handle_errors
def mesh_rectify(ply, quad_json, output):
    """Warp the mesh so the wall quad becomes an axis-parallel rectangle."""
    loaded, _ = _load_mesh_file(ply)
    out, _ = rectify(loaded, _quad_from_json(_read_json(quad_json)))
    with open(output, "wb") as fh:
        fh.write(save_mesh(out))
    click.echo(f"rectified -> {output}")


def _space_ring_px(model, space_id: str):
    for sp in model.spaces:
        if sp.id == space_id:
            return [
                (model.corner_by_id(cid).x, model.corner_by_id(cid).y)
                for cid in sp.corners
            ]
    raise InvariantViolation(f"no space {space_id!r} in model")


@mesh.command("register")
@click.argument("ply", type=click.Path(exists=True, dir_okay=False))
@click.option("--sim", "sim_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--space", "space_id", help="space id in the .sim model, e.g. s1")
@click.option("--room", help="explicit pixel bbox: X0,Y0,X1,Y1")
@click.option("--rotation", type=click.Choice(["0", "90", "180", "270"]))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_handle_errors
def mesh_register(ply, sim_path, space_id, room, rotation, output):
    """Map the rectified mesh onto a floor-plan room."""
    loaded, _ = _load_mesh_file(ply)
    if room:
        x0, y0, x1, y1 = (float(v) for v in room.split(","))
        polygon = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    elif sim_path and space_id:
        with open(sim_path, "rb") as fh:
            polygon = _space_ring_px(parse_sim(fh.read()), space_id)
    else:
        raise InvariantViolation("provide either --room or --sim with --space")
    transform, warnings = register_to_space(
        loaded, polygon, None if rotation is None else int(rotation)
    )
    for w in warnings:
        click.echo(f"warning: {w}", err=True)
    _write_json(output, {
        "rotation_deg": transform.rotation_deg,
        "scale_x": transform.scale_x,
        "scale_z": transform.scale_z,
        "offset": list(transform.offset),
        "mesh_min": list(transform.mesh_min),
    })
    click.echo(
        f"rotation {transform.rotation_deg} deg, "
        f"scales ({transform.scale_x:.4f}, {transform.scale_z:.4f}) px/m -> {output}"
    )


def _transform_from_json(raw: dict) -> RegistrationTransform:
    return RegistrationTransform(
        rotation_deg=int(raw["rotation_deg"]),
        scale_x=float(raw["scale_x"]),
        scale_z=float(raw["scale_z"]),
        offset=tuple(raw["offset"]),
        mesh_min=tuple(raw["mesh_min"]),
    )


@mesh.command("superpixel")
@click.argument("ply", type=click.Path(exists=True, dir_okay=False))
@click.option("--k", default=0.05, show_default=True)
@click.option("--min-size", default=50, show_default=True)
@click.option("--raster", "raster_path", type=click.Path(dir_okay=False))
@click.option("--legend", "legend_path", type=click.Path(dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_handle_errors
def mesh_superpixel(ply, k, min_size, raster_path, legend_path, output):
    """Segment faces into super-pixels; write the per-face label table."""
    loaded, _ = _load_mesh_file(ply)
    labels = superpixelate(loaded, SegmentationParams(k=k, min_size=min_size))
    _write_json(output, {
        "k": k,
        "min_size": min_size,
        "n_segments": int(labels.max()) + 1,
        "labels": [int(v) for v in labels],
    })
    if raster_path:
        img, legend = topdown_raster(loaded, labels)
        save_raster(raster_path, legend_path or raster_path + ".legend.json", img, legend)
    click.echo(f"{int(labels.max()) + 1} super-pixels over {loaded.n_faces} faces -> {output}")


def _box_to_json(box: ObjectBox) -> dict:
    return {
        "name": box.name,
        "min_corner": [float(v) for v in box.min_corner],
        "max_corner": [float(v) for v in box.max_corner],
        "footprint_px": [list(p) for p in box.footprint_px],
        "height_m": box.height_m,
        "min_y_m": box.min_y_m,
        "superpixels": list(box.superpixels),
        "color": box.color,
    }


def _box_from_json(raw: dict) -> ObjectBox:
    return ObjectBox(
        name=raw["name"],
        min_corner=np.array(raw["min_corner"]),
        max_corner=np.array(raw["max_corner"]),
        footprint_px=[tuple(p) for p in raw["footprint_px"]],
        height_m=float(raw["height_m"]),
        min_y_m=float(raw["min_y_m"]),
        superpixels=tuple(raw.get("superpixels", ())),
        color=raw.get("color"),
    )


@mesh.command("boxes")
@click.argument("ply", type=click.Path(exists=True, dir_okay=False))
@click.argument("labels_json", type=click.Path(exists=True, dir_okay=False))
@click.argument("assignments_json", type=click.Path(exists=True, dir_okay=False))
@click.argument("transform_json", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_handle_errors
def mesh_boxes(ply, labels_json, assignments_json, transform_json, output):
    """Cut assigned objects out of the mesh and box them in plan pixels."""
    loaded, _ = _load_mesh_file(ply)
    labels = np.array(_read_json(labels_json)["labels"], dtype=np.int64)
    assignments = parse_assignments(_read_text(assignments_json))
    transform = _transform_from_json(_read_json(transform_json))
    objects = assign_objects(loaded, labels, assignments)
    boxes = object_boxes(objects, transform)
    _write_json(output, [_box_to_json(b) for b in boxes])
    click.echo(f"{len(boxes)} object boxes -> {output}")


# --- population ------------------------------------------------------------

@main.command()
@click.argument("geojson", type=click.Path(exists=True, dir_okay=False))
@click.argument("boxes_json", type=click.Path(exists=True, dir_okay=False))
@click.option("--sim", "sim_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--anchors", "anchors_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--style", "style_path", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_handle_errors
def populate(geojson, boxes_json, sim_path, anchors_path, style_path, output):
    """Merge object cuboid features into an exported map.

    Re-running with the same boxes is idempotent: objects replace any
    existing feature with the same name.
    """
    with open(sim_path, "rb") as fh:
        model = parse_sim(fh.read())
    geo = georegister(model, load_anchors(_read_text(anchors_path)))
    style = StyleConfig.from_json(_read_text(style_path)) if style_path else StyleConfig()
    doc = _read_json(geojson)
    boxes = [_box_from_json(raw) for raw in _read_json(boxes_json)]
    features = [object_to_feature(b, geo, style) for b in boxes]
    merged, replaced = merge_object_features(doc, features)
    for name in replaced:
        click.echo(f"replaced object: {name}", err=True)
    problems = validate_document(merged)
    if problems:
        raise InvariantViolation("; ".join(problems))
    with open(output, "wb") as fh:
        fh.write(dumps_geojson(merged))
    click.echo(f"{len(merged['features'])} features -> {output}")


if __name__ == "__main__":
    main()
