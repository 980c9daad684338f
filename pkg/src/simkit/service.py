"""HTTP facade over the tracing and map-population engines.

Each project lives in its own directory; the append-only op log is the
source of truth for the floor model (the in-memory model is always the
replay of the log), so a restart loses nothing. Write batches carry the
version they were based on and are rejected with a conflict when stale.
All endpoints sit under /v1/.
"""

from __future__ import annotations

import io
import json
import threading
import uuid
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Request, Response, UploadFile
from fastapi.responses import JSONResponse

from .errors import InvariantViolation, SimkitError, UnregisteredModel
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
    SegmentationParams,
    WallFitParams,
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
from .mesh.registration import RegistrationTransform
from .mesh.walls import Line2D, WallQuad
from .simio import write_sim
from .tracing.script import replay_script


class VersionConflict(SimkitError):
    code = "version_conflict"


class ProjectStore:
    """Disk-backed project registry with per-project write locks."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def lock(self, pid: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(pid, threading.Lock())

    def dir(self, pid: str) -> Path:
        d = self.root / pid
        if not d.is_dir():
            raise HTTPException(404, detail={"error": "unknown_project", "message": pid})
        return d

    def create(self, width: int, height: int) -> str:
        pid = uuid.uuid4().hex[:12]
        d = self.root / pid
        d.mkdir()
        (d / "mesh").mkdir()
        (d / "meta.json").write_text(json.dumps({"width": width, "height": height}))
        (d / "ops.log").write_text("")
        return pid

    def meta(self, pid: str) -> dict:
        return json.loads((self.dir(pid) / "meta.json").read_text())

    def ops(self, pid: str) -> list[str]:
        return (self.dir(pid) / "ops.log").read_text().splitlines()

    def version(self, pid: str) -> int:
        return len(self.ops(pid))

    def model(self, pid: str):
        meta = self.meta(pid)
        ops = self.ops(pid)
        model, warnings = replay_script("\n".join(ops), meta["width"], meta["height"])
        return model, warnings


def _state_payload(model, version: int, warnings: list[str]) -> dict:
    return {
        "version": version,
        "warnings": warnings,
        "lines": [
            {
                "id": ln.id, "kind": ln.kind, "offset": ln.offset,
                "angle_deg": ln.angle_deg, "anchor": ln.anchor, "ghost": ln.ghost,
            }
            for ln in model.lines
        ],
        "corners": [{"id": c.id, "x": c.x, "y": c.y} for c in model.corners],
        "entrance_corners": [
            {"id": c.id, "x": c.x, "y": c.y} for c in model.entrance_corners
        ],
        "spaces": [
            {
                "id": sp.id,
                "name": sp.name,
                "space_type": int(sp.space_type),
                "corners": list(sp.corners),
                "wall_flags": [bool(f) for f in sp.wall_flags],
                "entrances": [
                    {
                        "id": e.id,
                        "wall_index": e.wall_index,
                        "endpoints": list(e.endpoints),
                    }
                    for e in sp.entrances
                ],
            }
            for sp in model.spaces
        ],
    }


def _geo_for(store: ProjectStore, pid: str, model):
    anchors_path = store.dir(pid) / "anchors.txt"
    if not anchors_path.exists():
        raise UnregisteredModel("no anchors posted for this project")
    return georegister(model, load_anchors(anchors_path.read_text()))


def _style_for(store: ProjectStore, pid: str) -> StyleConfig:
    style_path = store.dir(pid) / "style.json"
    if style_path.exists():
        return StyleConfig.from_json(style_path.read_text())
    return StyleConfig()


def _load_stage_mesh(path: Path):
    if not path.exists():
        raise InvariantViolation(f"missing stage artifact {path.name}; run prior stages first")
    mesh, _ = load_mesh(path.read_bytes())
    return mesh


def _run_stage(store: ProjectStore, pid: str, name: str, params: dict) -> dict:
    d = store.dir(pid) / "mesh"
    if name == "reorient":
        mesh = _load_stage_mesh(d / "raw.ply")
        out, theta = reorient(mesh, bin_width_deg=float(params.get("bin_width", 1.0)))
        (d / "reoriented.ply").write_bytes(save_mesh(out))
        return {"theta_deg": theta}
    if name == "fitwalls":
        mesh = _load_stage_mesh(d / "reoriented.ply")
        quad = fit_wall_lines(mesh, WallFitParams(
            slab_fraction=float(params.get("slab", 0.10)),
            inlier_threshold_m=float(params.get("threshold", 0.02)),
            iterations=int(params.get("iterations", 500)),
            seed=int(params.get("seed", 0)),
            min_points=int(params.get("min_points", 20)),
        ))
        payload = {
            "lines": {
                side: {"point": list(line.point), "direction": list(line.direction)}
                for side, line in quad.lines.items()
            },
            "corners": [list(map(float, c)) for c in quad.corners],
        }
        (d / "quad.json").write_text(json.dumps(payload))
        return payload
    if name == "rectify":
        mesh = _load_stage_mesh(d / "reoriented.ply")
        quad_path = d / "quad.json"
        if not quad_path.exists():
            raise InvariantViolation("missing quad.json; run fitwalls first")
        raw = json.loads(quad_path.read_text())
        quad = WallQuad(
            {
                side: Line2D(tuple(v["point"]), tuple(v["direction"]))
                for side, v in raw["lines"].items()
            },
            np.array(raw["corners"], dtype=float),
        )
        out, _ = rectify(mesh, quad)
        (d / "rectified.ply").write_bytes(save_mesh(out))
        return {"ok": True}
    if name == "register":
        mesh = _load_stage_mesh(d / "rectified.ply")
        model, _ = store.model(pid)
        space_id = params.get("space")
        if space_id:
            polygon = None
            for sp in model.spaces:
                if sp.id == space_id:
                    polygon = [
                        (model.corner_by_id(cid).x, model.corner_by_id(cid).y)
                        for cid in sp.corners
                    ]
            if polygon is None:
                raise InvariantViolation(f"no space {space_id!r}")
        elif "room" in params:
            x0, y0, x1, y1 = (float(v) for v in params["room"])
            polygon = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        else:
            raise InvariantViolation("register needs 'space' or 'room'")
        rotation = params.get("rotation")
        transform, warnings = register_to_space(
            mesh, polygon, None if rotation is None else int(rotation)
        )
        payload = {
            "rotation_deg": transform.rotation_deg,
            "scale_x": transform.scale_x,
            "scale_z": transform.scale_z,
            "offset": list(transform.offset),
            "mesh_min": list(transform.mesh_min),
        }
        (d / "transform.json").write_text(json.dumps(payload))
        return {**payload, "warnings": warnings}
    if name == "superpixel":
        mesh = _load_stage_mesh(d / "rectified.ply")
        labels = superpixelate(mesh, SegmentationParams(
            k=float(params.get("k", 0.05)),
            min_size=int(params.get("min_size", 50)),
        ))
        (d / "labels.json").write_text(json.dumps({"labels": [int(v) for v in labels]}))
        img, legend = topdown_raster(mesh, labels)
        buf = io.BytesIO()
        img.save(buf, format="PNG")
        (d / "topdown.png").write_bytes(buf.getvalue())
        (d / "legend.json").write_text(json.dumps(legend, sort_keys=True))
        return {"n_segments": int(labels.max()) + 1}
    if name == "boxes":
        mesh = _load_stage_mesh(d / "rectified.ply")
        labels_path = d / "labels.json"
        transform_path = d / "transform.json"
        assignments_path = store.dir(pid) / "assignments.json"
        for p, hint in ((labels_path, "superpixel"), (transform_path, "register")):
            if not p.exists():
                raise InvariantViolation(f"missing {p.name}; run {hint} first")
        if not assignments_path.exists():
            raise InvariantViolation("no assignments posted")
        labels = np.array(json.loads(labels_path.read_text())["labels"], dtype=np.int64)
        raw = json.loads(transform_path.read_text())
        transform = RegistrationTransform(
            rotation_deg=int(raw["rotation_deg"]),
            scale_x=float(raw["scale_x"]),
            scale_z=float(raw["scale_z"]),
            offset=tuple(raw["offset"]),
            mesh_min=tuple(raw["mesh_min"]),
        )
        assignments = parse_assignments(assignments_path.read_text())
        boxes = object_boxes(assign_objects(mesh, labels, assignments), transform)
        payload = [
            {
                "name": b.name,
                "min_corner": [float(v) for v in b.min_corner],
                "max_corner": [float(v) for v in b.max_corner],
                "footprint_px": [list(p) for p in b.footprint_px],
                "height_m": b.height_m,
                "min_y_m": b.min_y_m,
                "superpixels": list(b.superpixels),
                "color": b.color,
            }
            for b in boxes
        ]
        (d / "boxes.json").write_text(json.dumps(payload))
        return {"boxes": payload}
    raise InvariantViolation(f"unknown stage {name!r}")


def create_app(root_dir) -> FastAPI:
    app = FastAPI(title="simkit service")
    store = ProjectStore(Path(root_dir))
    app.state.store = store

    @app.exception_handler(SimkitError)
    async def _simkit_error(request: Request, exc: SimkitError):
        status = 409 if isinstance(exc, VersionConflict) else 422
        return JSONResponse(status_code=status, content=exc.payload())

    @app.post("/v1/projects")
    async def create_project(body: dict | None = None):
        body = body or {}
        pid = store.create(int(body.get("width", 2000)), int(body.get("height", 2000)))
        return {"id": pid, "version": 0}

    @app.post("/v1/projects/{pid}/image")
    async def upload_image(pid: str, file: UploadFile):
        (store.dir(pid) / "image.bin").write_bytes(await file.read())
        return {"ok": True}

    @app.post("/v1/projects/{pid}/anchors")
    async def post_anchors(pid: str, request: Request):
        text = (await request.body()).decode("utf-8")
        load_anchors(text)  # validate before persisting
        (store.dir(pid) / "anchors.txt").write_text(text)
        return {"ok": True}

    @app.post("/v1/projects/{pid}/ops")
    async def post_ops(pid: str, body: dict):
        base = int(body.get("base_version", -1))
        ops = body.get("ops", [])
        if not isinstance(ops, list) or not all(isinstance(o, str) for o in ops):
            raise InvariantViolation("ops must be a list of strings")
        with store.lock(pid):
            current = store.ops(pid)
            if base != len(current):
                raise VersionConflict(
                    f"batch based on version {base}, current is {len(current)}"
                )
            meta = store.meta(pid)
            candidate = current + [o.strip() for o in ops if o.strip()]
            # all-or-nothing: replay the whole prospective log before persisting
            model, warnings = replay_script(
                "\n".join(candidate), meta["width"], meta["height"]
            )
            (store.dir(pid) / "ops.log").write_text(
                "".join(op + "\n" for op in candidate)
            )
        return _state_payload(model, len(candidate), warnings)

    @app.get("/v1/projects/{pid}/state")
    async def get_state(pid: str):
        model, warnings = store.model(pid)
        return _state_payload(model, store.version(pid), warnings)

    @app.get("/v1/projects/{pid}/export/sim")
    async def export_sim(pid: str):
        model, _ = store.model(pid)
        return Response(write_sim(model), media_type="application/octet-stream")

    @app.get("/v1/projects/{pid}/export/geojson")
    async def export_geojson(pid: str):
        model, _ = store.model(pid)
        doc = export_feature_collection(
            model, _geo_for(store, pid, model), _style_for(store, pid)
        )
        problems = validate_document(doc)
        if problems:
            raise InvariantViolation("; ".join(problems))
        return Response(dumps_geojson(doc), media_type="application/geo+json")

    @app.post("/v1/projects/{pid}/mesh")
    async def upload_mesh(pid: str, file: UploadFile, swap_yz: bool = False):
        data = await file.read()
        mesh, report = load_mesh(data, swap_yz=swap_yz)
        (store.dir(pid) / "mesh" / "raw.ply").write_bytes(save_mesh(mesh))
        return report

    @app.post("/v1/projects/{pid}/stages/{name}")
    async def run_stage(pid: str, name: str, params: dict | None = None):
        with store.lock(pid):
            return _run_stage(store, pid, name, params or {})

    @app.get("/v1/projects/{pid}/superpixels/topdown")
    async def get_topdown(pid: str):
        path = store.dir(pid) / "mesh" / "topdown.png"
        if not path.exists():
            raise InvariantViolation("run the superpixel stage first")
        return Response(path.read_bytes(), media_type="image/png")

    @app.get("/v1/projects/{pid}/superpixels/labels")
    async def get_labels(pid: str):
        path = store.dir(pid) / "mesh" / "labels.json"
        if not path.exists():
            raise InvariantViolation("run the superpixel stage first")
        return json.loads(path.read_text())

    @app.get("/v1/projects/{pid}/superpixels/legend")
    async def get_legend(pid: str):
        path = store.dir(pid) / "mesh" / "legend.json"
        if not path.exists():
            raise InvariantViolation("run the superpixel stage first")
        return json.loads(path.read_text())

    @app.post("/v1/projects/{pid}/assignments")
    async def post_assignments(pid: str, request: Request):
        text = (await request.body()).decode("utf-8")
        parse_assignments(text)  # validate before persisting
        (store.dir(pid) / "assignments.json").write_text(text)
        return {"ok": True}

    @app.get("/v1/projects/{pid}/export/populated")
    async def export_populated(pid: str):
        model, _ = store.model(pid)
        geo = _geo_for(store, pid, model)
        style = _style_for(store, pid)
        doc = export_feature_collection(model, geo, style)
        boxes_path = store.dir(pid) / "mesh" / "boxes.json"
        if boxes_path.exists():
            from .cli import _box_from_json

            boxes = [_box_from_json(raw) for raw in json.loads(boxes_path.read_text())]
            features = [object_to_feature(b, geo, style) for b in boxes]
            doc, _replaced = merge_object_features(doc, features)
        problems = validate_document(doc)
        if problems:
            raise InvariantViolation("; ".join(problems))
        return Response(dumps_geojson(doc), media_type="application/geo+json")

    return app
