"""Map population pipeline: room scans to floor-plan object cuboids."""

from .mesh import TriangleMesh, face_adjacency
from .ply import load_mesh, save_mesh
from .orientation import AngleHistogram, normal_histogram, reorient, rotate_y
from .walls import Line2D, WallFitParams, WallQuad, fit_wall_lines, ransac_line
from .rectify import best_fit_rectangle, rectify
from .registration import (
    RegistrationTransform,
    register_to_space,
    suggest_rotation,
)
from .segmentation import (
    HAVE_COMPILED_KERNEL,
    SegmentationParams,
    edge_weights,
    label_summary,
    superpixelate,
)
from .objects import (
    ObjectAssignment,
    ObjectBox,
    assign_objects,
    object_boxes,
    parse_assignments,
)
from .raster import label_color, save_raster, topdown_raster

__all__ = [
    "TriangleMesh",
    "face_adjacency",
    "load_mesh",
    "save_mesh",
    "AngleHistogram",
    "normal_histogram",
    "reorient",
    "rotate_y",
    "Line2D",
    "WallFitParams",
    "WallQuad",
    "fit_wall_lines",
    "ransac_line",
    "best_fit_rectangle",
    "rectify",
    "RegistrationTransform",
    "register_to_space",
    "suggest_rotation",
    "HAVE_COMPILED_KERNEL",
    "SegmentationParams",
    "edge_weights",
    "label_summary",
    "superpixelate",
    "ObjectAssignment",
    "ObjectBox",
    "assign_objects",
    "object_boxes",
    "parse_assignments",
    "label_color",
    "save_raster",
    "topdown_raster",
]
