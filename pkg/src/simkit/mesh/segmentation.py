"""Super-pixelation: graph-based segmentation of mesh faces.

Faces are graph nodes; faces sharing a mesh edge are connected with
weight 1 - dot(unit normals), so coplanar neighbors cost 0 and a right-
angle crease costs 1. Components merge greedily in nondecreasing weight
order (ties broken by edge index) under the adaptive threshold
tau(C) = k / |C|; a post-pass absorbs components smaller than min_size.

The inner loop runs in a compiled extension when available, with a
bit-identical pure-Python fallback.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvariantViolation
from . import _segment_py
from .mesh import TriangleMesh, face_adjacency

try:
    from . import _segment_core

    HAVE_COMPILED_KERNEL = True
except ImportError:  # pragma: no cover - build-dependent
    _segment_core = None
    HAVE_COMPILED_KERNEL = False


@dataclass
class SegmentationParams:
    k: float = 0.05
    min_size: int = 50

    def __post_init__(self):
        if self.k <= 0:
            raise InvariantViolation("segmentation k must be positive")
        if self.min_size < 1:
            raise InvariantViolation("min_size must be at least 1")


def _kernel(use_compiled: bool | None):
    if use_compiled is None:
        use_compiled = HAVE_COMPILED_KERNEL
    if use_compiled:
        if not HAVE_COMPILED_KERNEL:
            raise InvariantViolation("compiled segmentation kernel not available")
        return _segment_core.segment_graph
    return _segment_py.segment_graph


def edge_weights(mesh: TriangleMesh) -> tuple[np.ndarray, np.ndarray]:
    """Adjacency pairs and their dissimilarity weights."""
    adjacency = face_adjacency(mesh)
    normals = mesh.face_normals()
    if len(adjacency) == 0:
        return adjacency, np.empty(0)
    dots = np.einsum("ij,ij->i", normals[adjacency[:, 0]], normals[adjacency[:, 1]])
    return adjacency, 1.0 - np.clip(dots, -1.0, 1.0)


def superpixelate(
    mesh: TriangleMesh,
    params: SegmentationParams | None = None,
    use_compiled: bool | None = None,
) -> np.ndarray:
    """Per-face dense integer labels, numbered by smallest face index."""
    params = params or SegmentationParams()
    mesh.require_nonempty()
    adjacency, weights = edge_weights(mesh)
    # stable sort on weight preserves edge-index order among equal weights
    order = np.argsort(weights, kind="stable").astype(np.int64)
    kernel = _kernel(use_compiled)
    roots = kernel(
        mesh.n_faces,
        np.ascontiguousarray(adjacency[:, 0]) if len(adjacency) else np.empty(0, dtype=np.int64),
        np.ascontiguousarray(adjacency[:, 1]) if len(adjacency) else np.empty(0, dtype=np.int64),
        np.ascontiguousarray(weights),
        order,
        float(params.k),
        int(params.min_size),
    )
    return relabel_dense(roots)


def relabel_dense(roots: np.ndarray) -> np.ndarray:
    """Map arbitrary component roots to dense labels 0..n-1 in order of
    each component's smallest face index."""
    labels = np.empty(len(roots), dtype=np.int64)
    mapping: dict[int, int] = {}
    for i, r in enumerate(roots):
        r = int(r)
        if r not in mapping:
            mapping[r] = len(mapping)
        labels[i] = mapping[r]
    return labels


def label_summary(labels: np.ndarray) -> dict[int, int]:
    """Label -> face count."""
    uniq, counts = np.unique(labels, return_counts=True)
    return {int(u): int(c) for u, c in zip(uniq, counts)}
