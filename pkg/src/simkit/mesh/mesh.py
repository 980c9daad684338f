"""Triangle mesh container. Coordinates are meters, Y-up: the ground
plane is X-Z."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyMesh, MalformedPly

DEGENERATE_AREA = 1e-12


@dataclass
class TriangleMesh:
    vertices: np.ndarray  # (n, 3) float64
    faces: np.ndarray  # (m, 3) int64
    labels: np.ndarray | None = None  # (m,) super-pixel label per face

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        if len(self.faces) and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise MalformedPly("face index out of range")
        if not np.all(np.isfinite(self.vertices)):
            raise MalformedPly("non-finite vertex coordinate")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def copy(self) -> "TriangleMesh":
        return TriangleMesh(
            self.vertices.copy(),
            self.faces.copy(),
            None if self.labels is None else self.labels.copy(),
        )

    def face_cross(self) -> np.ndarray:
        v = self.vertices
        f = self.faces
        return np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])

    def face_areas(self) -> np.ndarray:
        return 0.5 * np.linalg.norm(self.face_cross(), axis=1)

    def face_normals(self) -> np.ndarray:
        cross = self.face_cross()
        norms = np.linalg.norm(cross, axis=1)
        norms[norms == 0] = 1.0
        return cross / norms[:, None]

    def clean(self) -> tuple["TriangleMesh", int, int]:
        """Drop zero-area faces and unreferenced vertices.

        Returns (mesh, dropped_faces, pruned_vertices)."""
        areas = self.face_areas()
        keep_faces = areas > DEGENERATE_AREA
        faces = self.faces[keep_faces]
        used = np.zeros(len(self.vertices), dtype=bool)
        used[faces.ravel()] = True
        remap = np.cumsum(used) - 1
        mesh = TriangleMesh(self.vertices[used], remap[faces])
        return mesh, int((~keep_faces).sum()), int((~used).sum())

    def require_nonempty(self) -> None:
        if self.n_faces == 0:
            raise EmptyMesh("mesh has no faces")


def face_adjacency(mesh: TriangleMesh) -> np.ndarray:
    """Pairs of face indices sharing a mesh edge, sorted by (min, max).

    Returns an (e, 2) int array; the row order is the deterministic edge
    indexing used for segmentation tie-breaks."""
    f = mesh.faces
    edge_faces: dict[tuple[int, int], list[int]] = {}
    for fi in range(len(f)):
        a, b, c = f[fi]
        for u, v in ((a, b), (b, c), (c, a)):
            key = (u, v) if u < v else (v, u)
            edge_faces.setdefault(key, []).append(fi)
    pairs = set()
    for flist in edge_faces.values():
        for i in range(len(flist)):
            for j in range(i + 1, len(flist)):
                fa, fb = flist[i], flist[j]
                pairs.add((fa, fb) if fa < fb else (fb, fa))
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    return np.array(sorted(pairs), dtype=np.int64)
