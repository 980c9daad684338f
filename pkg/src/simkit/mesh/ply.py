"""PLY reader/writer (ASCII and binary little endian).

Reads the vertex x/y/z properties and triangular face lists that scan
pipelines emit; everything else (color, confidence...) is skipped. A
`swap_yz` flag converts Z-up scans to the Y-up convention used here.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import MalformedPly, UnsupportedPly
from .mesh import TriangleMesh

_SCALAR = {
    "char": ("b", 1), "int8": ("b", 1),
    "uchar": ("B", 1), "uint8": ("B", 1),
    "short": ("h", 2), "int16": ("h", 2),
    "ushort": ("H", 2), "uint16": ("H", 2),
    "int": ("i", 4), "int32": ("i", 4),
    "uint": ("I", 4), "uint32": ("I", 4),
    "float": ("f", 4), "float32": ("f", 4),
    "double": ("d", 8), "float64": ("d", 8),
}


def _parse_header(data: bytes):
    end = data.find(b"end_header\n")
    if end < 0:
        raise MalformedPly("missing end_header")
    header = data[:end].decode("ascii", errors="replace").splitlines()
    body = data[end + len(b"end_header\n"):]
    if not header or header[0].strip() != "ply":
        raise MalformedPly("missing 'ply' magic")
    fmt = None
    elements = []  # (name, count, [(kind, name, type...)...])
    for line in header[1:]:
        parts = line.split()
        if not parts or parts[0] == "comment":
            continue
        if parts[0] == "format":
            if len(parts) < 2:
                raise MalformedPly("bad format line")
            fmt = parts[1]
        elif parts[0] == "element":
            if len(parts) != 3:
                raise MalformedPly(f"bad element line: {line!r}")
            try:
                elements.append([parts[1], int(parts[2]), []])
            except ValueError:
                raise MalformedPly(f"bad element count in {line!r}") from None
        elif parts[0] == "property":
            if not elements:
                raise MalformedPly("property before any element")
            if parts[1] == "list":
                if len(parts) != 5:
                    raise MalformedPly(f"bad list property: {line!r}")
                elements[-1][2].append(("list", parts[4], parts[2], parts[3]))
            else:
                if len(parts) != 3:
                    raise MalformedPly(f"bad property: {line!r}")
                elements[-1][2].append(("scalar", parts[2], parts[1]))
    if fmt is None:
        raise MalformedPly("no format line")
    if fmt not in ("ascii", "binary_little_endian"):
        raise UnsupportedPly(f"unsupported PLY format {fmt!r}")
    return fmt, elements, body


def _check_types(elements):
    for _name, _count, props in elements:
        for p in props:
            types = p[2:] if p[0] == "list" else p[2:]
            for t in types:
                if t not in _SCALAR:
                    raise UnsupportedPly(f"unsupported property type {t!r}")


def load_mesh(data: bytes, swap_yz: bool = False) -> tuple[TriangleMesh, dict]:
    """Parse PLY bytes into a cleaned TriangleMesh.

    Returns (mesh, report) where report carries the raw/cleaned counts and
    any dropped-face warning."""
    fmt, elements, body = _parse_header(data)
    _check_types(elements)

    vertices = None
    faces = None
    offset = 0
    ascii_lines = body.decode("ascii", errors="replace").splitlines() if fmt == "ascii" else None
    line_no = 0

    for name, count, props in elements:
        want_vertex = name == "vertex"
        want_face = name == "face"
        rows = []
        for _ in range(count):
            if fmt == "ascii":
                if line_no >= len(ascii_lines):
                    raise MalformedPly(f"truncated file in element {name!r} (line {line_no})")
                tokens = ascii_lines[line_no].split()
                line_no += 1
                pos = 0
                row = {}
                try:
                    for p in props:
                        if p[0] == "list":
                            n = int(tokens[pos]); pos += 1
                            row[p[1]] = [float(tokens[pos + i]) for i in range(n)]
                            pos += n
                        else:
                            row[p[1]] = float(tokens[pos]); pos += 1
                except (IndexError, ValueError):
                    raise MalformedPly(f"bad {name} record at line {line_no}") from None
            else:
                row = {}
                for p in props:
                    if p[0] == "list":
                        cfmt, csz = _SCALAR[p[2]]
                        if offset + csz > len(body):
                            raise MalformedPly(f"truncated file at byte {offset}")
                        (n,) = struct.unpack_from("<" + cfmt, body, offset)
                        offset += csz
                        vfmt, vsz = _SCALAR[p[3]]
                        if offset + n * vsz > len(body):
                            raise MalformedPly(f"truncated file at byte {offset}")
                        row[p[1]] = list(struct.unpack_from("<" + str(n) + vfmt, body, offset))
                        offset += n * vsz
                    else:
                        vfmt, vsz = _SCALAR[p[2]]
                        if offset + vsz > len(body):
                            raise MalformedPly(f"truncated file at byte {offset}")
                        (row[p[1]],) = struct.unpack_from("<" + vfmt, body, offset)
                        offset += vsz
            rows.append(row)
        if want_vertex:
            try:
                vertices = np.array([[r["x"], r["y"], r["z"]] for r in rows], dtype=np.float64)
            except KeyError:
                raise UnsupportedPly("vertex element lacks x/y/z properties") from None
        elif want_face:
            out = []
            for r in rows:
                idx = r.get("vertex_indices", r.get("vertex_index"))
                if idx is None:
                    raise UnsupportedPly("face element lacks a vertex index list")
                if len(idx) != 3:
                    raise UnsupportedPly(f"non-triangular face with {len(idx)} vertices")
                out.append([int(v) for v in idx])
            faces = np.array(out, dtype=np.int64) if out else np.empty((0, 3), dtype=np.int64)

    if vertices is None:
        raise UnsupportedPly("no vertex element")
    if faces is None:
        faces = np.empty((0, 3), dtype=np.int64)
    if swap_yz and len(vertices):
        vertices = vertices[:, [0, 2, 1]]

    raw = TriangleMesh(vertices, faces)
    mesh, dropped, pruned = raw.clean()
    report = {
        "raw_vertices": raw.n_vertices,
        "raw_faces": raw.n_faces,
        "vertices": mesh.n_vertices,
        "faces": mesh.n_faces,
        "dropped_degenerate_faces": dropped,
        "pruned_vertices": pruned,
    }
    return mesh, report


def save_mesh(mesh: TriangleMesh) -> bytes:
    """Deterministic ASCII PLY used for staged pipeline artifacts."""
    lines = [
        "ply",
        "format ascii 1.0",
        f"element vertex {mesh.n_vertices}",
        "property double x",
        "property double y",
        "property double z",
        f"element face {mesh.n_faces}",
        "property list uchar int vertex_indices",
        "end_header",
    ]
    for x, y, z in mesh.vertices:
        lines.append(f"{x:.9g} {y:.9g} {z:.9g}")
    for a, b, c in mesh.faces:
        lines.append(f"3 {a} {b} {c}")
    return ("\n".join(lines) + "\n").encode()
