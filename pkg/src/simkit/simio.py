"""Reader/writer for the `.sim` interchange format.

Layout (ASCII, LF line endings):

    sim 1.0
    element wall_corner N
    element entrance_corner M
    element space K
    <N wall-corner lines:      "x y" with 3 decimals>
    <M entrance-corner lines:  "x y" with 3 decimals>
    <K space records>

A space record is one brace-delimited line:

    {id type name n  i1 .. in  f1 .. fn  [eid wall ep1 ep2] ...}

with n 1-based wall-corner indices in clockwise order, n wall flags
(flag j joins corner j to corner j+1, wrapping), and zero or more
entrance quadruples (entrance id, 1-based wall index, two 1-based
indices into the entrance-corner list), sorted by entrance id.

Corner ids in the parsed model are the 1-based ordinals of the corner
lists, so write(parse(doc)) is byte-identical for any document this
module wrote, and parse(write(model)) preserves a traced model whose
corner ids are contiguous (which compute_corners guarantees).
"""

from __future__ import annotations

import re

from .errors import FlagCountMismatch, InvalidModel, InvariantViolation, SimIndexError, SimSyntaxError
from .tracing.model import (
    Corner,
    Entrance,
    EntranceCorner,
    FloorModel,
    Space,
    SpaceType,
    validate_model,
)

MAGIC = "sim 1.0"
_ENTRANCE_ID = re.compile(r"^e\d+$")
_SPACE_ID = re.compile(r"^s\d+$")


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def write_sim(model: FloorModel) -> bytes:
    try:
        validate_model(model)
    except InvariantViolation as e:
        raise InvalidModel(str(e)) from e

    corners = sorted(model.corners, key=lambda c: c.id)
    ecorners = sorted(model.entrance_corners, key=lambda c: c.id)
    corner_ord = {c.id: i + 1 for i, c in enumerate(corners)}
    ecorner_ord = {c.id: i + 1 for i, c in enumerate(ecorners)}

    lines = [
        MAGIC,
        f"element wall_corner {len(corners)}",
        f"element entrance_corner {len(ecorners)}",
        f"element space {len(model.spaces)}",
    ]
    for c in corners:
        lines.append(f"{_fmt(c.x)} {_fmt(c.y)}")
    for c in ecorners:
        lines.append(f"{_fmt(c.x)} {_fmt(c.y)}")
    for sp in model.spaces:
        toks = [sp.id, str(int(sp.space_type)), sp.name, str(len(sp.corners))]
        for cid in sp.corners:
            if cid not in corner_ord:
                raise InvalidModel(f"space {sp.id} references unknown corner {cid}")
            toks.append(str(corner_ord[cid]))
        toks.extend("1" if f else "0" for f in sp.wall_flags)
        for ent in sorted(sp.entrances, key=lambda e: int(e.id[1:])):
            a, b = ent.endpoints
            if a not in ecorner_ord or b not in ecorner_ord:
                raise InvalidModel(f"entrance {ent.id} references unknown entrance corner")
            toks.extend([ent.id, str(ent.wall_index), str(ecorner_ord[a]), str(ecorner_ord[b])])
        lines.append("{" + " ".join(toks) + "}")
    return ("\n".join(lines) + "\n").encode()


def _parse_count(line: str, no: int, element: str) -> int:
    parts = line.split()
    if len(parts) != 3 or parts[0] != "element" or parts[1] != element:
        raise SimSyntaxError(no, f"expected 'element {element} <count>', got {line!r}")
    try:
        n = int(parts[2])
    except ValueError:
        raise SimSyntaxError(no, f"bad count {parts[2]!r}") from None
    if n < 0:
        raise SimSyntaxError(no, f"negative count {n}")
    return n


def _parse_xy(line: str, no: int) -> tuple[float, float]:
    parts = line.split()
    if len(parts) != 2:
        raise SimSyntaxError(no, f"expected 'x y', got {line!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise SimSyntaxError(no, f"bad coordinate in {line!r}") from None


def _parse_space(line: str, no: int, n_corners: int, n_ecorners: int) -> Space:
    line = line.strip()
    if not (line.startswith("{") and line.endswith("}")):
        raise SimSyntaxError(no, "space record must be brace-delimited")
    toks = line[1:-1].split()
    if len(toks) < 4:
        raise SimSyntaxError(no, "space record too short")
    sid, type_tok, name = toks[0], toks[1], toks[2]
    if not _SPACE_ID.match(sid):
        raise SimSyntaxError(no, f"bad space id {sid!r}")
    try:
        stype = SpaceType(int(type_tok))
    except ValueError:
        raise SimSyntaxError(no, f"bad space type {type_tok!r}") from None
    try:
        n = int(toks[3])
    except ValueError:
        raise SimSyntaxError(no, f"bad corner count {toks[3]!r}") from None
    rest = toks[4:]
    if len(rest) < n:
        raise SimSyntaxError(no, f"expected {n} corner indices")
    ring = []
    for tok in rest[:n]:
        try:
            idx = int(tok)
        except ValueError:
            raise SimSyntaxError(no, f"bad corner index {tok!r}") from None
        if not (1 <= idx <= n_corners):
            raise SimIndexError(f"space {sid}: corner index {idx} outside 1..{n_corners}")
        ring.append(idx)
    rest = rest[n:]
    flags = []
    for tok in rest[:n]:
        if tok not in ("0", "1"):
            raise FlagCountMismatch(f"space {sid}: expected {n} wall flags, found non-flag token {tok!r}")
        flags.append(tok == "1")
    if len(flags) < n:
        raise FlagCountMismatch(f"space {sid}: expected {n} wall flags, got {len(flags)}")
    rest = rest[n:]
    if len(rest) % 4 != 0:
        raise SimSyntaxError(no, f"space {sid}: trailing entrance entries not in quadruples")
    entrances = []
    for i in range(0, len(rest), 4):
        eid, wall_tok, a_tok, b_tok = rest[i : i + 4]
        if not _ENTRANCE_ID.match(eid):
            raise SimSyntaxError(no, f"bad entrance id {eid!r}")
        try:
            wall = int(wall_tok)
            a, b = int(a_tok), int(b_tok)
        except ValueError:
            raise SimSyntaxError(no, f"bad entrance quadruple for {eid}") from None
        if not (1 <= wall <= n):
            raise SimIndexError(f"space {sid}: entrance {eid} wall index {wall} outside 1..{n}")
        for idx in (a, b):
            if not (1 <= idx <= n_ecorners):
                raise SimIndexError(f"space {sid}: entrance corner index {idx} outside 1..{n_ecorners}")
        entrances.append(Entrance(eid, wall, (a, b)))
    return Space(sid, stype, name, ring, flags, entrances)


def parse_sim(data: bytes) -> FloorModel:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise SimSyntaxError(0, f"not valid UTF-8: {e}") from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip() != MAGIC:
        raise SimSyntaxError(1, f"missing magic line {MAGIC!r}")
    if len(lines) < 4:
        raise SimSyntaxError(len(lines), "truncated header")
    n_c = _parse_count(lines[1], 2, "wall_corner")
    n_e = _parse_count(lines[2], 3, "entrance_corner")
    n_s = _parse_count(lines[3], 4, "space")
    expected = 4 + n_c + n_e + n_s
    if len(lines) != expected:
        raise SimSyntaxError(len(lines), f"expected {expected} lines, got {len(lines)}")

    corners = []
    max_xy = 1.0
    for i in range(n_c):
        no = 5 + i
        x, y = _parse_xy(lines[4 + i], no)
        corners.append(Corner(i + 1, x, y, (0, 0)))
        max_xy = max(max_xy, x, y)
    ecorners = []
    for i in range(n_e):
        no = 5 + n_c + i
        x, y = _parse_xy(lines[4 + n_c + i], no)
        ecorners.append(EntranceCorner(i + 1, x, y, ("", 0)))
        max_xy = max(max_xy, x, y)
    spaces = []
    for i in range(n_s):
        no = 5 + n_c + n_e + i
        spaces.append(_parse_space(lines[4 + n_c + n_e + i], no, n_c, n_e))

    size = int(max_xy) + 1
    model = FloorModel(size, size, corners=corners, entrance_corners=ecorners, spaces=spaces)
    max_ent = 0
    for sp in spaces:
        for ent in sp.entrances:
            max_ent = max(max_ent, int(ent.id[1:]))
            for eid in ent.endpoints:
                model.entrance_corner_by_id(eid).host_wall = (sp.id, ent.wall_index)
    model._next_entrance_no = max_ent + 1
    try:
        validate_model(model)
    except InvariantViolation as e:
        raise InvalidModel(str(e)) from e
    return model
