"""Replayable op-script: the canonical fixture format shared by the CLI,
the HTTP service and the browser tracer.

One op per line, whitespace-delimited; blank lines and `#` comments are
skipped. Grammar:

    add_line horizontal|vertical OFFSET [ghost]
    add_line oblique ANGLE_DEG ANCHOR_X ANCHOR_Y [ghost]
    remove_line X Y
    compute_corners
    begin_space [ordered]
    pick_corner CORNER_ID
    set_wall EDGE_INDEX on|off
    add_entrance WALL_INDEX X1 Y1 X2 Y2
    finalize_space NAME TYPE

TYPE is one of room, corridor, restroom, staircase, elevator.
`begin_space ordered` keeps the pick order as the ring instead of the
automatic clockwise sort (for rings that are not star-shaped about their
centroid); the ring must still be clockwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ScriptError, SimkitError
from .model import FloorModel, Space, SpaceType
from .ops import (
    add_entrance,
    add_line,
    compute_corners,
    finalize_space,
    remove_line,
    set_wall,
    sort_clockwise,
)

OP_NAMES = (
    "add_line",
    "remove_line",
    "compute_corners",
    "begin_space",
    "pick_corner",
    "set_wall",
    "add_entrance",
    "finalize_space",
)


def parse_script(text: str) -> list[tuple[int, list[str]]]:
    """Split a script into (line_no, tokens) pairs, validating op names."""
    ops = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] not in OP_NAMES:
            raise ScriptError(no, f"unknown op {tokens[0]!r}")
        ops.append((no, tokens))
    return ops


@dataclass
class _Draft:
    picked: list[int] = field(default_factory=list)
    ordered: bool = False  # keep pick order instead of clockwise sort
    space: Space | None = None  # materialized at the first set_wall/add_entrance

    def materialize(self, model: FloorModel) -> Space:
        if self.space is None:
            if self.ordered:
                ring = list(self.picked)
            else:
                coords = {cid: (model.corner_by_id(cid).x, model.corner_by_id(cid).y)
                          for cid in self.picked}
                ring = sort_clockwise(self.picked, coords)
            self.space = Space("", SpaceType.ROOM, "", ring, [False] * len(ring))
        return self.space


@dataclass
class Tracer:
    """Applies ops sequentially to a FloorModel, tracking the in-progress
    space between begin_space and finalize_space."""

    model: FloorModel
    draft: _Draft | None = None

    def apply(self, tokens: list[str], line_no: int = 0) -> None:
        try:
            self._dispatch(tokens)
        except SimkitError as e:
            if isinstance(e, ScriptError):
                raise
            raise ScriptError(line_no, str(e)) from e
        except (ValueError, IndexError) as e:
            raise ScriptError(line_no, f"bad arguments for {tokens[0]}: {e}") from e

    def _dispatch(self, t: list[str]) -> None:
        op = t[0]
        m = self.model
        if op == "add_line":
            kind = t[1]
            ghost = t[-1] == "ghost"
            args = t[2 : len(t) - (1 if ghost else 0)]
            if kind == "oblique":
                angle, ax, ay = (float(v) for v in args)
                add_line(m, kind, anchor=(ax, ay), angle_deg=angle, ghost=ghost)
            else:
                (offset,) = (float(v) for v in args)
                add_line(m, kind, offset=offset, ghost=ghost)
        elif op == "remove_line":
            remove_line(m, (float(t[1]), float(t[2])))
        elif op == "compute_corners":
            compute_corners(m)
        elif op == "begin_space":
            self.draft = _Draft(ordered=len(t) > 1 and t[1] == "ordered")
        elif op == "pick_corner":
            self._need_draft().picked.append(int(t[1]))
        elif op == "set_wall":
            sp = self._need_draft().materialize(m)
            set_wall(sp, int(t[1]), {"on": True, "off": False}[t[2]])
        elif op == "add_entrance":
            sp = self._need_draft().materialize(m)
            add_entrance(m, sp, int(t[1]), (float(t[2]), float(t[3])), (float(t[4]), float(t[5])))
        elif op == "finalize_space":
            draft = self._need_draft()
            name, type_name = t[1], t[2]
            sp = draft.materialize(m)
            finalize_space(
                m, sp.corners, sp.wall_flags, sp.entrances, name, type_name,
                explicit_order=True,
            )
            self.draft = None

    def _need_draft(self) -> _Draft:
        if self.draft is None:
            raise SimkitError("no space in progress (missing begin_space)")
        return self.draft


def replay_script(
    text: str, image_width: int = 2000, image_height: int = 2000
) -> tuple[FloorModel, list[str]]:
    """Replay a whole script on a fresh model.

    Returns the model and a list of warnings (currently: an unfinalized
    trailing space, which is dropped)."""
    model = FloorModel(image_width, image_height)
    tracer = Tracer(model)
    for no, tokens in parse_script(text):
        tracer.apply(tokens, no)
    warnings = []
    if tracer.draft is not None:
        warnings.append("script ended with an unfinished space; it was discarded")
    return model, warnings
