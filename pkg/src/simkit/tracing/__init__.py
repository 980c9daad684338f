from .model import (
    Corner,
    Entrance,
    EntranceCorner,
    FloorModel,
    GridLine,
    Space,
    SpaceType,
)
from .ops import (
    add_entrance,
    add_line,
    candidate_walls,
    compute_corners,
    finalize_space,
    remove_line,
    set_wall,
    sort_clockwise,
)
from .script import parse_script, replay_script

__all__ = [
    "Corner",
    "Entrance",
    "EntranceCorner",
    "FloorModel",
    "GridLine",
    "Space",
    "SpaceType",
    "add_entrance",
    "add_line",
    "candidate_walls",
    "compute_corners",
    "finalize_space",
    "remove_line",
    "set_wall",
    "sort_clockwise",
    "parse_script",
    "replay_script",
]
