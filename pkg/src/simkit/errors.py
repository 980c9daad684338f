"""Exception hierarchy shared across the toolkit.

Every error raised by the public API derives from SimkitError so callers
(CLI, HTTP service) can map failures to structured reports uniformly.
"""


class SimkitError(Exception):
    """Base class for all toolkit errors."""

    code = "error"

    def payload(self) -> dict:
        return {"error": self.code, "message": str(self)}


# --- tracing ---------------------------------------------------------------

class DuplicateLine(SimkitError):
    code = "duplicate_line"


class NoLineNear(SimkitError):
    code = "no_line_near"


class LineInUse(SimkitError):
    code = "line_in_use"


class DegenerateRing(SimkitError):
    code = "degenerate_ring"


class IndexOutOfRange(SimkitError):
    code = "index_out_of_range"


class EntranceOnEdge(SimkitError):
    code = "entrance_on_edge"


class NotAWall(SimkitError):
    code = "not_a_wall"


class PointOffWall(SimkitError):
    code = "point_off_wall"


class ZeroWidthEntrance(SimkitError):
    code = "zero_width_entrance"


class InvariantViolation(SimkitError):
    code = "invariant_violation"


class ScriptError(SimkitError):
    """Op-script parse/replay failure, carries the 1-based line number."""

    code = "script_error"

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


# --- sim format ------------------------------------------------------------

class InvalidModel(SimkitError):
    code = "invalid_model"


class SimSyntaxError(SimkitError):
    code = "sim_syntax_error"

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class SimIndexError(SimkitError):
    code = "sim_index_error"


class FlagCountMismatch(SimkitError):
    code = "flag_count_mismatch"


# --- geo-registration ------------------------------------------------------

class OutOfUtmRange(SimkitError):
    code = "out_of_utm_range"


class DegenerateConfiguration(SimkitError):
    code = "degenerate_configuration"


class PointAtInfinity(SimkitError):
    code = "point_at_infinity"


class ZoneSpanError(SimkitError):
    code = "zone_span_error"


# --- GeoJSON export --------------------------------------------------------

class MissingGeoCorner(SimkitError):
    code = "missing_geo_corner"


class UnregisteredModel(SimkitError):
    code = "unregistered_model"


# --- mesh pipeline ---------------------------------------------------------

class UnsupportedPly(SimkitError):
    code = "unsupported_ply"


class MalformedPly(SimkitError):
    code = "malformed_ply"


class EmptyMesh(SimkitError):
    code = "empty_mesh"


class NoDominantOrientation(SimkitError):
    code = "no_dominant_orientation"


class InsufficientInliers(SimkitError):
    code = "insufficient_inliers"

    def __init__(self, side: str, message: str = ""):
        super().__init__(message or f"not enough wall points on side '{side}'")
        self.side = side


class NonConvexQuad(SimkitError):
    code = "non_convex_quad"


class AspectMismatch(SimkitError):
    code = "aspect_mismatch"


class MissingCorrespondence(SimkitError):
    code = "missing_correspondence"


class UnknownSuperpixel(SimkitError):
    code = "unknown_superpixel"


class OverlappingAssignment(SimkitError):
    code = "overlapping_assignment"


class EmptyObject(SimkitError):
    code = "empty_object"


class DegenerateBox(SimkitError):
    code = "degenerate_box"
