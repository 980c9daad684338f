"""simkit: floor-plan tracing, sim/GeoJSON conversion, geo-registration,
and room-scan based map population."""

__version__ = "0.1.0"
