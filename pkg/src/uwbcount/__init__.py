"""People counting from IR-UWB radar with hybrid curvelet / distance-bin features."""

__version__ = "0.1.0"

from .types import RadarMatrix, Stage  # noqa: F401
