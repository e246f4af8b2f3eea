"""Curvelet transform, directional panel groups, and hard-threshold denoising."""

from .transform import (
    CurveletCoeffs,
    CurveletConfig,
    band_summary,
    forward,
    inverse,
)
from .panels import PanelGroup, PanelKind, panel_groups, reconstruct_group
from .denoise import hard_threshold_denoise

__all__ = [
    "CurveletCoeffs",
    "CurveletConfig",
    "PanelGroup",
    "PanelKind",
    "band_summary",
    "forward",
    "hard_threshold_denoise",
    "inverse",
    "panel_groups",
    "reconstruct_group",
]
