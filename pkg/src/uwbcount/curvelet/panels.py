"""Directional grouping of detail-scale panels and per-group reconstruction.

The 16 detail wedges are grouped by the spatial texture orientation their
frequency support responds to, measured in axis-normalized coordinates so
the rule is independent of the matrix aspect ratio.  Groups of four panels
sit around the image diagonals (rising range over slow time vs falling) and
around the vertical (range fixed over slow time, i.e. static reflectors);
the four near-horizontal panels stay ungrouped.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import DomainError
from ..types import RadarMatrix
from .transform import CurveletCoeffs, CurveletConfig, get_plan, inverse


class PanelKind(Enum):
    DEG45 = "deg45"
    DEG90 = "deg90"
    DEG135 = "deg135"


@dataclass(frozen=True)
class PanelGroup:
    kind: PanelKind
    panel_indices: frozenset[int]


def panel_orientations(dims: tuple[int, int], config: CurveletConfig) -> np.ndarray:
    """Texture orientation of each detail panel, degrees in [0, 180).

    90 degrees means textures constant along slow time (vertical range
    stripes); 45 means range growing with slow time; 135 falling.
    """
    plan = get_plan(dims, config)
    if not plan.details:
        raise DomainError("configuration has no detail scale")
    det = plan.details[-1]  # scale 1: the paper's 16-direction detail layer
    freq_deg = np.array([np.degrees(w.orientation) for w in det.wedges])
    return (freq_deg + 90.0) % 180.0


def panel_groups(
    dims: tuple[int, int], config: CurveletConfig | None = None
) -> dict[PanelKind, PanelGroup]:
    """Panels within 22.5 degrees of each diagonal / the vertical."""
    config = config or CurveletConfig()
    spatial = panel_orientations(dims, config)
    centers = {PanelKind.DEG45: 45.0, PanelKind.DEG90: 90.0, PanelKind.DEG135: 135.0}
    groups = {}
    for kind, center in centers.items():
        members = frozenset(
            int(i) for i, phi in enumerate(spatial) if abs(phi - center) < 22.5
        )
        groups[kind] = PanelGroup(kind=kind, panel_indices=members)
    return groups


def reconstruct_group(coeffs: CurveletCoeffs, group: PanelGroup) -> np.ndarray:
    """Image rebuilt from only the detail panels of one directional group."""
    detail_scale = 1
    detail_keys = {k for k in coeffs.bands if k[0] == detail_scale}
    for l in group.panel_indices:
        if (detail_scale, l) not in detail_keys:
            raise DomainError(f"unknown detail panel index {l}")
    kept = CurveletCoeffs(
        bands={
            key: (
                band
                if key[0] == detail_scale and key[1] in group.panel_indices
                else np.zeros_like(band)
            )
            for key, band in coeffs.bands.items()
        },
        source_dims=coeffs.source_dims,
        config=coeffs.config,
    )
    return inverse(kept).real
