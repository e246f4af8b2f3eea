"""Per-sample processing chain from raw matrix to hybrid feature vector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvelet import CurveletConfig, hard_threshold_denoise
from .features import (
    DEFAULT_BIN_SIZES,
    FeatureVector,
    assemble_hybrid,
    extract_ctf,
    extract_dbf,
)
from .preprocess import FilterConfig, bandpass_filter, remove_clutter, remove_dc
from .types import RadarMatrix


@dataclass(frozen=True)
class FeatureParams:
    bin_sizes: tuple[int, ...] = DEFAULT_BIN_SIZES
    tau: float = 0.01
    threshold_lambda: float = 3.0


def extract_features(
    raw: RadarMatrix,
    filter_cfg: FilterConfig | None = None,
    curvelet_cfg: CurveletConfig | None = None,
    params: FeatureParams | None = None,
) -> FeatureVector:
    """Run one raw sample through both feature branches.

    The curvelet branch reads the bandpass matrix with clutter kept; the
    distance-bin branch reads the clutter-removed matrix and its denoised
    counterpart.
    """
    filter_cfg = filter_cfg or FilterConfig()
    curvelet_cfg = curvelet_cfg or CurveletConfig()
    params = params or FeatureParams()

    bandpass = bandpass_filter(remove_dc(raw), filter_cfg)
    ctf = extract_ctf(bandpass, curvelet_cfg, params.tau)
    refined = remove_clutter(bandpass, filter_cfg.alpha)
    denoised = hard_threshold_denoise(
        refined, params.threshold_lambda, sigma=None, config=curvelet_cfg
    )
    dbf = extract_dbf(refined, denoised, params.bin_sizes)
    return assemble_hybrid(ctf, dbf, label=raw.label)
