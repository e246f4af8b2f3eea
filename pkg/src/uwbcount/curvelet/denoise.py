"""Hard-threshold denoising in the curvelet domain."""

from __future__ import annotations

import threading

import numpy as np

from ..errors import DomainError
from ..types import RadarMatrix, Stage
from .transform import CurveletCoeffs, CurveletConfig, forward, inverse

_GAIN_MC_RUNS = 4
_GAIN_SEED = 0x6A1B
_GAIN_CACHE: dict[tuple, dict] = {}
_GAIN_LOCK = threading.Lock()


def band_noise_gains(
    dims: tuple[int, int], config: CurveletConfig
) -> dict[tuple[int, int], float]:
    """Per-band RMS response to unit white noise, Monte Carlo, cached.

    The frame is tight, so total coefficient energy matches input energy,
    but redundancy differs per band; thresholds must be scaled accordingly.
    """
    key = (dims, config.n_scales, config.n_angles_detail)
    gains = _GAIN_CACHE.get(key)
    if gains is None:
        with _GAIN_LOCK:
            gains = _GAIN_CACHE.get(key)
            if gains is None:
                rng = np.random.default_rng([_GAIN_SEED, dims[0], dims[1]])
                acc: dict[tuple[int, int], float] = {}
                counts: dict[tuple[int, int], int] = {}
                for _ in range(_GAIN_MC_RUNS):
                    coeffs = forward(rng.standard_normal(dims), config)
                    for bk, band in coeffs.bands.items():
                        acc[bk] = acc.get(bk, 0.0) + float(np.sum(np.abs(band) ** 2))
                        counts[bk] = counts.get(bk, 0) + band.size
                gains = {bk: float(np.sqrt(acc[bk] / counts[bk])) for bk in acc}
                _GAIN_CACHE[key] = gains
    return gains


def estimate_sigma(coeffs: CurveletCoeffs) -> float:
    """Input-domain noise level from the fine band (median estimator)."""
    fine = coeffs.bands[(coeffs.config.n_scales - 1, 0)]
    mad = float(np.median(np.abs(fine)))
    gains = band_noise_gains(coeffs.source_dims, coeffs.config)
    gain_fine = gains[(coeffs.config.n_scales - 1, 0)]
    return mad / 0.6745 / gain_fine


def threshold_coeffs(
    coeffs: CurveletCoeffs, lam: float, sigma: float | None = None
) -> CurveletCoeffs:
    """Zero every non-coarse coefficient below lam * sigma * band gain."""
    if lam <= 0:
        raise DomainError("lambda must be positive")
    if sigma is None:
        sigma = estimate_sigma(coeffs)
    gains = band_noise_gains(coeffs.source_dims, coeffs.config)
    bands = {}
    for bk, band in coeffs.bands.items():
        if bk == (0, 0):  # coarse band is spared
            bands[bk] = band.copy()
            continue
        cut = lam * sigma * gains[bk]
        bands[bk] = np.where(np.abs(band) >= cut, band, 0.0)
    return CurveletCoeffs(bands=bands, source_dims=coeffs.source_dims, config=coeffs.config)


def hard_threshold_denoise(
    m: RadarMatrix | np.ndarray,
    lam: float = 3.0,
    sigma: float | None = None,
    config: CurveletConfig | None = None,
):
    """Forward transform, hard-threshold all but the coarse band, invert.

    `sigma` is the noise level in the input domain; None estimates it from
    the fine band.  Returns the same container kind it was given; a
    RadarMatrix comes back at stage DENOISED.
    """
    config = config or CurveletConfig()
    data = m.data if isinstance(m, RadarMatrix) else np.asarray(m, dtype=np.float64)
    coeffs = forward(data, config)
    kept = threshold_coeffs(coeffs, lam, sigma)
    out = inverse(kept).real
    if isinstance(m, RadarMatrix):
        return m.with_data(out, Stage.DENOISED)
    return out
