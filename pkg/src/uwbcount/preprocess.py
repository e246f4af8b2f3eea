"""Per-sample preprocessing: DC removal, bandpass filtering, clutter removal."""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy import signal as spsig

from .errors import DomainError
from .simulate import SPEED_OF_LIGHT
from .types import RadarMatrix, Stage

DEFAULT_SAMPLE_RATE = SPEED_OF_LIGHT / (2.0 * 0.0039)


@dataclass(frozen=True)
class FilterConfig:
    """Bandpass design and clutter-forgetting parameters."""

    passband_low: float = 5.65e9
    passband_high: float = 7.95e9
    taps: int = 129
    alpha: float = 0.9
    sample_rate: float = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        if not 0 < self.passband_low < self.passband_high < self.sample_rate / 2:
            raise DomainError("passband must satisfy 0 < low < high < Nyquist")
        if self.taps < 3 or self.taps % 2 == 0:
            raise DomainError("taps must be odd and >= 3")
        if not 0 < self.alpha < 1:
            raise DomainError("alpha must lie in (0, 1)")


@functools.lru_cache(maxsize=8)
def _bandpass_kernel(low: float, high: float, taps: int, fs: float) -> np.ndarray:
    kernel = spsig.firwin(taps, [low, high], pass_zero=False, window="hamming", fs=fs)
    # Pin the DC gain to exactly zero; the in-band response moves by O(1e-3).
    return kernel - kernel.mean()


def bandpass_kernel(cfg: FilterConfig) -> np.ndarray:
    return _bandpass_kernel(cfg.passband_low, cfg.passband_high, cfg.taps, cfg.sample_rate)


def remove_dc(m: RadarMatrix) -> RadarMatrix:
    """Subtract each frame's fast-time mean."""
    if m.stage is not Stage.RAW:
        raise DomainError(f"remove_dc expects RAW input, got {m.stage}")
    data = m.data - m.data.mean(axis=1, keepdims=True)
    return m.with_data(data, Stage.RAW)


def bandpass_filter(m: RadarMatrix, cfg: FilterConfig) -> RadarMatrix:
    """Zero-phase Hamming-window FIR bandpass along fast time.

    Frames are reflection-padded by half the kernel length so the symmetric
    kernel introduces no delay and the shape is preserved.
    """
    if m.stage is not Stage.RAW:
        raise DomainError(f"bandpass_filter expects RAW input, got {m.stage}")
    kernel = bandpass_kernel(cfg)
    half = cfg.taps // 2
    if m.bins <= half:
        raise DomainError("matrix too narrow for the filter length")
    padded = np.pad(m.data, ((0, 0), (half, half)), mode="reflect")
    out = spsig.fftconvolve(padded, kernel[None, :], mode="valid", axes=1)
    return m.with_data(out, Stage.BANDPASS)


def remove_clutter(m: RadarMatrix, alpha: float = 0.9) -> RadarMatrix:
    """Running-average background subtraction along slow time.

    The clutter estimate starts at the first frame and follows
    c_k = alpha * c_{k-1} + (1 - alpha) * r_k; the refined frame is
    r_k - c_k, so the first refined frame is exactly zero.
    """
    if m.stage is not Stage.BANDPASS:
        raise DomainError(f"remove_clutter expects BANDPASS input, got {m.stage}")
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    data = m.data
    out = np.empty_like(data)
    estimate = data[0].copy()
    out[0] = 0.0
    for k in range(1, data.shape[0]):
        estimate = alpha * estimate + (1.0 - alpha) * data[k]
        out[k] = data[k] - estimate
    return m.with_data(out, Stage.REFINED)
