"""Hybrid feature extraction: curvelet-domain statistics plus distance bins.

The curvelet side runs on bandpass data (clutter kept, so static people
survive); the distance-bin side runs on clutter-removed data and on its
hard-threshold denoised counterpart.  The assembled vector has a fixed
294-entry layout: 14 curvelet features followed by per-bin maxima and
energies for bin sizes 32, 64 and 128 sampling points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvelet import (
    CurveletCoeffs,
    CurveletConfig,
    PanelKind,
    panel_groups,
    reconstruct_group,
)
from .curvelet import forward as curvelet_forward
from .errors import DomainError
from .types import RadarMatrix, Stage

DEFAULT_BIN_SIZES = (32, 64, 128)
# Feature order of the directional groups throughout the vector.
GROUP_ORDER = (PanelKind.DEG90, PanelKind.DEG45, PanelKind.DEG135)
CTF_LENGTH = 14


@dataclass
class CtfFeatures:
    """Curvelet-domain statistics: coarse, fine, and directional energies."""

    coarse_mean: float
    coarse_energy: float
    fine_top5: np.ndarray
    fine_energy: float
    detail_energy_curvelet: np.ndarray  # (3,) ordered per GROUP_ORDER
    detail_energy_recon: np.ndarray     # (3,) same order

    def as_array(self) -> np.ndarray:
        return np.concatenate(
            [
                [self.coarse_mean, self.coarse_energy],
                self.fine_top5,
                [self.fine_energy],
                self.detail_energy_curvelet,
                self.detail_energy_recon,
            ]
        )


@dataclass
class DbfFeatures:
    """Distance-bin maxima/energies for refined (k) and denoised (d) data."""

    bin_sizes: tuple[int, ...]
    a_k: dict[int, np.ndarray]
    e_k: dict[int, np.ndarray]
    a_d: dict[int, np.ndarray]
    e_d: dict[int, np.ndarray]

    def as_array(self) -> np.ndarray:
        parts = []
        for s in self.bin_sizes:
            parts += [self.a_k[s], self.e_k[s], self.a_d[s], self.e_d[s]]
        return np.concatenate(parts)


@dataclass
class FeatureVector:
    values: np.ndarray
    label: int | None = None


def feature_length(bins: int = 1280, bin_sizes=DEFAULT_BIN_SIZES) -> int:
    return CTF_LENGTH + 4 * sum(bins // s for s in bin_sizes)


def feature_names(bins: int = 1280, bin_sizes=DEFAULT_BIN_SIZES) -> list[str]:
    """Column names matching the assembled vector layout."""
    names = ["ctf_coarse_mean", "ctf_coarse_energy"]
    names += [f"ctf_fine_top{i}" for i in range(1, 6)]
    names += ["ctf_fine_energy"]
    names += [f"ctf_detail_curv_{g.value}" for g in GROUP_ORDER]
    names += [f"ctf_detail_recon_{g.value}" for g in GROUP_ORDER]
    for s in bin_sizes:
        nb = bins // s
        for tag in ("ak", "ek", "ad", "ed"):
            names += [f"dbf_s{s}_{tag}_{i:02d}" for i in range(nb)]
    return names


def panel_energy_cut(coeffs: CurveletCoeffs, tau: float) -> CurveletCoeffs:
    """Drop detail panels whose energy falls below tau times the strongest."""
    if not 0 <= tau < 1:
        raise DomainError("tau must lie in [0, 1)")
    out = coeffs.copy()
    keys = out.detail_keys(scale=1)
    if not keys or tau == 0:
        return out
    energies = {k: float(np.sum(np.abs(out.bands[k]) ** 2)) for k in keys}
    cut = tau * max(energies.values())
    for k in keys:
        if energies[k] < cut:
            out.bands[k] = np.zeros_like(out.bands[k])
    return out


def extract_ctf(
    bandpass: RadarMatrix,
    config: CurveletConfig | None = None,
    tau: float = 0.01,
) -> CtfFeatures:
    """Coarse/fine statistics and per-direction energies of one sample."""
    if bandpass.stage is not Stage.BANDPASS:
        raise DomainError(f"extract_ctf expects BANDPASS input, got {bandpass.stage}")
    config = config or CurveletConfig()
    coeffs = panel_energy_cut(curvelet_forward(bandpass.data, config), tau)

    coarse = coeffs.bands[(0, 0)]
    fine = coeffs.bands[(config.n_scales - 1, 0)]
    fine_mag = np.abs(fine).ravel()
    top5 = np.sort(fine_mag)[::-1][:5]

    groups = panel_groups(coeffs.source_dims, config)
    e_curv = np.empty(3)
    e_recon = np.empty(3)
    for gi, kind in enumerate(GROUP_ORDER):
        group = groups[kind]
        e_curv[gi] = sum(
            float(np.sum(np.abs(coeffs.bands[(1, l)]) ** 2))
            for l in group.panel_indices
        )
        recon = reconstruct_group(coeffs, group)
        e_recon[gi] = float(np.sum(recon**2))

    return CtfFeatures(
        coarse_mean=float(np.mean(np.abs(coarse))),
        coarse_energy=float(np.sum(np.abs(coarse) ** 2)),
        fine_top5=top5,
        fine_energy=float(np.sum(fine_mag**2)),
        detail_energy_curvelet=e_curv,
        detail_energy_recon=e_recon,
    )


def bin_stats_per_frame(data: np.ndarray, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-frame, per-bin max |amplitude| and energy, before frame averaging."""
    frames, bins = data.shape
    if bins % size != 0:
        raise DomainError(f"{bins} fast-time samples not divisible by bin size {size}")
    blocks = data.reshape(frames, bins // size, size)
    return np.abs(blocks).max(axis=2), (blocks**2).sum(axis=2)


def extract_dbf(
    refined: RadarMatrix,
    denoised: RadarMatrix,
    bin_sizes=DEFAULT_BIN_SIZES,
) -> DbfFeatures:
    """Distance-bin features, frame-averaged, for both signal variants."""
    if refined.stage is not Stage.REFINED:
        raise DomainError(f"extract_dbf expects REFINED input, got {refined.stage}")
    if denoised.stage is not Stage.DENOISED:
        raise DomainError(f"extract_dbf expects DENOISED input, got {denoised.stage}")
    if refined.data.shape != denoised.data.shape:
        raise DomainError("refined and denoised matrices must share dimensions")

    a_k, e_k, a_d, e_d = {}, {}, {}, {}
    for s in bin_sizes:
        amps, energies = bin_stats_per_frame(refined.data, s)
        a_k[s], e_k[s] = amps.mean(axis=0), energies.mean(axis=0)
        amps, energies = bin_stats_per_frame(denoised.data, s)
        a_d[s], e_d[s] = amps.mean(axis=0), energies.mean(axis=0)
    return DbfFeatures(bin_sizes=tuple(bin_sizes), a_k=a_k, e_k=e_k, a_d=a_d, e_d=e_d)


def assemble_hybrid(ctf: CtfFeatures, dbf: DbfFeatures, label: int | None = None) -> FeatureVector:
    """Concatenate both feature families in the documented layout."""
    values = np.concatenate([ctf.as_array(), dbf.as_array()])
    return FeatureVector(values=values, label=label)


def split_hybrid(vector: FeatureVector, bins: int = 1280) -> tuple[CtfFeatures, DbfFeatures]:
    """Inverse of assemble_hybrid for the standard layout."""
    v = vector.values
    ctf = CtfFeatures(
        coarse_mean=float(v[0]),
        coarse_energy=float(v[1]),
        fine_top5=v[2:7].copy(),
        fine_energy=float(v[7]),
        detail_energy_curvelet=v[8:11].copy(),
        detail_energy_recon=v[11:14].copy(),
    )
    pos = CTF_LENGTH
    a_k, e_k, a_d, e_d = {}, {}, {}, {}
    for s in DEFAULT_BIN_SIZES:
        nb = bins // s
        a_k[s] = v[pos : pos + nb].copy(); pos += nb
        e_k[s] = v[pos : pos + nb].copy(); pos += nb
        a_d[s] = v[pos : pos + nb].copy(); pos += nb
        e_d[s] = v[pos : pos + nb].copy(); pos += nb
    dbf = DbfFeatures(bin_sizes=DEFAULT_BIN_SIZES, a_k=a_k, e_k=e_k, a_d=a_d, e_d=e_d)
    return ctf, dbf
