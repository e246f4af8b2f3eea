"""Shared in-memory containers for the processing pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError


class Stage(Enum):
    """Processing stage of a radar matrix."""

    RAW = 0
    BANDPASS = 1
    REFINED = 2
    DENOISED = 3


@dataclass
class RadarMatrix:
    """One radar sample: slow-time frames by fast-time bins.

    Rows are successive received signals (frames), columns are range bins.
    """

    data: np.ndarray
    stage: Stage = Stage.RAW
    label: int | None = None

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 2:
            raise DomainError("radar matrix must be 2-D (frames x bins)")
        frames, bins = self.data.shape
        if frames < 1 or bins < 128:
            raise DomainError(f"bad radar matrix shape {(frames, bins)}")
        if not np.all(np.isfinite(self.data)):
            raise DomainError("radar matrix contains non-finite values")

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def bins(self) -> int:
        return self.data.shape[1]

    def with_data(self, data: np.ndarray, stage: Stage) -> "RadarMatrix":
        return RadarMatrix(data=data, stage=stage, label=self.label)
