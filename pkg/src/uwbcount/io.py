"""Binary containers for radar records and feature matrices, plus CSV export.

Record container ("UWBR"): magic, u16 version, u32 little-endian dims
(records, frames, bins), row-major float32 payload, one u8 label per
record.  Feature container ("UWBF") is identical except dims are
(samples, feature_length).  The version word carries the container format
in its low byte and a content tag in the high byte (processing stage for
records, feature layout version for features).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import FormatError
from .types import Stage

RECORD_MAGIC = b"UWBR"
FEATURE_MAGIC = b"UWBF"
CONTAINER_FORMAT_VERSION = 1


@dataclass
class RecordSet:
    """All records of one scenario: (records, frames, bins) plus labels."""

    data: np.ndarray
    labels: np.ndarray
    stage: Stage = Stage.RAW

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float32)
        self.labels = np.asarray(self.labels, dtype=np.uint8)
        if self.data.ndim != 3 or len(self.labels) != self.data.shape[0]:
            raise FormatError("record set needs (records, frames, bins) + labels")


@dataclass
class FeatureSet:
    features: np.ndarray
    labels: np.ndarray
    layout_version: int = 1

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float32)
        self.labels = np.asarray(self.labels, dtype=np.uint8)
        if self.features.ndim != 2 or len(self.labels) != self.features.shape[0]:
            raise FormatError("feature set needs (samples, length) + labels")


def _write(path, magic: bytes, high_tag: int, dims: tuple[int, ...], payload: np.ndarray, labels: np.ndarray):
    version = CONTAINER_FORMAT_VERSION | (high_tag << 8)
    with open(path, "wb") as fh:
        fh.write(magic)
        fh.write(struct.pack("<H", version))
        fh.write(struct.pack(f"<{len(dims)}I", *dims))
        fh.write(np.ascontiguousarray(payload, dtype="<f4").tobytes())
        fh.write(labels.astype(np.uint8).tobytes())


def _read(path, magic: bytes, n_dims: int):
    with open(path, "rb") as fh:
        got = fh.read(4)
        if got != magic:
            raise FormatError(f"{path}: bad magic {got!r}, expected {magic!r}")
        raw = fh.read(2)
        if len(raw) != 2:
            raise FormatError(f"{path}: truncated header")
        version = struct.unpack("<H", raw)[0]
        if version & 0xFF != CONTAINER_FORMAT_VERSION:
            raise FormatError(f"{path}: unsupported container version {version & 0xFF}")
        raw = fh.read(4 * n_dims)
        if len(raw) != 4 * n_dims:
            raise FormatError(f"{path}: truncated dims")
        dims = struct.unpack(f"<{n_dims}I", raw)
        count = int(np.prod(dims)) if dims else 0
        payload = np.frombuffer(fh.read(4 * count), dtype="<f4")
        if payload.size != count:
            raise FormatError(f"{path}: truncated payload")
        labels = np.frombuffer(fh.read(dims[0]), dtype=np.uint8)
        if labels.size != dims[0]:
            raise FormatError(f"{path}: truncated label block")
        if fh.read(1):
            raise FormatError(f"{path}: trailing bytes after label block")
    return version >> 8, dims, payload.reshape(dims), labels


def write_records(path, records: RecordSet) -> None:
    _write(
        path, RECORD_MAGIC, records.stage.value, records.data.shape,
        records.data, records.labels,
    )


def read_records(path) -> RecordSet:
    tag, dims, payload, labels = _read(path, RECORD_MAGIC, 3)
    return RecordSet(data=payload, labels=labels, stage=Stage(tag))


def write_features(path, features: FeatureSet) -> None:
    _write(
        path, FEATURE_MAGIC, features.layout_version, features.features.shape,
        features.features, features.labels,
    )


def read_features(path) -> FeatureSet:
    tag, dims, payload, labels = _read(path, FEATURE_MAGIC, 2)
    return FeatureSet(features=payload, labels=labels, layout_version=tag)


def write_feature_csv(path, features: FeatureSet, names: list[str]) -> None:
    """CSV mirror: one row per sample, named columns plus the label."""
    if len(names) != features.features.shape[1]:
        raise FormatError("column name count does not match feature length")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(names + ["label"]) + "\n")
        for row, label in zip(features.features, features.labels):
            fh.write(",".join(np.format_float_scientific(v, precision=9) for v in row))
            fh.write(f",{int(label)}\n")
