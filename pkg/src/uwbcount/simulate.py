"""Synthetic dense-scene generation and raw IR-UWB record synthesis.

Records follow an additive model: person echoes plus a static clutter
template plus white noise.  Each person contributes a carrier-modulated
Gaussian pulse at its round-trip delay, attenuated by free-space path loss
and a per-blocker shadowing factor, with a few weaker multipath ghosts at
longer delays.  Everything is a pure function of (scene, config, seed).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError
from .types import RadarMatrix, Stage

SPEED_OF_LIGHT = 299_792_458.0
FRAMES_PER_SAMPLE = 50

# Sub-stream tags so every randomness source draws independently of the rest.
_TAG_SCENE, _TAG_PERSON, _TAG_CLUTTER, _TAG_NOISE = 101, 202, 303, 404

# Random-waypoint speed bounds (m/s).  At 3-4 persons per square meter the
# crowd can only shuffle, so the default sits well below free walking pace.
WALK_SPEED_RANGE = (0.1, 0.5)
# Queue geometry: lead person range and nominal gap with uniform jitter (m).
QUEUE_START = 0.5
QUEUE_GAP = 0.10
QUEUE_GAP_JITTER = 0.02
# A person blocks anyone behind them within this lateral corridor (m).
BLOCK_CORRIDOR = 0.25


class Scenario(Enum):
    WALK3 = "walk3"
    WALK4 = "walk4"
    QUEUE = "queue"

    @property
    def density(self) -> float | None:
        return {"walk3": 3.0, "walk4": 4.0, "queue": None}[self.value]

    @property
    def max_people(self) -> int:
        return 15 if self is Scenario.QUEUE else 20

    @property
    def code(self) -> int:
        return {"walk3": 1, "walk4": 2, "queue": 3}[self.value]


@dataclass(frozen=True)
class RadarConfig:
    """Radar and echo-model parameters. Defaults mirror the target system."""

    range_bins: int = 1280
    bin_spacing: float = 0.0039
    frames_per_record: int = 200
    frame_interval: float = 0.025
    carrier_freq: float = 6.8e9
    bandwidth_10db: float = 2.3e9
    noise_sigma: float = 5e-6
    clutter_reflector_count: int = 6
    clutter_jitter_sigma: float = 0.0
    direct_leak_amplitude: float = 3.0
    clutter_seed: int = 0
    mount_height: float = 1.8
    rcs_range: tuple[float, float] = (0.7, 1.3)
    ghost_count_range: tuple[int, int] = (1, 3)
    body_scatter_count: int = 2
    body_scatter_spread: float = 0.35
    scintillation_sd: float = 0.08
    shadow_factor: float = 0.5

    def __post_init__(self):
        if self.range_bins < 128 or self.bin_spacing <= 0:
            raise DomainError("bad fast-time grid")
        if self.frames_per_record < FRAMES_PER_SAMPLE:
            raise DomainError(
                f"frames_per_record must be >= {FRAMES_PER_SAMPLE}"
            )
        if not 0 < self.carrier_freq < self.fast_time_rate / 2:
            raise DomainError("carrier frequency beyond Nyquist for this grid")

    @property
    def fast_time_rate(self) -> float:
        """Effective fast-time sampling rate implied by the bin grid (Hz)."""
        return SPEED_OF_LIGHT / (2.0 * self.bin_spacing)

    @property
    def max_range(self) -> float:
        return self.range_bins * self.bin_spacing

    @property
    def pulse_sigma_seconds(self) -> float:
        """Gaussian envelope width matching the -10 dB spectral width."""
        sigma_f = self.bandwidth_10db / (2.0 * np.sqrt(2.0 * np.log(10.0)))
        return 1.0 / (2.0 * np.pi * sigma_f)


@dataclass
class SceneTrajectory:
    """Per-frame kinematics of the people in one measurement."""

    scenario: Scenario
    n_people: int
    positions: np.ndarray  # (frames, n_people, 2): (down-range m, lateral m)
    blockers: np.ndarray   # (frames, n_people): people between person and radar

    @property
    def frames(self) -> int:
        return self.positions.shape[0]


@dataclass
class ClutterProfile:
    """Static background: one fast-time template, optional per-frame jitter."""

    static_template: np.ndarray
    jitter_sigma: float = 0.0


@dataclass
class RadarRecord:
    data: np.ndarray  # (frames_per_record, range_bins)
    scene: SceneTrajectory
    config: RadarConfig
    seed: int


def carrier_pulse(config: RadarConfig, half_width_bins: int | None = None) -> np.ndarray:
    """Sampled transmit pulse centered in the returned array."""
    sigma = config.pulse_sigma_seconds
    dt = 1.0 / config.fast_time_rate
    if half_width_bins is None:
        half_width_bins = int(np.ceil(4 * sigma / dt))
    t = np.arange(-half_width_bins, half_width_bins + 1) * dt
    return np.exp(-(t**2) / (2 * sigma**2)) * np.cos(2 * np.pi * config.carrier_freq * t)


def _blocker_counts(positions: np.ndarray) -> np.ndarray:
    """People standing inside the radar-to-person corridor, per frame."""
    frames, n, _ = positions.shape
    if n < 2:
        return np.zeros((frames, n), dtype=np.int64)
    rng = positions[:, :, 0]
    lat = positions[:, :, 1]
    norm = np.maximum(np.sqrt(rng**2 + lat**2), 1e-9)
    # Axes: [frame, target, other].
    r_t, r_o = rng[:, :, None], rng[:, None, :]
    l_t, l_o = lat[:, :, None], lat[:, None, :]
    perp = np.abs(l_t * r_o - r_t * l_o) / norm[:, :, None]
    nearer = r_o < r_t - 1e-12
    eye = np.eye(n, dtype=bool)[None, :, :]
    blocked = nearer & (perp < BLOCK_CORRIDOR) & ~eye
    return blocked.sum(axis=2).astype(np.int64)


def generate_scene(
    scenario: Scenario,
    n_people: int,
    seed: int,
    frames: int = 200,
    frame_interval: float = 0.025,
    speed_range: tuple[float, float] = WALK_SPEED_RANGE,
) -> SceneTrajectory:
    """Random-waypoint walkers in a density-bound rectangle, or a queue."""
    if n_people < 0 or n_people > scenario.max_people:
        raise DomainError(
            f"{scenario.value} supports 0..{scenario.max_people} people, got {n_people}"
        )
    rng = np.random.default_rng([_TAG_SCENE, scenario.code, n_people, seed])
    positions = np.zeros((frames, n_people, 2))

    if n_people:
        if scenario is Scenario.QUEUE:
            gaps = QUEUE_GAP + rng.uniform(
                -QUEUE_GAP_JITTER, QUEUE_GAP_JITTER, size=n_people
            )
            ranges = QUEUE_START + np.concatenate([[0.0], np.cumsum(gaps[1:])])
            positions[:, :, 0] = ranges[None, :]
        else:
            side = float(np.sqrt(n_people / scenario.density))
            lo = np.array([1.0, -side / 2.0])
            hi = np.array([1.0 + side, side / 2.0])
            pos = rng.uniform(lo, hi, size=(n_people, 2))
            target = rng.uniform(lo, hi, size=(n_people, 2))
            speed = rng.uniform(*speed_range, size=n_people)
            for f in range(frames):
                positions[f] = pos
                step = speed * frame_interval
                delta = target - pos
                dist = np.hypot(delta[:, 0], delta[:, 1])
                arriving = dist <= step
                moving = ~arriving & (dist > 0)
                pos[moving] += delta[moving] * (step[moving] / dist[moving])[:, None]
                if np.any(arriving):
                    pos[arriving] = target[arriving]
                    k = int(arriving.sum())
                    target[arriving] = rng.uniform(lo, hi, size=(k, 2))
                    speed[arriving] = rng.uniform(*speed_range, size=k)

    return SceneTrajectory(
        scenario=scenario,
        n_people=n_people,
        positions=positions,
        blockers=_blocker_counts(positions),
    )


def build_clutter(config: RadarConfig) -> ClutterProfile:
    """Direct transmitter leak plus a handful of static room reflectors.

    The template is keyed by the config's clutter seed, not the record
    seed: all records share one background, like one room would.
    """
    rng = np.random.default_rng([_TAG_CLUTTER, config.clutter_seed])
    template = np.zeros(config.range_bins)
    if config.direct_leak_amplitude > 0:
        _add_pulse(template[None, :], np.array([0.08]), np.array([config.direct_leak_amplitude]), config)
    for _ in range(config.clutter_reflector_count):
        r = rng.uniform(0.3, config.max_range * 0.96)
        a = rng.uniform(0.1, 0.8)
        _add_pulse(template[None, :], np.array([r]), np.array([a]), config)
    return ClutterProfile(static_template=template, jitter_sigma=config.clutter_jitter_sigma)


def _add_pulse(
    data: np.ndarray, ranges: np.ndarray, amplitudes: np.ndarray, config: RadarConfig
) -> None:
    """Accumulate one echo per frame, centered at round(range / bin spacing)."""
    frames, nbins = data.shape
    dt = 1.0 / config.fast_time_rate
    sigma = config.pulse_sigma_seconds
    half = int(np.ceil(4 * sigma / dt))
    centers = np.round(ranges / config.bin_spacing).astype(np.int64)
    offs = np.arange(-half, half + 1)
    cols = centers[:, None] + offs[None, :]
    valid = (cols >= 0) & (cols < nbins)
    t = offs * dt
    shape = np.exp(-(t**2) / (2 * sigma**2)) * np.cos(2 * np.pi * config.carrier_freq * t)
    contrib = amplitudes[:, None] * shape[None, :]
    rows = np.broadcast_to(np.arange(frames)[:, None], cols.shape)
    np.add.at(data, (rows[valid], np.clip(cols, 0, nbins - 1)[valid]), contrib[valid])


def synthesize_record(
    scene: SceneTrajectory, config: RadarConfig, seed: int
) -> RadarRecord:
    """Sum person echoes, multipath ghosts, clutter and noise into a record."""
    frames = config.frames_per_record
    if scene.frames < frames:
        raise DomainError(
            f"scene has {scene.frames} frames, record needs {frames}"
        )
    data = np.zeros((frames, config.range_bins))

    for i in range(scene.n_people):
        prng = np.random.default_rng([_TAG_PERSON, seed, i])
        lo, hi = config.rcs_range
        rcs = float(np.exp(prng.uniform(np.log(lo), np.log(hi)))) if hi > lo else lo
        nb = config.body_scatter_count
        body_extra = prng.uniform(0.05, config.body_scatter_spread, size=nb)
        body_gain = prng.uniform(0.3, 0.7, size=nb)
        glo, ghi = config.ghost_count_range
        n_ghosts = int(prng.integers(glo, ghi + 1)) if ghi > 0 else 0
        ghost_extra = prng.uniform(0.1, 0.8, size=n_ghosts)
        ghost_gain = prng.uniform(0.2, 0.5, size=n_ghosts)
        if config.scintillation_sd > 0:
            flicker = 1.0 + config.scintillation_sd * prng.standard_normal(frames)
            body_flicker = 1.0 + config.scintillation_sd * prng.standard_normal((nb, frames))
        else:
            flicker = np.ones(frames)
            body_flicker = np.ones((nb, frames))

        ranges = scene.positions[:frames, i, 0]
        blockers = scene.blockers[:frames, i]
        # Two-way free-space amplitude over the true radar-to-body distance.
        slant = np.sqrt(config.mount_height**2 + ranges**2)
        base = (
            rcs
            * np.clip(slant, 0.05, None) ** -2.0
            * config.shadow_factor ** blockers
        )
        _add_pulse(data, ranges, base * flicker, config)
        # Secondary body scattering centers trail the leading reflection.
        for bi in range(nb):
            _add_pulse(
                data,
                ranges + body_extra[bi],
                base * body_gain[bi] * body_flicker[bi],
                config,
            )
        for extra, gain in zip(ghost_extra, ghost_gain):
            _add_pulse(data, ranges + extra, base * flicker * gain, config)

    clutter = build_clutter(config)
    data += clutter.static_template[None, :]
    nrng = np.random.default_rng([_TAG_NOISE, seed])
    if clutter.jitter_sigma > 0:
        data += clutter.jitter_sigma * nrng.standard_normal(data.shape)
    if config.noise_sigma > 0:
        data += config.noise_sigma * nrng.standard_normal(data.shape)

    if not np.all(np.isfinite(data)):
        raise DomainError("synthesized record contains non-finite values")
    return RadarRecord(data=data, scene=scene, config=config, seed=seed)


def slice_samples(record: RadarRecord) -> list[RadarMatrix]:
    """Cut a record into consecutive 50-frame samples, labeled with the count."""
    frames = record.data.shape[0]
    if frames % FRAMES_PER_SAMPLE != 0:
        raise DomainError(
            f"record frame count {frames} is not a multiple of {FRAMES_PER_SAMPLE}"
        )
    out = []
    for k in range(frames // FRAMES_PER_SAMPLE):
        block = record.data[k * FRAMES_PER_SAMPLE : (k + 1) * FRAMES_PER_SAMPLE]
        out.append(
            RadarMatrix(
                data=block.copy(), stage=Stage.RAW, label=record.scene.n_people
            )
        )
    return out
