"""Plain-text key=value pipeline configuration with dotted sections."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .curvelet import CurveletConfig
from .errors import ConfigError
from .learn import ClassifierConfig, ClassifierKind
from .pipeline import FeatureParams
from .preprocess import FilterConfig
from .simulate import FRAMES_PER_SAMPLE, RadarConfig, Scenario

_ALL_KINDS = [k.value for k in ClassifierKind]


def _parse_bool(text: str) -> bool:
    if text.lower() in ("1", "true", "yes"):
        return True
    if text.lower() in ("0", "false", "no"):
        return False
    raise ValueError(f"not a boolean: {text}")


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(p.strip()) for p in text.split(",") if p.strip())


def _parse_str_list(text: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in text.split(",") if p.strip())


def _parse_opt_int(text: str):
    return None if text.lower() in ("none", "") else int(text)


# key -> (parser, default)
_SCHEMA: dict[str, tuple] = {
    "seed": (int, 0),
    "radar.range_bins": (int, 1280),
    "radar.bin_spacing": (float, 0.0039),
    "radar.frames_per_record": (int, 200),
    "radar.frame_interval": (float, 0.025),
    "radar.carrier_freq": (float, 6.8e9),
    "radar.bandwidth_10db": (float, 2.3e9),
    "radar.noise_sigma": (float, 5e-6),
    "radar.clutter_reflector_count": (int, 6),
    "radar.clutter_jitter_sigma": (float, 0.0),
    "radar.direct_leak_amplitude": (float, 3.0),
    "radar.clutter_seed": (int, 0),
    "radar.mount_height": (float, 1.8),
    "radar.rcs_min": (float, 0.7),
    "radar.rcs_max": (float, 1.3),
    "radar.ghosts_min": (int, 1),
    "radar.ghosts_max": (int, 3),
    "radar.body_scatter_count": (int, 2),
    "radar.body_scatter_spread": (float, 0.35),
    "radar.scintillation_sd": (float, 0.08),
    "radar.shadow_factor": (float, 0.5),
    "filter.passband_low": (float, 5.65e9),
    "filter.passband_high": (float, 7.95e9),
    "filter.taps": (int, 129),
    "filter.alpha": (float, 0.9),
    "curvelet.n_scales": (int, 3),
    "curvelet.n_angles_detail": (int, 16),
    "features.bin_sizes": (_parse_int_list, (32, 64, 128)),
    "features.tau": (float, 0.01),
    "features.lambda": (float, 3.0),
    "learn.classifiers": (_parse_str_list, tuple(_ALL_KINDS)),
    "learn.trees": (int, 200),
    "learn.estimators": (int, 50),
    "learn.hidden": (_parse_int_list, (100, 200, 100)),
    "learn.max_depth": (_parse_opt_int, None),
    "learn.boost_depth": (int, 3),
    "learn.min_leaf": (int, 1),
    "learn.feature_subset_size": (_parse_opt_int, None),
    "learn.learning_rate": (float, 1e-3),
    "learn.epochs": (int, 200),
    "learn.batch_size": (int, 32),
    "learn.split": (float, 0.8),
    "learn.repeats": (int, 20),
    "learn.ablations": (_parse_bool, True),
    "plan.scenarios": (_parse_str_list, ("walk3", "walk4", "queue")),
    "plan.max_people": (int, 20),
    "plan.max_people_queue": (int, 15),
    "plan.records_per_class": (int, 40),
}


@dataclass(frozen=True)
class ScenarioPlan:
    scenarios: tuple[Scenario, ...]
    max_people: int
    max_people_queue: int
    records_per_class: int

    def classes_for(self, scenario: Scenario) -> range:
        cap = self.max_people_queue if scenario is Scenario.QUEUE else self.max_people
        return range(0, min(cap, scenario.max_people) + 1)


@dataclass
class PipelineConfig:
    radar: RadarConfig = field(default_factory=RadarConfig)
    filter: FilterConfig = field(default_factory=FilterConfig)
    curvelet: CurveletConfig = field(default_factory=CurveletConfig)
    features: FeatureParams = field(default_factory=FeatureParams)
    classifiers: tuple[ClassifierKind, ...] = tuple(ClassifierKind)
    learn_base: ClassifierConfig = field(default_factory=ClassifierConfig)
    split: float = 0.8
    repeats: int = 20
    ablations: bool = True
    plan: ScenarioPlan = field(
        default_factory=lambda: ScenarioPlan(
            tuple(Scenario), 20, 15, 40
        )
    )
    seed: int = 0
    raw_items: dict[str, str] = field(default_factory=dict)

    def config_hash(self) -> str:
        text = "\n".join(f"{k}={self.raw_items[k]}" for k in sorted(self.raw_items))
        return hashlib.sha256(text.encode()).hexdigest()

    def expected_sample_counts(self) -> dict[str, int]:
        slices = self.radar.frames_per_record // FRAMES_PER_SAMPLE
        return {
            sc.value: len(self.plan.classes_for(sc)) * self.plan.records_per_class * slices
            for sc in self.plan.scenarios
        }


def _format_value(value) -> str:
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    if value is None:
        return "none"
    return str(value)


def default_config_text() -> str:
    lines = ["# uwbcount pipeline configuration (key = value)"]
    lines += [f"{key} = {_format_value(default)}" for key, (_, default) in _SCHEMA.items()]
    return "\n".join(lines) + "\n"


def parse_config_text(text: str, source: str = "<config>") -> PipelineConfig:
    items: dict[str, object] = {key: default for key, (_, default) in _SCHEMA.items()}
    raw_items: dict[str, str] = {
        key: _format_value(default) for key, (_, default) in _SCHEMA.items()
    }
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        parser = _SCHEMA[key][0]
        try:
            items[key] = parser(value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {exc}") from exc
        raw_items[key] = _format_value(items[key])

    try:
        scenarios = tuple(Scenario(s) for s in items["plan.scenarios"])
    except ValueError as exc:
        raise ConfigError(f"{source}: bad scenario name: {exc}") from exc
    try:
        kinds = tuple(ClassifierKind(s) for s in items["learn.classifiers"])
    except ValueError as exc:
        raise ConfigError(f"{source}: bad classifier name: {exc}") from exc

    try:
        radar = RadarConfig(
            range_bins=items["radar.range_bins"],
            bin_spacing=items["radar.bin_spacing"],
            frames_per_record=items["radar.frames_per_record"],
            frame_interval=items["radar.frame_interval"],
            carrier_freq=items["radar.carrier_freq"],
            bandwidth_10db=items["radar.bandwidth_10db"],
            noise_sigma=items["radar.noise_sigma"],
            clutter_reflector_count=items["radar.clutter_reflector_count"],
            clutter_jitter_sigma=items["radar.clutter_jitter_sigma"],
            direct_leak_amplitude=items["radar.direct_leak_amplitude"],
            clutter_seed=items["radar.clutter_seed"],
            mount_height=items["radar.mount_height"],
            rcs_range=(items["radar.rcs_min"], items["radar.rcs_max"]),
            ghost_count_range=(items["radar.ghosts_min"], items["radar.ghosts_max"]),
            body_scatter_count=items["radar.body_scatter_count"],
            body_scatter_spread=items["radar.body_scatter_spread"],
            scintillation_sd=items["radar.scintillation_sd"],
            shadow_factor=items["radar.shadow_factor"],
        )
        filt = FilterConfig(
            passband_low=items["filter.passband_low"],
            passband_high=items["filter.passband_high"],
            taps=items["filter.taps"],
            alpha=items["filter.alpha"],
            sample_rate=RadarConfig(
                range_bins=items["radar.range_bins"],
                bin_spacing=items["radar.bin_spacing"],
            ).fast_time_rate,
        )
        curvelet = CurveletConfig(
            n_scales=items["curvelet.n_scales"],
            n_angles_detail=items["curvelet.n_angles_detail"],
        )
        feats = FeatureParams(
            bin_sizes=items["features.bin_sizes"],
            tau=items["features.tau"],
            threshold_lambda=items["features.lambda"],
        )
        learn_base = ClassifierConfig(
            trees=items["learn.trees"],
            estimators=items["learn.estimators"],
            hidden=items["learn.hidden"],
            max_depth=items["learn.max_depth"],
            boost_depth=items["learn.boost_depth"],
            min_leaf=items["learn.min_leaf"],
            feature_subset_size=items["learn.feature_subset_size"],
            learning_rate=items["learn.learning_rate"],
            epochs=items["learn.epochs"],
            batch_size=items["learn.batch_size"],
            seed=items["seed"],
        )
    except Exception as exc:
        raise ConfigError(f"{source}: {exc}") from exc

    plan = ScenarioPlan(
        scenarios=scenarios,
        max_people=items["plan.max_people"],
        max_people_queue=items["plan.max_people_queue"],
        records_per_class=items["plan.records_per_class"],
    )
    return PipelineConfig(
        radar=radar,
        filter=filt,
        curvelet=curvelet,
        features=feats,
        classifiers=kinds,
        learn_base=learn_base,
        split=items["learn.split"],
        repeats=items["learn.repeats"],
        ablations=items["learn.ablations"],
        plan=plan,
        seed=items["seed"],
        raw_items=raw_items,
    )


def load_config(path: str) -> PipelineConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config_text(text, source=str(path))
