"""Command-line benchmark pipeline: simulate -> extract -> evaluate -> report."""

from __future__ import annotations

import argparse
import multiprocessing
import sys
import time

import numpy as np

from . import __version__
from .config import PipelineConfig, default_config_text, load_config
from .errors import ConfigError, DomainError, FormatError
from .features import feature_length, feature_names
from .io import (
    FeatureSet,
    RecordSet,
    read_features,
    read_records,
    write_feature_csv,
    write_features,
    write_records,
)
from .learn import (
    ClassifierConfig,
    ClassifierKind,
    FEATURE_LAYOUT_VERSION,
    LabeledDataset,
    run_protocol,
)
from .pipeline import extract_features
from .report import (
    load_report_json,
    render_report_text,
    write_ablation_csv,
    write_classifier_tables,
    write_report_json,
)
from .simulate import (
    FRAMES_PER_SAMPLE,
    Scenario,
    generate_scene,
    slice_samples,
    synthesize_record,
)
from .types import RadarMatrix, Stage

_CTF_SLICE = slice(0, 14)
_DBF_SLICE = slice(14, None)

_worker_state: dict = {}


def _record_seed(master: int, scenario: Scenario, n_people: int, index: int) -> int:
    rng = np.random.default_rng([master, scenario.code, n_people, index])
    return int(rng.integers(0, 2**31))


def _simulate_one(task):
    scenario_value, n_people, seed = task
    cfg: PipelineConfig = _worker_state["config"]
    scenario = Scenario(scenario_value)
    scene = generate_scene(
        scenario,
        n_people,
        seed,
        frames=cfg.radar.frames_per_record,
        frame_interval=cfg.radar.frame_interval,
    )
    record = synthesize_record(scene, cfg.radar, seed)
    return record.data.astype(np.float32)


def _extract_one(task):
    record_f32, label = task
    cfg: PipelineConfig = _worker_state["config"]
    rows = []
    record = record_f32.astype(np.float64)
    for k in range(record.shape[0] // FRAMES_PER_SAMPLE):
        block = record[k * FRAMES_PER_SAMPLE : (k + 1) * FRAMES_PER_SAMPLE]
        raw = RadarMatrix(block, Stage.RAW, label=int(label))
        vec = extract_features(raw, cfg.filter, cfg.curvelet, cfg.features)
        rows.append(vec.values.astype(np.float32))
    return rows


def _run_tasks(worker, tasks, config: PipelineConfig, workers: int):
    _worker_state["config"] = config
    if workers <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(
        workers, initializer=_init_worker, initargs=(config,)
    ) as pool:
        return pool.map(worker, tasks, chunksize=max(1, len(tasks) // (4 * workers)))


def _init_worker(config: PipelineConfig):
    _worker_state["config"] = config


def _scenario_list(config: PipelineConfig, choice: str) -> list[Scenario]:
    if choice == "all":
        return list(config.plan.scenarios)
    wanted = Scenario(choice)
    if wanted not in config.plan.scenarios:
        raise ConfigError(f"scenario {choice} is not in the configured plan")
    return [wanted]


def cmd_simulate(config: PipelineConfig, out_stem: str, scenario: str = "all", workers: int = 1) -> dict:
    """Generate every planned record and write one container per scenario."""
    t0 = time.perf_counter()
    paths = {}
    for sc in _scenario_list(config, scenario):
        tasks = []
        labels = []
        for n_people in config.plan.classes_for(sc):
            for rec in range(config.plan.records_per_class):
                tasks.append((sc.value, n_people, _record_seed(config.seed, sc, n_people, rec)))
                labels.append(n_people)
        blocks = _run_tasks(_simulate_one, tasks, config, workers)
        data = (
            np.stack(blocks)
            if blocks
            else np.zeros((0, config.radar.frames_per_record, config.radar.range_bins), np.float32)
        )
        path = f"{out_stem}.{sc.value}.uwbr"
        write_records(path, RecordSet(data=data, labels=np.array(labels, np.uint8), stage=Stage.RAW))
        paths[sc.value] = path
    return {"paths": paths, "seconds": time.perf_counter() - t0}


def cmd_extract(config: PipelineConfig, in_stem: str, out_stem: str, scenario: str = "all", workers: int = 1) -> dict:
    """Read record containers, run the feature pipeline, write features + CSV."""
    t0 = time.perf_counter()
    paths = {}
    n_feat = feature_length(config.radar.range_bins, config.features.bin_sizes)
    names = feature_names(config.radar.range_bins, config.features.bin_sizes)
    for sc in _scenario_list(config, scenario):
        records = read_records(f"{in_stem}.{sc.value}.uwbr")
        if records.data.shape[0] and records.data.shape[1] % FRAMES_PER_SAMPLE != 0:
            raise FormatError(
                f"record frame count {records.data.shape[1]} not a multiple of {FRAMES_PER_SAMPLE}"
            )
        tasks = list(zip(records.data, records.labels))
        groups = _run_tasks(_extract_one, tasks, config, workers)
        rows = [row for group in groups for row in group]
        slices = records.data.shape[1] // FRAMES_PER_SAMPLE if records.data.shape[0] else 0
        labels = np.repeat(records.labels, slices) if rows else np.zeros(0, np.uint8)
        features = (
            np.stack(rows).astype(np.float32)
            if rows
            else np.zeros((0, n_feat), np.float32)
        )
        fset = FeatureSet(features=features, labels=labels, layout_version=FEATURE_LAYOUT_VERSION)
        path = f"{out_stem}.{sc.value}.uwbf"
        write_features(path, fset)
        write_feature_csv(f"{out_stem}.{sc.value}.features.csv", fset, names)
        paths[sc.value] = path
    return {"paths": paths, "seconds": time.perf_counter() - t0}


def _summary_dict(summary) -> dict:
    return summary.as_dict()


def cmd_evaluate(config: PipelineConfig, in_stem: str, out_path: str, scenario: str = "all", workers: int = 1) -> dict:
    """Run the repeated-split protocol for every scenario and classifier."""
    t0 = time.perf_counter()
    scenarios = {}
    timings = {}
    for sc in _scenario_list(config, scenario):
        fset = read_features(f"{in_stem}.{sc.value}.uwbf")
        if fset.layout_version != FEATURE_LAYOUT_VERSION:
            raise FormatError(
                f"feature layout {fset.layout_version} does not match "
                f"expected {FEATURE_LAYOUT_VERSION}"
            )
        data = LabeledDataset(
            features=fset.features.astype(np.float64),
            labels=fset.labels.astype(np.int64),
            scenario=sc.value,
        )
        if len(np.unique(data.labels)) < 2:
            raise FormatError(f"{sc.value}: need at least 2 classes to evaluate")
        body = {"classifiers": {}, "ablations": {}}
        for kind in config.classifiers:
            cfg = ClassifierConfig(**{**config.learn_base.__dict__, "kind": kind})
            t1 = time.perf_counter()
            summary = run_protocol(
                data, cfg, split=config.split, repeats=config.repeats, seed=config.seed
            )
            timings[f"{sc.value}.{kind.value}"] = time.perf_counter() - t1
            body["classifiers"][kind.value] = _summary_dict(summary)
        if config.ablations:
            rf_cfg = ClassifierConfig(
                **{**config.learn_base.__dict__, "kind": ClassifierKind.RANDOM_FOREST}
            )
            cuts = {
                "hybrid": slice(None),
                "ctf_only": _CTF_SLICE,
                "dbf_only": _DBF_SLICE,
            }
            for name, cut in cuts.items():
                sub = LabeledDataset(data.features[:, cut], data.labels, sc.value)
                t1 = time.perf_counter()
                summary = run_protocol(
                    sub, rf_cfg, split=config.split, repeats=config.repeats, seed=config.seed
                )
                timings[f"{sc.value}.ablation.{name}"] = time.perf_counter() - t1
                body["ablations"][name] = _summary_dict(summary)
        scenarios[sc.value] = body
    report = {
        "provenance": {
            "version": f"uwbcount-{__version__}",
            "seed": config.seed,
            "config_hash": config.config_hash(),
            "feature_layout": FEATURE_LAYOUT_VERSION,
        },
        "scenarios": scenarios,
        "timings": {**timings, "total": time.perf_counter() - t0},
    }
    write_report_json(out_path, report)
    stem = out_path[:-5] if out_path.endswith(".json") else out_path
    write_classifier_tables(stem, report)
    write_ablation_csv(stem, report)
    return report


def cmd_report(report_path: str) -> str:
    text = render_report_text(load_report_json(report_path))
    print(text)
    return text


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uwbcount",
        description="IR-UWB people-counting benchmark pipeline",
    )
    parser.add_argument("--version", action="version", version=f"uwbcount {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file (defaults apply if omitted)")
    common.add_argument("--seed", type=int, help="override the config master seed")
    common.add_argument("--workers", type=int, default=1, help="worker processes")
    common.add_argument(
        "--scenario", choices=["walk3", "walk4", "queue", "all"], default="all"
    )

    p = sub.add_parser("simulate", parents=[common], help="generate record containers")
    p.add_argument("--out", required=True, help="output stem for .<scenario>.uwbr files")

    p = sub.add_parser("extract", parents=[common], help="records -> feature containers")
    p.add_argument("input", help="input stem of .<scenario>.uwbr files")
    p.add_argument("--out", required=True, help="output stem for .<scenario>.uwbf files")

    p = sub.add_parser("evaluate", parents=[common], help="features -> run report")
    p.add_argument("input", help="input stem of .<scenario>.uwbf files")
    p.add_argument("--out", required=True, help="output report JSON path")

    p = sub.add_parser("report", help="render a report JSON as text tables")
    p.add_argument("input", help="report JSON path")

    p = sub.add_parser("print-config", help="print the default configuration")
    return parser


def _load(args) -> PipelineConfig:
    config = load_config(args.config) if args.config else load_config_default()
    if args.seed is not None:
        config.seed = args.seed
        config.raw_items["seed"] = str(args.seed)
        config.learn_base = ClassifierConfig(
            **{**config.learn_base.__dict__, "seed": args.seed}
        )
    return config


def load_config_default() -> PipelineConfig:
    from .config import parse_config_text

    return parse_config_text(default_config_text(), source="<defaults>")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "print-config":
            print(default_config_text(), end="")
        elif args.command == "simulate":
            config = _load(args)
            out = cmd_simulate(config, args.out, args.scenario, args.workers)
            for sc, path in out["paths"].items():
                print(f"wrote {path}")
        elif args.command == "extract":
            config = _load(args)
            out = cmd_extract(config, args.input, args.out, args.scenario, args.workers)
            for sc, path in out["paths"].items():
                print(f"wrote {path}")
        elif args.command == "evaluate":
            config = _load(args)
            cmd_evaluate(config, args.input, args.out, args.scenario, args.workers)
            print(f"wrote {args.out}")
        elif args.command == "report":
            cmd_report(args.input)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
