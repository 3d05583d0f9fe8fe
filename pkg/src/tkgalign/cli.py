"""Command-line pipelines.

Subcommands: align, ablate, sweep, synth, seeds, eval. Every run is driven
by a single declarative config file (YAML or JSON) mapping one-to-one onto
the typed configs of the library modules; environment variables are never
consulted. Runs are reproducible from (config, seed).
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np
import yaml

from . import io as kg_io
from .aligner import AlignConfig, IterationResult, iterate
from .encoder import EncoderConfig, init_embeddings
from .evaluate import EvalReport, evaluate
from .kg import AlignmentPairSet
from .seeds import generate_seeds
from .synth import SynthParams, make_benchmark, write_benchmark
from .timesim import build_time_dictionary, build_time_similarity_matrix
from .trainer import TrainConfig


class ConfigError(ValueError):
    pass


ABLATION_ALIASES = {
    "relation-fusion": "relation-fusion",
    "rff": "relation-fusion",
    "global-concat": "global-concat",
    "gar": "global-concat",
    "time-matching": "time-matching",
    "tsm": "time-matching",
}


def load_config(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        cfg = yaml.safe_load(f)
    if not isinstance(cfg, dict):
        raise ConfigError(f"config file {path} must contain a mapping")
    return cfg


def _build(cls, section: dict, name: str):
    try:
        return cls(**(section or {}))
    except TypeError as exc:
        raise ConfigError(f"invalid field in [{name}] section: {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"invalid value in [{name}] section: {exc}") from None


def parse_configs(cfg: dict) -> tuple[kg_io.DatasetLayout, EncoderConfig, TrainConfig, AlignConfig, dict]:
    if "dataset" not in cfg:
        raise ConfigError("config needs a 'dataset' entry")
    ds = cfg["dataset"]
    if isinstance(ds, str):
        layout = kg_io.DatasetLayout.from_dir(ds)
    else:
        layout = kg_io.DatasetLayout(
            quads1=Path(ds["quads1"]),
            quads2=Path(ds["quads2"]),
            sup_pairs=Path(ds["sup_pairs"]) if ds.get("sup_pairs") else None,
            ref_pairs=Path(ds["ref_pairs"]) if ds.get("ref_pairs") else None,
        )
    for p in (layout.quads1, layout.quads2):
        if not Path(p).exists():
            raise ConfigError(f"quadruple file missing: {p}")
    enc = _build(EncoderConfig, cfg.get("encoder"), "encoder")
    trn = _build(TrainConfig, cfg.get("train"), "train")
    aln = _build(AlignConfig, cfg.get("align"), "align")
    ev = cfg.get("eval") or {}
    return layout, enc, trn, aln, ev


def run_alignment(
    cfg: dict, out_dir: Path | None = None
) -> tuple[EvalReport | None, IterationResult, dict]:
    """Full pipeline: load, (generate seeds if none), train/bootstrap,
    predict, evaluate, write artifacts. Returns (report, result, summary)."""
    layout, enc, trn, aln, ev = parse_configs(cfg)
    out = Path(out_dir or cfg.get("output_dir", "out"))
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.time()

    kg1, kg2, vocab, seeds, refs = kg_io.load_dataset(layout)
    dic1 = build_time_dictionary(kg1)
    dic2 = build_time_dictionary(kg2)
    big = kg1.entity_count * kg2.entity_count > 8_000_000
    time_matrix = build_time_similarity_matrix(dic1, dic2, sparse=big)

    unsupervised = len(seeds) == 0
    if unsupervised:
        seeds = generate_seeds(time_matrix)
        kg_io.write_pairs(seeds, out / "generated_pairs")
        if len(seeds) == 0:
            raise ConfigError("no seeds given and none could be generated from timestamps")

    state = init_embeddings(enc, kg1.entity_count + kg2.entity_count,
                            kg1.relation_count + kg2.relation_count)
    result = iterate(state, kg1, kg2, seeds, enc, trn, aln, time_matrix,
                     references=refs if len(refs) else None)

    kg_io.write_predictions(result.predictions, out / "predictions.tsv")
    with open(out / "loss.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["epoch", "loss"])
        w.writerows(enumerate(result.losses, start=1))
    with open(out / "iterations.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["iteration", "pseudo_pairs_added", "train_pool_size"])
        w.writerows(result.report)

    report = None
    if len(refs) and result.similarity is not None:
        report = evaluate(
            result.similarity,
            refs,
            ks=ev.get("ks", (1, 10)),
            bidirectional=ev.get("bidirectional", False),
        )

    mode = ("unsupervised " if unsupervised else "supervised ") + (
        "non-iterative" if aln.iterations == 1 else "iterative"
    )
    summary = {
        "mode": mode,
        "seed_count": len(seeds),
        "parameter_count": state.parameter_count,
        "merged_timestamps": vocab.size,
        "wall_clock_seconds": round(time.time() - t0, 3),
        "config": cfg,
    }
    if report is not None:
        report.metadata.update({"mode": mode, "iterations": aln.iterations})
        summary.update(report.to_dict())
        summary.pop("config", None)
        summary["config"] = cfg
    with open(out / "report.json", "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2, default=str)
    with open(out / "report.txt", "w", encoding="utf-8") as f:
        if report is not None:
            f.write(report.to_text() + "\n")
        f.write(f"mode = {mode}\nseeds = {len(seeds)}\n")
    return report, result, summary


def apply_ablation(cfg: dict, component: str) -> dict:
    key = ABLATION_ALIASES.get(component.lower())
    if key is None:
        raise ConfigError(
            f"unknown ablation component {component!r}; "
            f"expected one of {sorted(set(ABLATION_ALIASES))}"
        )
    cfg = json.loads(json.dumps(cfg))  # deep copy
    if key == "relation-fusion":
        cfg.setdefault("encoder", {})["ablate_relation_fusion"] = True
    elif key == "global-concat":
        cfg.setdefault("encoder", {})["ablate_global_concat"] = True
    else:
        cfg.setdefault("align", {})["alpha"] = 0.0
    return cfg


def cmd_align(args) -> int:
    cfg = load_config(args.config)
    report, _, summary = run_alignment(cfg, args.output_dir)
    print(f"mode: {summary['mode']}")
    if report is not None:
        print(report.to_text())
    return 0


def cmd_ablate(args) -> int:
    cfg = load_config(args.config)
    out = Path(args.output_dir or cfg.get("output_dir", "out"))
    full_report, _, _ = run_alignment(cfg, out / "full")
    ablated_cfg = apply_ablation(cfg, args.component)
    abl_report, _, _ = run_alignment(ablated_cfg, out / f"ablate_{ABLATION_ALIASES[args.component.lower()]}")
    for label, rep in (("full", full_report), (args.component, abl_report)):
        if rep is None:
            print(f"{label}: no references, nothing to score")
        else:
            print(f"{label}: hits@1={rep.hits_at.get(1, float('nan')):.4f} mrr={rep.mrr:.4f}")
    return 0


SWEEP_TARGETS = {
    "alpha": ("align", "alpha", float),
    "layers": ("encoder", "layers", int),
    "dimension": ("encoder", "dim", int),
}


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if not args.values:
        raise ConfigError("sweep needs at least one value")
    section, field_name, cast = SWEEP_TARGETS[args.parameter]
    out = Path(args.output_dir or cfg.get("output_dir", "out"))
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for raw in args.values:
        value = cast(raw)
        run_cfg = json.loads(json.dumps(cfg))
        run_cfg.setdefault(section, {})[field_name] = value
        report, _, _ = run_alignment(run_cfg, out / f"{args.parameter}_{value}")
        rows.append(
            {
                args.parameter: value,
                "hits@1": report.hits_at.get(1) if report else None,
                "hits@10": report.hits_at.get(10) if report else None,
                "mrr": report.mrr if report else None,
            }
        )
    sweep_path = out / "sweep.csv"
    with open(sweep_path, "w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=list(rows[0].keys()))
        w.writeheader()
        w.writerows(rows)
    for row in rows:
        print("\t".join(str(v) for v in row.values()))
    return 0


def cmd_synth(args) -> int:
    params = SynthParams(
        entities=args.entities,
        relations=args.relations,
        timestamps=args.timestamps,
        quads_per_entity=args.quads_per_entity,
        edge_noise=args.edge_noise,
        time_noise=args.time_noise,
        seed_pairs=args.seed_pairs,
        unique_times=args.unique_times,
        rng_seed=args.rng_seed,
    )
    ds = make_benchmark(params)
    layout = write_benchmark(ds, args.out_dir)
    print(f"wrote {len(ds.quads1)}+{len(ds.quads2)} quadruples, "
          f"{len(ds.sup_pairs)} seed / {len(ds.ref_pairs)} reference pairs to {args.out_dir}")
    return 0


def cmd_seeds(args) -> int:
    cfg = load_config(args.config)
    layout, *_ = parse_configs(cfg)
    out = Path(args.output_dir or cfg.get("output_dir", "out"))
    out.mkdir(parents=True, exist_ok=True)
    kg1, kg2, _, _, refs = kg_io.load_dataset(layout)
    big = kg1.entity_count * kg2.entity_count > 8_000_000
    matrix = build_time_similarity_matrix(
        build_time_dictionary(kg1), build_time_dictionary(kg2), sparse=big
    )
    seeds = generate_seeds(matrix)
    kg_io.write_pairs(seeds, out / "generated_pairs")
    print(f"generated {len(seeds)} seed pairs")
    if len(refs):
        gold = refs.as_set()
        checkable = [p for p in seeds.pairs if p[0] in set(refs.sources())]
        if checkable:
            precision = sum(p in gold for p in checkable) / len(checkable)
            print(f"precision vs references: {precision:.4f} over {len(checkable)} checkable pairs")
    return 0


def cmd_eval(args) -> int:
    cfg = load_config(args.config)
    layout, *_ = parse_configs(cfg)
    *_, refs = kg_io.load_dataset(layout)
    if not len(refs):
        raise ConfigError("dataset has no reference pairs to score against")
    preds = kg_io.read_predictions(Path(args.predictions))
    by_source = {a: b for a, b in preds.pairs}
    gold = refs.pairs
    hit = sum(1 for a, b in gold if by_source.get(a) == b)
    covered = sum(1 for a, _ in gold if a in by_source)
    print(f"references: {len(gold)}  predicted: {covered}  hits@1: {hit / len(gold):.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tkgalign",
                                description="Entity alignment across temporal knowledge graphs")
    p.add_argument("--deterministic", action="store_true",
                   help="force single-worker, fixed-order reductions (the default; kept as an explicit switch)")
    sub = p.add_subparsers(dest="command", required=True)

    def add_cfg(sp):
        sp.add_argument("config", help="YAML/JSON config file")
        sp.add_argument("--output-dir", default=None)

    sp = sub.add_parser("align", help="run the full alignment pipeline")
    add_cfg(sp)
    sp.set_defaults(func=cmd_align)

    sp = sub.add_parser("ablate", help="paired run with one component disabled")
    add_cfg(sp)
    sp.add_argument("--component", required=True,
                    help="relation-fusion|global-concat|time-matching (aliases rff|gar|tsm)")
    sp.set_defaults(func=cmd_ablate)

    sp = sub.add_parser("sweep", help="rerun the pipeline over a hyperparameter range")
    add_cfg(sp)
    sp.add_argument("--parameter", required=True, choices=sorted(SWEEP_TARGETS))
    sp.add_argument("--values", nargs="+", required=True)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("synth", help="generate a synthetic benchmark dataset")
    sp.add_argument("out_dir")
    sp.add_argument("--entities", type=int, default=1000)
    sp.add_argument("--relations", type=int, default=10)
    sp.add_argument("--timestamps", type=int, default=50)
    sp.add_argument("--quads-per-entity", type=int, default=8)
    sp.add_argument("--edge-noise", type=float, default=0.05)
    sp.add_argument("--time-noise", type=float, default=0.05)
    sp.add_argument("--seed-pairs", type=int, default=50)
    sp.add_argument("--unique-times", action=argparse.BooleanOptionalAction, default=True)
    sp.add_argument("--rng-seed", type=int, default=0)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("seeds", help="generate unsupervised alignment seeds only")
    add_cfg(sp)
    sp.set_defaults(func=cmd_seeds)

    sp = sub.add_parser("eval", help="score an existing prediction file")
    add_cfg(sp)
    sp.add_argument("--predictions", required=True)
    sp.set_defaults(func=cmd_eval)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, kg_io.ParseError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
