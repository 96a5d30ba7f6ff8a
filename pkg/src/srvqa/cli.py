"""Command-line interface.

Subcommands:
    score        one reference/distorted pair -> features + fused score
    train        fit the fused metric from a feature CSV
    ablate       feature-pair ablation over a feature CSV
    bench        run the benchmark pipeline from a config file
    bsq          BSQ-rate between two RD curves given as CSV
    bt           Bradley-Terry scores from a JSONL vote log
    curate       k-means representative selection from a feature CSV
    serve-study  vote-collection HTTP API + static rater UI
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np


def _read_feature_csv(path):
    """Rows: group_id, subjective_score and the 9 feature columns."""
    from .fusion import FEATURE_NAMES, FeatureVector, TrainingSample

    samples = []
    with open(path, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            features = FeatureVector(
                **{name: float(row[name]) for name in FEATURE_NAMES}
            )
            samples.append(
                TrainingSample(
                    features=features,
                    subjective_score=float(row["subjective_score"]),
                    group_id=row["group_id"],
                )
            )
    return samples


def cmd_score(args) -> int:
    from .bench.adapters import load_clip
    from .fusion import assemble_features, load_model
    from .providers import stub_handle

    ref = load_clip(args.reference)
    dist = load_clip(args.distorted)
    if args.bitrate_kbps:
        dist = dist.with_metadata(encoded_bitrate_kbps=args.bitrate_kbps)
    providers = {"lpips": stub_handle(), "mdtvsfa": stub_handle()}
    features = assemble_features(ref, dist, providers)
    payload = {"features": features.to_dict()}
    if args.model:
        model = load_model(args.model)
        payload["score"] = model.predict(features)
        payload["active_features"] = list(model.active_features)
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    print()
    return 0


def cmd_train(args) -> int:
    from .fusion import DEFAULT_ACTIVE_FEATURES, save_model, train_fusion_model

    samples = _read_feature_csv(args.features)
    active = args.active.split(",") if args.active else DEFAULT_ACTIVE_FEATURES
    model, solution = train_fusion_model(
        samples, active_features=active, C=args.C, epsilon=args.epsilon
    )
    save_model(model, args.output)
    print(
        f"trained on {len(samples)} samples: "
        f"objective {solution.primal_objective:.6f}, "
        f"duality gap {solution.duality_gap:.2e}, "
        f"iterations {solution.iterations}"
    )
    print(f"model written to {args.output}")
    return 0


def cmd_ablate(args) -> int:
    from .fusion import FEATURE_NAMES, ablate_feature_pairs

    samples = _read_feature_csv(args.features)
    report = ablate_feature_pairs(
        samples, candidates=FEATURE_NAMES, folds=args.folds, C=args.C,
        epsilon=args.epsilon,
    )
    for entry in report.entries:
        pair = " + ".join(entry.removed_pair)
        print(f"remove {pair:45s} worst SRCC {entry.worst_srcc:+.4f}")
    print(f"best removal: {report.best_removed_pair}")
    print(f"kept features: {', '.join(report.best_subset)}")
    if args.output:
        payload = {
            "entries": [
                {
                    "removed_pair": list(e.removed_pair),
                    "worst_srcc": e.worst_srcc,
                    "fold_srcc": list(e.fold_srcc),
                }
                for e in report.entries
            ],
            "best_removed_pair": list(report.best_removed_pair),
            "best_subset": list(report.best_subset),
        }
        Path(args.output).write_text(json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_bench(args) -> int:
    from .bench import load_config, make_study_crops, run_pipeline

    config = load_config(args.config)
    result = run_pipeline(config)
    stats = result.job_stats
    print(
        f"pipeline done: {len(result.rows)} variants measured, "
        f"{stats['executed']} jobs executed, {stats['cached']} cached, "
        f"{stats['failed']} failed"
    )
    print(f"report: {result.report_path}")
    if args.crops:
        entries, regions = make_study_crops(config, result)
        print(f"{len(entries)} study crops written, regions: "
              + ", ".join(f"{c}@{r.x},{r.y}" for c, r in sorted(regions.items())))
    return 0 if not result.failures else 1


def _read_rd_csv(path, label):
    from .analysis import RDCurve

    points = []
    with open(path, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            points.append((float(row["bitrate_kbps"]), float(row["quality"])))
    return RDCurve(label=label, points=tuple(points))


def cmd_bsq(args) -> int:
    from .analysis import bsq_rate

    test = _read_rd_csv(args.test, "test")
    ref = _read_rd_csv(args.reference, "reference")
    result = bsq_rate(test, ref)
    print(
        f"BSQ-rate {result.bsq_rate:.4f} over quality "
        f"[{result.quality_range[0]:.4f}, {result.quality_range[1]:.4f}]"
    )
    return 0


def cmd_bt(args) -> int:
    from .subjective import bradley_terry_fit, filter_participants, read_votes
    from .subjective.bradley_terry import rescale_scores

    votes = read_votes(args.votes)
    kept, report = filter_participants(votes)
    print(
        f"{report.total_participants} participants, "
        f"{report.excluded_participants} excluded, "
        f"{report.retained_votes} votes retained"
    )
    clips = sorted({v.pair_id.clip_id for v in kept if not v.is_verification})
    payload = {}
    for clip in clips:
        abilities = bradley_terry_fit(kept, clip)
        scores = rescale_scores(abilities)
        payload[clip] = {
            "abilities": {
                m: float(a) for m, a in zip(abilities.methods, abilities.abilities)
            },
            "scores": scores,
            "smoothed": abilities.smoothed,
        }
        for method, score in sorted(scores.items(), key=lambda kv: -kv[1]):
            print(f"  {clip} {method:30s} {score:.4f}")
    if args.output:
        Path(args.output).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_curate(args) -> int:
    from .analysis import kmeans_select

    ids, rows = [], []
    with open(args.features, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        feature_cols = [c for c in reader.fieldnames if c != "video_id"]
        for row in reader:
            ids.append(row["video_id"])
            rows.append([float(row[c]) for c in feature_cols])
    selection = kmeans_select(ids, np.array(rows), k=args.clusters, seed=args.seed)
    for i, video in enumerate(selection.selected):
        print(f"cluster {i}: {video}")
    return 0


def cmd_serve_study(args) -> int:
    import uvicorn

    from .subjective import schedule_pairs, VerificationPair, PairId, Choice
    from .subjective.api import create_study_app

    plan_payload = json.loads(Path(args.plan).read_text())
    methods = plan_payload["methods"]
    clips = plan_payload["clips"]
    pool = [
        VerificationPair(
            pair=PairId(v["a"], v["b"], v["clip"]), expected=Choice(v["expected"])
        )
        for v in plan_payload["verification_pool"]
    ]
    plan = schedule_pairs(
        methods,
        clips,
        pool,
        views_per_pair=plan_payload.get("views_per_pair", 15),
        seed=plan_payload.get("seed", 0),
    )
    app = create_study_app(plan, args.votes, media_dir=args.media)
    if args.ui:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=args.ui, html=True), name="ui")
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="srvqa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score one reference/distorted pair")
    p.add_argument("reference", help=".y4m file or PNG directory")
    p.add_argument("distorted", help=".y4m file or PNG directory")
    p.add_argument("--model", help="trained model JSON; omit for features only")
    p.add_argument("--bitrate-kbps", type=float, default=None)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("train", help="train the fused metric from a feature CSV")
    p.add_argument("features")
    p.add_argument("output")
    p.add_argument("--active", help="comma-separated feature subset")
    p.add_argument("-C", type=float, default=1.0, dest="C")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("ablate", help="feature-pair ablation")
    p.add_argument("features")
    p.add_argument("--output")
    p.add_argument("--folds", type=int, default=3)
    p.add_argument("-C", type=float, default=1.0, dest="C")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("bench", help="run the benchmark pipeline")
    p.add_argument("config")
    p.add_argument("--crops", action="store_true", help="also render study crops")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("bsq", help="BSQ-rate between two RD-curve CSVs")
    p.add_argument("test")
    p.add_argument("reference")
    p.set_defaults(func=cmd_bsq)

    p = sub.add_parser("bt", help="Bradley-Terry scores from a JSONL vote log")
    p.add_argument("votes")
    p.add_argument("--output")
    p.set_defaults(func=cmd_bt)

    p = sub.add_parser("curate", help="k-means video selection")
    p.add_argument("features", help="CSV with video_id + feature columns")
    p.add_argument("--clusters", type=int, default=9)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_curate)

    p = sub.add_parser("serve-study", help="serve the study API and rater UI")
    p.add_argument("plan", help="study plan JSON")
    p.add_argument("votes", help="vote log path (JSONL, appended)")
    p.add_argument("--media", help="directory of pre-rendered crops")
    p.add_argument("--ui", help="directory with the built rater UI")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)
    p.set_defaults(func=cmd_serve_study)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
