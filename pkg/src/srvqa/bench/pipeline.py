"""The benchmark pipeline: downscale, encode, super-resolve, measure, rank.

Every stage is a content-addressed job, so reruns with an unchanged config
are pure cache hits and the pipeline is resumable.  Tool failures mark their
combo as failed and the run continues; failures land in the report.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..analysis.bsq import BsqResult, RDCurve, average_bsq, bsq_rate
from ..analysis.ranking import RankEntry, rank_table
from ..analysis.report import (
    bsq_grid,
    markdown_ranking,
    markdown_table,
    rank_rows_table,
    write_csv,
    write_json,
)
from ..fusion.features import FEATURE_NAMES, assemble_features
from ..media import (
    read_png_sequence,
    read_y4m_file,
    resize_clip,
    write_png_sequence,
    write_y4m_file,
)
from ..media.color import convert_clip
from ..media.frame import ColorSpace
from ..metrics import ms_ssim, psnr
from ..providers import (
    ProviderHandle,
    ProviderKind,
    saliency as saliency_provider,
    stub_handle,
    vmaf_adapter,
)
from .adapters import decode_adapter, encode_adapter, load_clip, run_command, sr_adapter
from .config import NO_SR, PipelineConfig, SRSpec
from .crops import CropEntry, crop_region, render_crops, write_manifest
from .jobs import JobCache, JobFailure, dir_hash, file_hash

REPORT_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class DistortedVariant:
    clip_id: str
    codec: str
    sr: str
    target_bitrate_kbps: float
    achieved_bitrate_kbps: float
    path: str  # y4m file (no_sr) or PNG dir (SR outputs)

    @property
    def label(self) -> str:
        return f"{self.sr}+{self.codec}"


@dataclass
class PipelineResult:
    rows: List[dict]
    variants: List[DistortedVariant]
    bsq_results: List[dict]
    failures: List[dict]
    job_stats: Dict[str, int]
    report_dir: str
    report_path: str


def _provider_handle(spec) -> ProviderHandle:
    if spec.kind == "stub":
        return stub_handle()
    return ProviderHandle(
        kind=ProviderKind(spec.kind), model_source=spec.command, config=spec.config
    )


def _clip_duration(path: Path) -> float:
    return load_clip(path).duration_seconds


class _Runner:
    """Stage implementations bound to one config + cache."""

    def __init__(self, config: PipelineConfig, cache: JobCache):
        self.config = config
        self.cache = cache
        self.providers = {
            name: _provider_handle(spec) for name, spec in config.providers.items()
        }

    # -- stages ------------------------------------------------------------

    def ingest(self, source) -> Tuple[Path, str]:
        """Normalize a source to .y4m and return (path, content hash)."""
        src = Path(source.path)
        if src.is_dir():
            source_hash = dir_hash(src)

            def execute(artifact_dir, record):
                clip = read_png_sequence(src, source_id=source.clip_id)
                out = artifact_dir / "source.y4m"
                write_y4m_file(convert_clip(clip, ColorSpace.YCBCR_BT601), out)
                record.artifacts["y4m"] = str(out)

            record = self.cache.run(
                "ingest", {"clip_id": source.clip_id}, {"source": source_hash}, execute
            )
            return Path(record.artifacts["y4m"]), source_hash
        return src, file_hash(src)

    def downscale(self, clip_id: str, src_path: Path, src_hash: str) -> Tuple[Path, str]:
        w, h = self.config.downscale
        params = {"width": w, "height": h, "template": self.config.downscale_template}

        def execute(artifact_dir, record):
            out = artifact_dir / "lr.y4m"
            if self.config.downscale_template:
                run = run_command(
                    self.config.downscale_template,
                    input=str(src_path),
                    output=str(out),
                    width=w,
                    height=h,
                )
                record.stdout, record.stderr = run.stdout, run.stderr
                record.meta["command"] = run.command
            else:
                clip = read_y4m_file(src_path, source_id=clip_id)
                write_y4m_file(resize_clip(clip, w, h), out)
                record.meta["command"] = f"native:bicubic {w}x{h}"
            record.artifacts["y4m"] = str(out)

        record = self.cache.run("downscale", params, {"source": src_hash}, execute)
        return Path(record.artifacts["y4m"]), file_hash(record.artifacts["y4m"])

    def encode_decode(
        self, codec, input_path: Path, input_hash: str, bitrate: float
    ) -> Tuple[Path, str, float]:
        """Encode then decode; returns (decoded y4m, hash, achieved kbps)."""
        params = {
            "codec": codec.name,
            "encode": codec.encode_template,
            "decode": codec.decode_template,
            "preset": codec.preset,
            "bitrate_kbps": bitrate,
        }
        duration = _clip_duration(input_path)

        def execute(artifact_dir, record):
            artifact = artifact_dir / "encoded.bin"
            decoded = artifact_dir / "decoded.y4m"
            enc_run, achieved = encode_adapter(
                codec, input_path, artifact, bitrate, duration
            )
            dec_run = decode_adapter(codec, artifact, decoded)
            record.artifacts["encoded"] = str(artifact)
            record.artifacts["decoded"] = str(decoded)
            record.meta["achieved_bitrate_kbps"] = achieved
            record.meta["commands"] = [enc_run.command, dec_run.command]
            record.stdout = enc_run.stdout + dec_run.stdout
            record.stderr = enc_run.stderr + dec_run.stderr

        record = self.cache.run("encode", params, {"input": input_hash}, execute)
        return (
            Path(record.artifacts["decoded"]),
            file_hash(record.artifacts["decoded"]),
            float(record.meta["achieved_bitrate_kbps"]),
        )

    def to_png(self, decoded: Path, decoded_hash: str, achieved: float) -> Tuple[Path, str]:
        def execute(artifact_dir, record):
            clip = read_y4m_file(decoded)
            clip = clip.with_metadata(encoded_bitrate_kbps=achieved)
            out = artifact_dir / "frames"
            write_png_sequence(convert_clip(clip, ColorSpace.RGB), out)
            record.artifacts["frames"] = str(out)

        record = self.cache.run(
            "to_png", {"achieved": achieved}, {"decoded": decoded_hash}, execute
        )
        return Path(record.artifacts["frames"]), dir_hash(record.artifacts["frames"])

    def super_resolve(
        self, sr: SRSpec, frames_dir: Path, frames_hash: str
    ) -> Tuple[Path, str]:
        params = {"sr": sr.name, "template": sr.template, "scale": sr.scale}
        expected = len(sorted(frames_dir.glob("*.png")))

        def execute(artifact_dir, record):
            out = artifact_dir / "frames"
            runs = sr_adapter(sr, frames_dir, out, expected)
            record.meta["commands"] = [r.command for r in runs]
            record.stdout = "".join(r.stdout for r in runs)
            record.stderr = "".join(r.stderr for r in runs)
            # carry playback metadata through tools that ignore sidecars
            src_meta = frames_dir / "clip.json"
            dst_meta = out / "clip.json"
            if src_meta.exists() and not dst_meta.exists():
                dst_meta.write_bytes(src_meta.read_bytes())
            record.artifacts["frames"] = str(out)

        record = self.cache.run("sr", params, {"frames": frames_hash}, execute)
        return Path(record.artifacts["frames"]), dir_hash(record.artifacts["frames"])

    def measure(
        self,
        source_path: Path,
        source_hash: str,
        variant: DistortedVariant,
        distorted_hash: str,
    ) -> dict:
        params = {
            "metrics": list(self.config.metrics),
            "providers": {k: h.identity for k, h in sorted(self.providers.items())},
        }
        inputs = {"source": source_hash, "distorted": distorted_hash}

        def execute(artifact_dir, record):
            ref = load_clip(source_path).with_metadata(source_id=variant.clip_id)
            dist = load_clip(variant.path).with_metadata(
                encoded_bitrate_kbps=variant.achieved_bitrate_kbps
            )
            if (dist.width, dist.height) != (ref.width, ref.height):
                raise ValueError(
                    f"distorted {dist.width}x{dist.height} does not match "
                    f"source {ref.width}x{ref.height}"
                )
            features = assemble_features(ref, dist, self.providers)
            values = {}
            if "psnr" in self.config.metrics:
                values["psnr"] = psnr(ref, dist).value
            if "ms_ssim" in self.config.metrics:
                values["ms_ssim"] = ms_ssim(ref, dist).value
            if "vmaf" in self.config.metrics and "vmaf" in self.providers:
                ref_y4m = artifact_dir / "ref.y4m"
                dist_y4m = artifact_dir / "dist.y4m"
                write_y4m_file(convert_clip(ref, ColorSpace.YCBCR_BT601), ref_y4m)
                write_y4m_file(convert_clip(dist, ColorSpace.YCBCR_BT601), dist_y4m)
                values["vmaf"] = vmaf_adapter(
                    self.providers["vmaf"], ref_y4m, dist_y4m
                ).value
            record.meta["features"] = features.to_dict()
            record.meta["metrics"] = values

        record = self.cache.run("measure", params, inputs, execute)
        return {
            "features": dict(record.meta["features"]),
            "metrics": dict(record.meta["metrics"]),
        }


def planned_jobs(config: PipelineConfig) -> Dict[str, int]:
    """Job counts the pipeline will schedule for this config (dry planning)."""
    clips = len(config.sources)
    codecs = len(config.codecs)
    bitrates = len(config.target_bitrates_kbps)
    sr_methods = [s for s in config.sr_methods if not s.is_no_sr]
    has_no_sr = any(s.is_no_sr for s in config.sr_methods)
    encode = clips * codecs * bitrates * (int(bool(sr_methods)) + int(has_no_sr))
    sr = clips * codecs * bitrates * len(sr_methods)
    measure = clips * codecs * bitrates * len(config.sr_methods)
    return {
        "downscale": clips if sr_methods else 0,
        "encode": encode,
        "sr": sr,
        "measure": measure,
    }


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    out_root = Path(config.output_dir)
    out_root.mkdir(parents=True, exist_ok=True)
    cache = JobCache(out_root / "cache")
    runner = _Runner(config, cache)
    failures: List[dict] = []

    def fail(stage: str, context: dict, exc: Exception) -> None:
        failures.append({"stage": stage, **context, "error": str(exc)})

    # phase 1: ingest + downscale, serial per clip
    sources: Dict[str, Tuple[Path, str]] = {}
    lr: Dict[str, Tuple[Path, str]] = {}
    for source in config.sources:
        try:
            path, digest = runner.ingest(source)
            sources[source.clip_id] = (path, digest)
        except (JobFailure, Exception) as exc:
            fail("ingest", {"clip": source.clip_id}, exc)
            continue
        needs_lr = any(not sr.is_no_sr for sr in config.sr_methods)
        if needs_lr:
            try:
                lr[source.clip_id] = runner.downscale(source.clip_id, path, digest)
            except Exception as exc:
                fail("downscale", {"clip": source.clip_id}, exc)

    # phase 2: encode/decode per (clip, codec, bitrate) x {native, low-res}
    def encode_task(clip_id, codec, bitrate, native):
        base = sources[clip_id] if native else lr[clip_id]
        return runner.encode_decode(codec, base[0], base[1], bitrate)

    encoded: Dict[Tuple[str, str, float, bool], Tuple[Path, str, float]] = {}
    encode_jobs = []
    needs_native = any(sr.is_no_sr for sr in config.sr_methods)
    needs_lowres = any(not sr.is_no_sr for sr in config.sr_methods)
    for clip_id in sorted(sources):
        for codec in config.codecs:
            for bitrate in config.target_bitrates_kbps:
                if needs_native:
                    encode_jobs.append((clip_id, codec, bitrate, True))
                if needs_lowres and clip_id in lr:
                    encode_jobs.append((clip_id, codec, bitrate, False))

    with ThreadPoolExecutor(max_workers=config.effective_workers) as pool:
        futures = {
            pool.submit(encode_task, c, codec, b, native): (c, codec.name, b, native)
            for c, codec, b, native in encode_jobs
        }
        for future, key in futures.items():
            try:
                encoded[key] = future.result()
            except Exception as exc:
                fail(
                    "encode",
                    {"clip": key[0], "codec": key[1], "bitrate_kbps": key[2]},
                    exc,
                )

    # phase 3: SR on the low-res decodes; build the distorted variant list
    variants: List[DistortedVariant] = []

    def sr_task(clip_id, codec, bitrate, sr):
        decoded, decoded_hash, achieved = encoded[(clip_id, codec.name, bitrate, False)]
        frames, frames_hash = runner.to_png(decoded, decoded_hash, achieved)
        out_frames, _ = runner.super_resolve(sr, frames, frames_hash)
        return DistortedVariant(
            clip_id=clip_id,
            codec=codec.name,
            sr=sr.name,
            target_bitrate_kbps=bitrate,
            achieved_bitrate_kbps=achieved,
            path=str(out_frames),
        )

    sr_jobs = []
    for clip_id in sorted(sources):
        for codec in config.codecs:
            for bitrate in config.target_bitrates_kbps:
                for sr in config.sr_methods:
                    if sr.is_no_sr:
                        key = (clip_id, codec.name, bitrate, True)
                        if key in encoded:
                            decoded, _, achieved = encoded[key]
                            variants.append(
                                DistortedVariant(
                                    clip_id=clip_id,
                                    codec=codec.name,
                                    sr=NO_SR,
                                    target_bitrate_kbps=bitrate,
                                    achieved_bitrate_kbps=achieved,
                                    path=str(decoded),
                                )
                            )
                    elif (clip_id, codec.name, bitrate, False) in encoded:
                        sr_jobs.append((clip_id, codec, bitrate, sr))

    with ThreadPoolExecutor(max_workers=config.effective_workers) as pool:
        futures = {
            pool.submit(sr_task, c, codec, b, sr): (c, codec.name, b, sr.name)
            for c, codec, b, sr in sr_jobs
        }
        for future, key in futures.items():
            try:
                variants.append(future.result())
            except Exception as exc:
                fail(
                    "sr",
                    {
                        "clip": key[0],
                        "codec": key[1],
                        "bitrate_kbps": key[2],
                        "sr": key[3],
                    },
                    exc,
                )

    variants.sort(
        key=lambda v: (v.clip_id, v.codec, v.sr, v.target_bitrate_kbps)
    )

    # phase 4: metrics + features
    rows: List[dict] = []

    def measure_task(variant: DistortedVariant):
        source_path, source_hash = sources[variant.clip_id]
        path = Path(variant.path)
        distorted_hash = dir_hash(path) if path.is_dir() else file_hash(path)
        measured = runner.measure(source_path, source_hash, variant, distorted_hash)
        return {
            "clip": variant.clip_id,
            "codec": variant.codec,
            "sr": variant.sr,
            "label": variant.label,
            "target_bitrate_kbps": variant.target_bitrate_kbps,
            "achieved_bitrate_kbps": variant.achieved_bitrate_kbps,
            **{f"feature_{k}": v for k, v in measured["features"].items()},
            **measured["metrics"],
        }

    with ThreadPoolExecutor(max_workers=config.effective_workers) as pool:
        futures = {pool.submit(measure_task, v): v for v in variants}
        for future, variant in futures.items():
            try:
                rows.append(future.result())
            except Exception as exc:
                fail(
                    "measure",
                    {
                        "clip": variant.clip_id,
                        "codec": variant.codec,
                        "sr": variant.sr,
                        "bitrate_kbps": variant.target_bitrate_kbps,
                    },
                    exc,
                )

    rows.sort(key=lambda r: (r["clip"], r["codec"], r["sr"], r["target_bitrate_kbps"]))

    # phase 5: RD curves, BSQ vs the same-codec no_sr path, rankings, report
    bsq_results = _bsq_section(config, rows, failures)
    provider_ids = {k: h.identity for k, h in sorted(runner.providers.items())}
    report_dir, report_path = _write_report(
        config, cache, rows, bsq_results, failures, provider_ids
    )
    return PipelineResult(
        rows=rows,
        variants=variants,
        bsq_results=bsq_results,
        failures=failures,
        job_stats=cache.stats,
        report_dir=str(report_dir),
        report_path=str(report_path),
    )


def _quality_column(config: PipelineConfig) -> str:
    q = config.bsq_quality
    return q if q in ("psnr", "ms_ssim", "vmaf") else f"feature_{q}"


def _bsq_section(config, rows, failures) -> List[dict]:
    column = _quality_column(config)
    curves: Dict[Tuple[str, str, str], List[Tuple[float, float]]] = {}
    for row in rows:
        if column not in row:
            continue
        key = (row["clip"], row["codec"], row["sr"])
        curves.setdefault(key, []).append(
            (row["achieved_bitrate_kbps"], row[column])
        )
    results = []
    clips = sorted({k[0] for k in curves})
    codecs = sorted({k[1] for k in curves})
    srs = sorted({k[2] for k in curves})
    per_pair: Dict[Tuple[str, str], List[BsqResult]] = {}
    for clip in clips:
        for codec in codecs:
            ref_points = curves.get((clip, codec, NO_SR))
            if not ref_points:
                continue
            for sr in srs:
                test_points = curves.get((clip, codec, sr))
                if not test_points:
                    continue
                try:
                    ref_curve = RDCurve(label=f"{NO_SR}+{codec}", points=tuple(ref_points))
                    test_curve = RDCurve(label=f"{sr}+{codec}", points=tuple(test_points))
                    result = bsq_rate(test_curve, ref_curve)
                except ValueError as exc:
                    failures.append(
                        {
                            "stage": "bsq",
                            "clip": clip,
                            "codec": codec,
                            "sr": sr,
                            "error": str(exc),
                        }
                    )
                    continue
                per_pair.setdefault((sr, codec), []).append(result)
                results.append({"clip": clip, **result.to_dict()})
    averages = [
        {
            "sr": sr,
            "codec": codec,
            "bsq_rate": average_bsq(items),
            "clips": len(items),
        }
        for (sr, codec), items in sorted(per_pair.items())
    ]
    return [{"per_clip": results, "average": averages, "quality": config.bsq_quality}]


def _write_report(config, cache, rows, bsq_results, failures, provider_ids=None):
    from datetime import datetime, timezone

    report_dir = Path(config.output_dir) / "report"
    report_dir.mkdir(parents=True, exist_ok=True)

    # feature table CSV
    feature_cols = [f"feature_{n}" for n in FEATURE_NAMES]
    header = [
        "clip",
        "codec",
        "sr",
        "label",
        "target_bitrate_kbps",
        "achieved_bitrate_kbps",
    ] + feature_cols + [m for m in ("psnr", "ms_ssim", "vmaf") if m in config.metrics]
    table = [header]
    for row in rows:
        table.append([str(row.get(col, "")) for col in header])
    write_csv(table, report_dir / "features.csv")

    # per-clip ranking by the configured quality column
    column = _quality_column(config)
    rank_sections = {}
    for clip in sorted({r["clip"] for r in rows}):
        by_label: Dict[str, List[dict]] = {}
        for row in rows:
            if row["clip"] == clip and column in row:
                by_label.setdefault(row["label"], []).append(row)
        entries = []
        for label, label_rows in sorted(by_label.items()):
            quality = float(np.mean([r[column] for r in label_rows]))
            metrics = {}
            for m in ("psnr", "ms_ssim", "vmaf"):
                if m in config.metrics and m in label_rows[0]:
                    metrics[m] = float(np.mean([r[m] for r in label_rows]))
            for feat in ("erqa", "lpips"):
                metrics[feat] = float(
                    np.mean([r[f"feature_{feat}"] for r in label_rows])
                )
            entries.append(
                RankEntry(label=label, subjective_score=quality, metrics=metrics)
            )
        if entries:
            ranked = rank_table(entries)
            rank_sections[clip] = [dataclasses.asdict(r) for r in ranked]
            write_csv(rank_rows_table(ranked), report_dir / f"rank_{clip}.csv")

    payload = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "config": {
            "sources": [dataclasses.asdict(s) for s in config.sources],
            "codecs": [dataclasses.asdict(c) for c in config.codecs],
            "sr_methods": [dataclasses.asdict(s) for s in config.sr_methods],
            "target_bitrates_kbps": list(config.target_bitrates_kbps),
            "metrics": list(config.metrics),
            "bsq_quality": config.bsq_quality,
            "downscale": list(config.downscale),
            "seed": config.seed,
            "providers": provider_ids or {},
            "conventions": {
                "color": "BT.601 limited range, round half up",
                "si_ti_pooling": "max",
                "erqa": "canny(100,200), chebyshev-1 match, shift radius 1",
                "bitrate_feature": "achieved (artifact size / duration)",
            },
        },
        "jobs": cache.stats,
        "rows": rows,
        "bsq": bsq_results,
        "rankings": rank_sections,
        "failures": failures,
        "run_info": {
            "finished_at": datetime.now(timezone.utc).isoformat(),
        },
    }
    report_path = report_dir / "report.json"
    write_json(payload, report_path)

    # markdown summary
    lines = ["# Benchmark report", ""]
    lines.append(
        f"{len(rows)} measured variants, jobs: {cache.stats['executed']} executed, "
        f"{cache.stats['cached']} cached, {cache.stats['failed']} failed."
    )
    lines.append("")
    if bsq_results and bsq_results[0]["average"]:
        grid: Dict[str, Dict[str, float]] = {}
        for avg in bsq_results[0]["average"]:
            grid.setdefault(avg["sr"], {})[avg["codec"]] = avg["bsq_rate"]
        codecs = sorted({c.name for c in config.codecs})
        lines.append(f"## Average BSQ-rate over {config.bsq_quality} (lower is better)")
        lines.append("")
        lines.append(markdown_table(bsq_grid(grid, codecs)))
    for clip, section in rank_sections.items():
        lines.append(f"## Ranking: {clip} (by {config.bsq_quality}, mean over bitrates)")
        lines.append("")
        rows_ = [
            RankEntry(
                label=r["label"],
                subjective_score=r["subjective_score"],
                metrics=r["metrics"],
            )
            for r in section
        ]
        lines.append(markdown_ranking(rank_table(rows_)))
    if failures:
        lines.append("## Failures")
        lines.append("")
        for failure in failures:
            lines.append(f"- {failure}")
    (report_dir / "summary.md").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return report_dir, report_path


def make_study_crops(
    config: PipelineConfig,
    result: PipelineResult,
    saliency_handle: Optional[ProviderHandle] = None,
    salt: str = "",
) -> Tuple[List[CropEntry], Dict[str, "object"]]:
    """Cut the shared saliency-centered crop from every method's output at
    the study bitrates; writes crops plus a manifest under the output dir."""
    spec = config.providers.get("saliency")
    handle = saliency_handle or (_provider_handle(spec) if spec else stub_handle())
    regions = {}
    for source in config.sources:
        clip = load_clip(source.path)
        sal = saliency_provider(handle, clip)
        regions[source.clip_id] = crop_region(sal, *config.crop_size)

    study = [
        v
        for v in result.variants
        if v.target_bitrate_kbps in config.study_bitrates_kbps
    ]
    distorted = [
        (v.clip_id, v.label, v.target_bitrate_kbps, load_clip(v.path)) for v in study
    ]
    crops_dir = Path(config.output_dir) / "crops"
    entries = render_crops(regions, distorted, crops_dir, salt=salt)
    write_manifest(entries, regions, crops_dir / "manifest.json")
    return entries, regions
