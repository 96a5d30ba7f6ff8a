"""Uniform provider contract for learned metrics and saliency.

Learned models (LPIPS, MDTVSFA, saliency) and VMAF are consumed as external
processes driven by command templates; the toolkit never embeds their
training or inference code.  Deterministic STUB providers with documented
closed forms let the whole pipeline run without model files:

  * LPIPS stub: mean absolute luma difference / 255 (0 identical, 1 opposite).
  * MDTVSFA stub: mean Sobel magnitude of luma / 1020, clamped to [0, 1]
    (1020 is the peak response of the Sobel kernel on 8-bit data).
  * Saliency stub: uniform map, which yields center crops downstream.
"""

from __future__ import annotations

import hashlib
import json
import shlex
import shutil
import subprocess
import tempfile
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping, Optional

import numpy as np
from scipy import ndimage

from .media import VideoClip, luma_f64, write_y4m_file
from .metrics.base import MetricValue, mean_metric
from .metrics.classical import sobel_magnitude

SOBEL_PEAK = 1020.0  # max |gx| = max |gy| = 4 * 255 on 8-bit input


class ProviderKind(Enum):
    LPIPS = "lpips"
    MDTVSFA = "mdtvsfa"
    SALIENCY = "saliency"
    VMAF = "vmaf"
    STUB = "stub"


class ProviderError(Exception):
    """Provider invocation failed; carries the provider's diagnostics."""


@dataclass(frozen=True)
class ProviderHandle:
    """An immutable reference to a metric/saliency provider.

    ``model_source`` is a command template for external providers (None for
    stubs).  Templates use shell-style tokens with {placeholders}; the first
    token must resolve to an existing executable at construction.
    """

    kind: ProviderKind
    model_source: Optional[str] = None
    config: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind is not ProviderKind.STUB:
            if not self.model_source:
                raise ProviderError(f"{self.kind.value} provider needs a model_source")
            argv0 = shlex.split(self.model_source)[0]
            if shutil.which(argv0) is None and not Path(argv0).exists():
                raise ProviderError(f"tool not found: {argv0}")

    @property
    def identity(self) -> str:
        """Stable hash of the provider spec, recorded in reports and models."""
        spec = {
            "kind": self.kind.value,
            "model_source": self.model_source,
            "config": dict(sorted(self.config.items())) if self.config else {},
        }
        return hashlib.sha256(json.dumps(spec, sort_keys=True).encode()).hexdigest()[:16]


def stub_handle() -> ProviderHandle:
    return ProviderHandle(kind=ProviderKind.STUB)


@dataclass(frozen=True)
class SaliencyMap:
    """Non-negative per-pixel weights normalized to sum 1."""

    width: int
    height: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.shape != (self.height, self.width):
            raise ValueError(
                f"weights shape {w.shape} does not match {self.height}x{self.width}"
            )
        if (w < 0).any():
            raise ValueError("saliency weights must be non-negative")
        total = w.sum()
        if total <= 0:
            raise ValueError("saliency weights must not be all zero")
        w = w / total
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def _run_tool(command: str, stderr_context: str) -> str:
    argv = shlex.split(command)
    try:
        proc = subprocess.run(argv, capture_output=True, text=True)
    except FileNotFoundError as exc:
        raise ProviderError(f"tool not found: {argv[0]}") from exc
    if proc.returncode != 0:
        raise ProviderError(
            f"{stderr_context} failed (exit {proc.returncode}): {proc.stderr.strip()}"
        )
    return proc.stdout


def _external_per_frame(handle: ProviderHandle, placeholders: dict) -> list:
    """Run an external provider that writes {"per_frame": [...]} or
    {"value": x} JSON to the {out} path."""
    with tempfile.TemporaryDirectory(prefix="srvqa-provider-") as tmp:
        out_path = Path(tmp) / "result.json"
        placeholders = dict(placeholders, out=str(out_path))
        command = handle.model_source.format(**placeholders)
        _run_tool(command, handle.kind.value)
        try:
            payload = json.loads(out_path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ProviderError(
                f"{handle.kind.value} produced no parsable JSON at {out_path}"
            ) from exc
    if "per_frame" in payload:
        return [float(v) for v in payload["per_frame"]]
    if "value" in payload:
        return [float(payload["value"])]
    raise ProviderError(
        f"{handle.kind.value} JSON lacks 'per_frame' and 'value' keys"
    )


def _clip_to_tempfile(clip: VideoClip, tmp: str, name: str) -> str:
    from .media import ColorSpace, convert_clip

    path = Path(tmp) / f"{name}.y4m"
    write_y4m_file(convert_clip(clip, ColorSpace.YCBCR_BT601), path)
    return str(path)


def lpips_distance(
    handle: ProviderHandle, ref: VideoClip, dist: VideoClip
) -> MetricValue:
    """Perceptual distance, lower is better; mean over frames."""
    if handle.kind not in (ProviderKind.LPIPS, ProviderKind.STUB):
        raise ProviderError(f"wrong provider kind {handle.kind.value} for lpips")
    if (ref.width, ref.height) != (dist.width, dist.height) or len(ref) != len(dist):
        raise ValueError("lpips needs aligned clips of equal dimensions")
    if handle.kind is ProviderKind.STUB:
        per_frame = [
            float(np.mean(np.abs(luma_f64(a) - luma_f64(b))) / 255.0)
            for a, b in zip(ref.frames, dist.frames)
        ]
    else:
        with tempfile.TemporaryDirectory(prefix="srvqa-lpips-") as tmp:
            per_frame = _external_per_frame(
                handle,
                {
                    "ref": _clip_to_tempfile(ref, tmp, "ref"),
                    "dist": _clip_to_tempfile(dist, tmp, "dist"),
                },
            )
    return mean_metric("lpips", per_frame)


def mdtvsfa_score(handle: ProviderHandle, dist: VideoClip) -> MetricValue:
    """No-reference quality score in [0, 1], higher is better."""
    if handle.kind not in (ProviderKind.MDTVSFA, ProviderKind.STUB):
        raise ProviderError(f"wrong provider kind {handle.kind.value} for mdtvsfa")
    if handle.kind is ProviderKind.STUB:
        per_frame = [
            float(np.clip(np.mean(sobel_magnitude(luma_f64(f))) / SOBEL_PEAK, 0.0, 1.0))
            for f in dist.frames
        ]
    else:
        with tempfile.TemporaryDirectory(prefix="srvqa-mdtvsfa-") as tmp:
            per_frame = _external_per_frame(
                handle, {"dist": _clip_to_tempfile(dist, tmp, "dist")}
            )
        per_frame = [float(np.clip(v, 0.0, 1.0)) for v in per_frame]
    return mean_metric("mdtvsfa", per_frame)


def saliency(handle: ProviderHandle, clip: VideoClip) -> SaliencyMap:
    """Clip saliency: per-frame maps averaged, blurred, normalized to sum 1.

    The Gaussian blur sigma is 5% of the frame height.
    """
    if handle.kind not in (ProviderKind.SALIENCY, ProviderKind.STUB):
        raise ProviderError(f"wrong provider kind {handle.kind.value} for saliency")
    h, w = clip.height, clip.width
    if handle.kind is ProviderKind.STUB:
        # exact uniform map, no blur: downstream crop selection centers
        return SaliencyMap(
            width=w, height=h, weights=np.full((h, w), 1.0 / (w * h))
        )
    with tempfile.TemporaryDirectory(prefix="srvqa-saliency-") as tmp:
        out_path = Path(tmp) / "saliency.npy"
        command = handle.model_source.format(
            clip=_clip_to_tempfile(clip, tmp, "clip"), out=str(out_path)
        )
        _run_tool(command, "saliency")
        try:
            raw = np.load(out_path)
        except (OSError, ValueError) as exc:
            raise ProviderError(f"saliency produced no array at {out_path}") from exc
    raw = np.asarray(raw, dtype=np.float64)
    if raw.ndim == 3:
        raw = raw.mean(axis=0)
    if raw.shape != (h, w):
        raise ProviderError(f"saliency shape {raw.shape} does not match clip {h}x{w}")
    blurred = ndimage.gaussian_filter(raw, sigma=0.05 * h, mode="constant")
    blurred = np.maximum(blurred, 0.0)
    return SaliencyMap(width=w, height=h, weights=blurred)


def saliency_from_frame_maps(maps: np.ndarray, blur: bool = True) -> SaliencyMap:
    """Build a SaliencyMap from raw per-frame weight arrays (f, h, w)."""
    maps = np.asarray(maps, dtype=np.float64)
    if maps.ndim == 2:
        maps = maps[None]
    averaged = maps.mean(axis=0)
    h, w = averaged.shape
    if blur:
        averaged = ndimage.gaussian_filter(averaged, sigma=0.05 * h, mode="constant")
    averaged = np.maximum(averaged, 0.0)
    return SaliencyMap(width=w, height=h, weights=averaged)


_VMAF_JSON_PATHS = (
    ("pooled_metrics", "vmaf", "mean"),
    ("pooled_metrics", "vmaf", "harmonic_mean"),
    ("aggregate", "VMAF_score"),
    ("aggregate", "VMAF"),
    ("VMAF score",),
    ("vmaf",),
)


def _dig(payload: dict, path):
    node = payload
    for key in path:
        if not isinstance(node, dict) or key not in node:
            return None
        node = node[key]
    return node if isinstance(node, (int, float)) else None


def vmaf_adapter(handle: ProviderHandle, ref_path, dist_path) -> MetricValue:
    """Run an external VMAF tool and parse its pooled score from JSON output.

    The command template takes {ref}, {dist} and {out} placeholders, where
    {out} is the JSON report path the tool must write.
    """
    if handle.kind is not ProviderKind.VMAF:
        raise ProviderError(f"wrong provider kind {handle.kind.value} for vmaf")
    with tempfile.TemporaryDirectory(prefix="srvqa-vmaf-") as tmp:
        out_path = Path(tmp) / "vmaf.json"
        command = handle.model_source.format(
            ref=str(ref_path), dist=str(dist_path), out=str(out_path)
        )
        _run_tool(command, "vmaf")
        try:
            payload = json.loads(out_path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ProviderError(f"vmaf produced no parsable JSON at {out_path}") from exc
    for path in _VMAF_JSON_PATHS:
        score = _dig(payload, path)
        if score is not None:
            return MetricValue("vmaf", float(score))
    raise ProviderError("could not locate a pooled VMAF score in the tool's JSON")
