"""External tool adapters: encoders, decoders and SR models as subprocesses."""

from __future__ import annotations

import shlex
import subprocess
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple

from ..media import VideoClip, read_png_sequence, read_y4m_file
from .config import CodecSpec, ConfigError, SRSpec, expand_template


class ToolError(Exception):
    """External tool failed; message carries the captured stderr."""


@dataclass(frozen=True)
class ToolRun:
    command: str
    stdout: str
    stderr: str


def run_command(template: str, **placeholders) -> ToolRun:
    command = expand_template(template).format(**placeholders)
    argv = shlex.split(command)
    try:
        proc = subprocess.run(argv, capture_output=True, text=True)
    except FileNotFoundError as exc:
        raise ToolError(f"tool not found: {argv[0]}") from exc
    if proc.returncode != 0:
        raise ToolError(
            f"command failed (exit {proc.returncode}): {command}\n{proc.stderr.strip()}"
        )
    return ToolRun(command=command, stdout=proc.stdout, stderr=proc.stderr)


def achieved_bitrate_kbps(artifact_path, duration_seconds: float) -> float:
    size_bits = Path(artifact_path).stat().st_size * 8
    return size_bits / duration_seconds / 1000.0


def encode_adapter(
    codec: CodecSpec,
    input_path,
    output_path,
    bitrate_kbps: float,
    duration_seconds: float,
) -> Tuple[ToolRun, float]:
    """Run the encoder; returns the tool run and the achieved bitrate derived
    from the artifact size and clip duration."""
    run = run_command(
        codec.encode_template,
        input=str(input_path),
        output=str(output_path),
        bitrate_kbps=f"{bitrate_kbps:g}",
    )
    if not Path(output_path).exists():
        raise ToolError(f"encoder produced no artifact at {output_path}")
    return run, achieved_bitrate_kbps(output_path, duration_seconds)


def decode_adapter(codec: CodecSpec, input_path, output_path) -> ToolRun:
    run = run_command(
        codec.decode_template, input=str(input_path), output=str(output_path)
    )
    if not Path(output_path).exists():
        raise ToolError(f"decoder produced no output at {output_path}")
    return run


def sr_adapter(
    sr: SRSpec, frames_dir, out_dir, expected_frames: int
) -> Tuple[ToolRun, ...]:
    """Run the SR tool on a PNG directory; 2x models run twice to reach 4x.

    Output frame count must equal the input frame count.
    """
    if sr.is_no_sr:
        raise ConfigError("the no_sr pseudo method has no external tool")
    out_dir = Path(out_dir)
    runs = []
    if sr.scale == 2:
        intermediate = out_dir.parent / (out_dir.name + ".2x")
        intermediate.mkdir(parents=True, exist_ok=True)
        runs.append(
            run_command(sr.template, in_dir=str(frames_dir), out_dir=str(intermediate))
        )
        _check_frame_count(sr, intermediate, expected_frames)
        out_dir.mkdir(parents=True, exist_ok=True)
        runs.append(
            run_command(sr.template, in_dir=str(intermediate), out_dir=str(out_dir))
        )
    else:
        out_dir.mkdir(parents=True, exist_ok=True)
        runs.append(
            run_command(sr.template, in_dir=str(frames_dir), out_dir=str(out_dir))
        )
    _check_frame_count(sr, out_dir, expected_frames)
    return tuple(runs)


def _check_frame_count(sr: SRSpec, out_dir: Path, expected: int) -> None:
    produced = len(sorted(Path(out_dir).glob("*.png")))
    if produced != expected:
        raise ToolError(
            f"SR {sr.name}: frame count mismatch, expected {expected} frames, "
            f"got {produced}"
        )


def load_clip(path) -> VideoClip:
    path = Path(path)
    if path.is_dir():
        return read_png_sequence(path)
    return read_y4m_file(path)
