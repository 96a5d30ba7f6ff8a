"""PNG frame-sequence directories.

Super-resolution tools exchange video as directories of numbered PNGs.
Frame order is lexicographic filename order.  A sidecar ``clip.json`` in the
directory may carry {fps, source_id, encoded_bitrate_kbps}; fps defaults
to 30 when absent.
"""

from __future__ import annotations

import json
from pathlib import Path
import numpy as np
from PIL import Image

from .frame import ColorSpace, Frame, MediaError, VideoClip

SIDECAR_NAME = "clip.json"
DEFAULT_FPS = 30.0


def read_sidecar(directory: Path) -> dict:
    path = Path(directory) / SIDECAR_NAME
    if not path.exists():
        return {}
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_sidecar(directory: Path, clip: VideoClip) -> None:
    meta = {
        "fps": clip.fps,
        "source_id": clip.source_id,
        "encoded_bitrate_kbps": clip.encoded_bitrate_kbps,
    }
    with open(Path(directory) / SIDECAR_NAME, "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
        f.write("\n")


def _load_png(path: Path) -> np.ndarray:
    with Image.open(path) as img:
        if img.mode not in ("RGB", "RGBA", "L"):
            img = img.convert("RGBA" if "A" in img.mode else "RGB")
        if img.mode == "RGBA":
            img = img.convert("RGB")  # alpha dropped
        elif img.mode == "L":
            img = img.convert("RGB")
        return np.asarray(img, dtype=np.uint8)


def read_png_sequence(
    directory, pattern: str = "*.png", source_id: str = ""
) -> VideoClip:
    """Load a directory of PNGs as an RGB clip, frames in filename order."""
    directory = Path(directory)
    files = sorted(directory.glob(pattern))
    if not files:
        raise MediaError(f"no frames matching {pattern!r} in {directory}")
    arrays = []
    shape = None
    for path in files:
        arr = _load_png(path)
        if shape is None:
            shape = arr.shape
        elif arr.shape != shape:
            raise MediaError(
                f"mixed resolutions: {path.name} is {arr.shape[1]}x{arr.shape[0]}, "
                f"expected {shape[1]}x{shape[0]}"
            )
        arrays.append(arr)
    meta = read_sidecar(directory)
    frames = tuple(
        Frame(
            width=a.shape[1],
            height=a.shape[0],
            planes=(a[:, :, 0], a[:, :, 1], a[:, :, 2]),
            color_space=ColorSpace.RGB,
        )
        for a in arrays
    )
    return VideoClip(
        frames=frames,
        fps=float(meta.get("fps", DEFAULT_FPS)),
        source_id=meta.get("source_id", source_id or str(directory)),
        encoded_bitrate_kbps=meta.get("encoded_bitrate_kbps"),
    )


def write_png_sequence(
    clip: VideoClip, directory, prefix: str = "f", sidecar: bool = True
) -> Path:
    """Write an RGB clip as zero-padded PNGs plus the metadata sidecar."""
    if clip.color_space is not ColorSpace.RGB:
        raise MediaError("write_png_sequence needs an RGB clip; convert_color first")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    digits = max(4, len(str(len(clip.frames))))
    for i, frame in enumerate(clip.frames, start=1):
        rgb = np.stack(frame.planes, axis=-1)
        Image.fromarray(rgb, mode="RGB").save(directory / f"{prefix}{i:0{digits}d}.png")
    if sidecar:
        write_sidecar(directory, clip)
    return directory
