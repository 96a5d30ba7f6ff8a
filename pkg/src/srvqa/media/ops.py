"""Native frame/clip geometry operations: bicubic resize and cropping."""

from __future__ import annotations

import numpy as np

from .frame import Frame, MediaError, Region, VideoClip

# Catmull-Rom bicubic.
KERNEL_A = -0.5


def _cubic_weights(t: np.ndarray, a: float = KERNEL_A) -> np.ndarray:
    at = np.abs(t)
    w = np.zeros_like(at)
    near = at <= 1.0
    far = (at > 1.0) & (at < 2.0)
    w[near] = (a + 2.0) * at[near] ** 3 - (a + 3.0) * at[near] ** 2 + 1.0
    w[far] = a * at[far] ** 3 - 5.0 * a * at[far] ** 2 + 8.0 * a * at[far] - 4.0 * a
    return w


def _resample_axis(plane: np.ndarray, new_len: int, axis: int) -> np.ndarray:
    """Resample one axis with the 4-tap cubic kernel, edge-clamped."""
    src_len = plane.shape[axis]
    if new_len == src_len:
        return plane
    scale = src_len / new_len
    # center-aligned sample positions
    pos = (np.arange(new_len) + 0.5) * scale - 0.5
    base = np.floor(pos).astype(np.int64)
    taps = base[:, None] + np.arange(-1, 3)[None, :]
    weights = _cubic_weights(pos[:, None] - taps)
    taps = np.clip(taps, 0, src_len - 1)
    moved = np.moveaxis(plane, axis, 0)
    gathered = moved[taps]  # (new_len, 4, ...)
    out = (gathered * weights.reshape(new_len, 4, *([1] * (moved.ndim - 1)))).sum(axis=1)
    return np.moveaxis(out, 0, axis)


def _resize_plane(plane: np.ndarray, new_w: int, new_h: int) -> np.ndarray:
    data = plane.astype(np.float64)
    data = _resample_axis(data, new_w, axis=1)
    data = _resample_axis(data, new_h, axis=0)
    return np.clip(np.floor(data + 0.5), 0, 255).astype(np.uint8)


def bicubic_resize(frame: Frame, new_w: int, new_h: int) -> Frame:
    """Catmull-Rom bicubic resize, per plane, edge-clamped sampling."""
    if new_w < 1 or new_h < 1:
        raise ValueError(f"target size must be at least 1x1, got {new_w}x{new_h}")
    if new_w == frame.width and new_h == frame.height:
        return frame
    if frame.chroma_subsampling == "420":
        if new_w % 2 or new_h % 2:
            raise MediaError("4:2:0 frames need even target dimensions")
        plane_sizes = [(new_w, new_h), (new_w // 2, new_h // 2), (new_w // 2, new_h // 2)]
    else:
        plane_sizes = [(new_w, new_h)] * 3
    planes = tuple(
        _resize_plane(p, w, h) for p, (w, h) in zip(frame.planes, plane_sizes)
    )
    return Frame(new_w, new_h, planes, frame.color_space)


def resize_clip(clip: VideoClip, new_w: int, new_h: int) -> VideoClip:
    return VideoClip(
        frames=tuple(bicubic_resize(f, new_w, new_h) for f in clip.frames),
        fps=clip.fps,
        source_id=clip.source_id,
        encoded_bitrate_kbps=clip.encoded_bitrate_kbps,
        fps_rational=clip.fps_rational,
    )


def crop_frame(frame: Frame, region: Region) -> Frame:
    region.validate_within(frame.width, frame.height)
    if frame.chroma_subsampling == "420":
        if region.x % 2 or region.y % 2 or region.w % 2 or region.h % 2:
            raise MediaError("4:2:0 crops need even offsets and dimensions")
        cx, cy, cw, ch = region.x // 2, region.y // 2, region.w // 2, region.h // 2
        chroma_slices = (slice(cy, cy + ch), slice(cx, cx + cw))
    else:
        chroma_slices = (
            slice(region.y, region.y + region.h),
            slice(region.x, region.x + region.w),
        )
    luma_slices = (
        slice(region.y, region.y + region.h),
        slice(region.x, region.x + region.w),
    )
    planes = (
        frame.planes[0][luma_slices],
        frame.planes[1][chroma_slices],
        frame.planes[2][chroma_slices],
    )
    return Frame(region.w, region.h, planes, frame.color_space)


def crop(clip: VideoClip, region: Region) -> VideoClip:
    """Crop every frame to ``region``; clip metadata is preserved."""
    return VideoClip(
        frames=tuple(crop_frame(f, region) for f in clip.frames),
        fps=clip.fps,
        source_id=clip.source_id,
        encoded_bitrate_kbps=clip.encoded_bitrate_kbps,
        fps_rational=clip.fps_rational,
    )
