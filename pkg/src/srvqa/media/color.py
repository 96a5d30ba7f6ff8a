"""Color-space conversion between full-range RGB and BT.601 limited YCbCr.

Conventions: round half up, clamp to the 8-bit sample range, nearest-neighbor
chroma upsampling for 4:2:0 sources.
"""

from __future__ import annotations

import numpy as np

from .frame import ColorSpace, Frame, MediaError, VideoClip

# BT.601 luma weights and limited-range scale factors.
KR, KG, KB = 0.299, 0.587, 0.114
Y_SCALE = 219.0 / 255.0
C_SCALE = 224.0 / 255.0


def _round_half_up(x: np.ndarray) -> np.ndarray:
    return np.floor(x + 0.5)


def _to_u8(x: np.ndarray) -> np.ndarray:
    return np.clip(_round_half_up(x), 0, 255).astype(np.uint8)


def _rgb_to_ycbcr_f64(r, g, b):
    y_full = KR * r + KG * g + KB * b
    y = 16.0 + Y_SCALE * y_full
    cb = 128.0 + C_SCALE * (b - y_full) / (2.0 * (1.0 - KB))
    cr = 128.0 + C_SCALE * (r - y_full) / (2.0 * (1.0 - KR))
    return y, cb, cr


def _ycbcr_to_rgb_f64(y, cb, cr):
    y_full = (y - 16.0) / Y_SCALE
    cb_c = (cb - 128.0) / C_SCALE * (2.0 * (1.0 - KB))
    cr_c = (cr - 128.0) / C_SCALE * (2.0 * (1.0 - KR))
    b = y_full + cb_c
    r = y_full + cr_c
    g = (y_full - KR * r - KB * b) / KG
    return r, g, b


def _upsample_chroma(plane: np.ndarray, height: int, width: int) -> np.ndarray:
    up = plane.repeat(2, axis=0).repeat(2, axis=1)
    return up[:height, :width]


def convert_color(frame: Frame, target: ColorSpace) -> Frame:
    """Convert a frame to ``target``. Converting to its own space is identity."""
    if frame.color_space is target:
        return frame
    if frame.color_space is ColorSpace.RGB and target is ColorSpace.YCBCR_BT601:
        r, g, b = (p.astype(np.float64) for p in frame.planes)
        y, cb, cr = _rgb_to_ycbcr_f64(r, g, b)
        planes = (_to_u8(y), _to_u8(cb), _to_u8(cr))
        return Frame(frame.width, frame.height, planes, ColorSpace.YCBCR_BT601)
    if frame.color_space is ColorSpace.YCBCR_BT601 and target is ColorSpace.RGB:
        y = frame.planes[0].astype(np.float64)
        cb = frame.planes[1]
        cr = frame.planes[2]
        if frame.chroma_subsampling == "420":
            cb = _upsample_chroma(cb, frame.height, frame.width)
            cr = _upsample_chroma(cr, frame.height, frame.width)
        r, g, b = _ycbcr_to_rgb_f64(y, cb.astype(np.float64), cr.astype(np.float64))
        planes = (_to_u8(r), _to_u8(g), _to_u8(b))
        return Frame(frame.width, frame.height, planes, ColorSpace.RGB)
    raise MediaError(
        f"unsupported conversion {frame.color_space.value} -> {target.value}"
    )


def convert_clip(clip: VideoClip, target: ColorSpace) -> VideoClip:
    if clip.color_space is target:
        return clip
    return VideoClip(
        frames=tuple(convert_color(f, target) for f in clip.frames),
        fps=clip.fps,
        source_id=clip.source_id,
        encoded_bitrate_kbps=clip.encoded_bitrate_kbps,
        fps_rational=clip.fps_rational,
    )


def luma_plane(frame: Frame) -> np.ndarray:
    """The BT.601 limited-range luma plane as uint8."""
    if frame.color_space is ColorSpace.YCBCR_BT601:
        return frame.planes[0]
    return convert_color(frame, ColorSpace.YCBCR_BT601).planes[0]


def luma_f64(frame: Frame) -> np.ndarray:
    return luma_plane(frame).astype(np.float64)


def rgb_planes(frame: Frame):
    """R, G, B planes as float64, converting from YCbCr when needed."""
    if frame.color_space is not ColorSpace.RGB:
        frame = convert_color(frame, ColorSpace.RGB)
    return tuple(p.astype(np.float64) for p in frame.planes)
