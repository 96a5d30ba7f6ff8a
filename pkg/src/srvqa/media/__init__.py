from .frame import ColorSpace, Frame, MediaError, Region, VideoClip
from .color import convert_clip, convert_color, luma_f64, luma_plane, rgb_planes
from .ops import bicubic_resize, crop, crop_frame, resize_clip
from .png_seq import read_png_sequence, write_png_sequence, write_sidecar
from .y4m import (
    Y4MParseError,
    read_y4m,
    read_y4m_file,
    write_y4m,
    write_y4m_file,
    y4m_bytes,
)

__all__ = [
    "ColorSpace",
    "Frame",
    "MediaError",
    "Region",
    "VideoClip",
    "Y4MParseError",
    "bicubic_resize",
    "convert_clip",
    "convert_color",
    "crop",
    "crop_frame",
    "luma_f64",
    "luma_plane",
    "read_png_sequence",
    "read_y4m",
    "read_y4m_file",
    "resize_clip",
    "rgb_planes",
    "write_png_sequence",
    "write_sidecar",
    "write_y4m",
    "write_y4m_file",
    "y4m_bytes",
]
