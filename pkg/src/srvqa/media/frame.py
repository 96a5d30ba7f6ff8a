"""Core video data types: frames, clips and rectangular regions.

All pixel data is held as read-only numpy arrays so frames and clips can be
shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np


class ColorSpace(Enum):
    RGB = "rgb"
    YCBCR_BT601 = "ycbcr-bt601-limited"


class MediaError(Exception):
    """Raised for malformed or unsupported media input."""


def _freeze(plane: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(plane)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Frame:
    """A single decoded video frame.

    ``planes`` holds one 2-D sample array per channel.  RGB frames carry
    exactly three full-resolution planes.  YCbCr frames carry a full
    resolution luma plane plus two chroma planes that are either full
    resolution (4:4:4) or half resolution in both dimensions (4:2:0).
    Only 8-bit samples are supported.
    """

    width: int
    height: int
    planes: Tuple[np.ndarray, ...]
    color_space: ColorSpace
    bit_depth: int = 8

    def __post_init__(self):
        if self.bit_depth != 8:
            raise MediaError(f"only 8-bit frames are supported, got {self.bit_depth}")
        if len(self.planes) != 3:
            raise MediaError(f"expected 3 planes, got {len(self.planes)}")
        planes = tuple(_freeze(p) for p in self.planes)
        object.__setattr__(self, "planes", planes)
        for i, p in enumerate(planes):
            if p.dtype != np.uint8:
                raise MediaError(f"plane {i} must be uint8, got {p.dtype}")
        y = planes[0]
        if y.shape != (self.height, self.width):
            raise MediaError(
                f"luma plane shape {y.shape} does not match {self.height}x{self.width}"
            )
        half = ((self.height + 1) // 2, (self.width + 1) // 2)
        for i, p in enumerate(planes[1:], start=1):
            if self.color_space is ColorSpace.RGB:
                if p.shape != y.shape:
                    raise MediaError("RGB frames need 3 full-resolution planes")
            elif p.shape not in (y.shape, half):
                raise MediaError(
                    f"chroma plane {i} shape {p.shape} is neither full nor 4:2:0"
                )
        if self.planes[1].shape != self.planes[2].shape:
            raise MediaError("chroma planes must share dimensions")

    @property
    def chroma_subsampling(self) -> str:
        """'444' for full-resolution chroma, '420' for half-resolution."""
        return "444" if self.planes[1].shape == self.planes[0].shape else "420"

    def same_geometry(self, other: "Frame") -> bool:
        return (
            self.width == other.width
            and self.height == other.height
            and self.color_space is other.color_space
            and self.chroma_subsampling == other.chroma_subsampling
        )

    def with_planes(self, planes: Sequence[np.ndarray]) -> "Frame":
        h, w = planes[0].shape
        return Frame(
            width=w,
            height=h,
            planes=tuple(np.asarray(p, dtype=np.uint8) for p in planes),
            color_space=self.color_space,
            bit_depth=self.bit_depth,
        )


@dataclass(frozen=True)
class VideoClip:
    """An ordered sequence of frames plus playback and provenance metadata."""

    frames: Tuple[Frame, ...]
    fps: float
    source_id: str = ""
    encoded_bitrate_kbps: Optional[float] = None
    fps_rational: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if not self.frames:
            raise MediaError("a clip needs at least one frame")
        if self.fps <= 0:
            raise MediaError(f"fps must be positive, got {self.fps}")
        first = self.frames[0]
        for i, f in enumerate(self.frames):
            if not f.same_geometry(first) or f.bit_depth != first.bit_depth:
                raise MediaError(f"frame {i} geometry differs from frame 0")
        object.__setattr__(self, "frames", tuple(self.frames))

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height

    @property
    def color_space(self) -> ColorSpace:
        return self.frames[0].color_space

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def duration_seconds(self) -> float:
        return len(self.frames) / self.fps

    def with_metadata(
        self,
        source_id: Optional[str] = None,
        encoded_bitrate_kbps: Optional[float] = None,
        fps: Optional[float] = None,
    ) -> "VideoClip":
        return VideoClip(
            frames=self.frames,
            fps=self.fps if fps is None else fps,
            source_id=self.source_id if source_id is None else source_id,
            encoded_bitrate_kbps=(
                self.encoded_bitrate_kbps
                if encoded_bitrate_kbps is None
                else encoded_bitrate_kbps
            ),
            fps_rational=self.fps_rational if fps is None else None,
        )


@dataclass(frozen=True)
class Region:
    """Rectangular pixel region, (x, y) is the top-left corner."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ValueError(f"region must be at least 1x1, got {self.w}x{self.h}")
        if self.x < 0 or self.y < 0:
            raise ValueError(f"region offset must be non-negative: ({self.x}, {self.y})")

    def validate_within(self, width: int, height: int) -> None:
        if self.x + self.w > width or self.y + self.h > height:
            raise ValueError(
                f"region {self} exceeds frame bounds {width}x{height}"
            )
