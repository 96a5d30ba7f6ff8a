"""YUV4MPEG2 (.y4m) reading and writing.

Supports 8-bit 4:2:0 and 4:4:4 streams.  Frame payloads are preserved
bit-exactly on a read/write round trip.
"""

from __future__ import annotations

import io
from fractions import Fraction
from typing import BinaryIO, Optional, Tuple

import numpy as np

from .frame import ColorSpace, Frame, MediaError, VideoClip

MAGIC = b"YUV4MPEG2"

# Chroma tag -> (subsampling, notes). All 8-bit.
_C420_TAGS = {"420", "420jpeg", "420mpeg2", "420paldv"}
_C444_TAGS = {"444"}


class Y4MParseError(MediaError):
    """Malformed .y4m input; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def _parse_ratio(text: str, offset: int, what: str) -> Tuple[int, int]:
    try:
        num, den = text.split(":")
        n, d = int(num), int(den)
    except ValueError:
        raise Y4MParseError(f"malformed {what} ratio {text!r}", offset) from None
    if d <= 0 or n <= 0:
        raise Y4MParseError(f"non-positive {what} ratio {text!r}", offset)
    return n, d


def read_y4m(stream: BinaryIO, source_id: str = "") -> VideoClip:
    """Decode a YUV4MPEG2 stream into a BT.601 limited-range clip.

    Raises Y4MParseError with a byte offset for malformed headers and an
    error naming the frame index for truncated payloads.
    """
    data = stream.read()
    header_end = data.find(b"\n")
    if header_end < 0:
        raise Y4MParseError("missing stream-header terminator", 0)
    header = data[:header_end]
    if not header.startswith(MAGIC + b" ") and header != MAGIC:
        raise Y4MParseError("stream does not start with YUV4MPEG2 magic", 0)

    width = height = None
    fps_rational: Optional[Tuple[int, int]] = None
    chroma = "420"  # y4m default when C is absent
    for token in header.split(b" ")[1:]:
        if not token:
            continue
        tag, value = chr(token[0]), token[1:].decode("ascii", "replace")
        if tag == "W":
            width = int(value)
        elif tag == "H":
            height = int(value)
        elif tag == "F":
            fps_rational = _parse_ratio(value, 0, "frame-rate")
        elif tag == "C":
            chroma = value
        # I (interlace), A (aspect), X (comment) are accepted and ignored
    if width is None or height is None or width < 1 or height < 1:
        raise Y4MParseError("stream header lacks valid W/H", 0)
    if fps_rational is None:
        raise Y4MParseError("stream header lacks F frame rate", 0)
    if chroma in _C420_TAGS:
        subsampling = "420"
        if width % 2 or height % 2:
            raise Y4MParseError("4:2:0 needs even dimensions", 0)
    elif chroma in _C444_TAGS:
        subsampling = "444"
    else:
        raise Y4MParseError(f"unsupported chroma format C{chroma}", 0)

    y_size = width * height
    if subsampling == "420":
        c_shape = (height // 2, width // 2)
    else:
        c_shape = (height, width)
    c_size = c_shape[0] * c_shape[1]
    frame_size = y_size + 2 * c_size

    frames = []
    pos = header_end + 1
    index = 0
    while pos < len(data):
        line_end = data.find(b"\n", pos)
        if line_end < 0:
            raise Y4MParseError(f"frame {index}: unterminated FRAME header", pos)
        if not data[pos:line_end].startswith(b"FRAME"):
            raise Y4MParseError(f"frame {index}: missing FRAME marker", pos)
        payload = data[line_end + 1 : line_end + 1 + frame_size]
        if len(payload) < frame_size:
            raise MediaError(
                f"truncated frame {index}: expected {frame_size} bytes, "
                f"got {len(payload)}"
            )
        buf = np.frombuffer(payload, dtype=np.uint8)
        y = buf[:y_size].reshape(height, width)
        cb = buf[y_size : y_size + c_size].reshape(c_shape)
        cr = buf[y_size + c_size :].reshape(c_shape)
        frames.append(
            Frame(
                width=width,
                height=height,
                planes=(y, cb, cr),
                color_space=ColorSpace.YCBCR_BT601,
            )
        )
        pos = line_end + 1 + frame_size
        index += 1
    if not frames:
        raise Y4MParseError("stream contains no frames", pos)

    num, den = fps_rational
    return VideoClip(
        frames=tuple(frames),
        fps=num / den,
        source_id=source_id,
        fps_rational=fps_rational,
    )


def write_y4m(clip: VideoClip, stream: BinaryIO) -> None:
    """Encode a YCbCr clip as YUV4MPEG2. Frame payloads are written verbatim."""
    if clip.color_space is not ColorSpace.YCBCR_BT601:
        raise MediaError("write_y4m needs a YCbCr clip; convert_color first")
    if clip.fps_rational is not None:
        num, den = clip.fps_rational
    else:
        frac = Fraction(clip.fps).limit_denominator(1001000)
        num, den = frac.numerator, frac.denominator
    chroma = "420" if clip.frames[0].chroma_subsampling == "420" else "444"
    header = f"YUV4MPEG2 W{clip.width} H{clip.height} F{num}:{den} Ip A1:1 C{chroma}\n"
    stream.write(header.encode("ascii"))
    for frame in clip.frames:
        stream.write(b"FRAME\n")
        for plane in frame.planes:
            stream.write(plane.tobytes())


def read_y4m_file(path, source_id: str = "") -> VideoClip:
    with open(path, "rb") as f:
        return read_y4m(f, source_id=source_id or str(path))


def write_y4m_file(clip: VideoClip, path) -> None:
    with open(path, "wb") as f:
        write_y4m(clip, f)


def y4m_bytes(clip: VideoClip) -> bytes:
    buf = io.BytesIO()
    write_y4m(clip, buf)
    return buf.getvalue()
