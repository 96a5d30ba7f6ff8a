"""Edge-restoration quality: Canny edge extraction and tolerant edge matching.

The score is an F1 over edge pixels of the distorted frame matched against
the reference edge map, maximized over small global shifts to forgive
sub-pixel misalignment introduced by upscalers.  This is a self-contained
variant: detector parameters, the Chebyshev-1 match tolerance and the shift
radius are all explicit and recorded by callers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage, signal

from ..media import Frame, VideoClip, luma_f64
from .base import MetricValue, mean_metric
from .classical import SOBEL_X, SOBEL_Y

DEFAULT_LOW = 100.0
DEFAULT_HIGH = 200.0
DEFAULT_SHIFT_RADIUS = 1

_GAUSS_SIZE = 5
_GAUSS_SIGMA = 1.4

# Candidate offsets for matching: exact position first, then the Chebyshev-1
# ring in row-major order. Greedy matching tries them in this order.
_MATCH_OFFSETS = (
    (0, 0),
    (-1, -1), (-1, 0), (-1, 1),
    (0, -1), (0, 1),
    (1, -1), (1, 0), (1, 1),
)


@dataclass(frozen=True)
class EdgeMap:
    """Binary per-pixel edge indicator for one frame."""

    width: int
    height: int
    mask: np.ndarray

    def __post_init__(self):
        mask = np.ascontiguousarray(self.mask, dtype=bool)
        if mask.shape != (self.height, self.width):
            raise ValueError(
                f"mask shape {mask.shape} does not match {self.height}x{self.width}"
            )
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    @property
    def count(self) -> int:
        return int(self.mask.sum())


def _gaussian_kernel(size: int, sigma: float) -> np.ndarray:
    half = (size - 1) / 2.0
    coords = np.arange(size) - half
    g = np.exp(-(coords**2) / (2.0 * sigma**2))
    k = np.outer(g, g)
    return k / k.sum()


def _nms(mag: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Keep pixels whose magnitude is >= both neighbors along the gradient."""
    h, w = mag.shape
    angle = np.rad2deg(np.arctan2(gy, gx)) % 180.0
    padded = np.pad(mag, 1, mode="constant")
    center = padded[1:-1, 1:-1]

    def shifted(dy, dx):
        return padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]

    bins = [
        ((angle < 22.5) | (angle >= 157.5), (0, 1), (0, -1)),
        ((angle >= 22.5) & (angle < 67.5), (1, 1), (-1, -1)),
        ((angle >= 67.5) & (angle < 112.5), (1, 0), (-1, 0)),
        ((angle >= 112.5) & (angle < 157.5), (1, -1), (-1, 1)),
    ]
    keep = np.zeros_like(mag, dtype=bool)
    for sel, (dy1, dx1), (dy2, dx2) in bins:
        keep |= sel & (center >= shifted(dy1, dx1)) & (center >= shifted(dy2, dx2))
    return np.where(keep, mag, 0.0)


def detect_edges(
    frame: Frame, low: float = DEFAULT_LOW, high: float = DEFAULT_HIGH
) -> EdgeMap:
    """Canny edge map of the luma plane.

    Pipeline: 5x5 Gaussian (sigma 1.4), Sobel gradients, non-maximum
    suppression, then double-threshold hysteresis (8-connected).
    """
    if not (0 <= low < high):
        raise ValueError(f"need 0 <= low < high, got low={low}, high={high}")
    luma = luma_f64(frame)
    smoothed = signal.convolve2d(
        luma, _gaussian_kernel(_GAUSS_SIZE, _GAUSS_SIGMA), mode="same", boundary="symm"
    )
    gx = signal.convolve2d(smoothed, SOBEL_X, mode="same", boundary="symm")
    gy = signal.convolve2d(smoothed, SOBEL_Y, mode="same", boundary="symm")
    mag = np.sqrt(gx * gx + gy * gy)
    thin = _nms(mag, gx, gy)
    strong = thin >= high
    weak = thin >= low
    if not strong.any():
        mask = np.zeros_like(strong)
    else:
        labels, _ = ndimage.label(weak, structure=np.ones((3, 3), dtype=int))
        keep = np.unique(labels[strong])
        mask = np.isin(labels, keep[keep != 0])
    return EdgeMap(frame.width, frame.height, mask)


def _match_shifted(
    ref_mask: np.ndarray, dist_pixels: np.ndarray, dy: int, dx: int
) -> int:
    """Greedy count of distorted edge pixels matched to unmatched reference
    pixels within Chebyshev distance 1, after a global (dy, dx) shift.

    Distorted pixels are visited in row-major order; each takes the nearest
    available reference pixel, ties broken row-major.
    """
    h, w = ref_mask.shape
    available = ref_mask.copy()
    matched = 0
    for py, px in dist_pixels:
        ty, tx = py + dy, px + dx
        for oy, ox in _MATCH_OFFSETS:
            ry, rx = ty + oy, tx + ox
            if 0 <= ry < h and 0 <= rx < w and available[ry, rx]:
                available[ry, rx] = False
                matched += 1
                break
    return matched


def erqa_frame(
    ref: Frame,
    dist: Frame,
    shift_radius: int = DEFAULT_SHIFT_RADIUS,
    low: float = DEFAULT_LOW,
    high: float = DEFAULT_HIGH,
) -> float:
    """Edge-restoration F1 for one frame pair, maximized over global shifts."""
    if shift_radius < 0:
        raise ValueError(f"shift_radius must be >= 0, got {shift_radius}")
    if (ref.width, ref.height) != (dist.width, dist.height):
        raise ValueError(
            f"dimension mismatch: {ref.width}x{ref.height} vs {dist.width}x{dist.height}"
        )
    ref_map = detect_edges(ref, low, high)
    dist_map = detect_edges(dist, low, high)
    n_ref, n_dist = ref_map.count, dist_map.count
    if n_ref == 0 and n_dist == 0:
        return 1.0
    if n_ref == 0 or n_dist == 0:
        return 0.0
    dist_pixels = np.argwhere(dist_map.mask)  # row-major order
    best = 0.0
    for dy in range(-shift_radius, shift_radius + 1):
        for dx in range(-shift_radius, shift_radius + 1):
            tp = _match_shifted(ref_map.mask, dist_pixels, dy, dx)
            if tp == 0:
                continue
            precision = tp / n_dist
            recall = tp / n_ref
            best = max(best, 2.0 * precision * recall / (precision + recall))
    return best


def erqa(
    ref: VideoClip,
    dist: VideoClip,
    shift_radius: int = DEFAULT_SHIFT_RADIUS,
    low: float = DEFAULT_LOW,
    high: float = DEFAULT_HIGH,
) -> MetricValue:
    """Clip-level edge-restoration quality: mean of per-frame F1 scores."""
    if len(ref) != len(dist):
        raise ValueError(f"frame count mismatch: {len(ref)} vs {len(dist)}")
    per_frame = [
        erqa_frame(rf, df, shift_radius, low, high)
        for rf, df in zip(ref.frames, dist.frames)
    ]
    return mean_metric("erqa", per_frame)
