"""Native full-reference and content metrics: PSNR, MS-SSIM, SI/TI, colorfulness.

PSNR and MS-SSIM run on the BT.601 limited-range luma plane.  SI/TI follow
the ITU-T P.910-style Sobel / frame-difference definition with max-over-frames
pooling by default.  Colorfulness is the Hasler-Suesstrunk opponent-channel
statistic, mean-pooled over frames.
"""

from __future__ import annotations

import logging
from typing import Tuple

import numpy as np
from scipy import signal

log = logging.getLogger(__name__)

from ..media import VideoClip, luma_f64, rgb_planes
from .base import MetricValue, max_metric, mean_metric

PSNR_CAP_DB = 100.0  # identical frames would otherwise be infinite

MSSSIM_WEIGHTS = (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)
_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5
_C1 = (0.01 * 255.0) ** 2
_C2 = (0.03 * 255.0) ** 2

SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
SOBEL_Y = np.array([[-1, -2, -1], [0, 0, 0], [1, 2, 1]], dtype=np.float64)


def _check_aligned(ref: VideoClip, dist: VideoClip) -> None:
    if (ref.width, ref.height) != (dist.width, dist.height):
        raise ValueError(
            f"dimension mismatch: ref {ref.width}x{ref.height} vs "
            f"dist {dist.width}x{dist.height}"
        )
    if len(ref) != len(dist):
        raise ValueError(f"frame count mismatch: {len(ref)} vs {len(dist)}")


def psnr(ref: VideoClip, dist: VideoClip) -> MetricValue:
    """Per-frame luma PSNR in dB, averaged over the clip; MSE=0 caps at 100."""
    _check_aligned(ref, dist)
    per_frame = []
    for rf, df in zip(ref.frames, dist.frames):
        diff = luma_f64(rf) - luma_f64(df)
        mse = np.mean(diff * diff)
        if mse == 0.0:
            per_frame.append(PSNR_CAP_DB)
        else:
            per_frame.append(float(10.0 * np.log10(255.0**2 / mse)))
    return mean_metric("psnr", per_frame)


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    half = (size - 1) / 2.0
    coords = np.arange(size) - half
    g1 = np.exp(-(coords**2) / (2.0 * sigma**2))
    window = np.outer(g1, g1)
    return window / window.sum()


def _ssim_and_cs(img1: np.ndarray, img2: np.ndarray) -> Tuple[float, float]:
    window = _gaussian_window(_SSIM_WINDOW, _SSIM_SIGMA)
    mu1 = signal.fftconvolve(img1, window, mode="valid")
    mu2 = signal.fftconvolve(img2, window, mode="valid")
    mu1_sq, mu2_sq, mu1_mu2 = mu1 * mu1, mu2 * mu2, mu1 * mu2
    sigma1_sq = signal.fftconvolve(img1 * img1, window, mode="valid") - mu1_sq
    sigma2_sq = signal.fftconvolve(img2 * img2, window, mode="valid") - mu2_sq
    sigma12 = signal.fftconvolve(img1 * img2, window, mode="valid") - mu1_mu2
    cs_map = (2.0 * sigma12 + _C2) / (sigma1_sq + sigma2_sq + _C2)
    ssim_map = ((2.0 * mu1_mu2 + _C1) / (mu1_sq + mu2_sq + _C1)) * cs_map
    return float(ssim_map.mean()), float(cs_map.mean())


def _mean_pool_2x2(img: np.ndarray) -> np.ndarray:
    h, w = img.shape
    img = img[: h - h % 2, : w - w % 2]
    return (img[0::2, 0::2] + img[0::2, 1::2] + img[1::2, 0::2] + img[1::2, 1::2]) / 4.0


def _msssim_levels(width: int, height: int) -> int:
    # 5 scales need min(w, h) >= 176 so the coarsest scale still fits an
    # 11x11 window; smaller frames drop scales, weights renormalized.
    levels = 1
    m = min(width, height)
    while levels < 5 and m // 2 >= _SSIM_WINDOW:
        levels += 1
        m //= 2
    return levels


def _msssim_frame(img1: np.ndarray, img2: np.ndarray) -> float:
    levels = _msssim_levels(img1.shape[1], img1.shape[0])
    weights = np.asarray(MSSSIM_WEIGHTS[:levels])
    weights = weights / weights.sum()
    mcs = []
    ssim_val = 1.0
    for level in range(levels):
        ssim_val, cs = _ssim_and_cs(img1, img2)
        if level < levels - 1:
            mcs.append(max(cs, 0.0))
            img1 = _mean_pool_2x2(img1)
            img2 = _mean_pool_2x2(img2)
    result = max(ssim_val, 0.0) ** weights[-1]
    for cs, w in zip(mcs, weights[:-1]):
        result *= cs**w
    return float(result)


def ms_ssim(ref: VideoClip, dist: VideoClip) -> MetricValue:
    """Multi-scale SSIM on luma, per-frame values averaged over the clip."""
    _check_aligned(ref, dist)
    if min(ref.width, ref.height) < _SSIM_WINDOW:
        raise ValueError(
            f"frames must be at least {_SSIM_WINDOW}px on the short side"
        )
    per_frame = [
        _msssim_frame(luma_f64(rf), luma_f64(df))
        for rf, df in zip(ref.frames, dist.frames)
    ]
    return mean_metric("ms_ssim", per_frame)


def sobel_magnitude(luma: np.ndarray) -> np.ndarray:
    """Gradient magnitude on the Sobel-valid interior of the plane."""
    gx = signal.convolve2d(luma, SOBEL_X, mode="valid")
    gy = signal.convolve2d(luma, SOBEL_Y, mode="valid")
    return np.sqrt(gx * gx + gy * gy)


def si_ti(clip: VideoClip, pooling: str = "max") -> Tuple[MetricValue, MetricValue]:
    """Spatial and temporal information of a clip.

    SI pools stddev(Sobel magnitude) over frames, TI pools stddev(luma
    difference) over consecutive-frame pairs.  Population stddev, ``pooling``
    is "max" (default) or "mean".  Single-frame clips get TI = 0.
    """
    if pooling not in ("max", "mean"):
        raise ValueError(f"pooling must be 'max' or 'mean', got {pooling!r}")
    lumas = [luma_f64(f) for f in clip.frames]
    si_values = [float(np.std(sobel_magnitude(y))) for y in lumas]
    if len(lumas) >= 2:
        ti_values = [
            float(np.std(b - a)) for a, b in zip(lumas[:-1], lumas[1:])
        ]
    else:
        log.warning("clip %s has a single frame; TI reported as 0", clip.source_id)
        ti_values = [0.0]
    pool = max_metric if pooling == "max" else mean_metric
    return pool("si", si_values), pool("ti", ti_values)


def colorfulness(clip: VideoClip) -> MetricValue:
    """Opponent-channel colorfulness, mean over frames.

    Per frame: rg = R-G, yb = (R+G)/2 - B,
    M = sqrt(std(rg)^2 + std(yb)^2) + 0.3 * sqrt(mean(rg)^2 + mean(yb)^2).
    """
    per_frame = []
    for frame in clip.frames:
        r, g, b = rgb_planes(frame)
        rg = r - g
        yb = 0.5 * (r + g) - b
        sigma = np.sqrt(np.std(rg) ** 2 + np.std(yb) ** 2)
        mu = np.sqrt(np.mean(rg) ** 2 + np.mean(yb) ** 2)
        per_frame.append(float(sigma + 0.3 * mu))
    return mean_metric("colorfulness", per_frame)
