from .base import MetricValue, max_metric, mean_metric
from .classical import colorfulness, ms_ssim, psnr, si_ti, sobel_magnitude
from .erqa import EdgeMap, detect_edges, erqa, erqa_frame

__all__ = [
    "EdgeMap",
    "MetricValue",
    "colorfulness",
    "detect_edges",
    "erqa",
    "erqa_frame",
    "max_metric",
    "mean_metric",
    "ms_ssim",
    "psnr",
    "si_ti",
    "sobel_magnitude",
]
