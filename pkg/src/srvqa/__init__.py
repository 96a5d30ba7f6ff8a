"""srvqa: video-quality toolkit and benchmark harness for super-resolved
compressed video.

Subpackages:
    media      decoding, color conversion, resizing, cropping
    metrics    PSNR, MS-SSIM, SI/TI, colorfulness, edge-restoration quality
    providers  learned-metric / saliency / VMAF provider adapters and stubs
    fusion     the fused quality metric: features, SVR training, ablation
    subjective pairwise votes, Bradley-Terry scoring, study scheduling, API
    analysis   correlations, RD curves, BSQ-rate, rankings, clustering
    bench      config-driven benchmark pipeline over external tools
"""

__version__ = "0.1.0"
