"""BSQ-rate: the bitrate ratio needed to match a reference at equal quality.

Rate-distortion curves are made monotone by a cumulative max over their
bitrate-sorted points, bitrate is interpolated piecewise-linearly in the
log2 domain as a function of quality, and the two bitrate integrals over
the shared quality range are compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.integrate import simpson

BSQ_SAMPLES = 1000


@dataclass(frozen=True)
class RDCurve:
    """(bitrate, quality) points for one processing chain."""

    label: str
    points: Tuple[Tuple[float, float], ...]  # (bitrate_kbps, quality)

    def __post_init__(self):
        pts = tuple((float(b), float(q)) for b, q in self.points)
        if len(pts) < 2:
            raise ValueError(f"{self.label}: an RD curve needs at least 2 points")
        bitrates = [b for b, _ in pts]
        if any(b <= 0 for b in bitrates):
            raise ValueError(f"{self.label}: bitrates must be strictly positive")
        if len(set(bitrates)) != len(bitrates):
            raise ValueError(f"{self.label}: bitrates must be distinct")
        object.__setattr__(self, "points", pts)

    def monotone(self) -> Tuple[np.ndarray, np.ndarray]:
        """Bitrate-sorted points with quality made non-decreasing
        (cumulative max); returns (log2 bitrates, qualities).

        Flat quality runs keep only their cheapest point, so b(q) is the
        least bitrate achieving q and interpolation never sees duplicates.
        """
        pts = sorted(self.points)
        bitrates = np.array([b for b, _ in pts])
        quality = np.maximum.accumulate(np.array([q for _, q in pts]))
        keep = np.ones(len(pts), dtype=bool)
        keep[1:] = quality[1:] > quality[:-1]
        return np.log2(bitrates[keep]), quality[keep]


@dataclass(frozen=True)
class BsqResult:
    test_label: str
    reference_label: str
    bsq_rate: float
    quality_range: Tuple[float, float]

    def __post_init__(self):
        if self.bsq_rate <= 0:
            raise ValueError(f"bsq_rate must be positive, got {self.bsq_rate}")

    def to_dict(self) -> dict:
        return {
            "test": self.test_label,
            "reference": self.reference_label,
            "bsq_rate": self.bsq_rate,
            "quality_range": list(self.quality_range),
        }


def _log_bitrate_at(quality: np.ndarray, log_b: np.ndarray, q: np.ndarray) -> np.ndarray:
    # piecewise-linear in (quality, log2 bitrate)
    return np.interp(q, quality, log_b)


def bsq_rate(test: RDCurve, ref: RDCurve, samples: int = BSQ_SAMPLES) -> BsqResult:
    """Average bitrate ratio of ``test`` vs ``ref`` over their shared quality
    range; < 1 means the test chain needs less bitrate for the same quality."""
    log_b_t, q_t = test.monotone()
    log_b_r, q_r = ref.monotone()
    q_lo = max(q_t.min(), q_r.min())
    q_hi = min(q_t.max(), q_r.max())
    if q_hi <= q_lo:
        raise ValueError(
            f"no common quality range between {test.label} "
            f"[{q_t.min()}, {q_t.max()}] and {ref.label} [{q_r.min()}, {q_r.max()}]"
        )
    qs = np.linspace(q_lo, q_hi, samples)
    bitrate_t = np.exp2(_log_bitrate_at(q_t, log_b_t, qs))
    bitrate_r = np.exp2(_log_bitrate_at(q_r, log_b_r, qs))
    integral_t = simpson(bitrate_t, x=qs)
    integral_r = simpson(bitrate_r, x=qs)
    return BsqResult(
        test_label=test.label,
        reference_label=ref.label,
        bsq_rate=float(integral_t / integral_r),
        quality_range=(float(q_lo), float(q_hi)),
    )


def average_bsq(results: Sequence[BsqResult], geometric: bool = False) -> float:
    """Pool BSQ-rates across clips; arithmetic mean by default."""
    rates = np.array([r.bsq_rate for r in results], dtype=np.float64)
    if rates.size == 0:
        raise ValueError("no BSQ results to average")
    if geometric:
        return float(np.exp(np.log(rates).mean()))
    return float(rates.mean())
