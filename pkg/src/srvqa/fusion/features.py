"""Candidate feature set for the fused quality metric.

Nine per-video features: three learned/edge metrics, their two products,
spatial and temporal information, colorfulness, and the encoded bitrate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, fields
from typing import Mapping, Sequence, Tuple

import numpy as np

from ..media import VideoClip
from ..metrics import colorfulness, erqa, si_ti
from ..providers import ProviderHandle, lpips_distance, mdtvsfa_score

log = logging.getLogger(__name__)

# Canonical feature order; serialized models store names next to weights so
# this order is a convention, not a wire invariant.
FEATURE_NAMES: Tuple[str, ...] = (
    "erqa",
    "lpips",
    "mdtvsfa",
    "erqa_x_lpips",
    "erqa_x_mdtvsfa",
    "si",
    "ti",
    "colorfulness",
    "bitrate_kbps",
)

# The fused metric's default active subset: everything except the raw
# no-reference score and the bitrate, whose removal costs the least accuracy.
DEFAULT_ACTIVE_FEATURES: Tuple[str, ...] = (
    "erqa",
    "lpips",
    "erqa_x_lpips",
    "erqa_x_mdtvsfa",
    "si",
    "ti",
    "colorfulness",
)

_PRODUCT_TOL = 1e-12


class FeatureError(Exception):
    """A feature could not be computed; names the offending feature."""

    def __init__(self, feature: str, cause: Exception):
        super().__init__(f"feature {feature!r}: {cause}")
        self.feature = feature
        self.cause = cause


@dataclass(frozen=True)
class FeatureVector:
    erqa: float
    lpips: float
    mdtvsfa: float
    erqa_x_lpips: float
    erqa_x_mdtvsfa: float
    si: float
    ti: float
    colorfulness: float
    bitrate_kbps: float

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v):
                raise ValueError(f"feature {f.name} is not finite: {v}")
        if not math.isclose(
            self.erqa_x_lpips, self.erqa * self.lpips, rel_tol=0, abs_tol=_PRODUCT_TOL
        ):
            raise ValueError("erqa_x_lpips must equal erqa * lpips")
        if not math.isclose(
            self.erqa_x_mdtvsfa,
            self.erqa * self.mdtvsfa,
            rel_tol=0,
            abs_tol=_PRODUCT_TOL,
        ):
            raise ValueError("erqa_x_mdtvsfa must equal erqa * mdtvsfa")

    @classmethod
    def from_base(
        cls,
        erqa: float,
        lpips: float,
        mdtvsfa: float,
        si: float,
        ti: float,
        colorfulness: float,
        bitrate_kbps: float,
    ) -> "FeatureVector":
        return cls(
            erqa=erqa,
            lpips=lpips,
            mdtvsfa=mdtvsfa,
            erqa_x_lpips=erqa * lpips,
            erqa_x_mdtvsfa=erqa * mdtvsfa,
            si=si,
            ti=ti,
            colorfulness=colorfulness,
            bitrate_kbps=bitrate_kbps,
        )

    def as_array(self, names: Sequence[str] = FEATURE_NAMES) -> np.ndarray:
        return np.array([getattr(self, n) for n in names], dtype=np.float64)

    def to_dict(self) -> dict:
        return {n: getattr(self, n) for n in FEATURE_NAMES}


@dataclass(frozen=True)
class TrainingSample:
    """One (video, distortion) row: features, rescaled subjective score in
    [0, 1], and the source-video group used for leakage-free folding."""

    features: FeatureVector
    subjective_score: float
    group_id: str

    def __post_init__(self):
        if not 0.0 <= self.subjective_score <= 1.0:
            raise ValueError(
                f"subjective_score must be in [0, 1], got {self.subjective_score}"
            )


def assemble_features(
    ref: VideoClip,
    dist: VideoClip,
    providers: Mapping[str, ProviderHandle],
    shift_radius: int = 1,
) -> FeatureVector:
    """Compute the full 9-feature vector for a reference/distorted clip pair.

    ``providers`` must supply handles under "lpips" and "mdtvsfa" (stubs
    allowed).  Bitrate comes from the distorted clip's metadata; a missing
    bitrate is recorded as 0 and logged.
    """

    def compute(name, fn):
        try:
            return fn()
        except Exception as exc:  # annotated and re-raised
            raise FeatureError(name, exc) from exc

    erqa_value = compute("erqa", lambda: erqa(ref, dist, shift_radius).value)
    lpips_value = compute(
        "lpips", lambda: lpips_distance(providers["lpips"], ref, dist).value
    )
    mdtvsfa_value = compute(
        "mdtvsfa", lambda: mdtvsfa_score(providers["mdtvsfa"], dist).value
    )
    si_value, ti_value = compute("si_ti", lambda: tuple(m.value for m in si_ti(dist)))
    colorfulness_value = compute("colorfulness", lambda: colorfulness(dist).value)
    bitrate = dist.encoded_bitrate_kbps
    if bitrate is None:
        log.warning(
            "clip %s has no encoded bitrate; bitrate_kbps feature set to 0",
            dist.source_id,
        )
        bitrate = 0.0
    return FeatureVector.from_base(
        erqa=erqa_value,
        lpips=lpips_value,
        mdtvsfa=mdtvsfa_value,
        si=si_value,
        ti=ti_value,
        colorfulness=colorfulness_value,
        bitrate_kbps=float(bitrate),
    )
