"""Shared metric result type."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple


@dataclass(frozen=True)
class MetricValue:
    """A named scalar metric, optionally with the per-frame values behind it.

    ``aggregation`` states how `value` pools `per_frame` ("mean" or "max");
    it is metadata, not part of the serialized form.
    """

    name: str
    value: float
    per_frame: Optional[Tuple[float, ...]] = None
    aggregation: str = "mean"

    def __post_init__(self):
        if self.per_frame is not None:
            object.__setattr__(self, "per_frame", tuple(float(v) for v in self.per_frame))
            if self.aggregation == "mean":
                pooled = sum(self.per_frame) / len(self.per_frame)
            elif self.aggregation == "max":
                pooled = max(self.per_frame)
            else:
                raise ValueError(f"unknown aggregation {self.aggregation!r}")
            if not math.isclose(pooled, self.value, rel_tol=0, abs_tol=1e-9):
                raise ValueError(
                    f"{self.name}: value {self.value} is not the {self.aggregation} "
                    f"of per_frame ({pooled})"
                )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "per_frame": list(self.per_frame) if self.per_frame is not None else None,
        }


def mean_metric(name: str, per_frame) -> MetricValue:
    per_frame = tuple(float(v) for v in per_frame)
    return MetricValue(name, sum(per_frame) / len(per_frame), per_frame, "mean")


def max_metric(name: str, per_frame) -> MetricValue:
    per_frame = tuple(float(v) for v in per_frame)
    return MetricValue(name, max(per_frame), per_frame, "max")
