"""Saliency-centered study crops.

One region per source clip, found from the averaged and blurred saliency
map, then applied identically to every method's output for that clip so
raters compare the same content.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..media import Region, VideoClip, crop, write_y4m_file
from ..media.color import convert_clip
from ..media.frame import ColorSpace
from ..providers import SaliencyMap
from ..subjective.api import blinded_media_id


def saliency_argmax(sal: SaliencyMap) -> Tuple[int, int]:
    """(x, y) of the maximal weight; ties resolve toward the frame center,
    then row-major."""
    weights = sal.weights
    peak = weights.max()
    ys, xs = np.nonzero(weights == peak)
    cy, cx = sal.height // 2, sal.width // 2
    best = min(
        zip(ys.tolist(), xs.tolist()),
        key=lambda yx: ((yx[0] - cy) ** 2 + (yx[1] - cx) ** 2, yx[0], yx[1]),
    )
    return best[1], best[0]


def crop_region(sal: SaliencyMap, crop_w: int, crop_h: int) -> Region:
    """A crop_w x crop_h region centered on the saliency argmax, clamped to
    frame bounds."""
    if sal.width < crop_w or sal.height < crop_h:
        raise ValueError(
            f"frame {sal.width}x{sal.height} is smaller than the "
            f"{crop_w}x{crop_h} crop"
        )
    ax, ay = saliency_argmax(sal)
    x = int(np.clip(ax - crop_w // 2, 0, sal.width - crop_w))
    y = int(np.clip(ay - crop_h // 2, 0, sal.height - crop_h))
    return Region(x=x, y=y, w=crop_w, h=crop_h)


@dataclass(frozen=True)
class CropEntry:
    crop_id: str
    clip_id: str
    method: str  # "sr+codec" label
    bitrate_kbps: float
    path: str
    region: Tuple[int, int, int, int]


def render_crops(
    regions: Dict[str, Region],
    distorted: Sequence[Tuple[str, str, float, VideoClip]],
    out_dir,
    salt: str = "",
) -> List[CropEntry]:
    """Write cropped .y4m files for (clip_id, method, bitrate, clip) entries.

    All methods of one clip share that clip's region.  File names are
    content-blinded so the rater UI cannot leak method identities.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for clip_id, method, bitrate, clip in distorted:
        region = regions[clip_id]
        # crop in RGB so odd region offsets stay legal on 4:2:0 sources,
        # then store as 4:4:4 .y4m
        cropped = convert_clip(crop(convert_clip(clip, ColorSpace.RGB), region),
                               ColorSpace.YCBCR_BT601)
        crop_id = blinded_media_id(method, f"{clip_id}@{bitrate:g}", salt)
        path = out_dir / f"{crop_id}.y4m"
        write_y4m_file(cropped, path)
        entries.append(
            CropEntry(
                crop_id=crop_id,
                clip_id=clip_id,
                method=method,
                bitrate_kbps=bitrate,
                path=str(path),
                region=(region.x, region.y, region.w, region.h),
            )
        )
    return entries


def write_manifest(entries: Sequence[CropEntry], regions: Dict[str, Region], path) -> None:
    payload = {
        "regions": {
            clip: [r.x, r.y, r.w, r.h] for clip, r in sorted(regions.items())
        },
        "crops": [
            {
                "crop_id": e.crop_id,
                "clip_id": e.clip_id,
                "method": e.method,
                "bitrate_kbps": e.bitrate_kbps,
                "path": e.path,
                "region": list(e.region),
            }
            for e in entries
        ],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
