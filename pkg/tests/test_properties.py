"""Property tests for the invariants that hold over whole input domains."""

import io

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import luma_clip, yuv_frame
from srvqa.analysis import RDCurve, bsq_rate, spearman
from srvqa.media import Region, crop_frame, read_y4m, y4m_bytes
from srvqa.metrics import psnr


@st.composite
def small_clip(draw):
    w = draw(st.sampled_from([4, 8, 12]))
    h = draw(st.sampled_from([4, 8, 12]))
    n = draw(st.integers(1, 3))
    seed = draw(st.integers(0, 2**31 - 1))
    rng = np.random.RandomState(seed)
    return luma_clip([rng.randint(0, 256, (h, w), dtype=np.uint8) for _ in range(n)])


@given(small_clip())
@settings(max_examples=25, deadline=None)
def test_y4m_round_trip_property(clip):
    data = y4m_bytes(clip)
    again = read_y4m(io.BytesIO(data))
    assert y4m_bytes(again) == data


@given(small_clip(), small_clip())
@settings(max_examples=25, deadline=None)
def test_psnr_symmetric_property(a, b):
    if (a.width, a.height, len(a)) != (b.width, b.height, len(b)):
        return
    assert psnr(a, b).value == psnr(b, a).value


@given(
    st.integers(0, 7), st.integers(0, 7), st.integers(1, 8), st.integers(1, 8),
    st.integers(0, 2**31 - 1),
)
@settings(max_examples=50, deadline=None)
def test_crop_composition_property(x, y, w, h, seed):
    rng = np.random.RandomState(seed)
    frame = yuv_frame(rng.randint(0, 256, (16, 16), dtype=np.uint8))
    x, y, w, h = 2 * (x // 2), 2 * (y // 2), 2 * max(2, w - w % 2), 2 * max(2, h - h % 2)
    if x + w + 2 > 16 or y + h + 2 > 16:
        return
    outer = Region(x, y, w + 2, h + 2)
    inner = Region(2, 2, w, h) if (w + 2 > w and h + 2 > h and w >= 2 and h >= 2) else None
    if inner is None or inner.x + inner.w > outer.w or inner.y + inner.h > outer.h:
        return
    double = crop_frame(crop_frame(frame, outer), inner)
    composed = crop_frame(frame, Region(x + 2, y + 2, w, h))
    assert (double.planes[0] == composed.planes[0]).all()


@given(st.lists(st.floats(1.0, 5000.0), min_size=3, max_size=6, unique=True),
       st.integers(0, 2**31 - 1))
@settings(max_examples=50, deadline=None)
def test_bsq_self_identity_property(bitrates, seed):
    rng = np.random.RandomState(seed)
    quality = np.sort(rng.rand(len(bitrates)))
    curve = RDCurve("c", tuple(zip(sorted(bitrates), quality.tolist())))
    assert bsq_rate(curve, curve).bsq_rate == 1.0


@given(st.lists(st.floats(-10, 10), min_size=4, max_size=12, unique=True),
       st.integers(0, 2**31 - 1))
@settings(max_examples=50, deadline=None)
def test_spearman_monotone_transform_property(xs, seed):
    x = np.sort(np.asarray(xs))
    # the transform must stay strictly increasing after float rounding, so
    # keep the inputs well separated
    if np.diff(x).min() < 1e-3:
        return
    rng = np.random.RandomState(seed)
    y = rng.rand(len(x))
    base = spearman(x, y)
    transformed = spearman(np.exp(x / 5.0), y)
    assert abs(base - transformed) < 1e-12
