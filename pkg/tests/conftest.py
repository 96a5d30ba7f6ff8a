import numpy as np
import pytest

from srvqa.media import ColorSpace, Frame, VideoClip


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and rep.when == "call":
        number = marker.args[0]
        description = marker.args[1] if len(marker.args) > 1 else item.name
        status = "PASS" if rep.passed else "FAIL"
        print(f"\n[criterion {number:>2}] {status}: {description}", flush=True)


def yuv_frame(y, cb=None, cr=None):
    """Build a YCbCr frame from 2-D arrays; chroma defaults to neutral 4:2:0."""
    y = np.asarray(y, dtype=np.uint8)
    h, w = y.shape
    if cb is None:
        cb = np.full((h // 2, w // 2), 128, dtype=np.uint8)
    if cr is None:
        cr = np.full((h // 2, w // 2), 128, dtype=np.uint8)
    return Frame(width=w, height=h, planes=(y, np.asarray(cb, dtype=np.uint8),
                                            np.asarray(cr, dtype=np.uint8)),
                 color_space=ColorSpace.YCBCR_BT601)


def rgb_frame(r, g, b):
    r = np.asarray(r, dtype=np.uint8)
    return Frame(
        width=r.shape[1],
        height=r.shape[0],
        planes=(r, np.asarray(g, dtype=np.uint8), np.asarray(b, dtype=np.uint8)),
        color_space=ColorSpace.RGB,
    )


def solid_rgb_frame(w, h, rgb):
    r = np.full((h, w), rgb[0], dtype=np.uint8)
    g = np.full((h, w), rgb[1], dtype=np.uint8)
    b = np.full((h, w), rgb[2], dtype=np.uint8)
    return rgb_frame(r, g, b)


def luma_clip(lumas, fps=30.0, source_id="test", bitrate=None):
    frames = tuple(yuv_frame(y) for y in lumas)
    return VideoClip(frames=frames, fps=fps, source_id=source_id,
                     encoded_bitrate_kbps=bitrate)


def rgb_clip(triples, fps=30.0, source_id="test", bitrate=None):
    frames = tuple(rgb_frame(r, g, b) for r, g, b in triples)
    return VideoClip(frames=frames, fps=fps, source_id=source_id,
                     encoded_bitrate_kbps=bitrate)


def textured_luma(seed, h, w, smooth=True):
    """Deterministic textured plane; smooth=True gives natural-ish content."""
    rng = np.random.RandomState(seed)
    base = rng.rand(h, w)
    if smooth:
        from scipy import ndimage

        base = ndimage.gaussian_filter(base, sigma=3.0)
        base = (base - base.min()) / (base.max() - base.min() + 1e-12)
    return (base * 255).astype(np.uint8)


def make_fusion_dataset(seed=42, groups=30, per_group=8, noise=0.02):
    """Synthetic fusion training set: scores are a fixed linear combination
    of the 7 active features plus uniform noise; the raw no-reference score
    and the bitrate are planted as pure noise columns."""
    from srvqa.fusion import FeatureVector, TrainingSample

    rng = np.random.RandomState(seed)
    rows = []
    raws = []
    for g in range(groups):
        for _ in range(per_group):
            erqa = rng.rand()
            lpips = rng.rand()
            mdtvsfa = rng.rand()
            si = rng.rand() * 100
            ti = rng.rand() * 80
            col = rng.rand() * 120
            bitrate = 100 + rng.rand() * 3900
            fv = FeatureVector.from_base(
                erqa=erqa, lpips=lpips, mdtvsfa=mdtvsfa,
                si=si, ti=ti, colorfulness=col, bitrate_kbps=bitrate,
            )
            raw = (
                0.35 * erqa
                - 0.30 * lpips
                + 0.20 * (erqa * lpips)
                + 0.25 * (erqa * mdtvsfa)
                + 0.10 * (si / 100)
                - 0.10 * (ti / 80)
                + 0.15 * (col / 120)
                + rng.uniform(-noise, noise)
            )
            raws.append(raw)
            rows.append((fv, raw, f"g{g:02d}"))
    lo, hi = min(raws), max(raws)
    return [
        TrainingSample(
            features=fv, subjective_score=(raw - lo) / (hi - lo), group_id=g
        )
        for fv, raw, g in rows
    ]


@pytest.fixture
def rng():
    return np.random.RandomState(0)
