import numpy as np
import pytest

import oracles
from conftest import luma_clip, rgb_clip, solid_rgb_frame, textured_luma
from srvqa.media import VideoClip
from srvqa.metrics import MetricValue, colorfulness, ms_ssim, psnr, si_ti
from srvqa.metrics.base import mean_metric


def test_metric_value_rejects_inconsistent_pooling():
    with pytest.raises(ValueError, match="mean"):
        MetricValue("x", 5.0, per_frame=(1.0, 2.0))


def test_metric_value_serialization():
    m = mean_metric("psnr", [40.0, 42.0])
    assert m.to_dict() == {"name": "psnr", "value": 41.0, "per_frame": [40.0, 42.0]}


# -- PSNR ----------------------------------------------------------------------

def test_psnr_identical_capped():
    clip = luma_clip([textured_luma(0, 16, 16)] * 2)
    assert psnr(clip, clip).value == 100.0


def test_psnr_closed_form_constant_offset():
    ref = luma_clip([np.full((8, 8), 16, np.uint8)])
    dist = luma_clip([np.full((8, 8), 18, np.uint8)])
    expected = 10 * np.log10(255**2 / 4.0)
    assert psnr(ref, dist).value == pytest.approx(expected, abs=1e-9)
    assert psnr(ref, dist).value == pytest.approx(42.1102, abs=1e-3)


def test_psnr_matches_loop_oracle():
    rng = np.random.RandomState(1)
    for _ in range(20):
        a = rng.randint(0, 256, (8, 8), dtype=np.uint8)
        b = rng.randint(0, 256, (8, 8), dtype=np.uint8)
        got = psnr(luma_clip([a]), luma_clip([b])).value
        assert got == pytest.approx(oracles.psnr_loop(a.tolist(), b.tolist()), abs=1e-9)


def test_psnr_symmetry():
    rng = np.random.RandomState(2)
    a = rng.randint(0, 256, (8, 8), dtype=np.uint8)
    b = rng.randint(0, 256, (8, 8), dtype=np.uint8)
    assert psnr(luma_clip([a]), luma_clip([b])).value == psnr(
        luma_clip([b]), luma_clip([a])
    ).value


def test_psnr_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        psnr(luma_clip([np.zeros((8, 8), np.uint8)]),
             luma_clip([np.zeros((8, 10), np.uint8)]))


# -- MS-SSIM ---------------------------------------------------------------------

def test_ms_ssim_identity_is_one():
    clip = luma_clip([textured_luma(3, 200, 200)])
    assert ms_ssim(clip, clip).value == pytest.approx(1.0, abs=1e-9)


def test_ms_ssim_inverted_is_low():
    y = textured_luma(4, 200, 200)
    ref = luma_clip([y])
    dist = luma_clip([255 - y])
    assert ms_ssim(ref, dist).value < 0.1


def test_ms_ssim_noise_monotonicity():
    rng = np.random.RandomState(7)
    for seed in (10, 11, 12):
        y = textured_luma(seed, 200, 200)
        ref = luma_clip([y])
        scores = []
        for sigma in (2, 5, 10, 20, 30):
            noisy = np.clip(
                y.astype(np.float64) + rng.normal(0, sigma, y.shape), 0, 255
            ).astype(np.uint8)
            scores.append(ms_ssim(ref, luma_clip([noisy])).value)
        assert all(a > b for a, b in zip(scores, scores[1:])), scores


def test_ms_ssim_small_frames_fewer_scales():
    y = textured_luma(5, 64, 64)
    clip = luma_clip([y])
    assert ms_ssim(clip, clip).value == pytest.approx(1.0, abs=1e-9)


def test_ms_ssim_in_unit_interval():
    rng = np.random.RandomState(9)
    a = rng.randint(0, 256, (64, 64), dtype=np.uint8)
    b = rng.randint(0, 256, (64, 64), dtype=np.uint8)
    v = ms_ssim(luma_clip([a]), luma_clip([b])).value
    assert 0.0 <= v <= 1.0


# -- SI / TI ----------------------------------------------------------------------

def test_si_ti_constant_static():
    clip = luma_clip([np.full((16, 16), 50, np.uint8)] * 3)
    si, ti = si_ti(clip)
    assert si.value == 0.0
    assert ti.value == 0.0


def test_si_ti_static_textured():
    y = textured_luma(6, 16, 16)
    clip = luma_clip([y, y, y])
    si, ti = si_ti(clip)
    assert si.value > 0.0
    assert ti.value == 0.0


def test_si_ti_matches_hand_oracle():
    y0 = np.array(
        [[0, 0, 0, 0], [0, 255, 255, 0], [0, 255, 255, 0], [0, 0, 0, 0]],
        dtype=np.uint8,
    )
    y1 = np.array(
        [[10, 10, 10, 10], [10, 200, 200, 10], [10, 200, 200, 10], [10, 10, 10, 10]],
        dtype=np.uint8,
    )
    clip = luma_clip([y0, y1])
    si, ti = si_ti(clip)
    osi, oti = oracles.si_ti_loop([y0.tolist(), y1.tolist()])
    assert si.value == pytest.approx(osi, abs=1e-9)
    assert ti.value == pytest.approx(oti, abs=1e-9)


def test_si_ti_random_matches_oracle():
    rng = np.random.RandomState(12)
    for _ in range(10):
        lumas = [rng.randint(0, 256, (8, 8), dtype=np.uint8) for _ in range(3)]
        clip = luma_clip(lumas)
        si, ti = si_ti(clip)
        osi, oti = oracles.si_ti_loop([y.tolist() for y in lumas])
        assert si.value == pytest.approx(osi, abs=1e-9)
        assert ti.value == pytest.approx(oti, abs=1e-9)


def test_si_ti_shift_invariance():
    rng = np.random.RandomState(13)
    y = rng.randint(0, 200, (12, 12), dtype=np.uint8)
    base_si, base_ti = si_ti(luma_clip([y, np.roll(y, 1, axis=0)]))
    shifted = [(y + 40).astype(np.uint8), (np.roll(y, 1, axis=0) + 40).astype(np.uint8)]
    si2, ti2 = si_ti(luma_clip(shifted))
    assert si2.value == pytest.approx(base_si.value, abs=1e-9)
    assert ti2.value == pytest.approx(base_ti.value, abs=1e-9)


def test_si_ti_single_frame_ti_zero():
    si, ti = si_ti(luma_clip([textured_luma(8, 16, 16)]))
    assert ti.value == 0.0


def test_si_ti_mean_pooling_option():
    rng = np.random.RandomState(14)
    lumas = [rng.randint(0, 256, (8, 8), dtype=np.uint8) for _ in range(3)]
    si_max, _ = si_ti(luma_clip(lumas), pooling="max")
    si_mean, _ = si_ti(luma_clip(lumas), pooling="mean")
    assert si_max.value >= si_mean.value


# -- colorfulness -------------------------------------------------------------------

def test_colorfulness_grayscale_zero():
    g = textured_luma(15, 8, 8)
    clip = rgb_clip([(g, g, g)])
    assert colorfulness(clip).value == pytest.approx(0.0, abs=1e-12)


def test_colorfulness_solid_red_closed_form():
    clip = VideoClip(frames=(solid_rgb_frame(8, 8, (255, 0, 0)),), fps=30.0)
    expected = 0.3 * np.sqrt(255.0**2 + 127.5**2)
    assert colorfulness(clip).value == pytest.approx(expected, abs=1e-9)


def test_colorfulness_matches_loop_oracle():
    rng = np.random.RandomState(16)
    for _ in range(10):
        r = rng.randint(0, 256, (8, 8), dtype=np.uint8)
        g = rng.randint(0, 256, (8, 8), dtype=np.uint8)
        b = rng.randint(0, 256, (8, 8), dtype=np.uint8)
        got = colorfulness(rgb_clip([(r, g, b)])).value
        want = oracles.colorfulness_loop(r.tolist(), g.tolist(), b.tolist())
        assert got == pytest.approx(want, abs=1e-9)


def test_colorfulness_permutation_invariant():
    rng = np.random.RandomState(17)
    r = rng.randint(0, 256, (8, 8), dtype=np.uint8)
    g = rng.randint(0, 256, (8, 8), dtype=np.uint8)
    b = rng.randint(0, 256, (8, 8), dtype=np.uint8)
    base = colorfulness(rgb_clip([(r, g, b)])).value
    perm = rng.permutation(64)
    rp = r.reshape(-1)[perm].reshape(8, 8)
    gp = g.reshape(-1)[perm].reshape(8, 8)
    bp = b.reshape(-1)[perm].reshape(8, 8)
    assert colorfulness(rgb_clip([(rp, gp, bp)])).value == pytest.approx(base, abs=1e-9)
