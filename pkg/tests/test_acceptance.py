"""Acceptance suite: every criterion runs at its stated tolerance and prints
one pass/fail line (see the `criterion` marker hook in conftest)."""

import json
import sys
import time
from pathlib import Path

import numpy as np
import pytest

import oracles
from conftest import luma_clip, make_fusion_dataset, rgb_clip, textured_luma, yuv_frame
from srvqa.analysis import RDCurve, bsq_rate, pearson, rank_table, spearman
from srvqa.fusion import (
    DEFAULT_ACTIVE_FEATURES,
    FEATURE_NAMES,
    ablate_feature_pairs,
    cross_validate,
)
from srvqa.fusion.svr import svr_fit
from srvqa.metrics import colorfulness, erqa_frame, ms_ssim, psnr, si_ti
from srvqa.subjective import (
    Choice,
    PairId,
    VerificationPair,
    Vote,
    bradley_terry_fit,
    filter_participants,
    fit_abilities,
    read_votes,
    schedule_pairs,
)

from test_analysis import TABLE_ROWS, marker_of, table_entries


@pytest.mark.criterion(1, "metric oracles match naive loops on 100+ random inputs")
def test_criterion_1_metric_oracles():
    start = time.monotonic()
    rng = np.random.RandomState(100)

    for _ in range(100):
        a = rng.randint(0, 256, (8, 8), dtype=np.uint8)
        b = rng.randint(0, 256, (8, 8), dtype=np.uint8)
        got = psnr(luma_clip([a]), luma_clip([b])).value
        assert got == pytest.approx(oracles.psnr_loop(a.tolist(), b.tolist()), abs=1e-9)

    for _ in range(100):
        r = rng.randint(0, 256, (6, 6), dtype=np.uint8)
        g = rng.randint(0, 256, (6, 6), dtype=np.uint8)
        bl = rng.randint(0, 256, (6, 6), dtype=np.uint8)
        got = colorfulness(rgb_clip([(r, g, bl)])).value
        want = oracles.colorfulness_loop(r.tolist(), g.tolist(), bl.tolist())
        assert got == pytest.approx(want, abs=1e-9)

    for _ in range(100):
        lumas = [rng.randint(0, 256, (6, 6), dtype=np.uint8) for _ in range(2)]
        si, ti = si_ti(luma_clip(lumas))
        osi, oti = oracles.si_ti_loop([y.tolist() for y in lumas])
        assert si.value == pytest.approx(osi, abs=1e-9)
        assert ti.value == pytest.approx(oti, abs=1e-9)

    for _ in range(100):
        x = rng.rand(10)
        y = rng.rand(10)
        assert pearson(x, y) == pytest.approx(
            oracles.pearson_loop(x.tolist(), y.tolist()), abs=1e-12
        )

    for _ in range(100):
        x = rng.randint(0, 8, 10).astype(float)
        y = rng.rand(10)
        if len(set(x)) < 2:
            continue
        assert spearman(x, y) == pytest.approx(
            oracles.spearman_loop(x.tolist(), y.tolist()), abs=1e-12
        )

    elapsed = time.monotonic() - start
    assert elapsed < 30.0, f"criterion 1 took {elapsed:.1f}s"


@pytest.mark.criterion(2, "MS-SSIM identity and strict noise monotonicity")
def test_criterion_2_ms_ssim():
    noise_rng = np.random.RandomState(200)
    for seed in (20, 21, 22):
        y = textured_luma(seed, 200, 200)
        ref = luma_clip([y])
        assert ms_ssim(ref, ref).value == pytest.approx(1.0, abs=1e-9)
        scores = []
        for sigma in (2, 5, 10, 20, 30):
            noisy = np.clip(
                y.astype(np.float64) + noise_rng.normal(0, sigma, y.shape), 0, 255
            ).astype(np.uint8)
            scores.append(ms_ssim(ref, luma_clip([noisy])).value)
        assert all(a > b for a, b in zip(scores, scores[1:])), scores


@pytest.mark.criterion(3, "ERQA identity, shift compensation, half edge, radius monotone")
def test_criterion_3_erqa():
    step = np.zeros((16, 16), dtype=np.uint8)
    step[:, 8:] = 255
    frame = yuv_frame(step)
    assert erqa_frame(frame, frame) == 1.0

    shifted = np.zeros_like(step)
    shifted[:, 9:] = 255
    assert erqa_frame(frame, yuv_frame(shifted), shift_radius=1) == pytest.approx(1.0)

    half = np.zeros_like(step)
    half[:8, 8:] = 255
    assert erqa_frame(frame, yuv_frame(half)) == pytest.approx(2.0 / 3.0, abs=0.05)

    rng = np.random.RandomState(300)
    for _ in range(20):
        a = yuv_frame(textured_luma(rng.randint(100_000), 24, 24))
        b = yuv_frame(textured_luma(rng.randint(100_000), 24, 24))
        scores = [erqa_frame(a, b, shift_radius=r) for r in (0, 1, 2)]
        assert scores[0] <= scores[1] <= scores[2]


@pytest.mark.criterion(4, "SVR analytic optimum, oracle agreement, realizable tube")
def test_criterion_4_svr():
    sol = svr_fit(np.array([[0.0], [1.0]]), np.array([0.0, 1.0]),
                  C=1e4, epsilon=0.0, tol=1e-9)
    assert sol.w[0] == pytest.approx(1.0, abs=1e-3)
    assert sol.b == pytest.approx(0.0, abs=1e-3)

    rng = np.random.RandomState(7)
    for trial in range(10):
        X = rng.rand(20, 4)
        w_true = rng.randn(4)
        y = 0.3 * (X @ w_true) + 0.3 + 0.05 * rng.randn(20)
        fit = svr_fit(X, y, C=1.0, epsilon=0.05, tol=1e-9)
        _, _, oracle_obj = oracles.svr_subgradient_solve(X, y, 1.0, 0.05)
        rel = abs(fit.primal_objective - oracle_obj) / max(abs(oracle_obj), 1e-12)
        assert rel <= 1e-4, f"problem {trial}: rel={rel:.2e}"

    X = rng.rand(20, 1)
    y = 0.5 * X[:, 0] + 0.1
    fit = svr_fit(X, y, C=10.0, epsilon=0.01, tol=1e-9)
    residuals = np.abs(fit.predict(X) - y)
    assert np.maximum(0.0, residuals - 0.01).sum() == pytest.approx(0.0, abs=1e-9)


@pytest.mark.criterion(5, "fusion CV SRCC >= 0.95 per fold; ablation finds noise pair")
def test_criterion_5_fusion_end_to_end():
    start = time.monotonic()
    samples = make_fusion_dataset(seed=42, groups=30, per_group=8, noise=0.02)
    folds = cross_validate(samples, folds=3, active_features=FEATURE_NAMES)
    assert len(folds) == 3
    for fold in folds:
        assert fold.srcc >= 0.95, f"fold {fold.fold}: srcc={fold.srcc:.4f}"

    report = ablate_feature_pairs(samples, candidates=FEATURE_NAMES)
    assert len(report.entries) == 36
    assert set(report.best_removed_pair) == {"mdtvsfa", "bitrate_kbps"}
    assert set(report.best_subset) == set(DEFAULT_ACTIVE_FEATURES)

    elapsed = time.monotonic() - start
    assert elapsed < 120.0, f"criterion 5 took {elapsed:.1f}s"


@pytest.mark.criterion(6, "Bradley-Terry symmetry, generative recovery, MM monotonicity")
def test_criterion_6_bradley_terry():
    fit = fit_abilities(("a", "b"), np.array([[0.0, 10.0], [10.0, 0.0]]))
    assert abs(fit.abilities[0] - fit.abilities[1]) <= 1e-6

    true_abilities = np.array([1.0, 2.0, 4.0])
    rng = np.random.RandomState(600)
    W = oracles.sample_votes(true_abilities, 1000, rng)
    fit = fit_abilities(("m1", "m2", "m3"), W)
    assert list(np.argsort(fit.abilities)) == [0, 1, 2]
    for i in range(3):
        for j in range(3):
            if i != j:
                want = true_abilities[i] / (true_abilities[i] + true_abilities[j])
                got = fit.win_probability(f"m{i+1}", f"m{j+1}")
                assert abs(got - want) <= 0.05
    history = fit.loglik_history
    assert all(b >= a - 1e-9 for a, b in zip(history, history[1:]))


@pytest.mark.criterion(7, "BSQ-rate identity, bitrate doubling, trapezoid oracle")
def test_criterion_7_bsq_rate():
    curve = RDCurve("self", ((100.0, 0.2), (300.0, 0.5), (1000.0, 0.8)))
    assert bsq_rate(curve, curve).bsq_rate == 1.0  # Table-fixture "No SR" rows

    doubled = RDCurve("2x", tuple((2 * b, q) for b, q in curve.points))
    assert bsq_rate(doubled, curve).bsq_rate == pytest.approx(2.0, abs=1e-9)

    test_curve = RDCurve("t", ((250.0, 0.30), (700.0, 0.55), (2100.0, 0.82)))
    ref_curve = RDCurve("r", ((100.0, 0.25), (600.0, 0.50), (1800.0, 0.90)))
    got = bsq_rate(test_curve, ref_curve).bsq_rate
    want = oracles.bsq_trapezoid_loop(list(test_curve.points), list(ref_curve.points))
    assert got == pytest.approx(want, abs=1e-6)


@pytest.mark.criterion(8, "rank table reproduces the transcribed leaderboard fixture")
def test_criterion_8_table_fixture():
    rows = rank_table(table_entries())
    assert rows[0].label == "SwinIR+x264"
    assert rows[0].subjective_score == 5.855
    assert [r.label for r in rows] == [t[0] for t in TABLE_ROWS]
    assert marker_of(rows, "lpips", "SwinIR+aomenc") == "best"  # ascending direction
    assert marker_of(rows, "lpips", "ahq-11+x264") == "second"
    assert marker_of(rows, "lpips", "SwinIR+uavs3e") == "third"
    assert marker_of(rows, "erqa", "SwinIR+x264") == "best"
    assert marker_of(rows, "vmaf", "SwinIR+aomenc") == "best"
    assert marker_of(rows, "psnr", "ahq-11+x264") == "best"
    assert marker_of(rows, "ms_ssim", "SwinIR+aomenc") == "best"
    assert marker_of(rows, "subjective_score", "SwinIR+x264") == "best"


@pytest.mark.criterion(9, "pipeline smoke: mocks end to end, rerun is pure cache hits")
def test_criterion_9_pipeline_smoke(tmp_path):
    from srvqa.bench import (
        NO_SR,
        CodecSpec,
        PipelineConfig,
        SRSpec,
        SourceSpec,
        run_pipeline,
    )
    from srvqa.media import ColorSpace, Frame, VideoClip, write_y4m_file

    start = time.monotonic()
    py = sys.executable
    sources = []
    for seed in (91, 92):
        frames = []
        base = textured_luma(seed, 64, 64)
        for t in range(16):
            y = np.roll(base, 2 * t, axis=1)
            cb = np.full((32, 32), 120, np.uint8)
            cr = np.full((32, 32), 136, np.uint8)
            frames.append(Frame(64, 64, (y, cb, cr), ColorSpace.YCBCR_BT601))
        clip = VideoClip(frames=tuple(frames), fps=30.0, fps_rational=(30, 1))
        path = tmp_path / f"clip{seed}.y4m"
        write_y4m_file(clip, path)
        sources.append(SourceSpec(str(path), f"clip{seed}"))

    config = PipelineConfig(
        sources=tuple(sources),
        codecs=(
            CodecSpec(
                name="qmock",
                encode_template=py + " -m srvqa.tools.mock_codec qencode {input} {output} {bitrate_kbps}",
                decode_template=py + " -m srvqa.tools.mock_codec qdecode {input} {output}",
            ),
        ),
        sr_methods=(
            SRSpec(name="bicubic4x",
                   template=py + " -m srvqa.tools.mock_sr {in_dir} {out_dir} --scale 4",
                   scale=4),
            SRSpec(name=NO_SR),
        ),
        output_dir=str(tmp_path / "out"),
        target_bitrates_kbps=(100.0, 600.0, 2000.0),
        metrics=("psnr", "ms_ssim"),
        downscale=(16, 16),
        bsq_quality="psnr",
        workers=4,
    )
    first = run_pipeline(config)
    hard_failures = [f for f in first.failures if f["stage"] != "bsq"]
    assert not hard_failures, hard_failures
    assert len(first.rows) == 12  # 2 clips x 1 codec x 3 bitrates x 2 methods
    report = json.loads(Path(first.report_path).read_text())
    assert report["rows"] and report["jobs"]["failed"] == 0
    assert (Path(first.report_dir) / "features.csv").exists()
    assert (Path(first.report_dir) / "summary.md").exists()

    second = run_pipeline(config)
    assert second.job_stats["executed"] == 0, "rerun must be 100% cache hits"
    assert second.job_stats["cached"] == first.job_stats["executed"]
    assert second.rows == first.rows

    elapsed = time.monotonic() - start
    assert elapsed < 60.0, f"criterion 9 took {elapsed:.1f}s"


def build_participant_votes(participant, fail_verification, rng):
    """One 25-vote session: 22 scored + 3 verification; optionally one wrong."""
    votes = []
    for k in range(22):
        votes.append(
            Vote(
                participant_id=participant,
                pair_id=PairId(f"m{k % 5}", f"m{(k % 5) + 1}", f"c{k % 3}"),
                choice=Choice.A if rng.rand() < 0.5 else Choice.B,
            )
        )
    wrong_at = rng.randint(3) if fail_verification else -1
    for v in range(3):
        correct = Choice.A
        answer = Choice.B if v == wrong_at else correct
        votes.append(
            Vote(
                participant_id=participant,
                pair_id=PairId("src", f"broken{v}", "verify"),
                choice=answer,
                is_verification=True,
                expected_choice=correct,
            )
        )
    return votes


@pytest.mark.criterion(10, "participant filtering equals the independent recount")
def test_criterion_10_participant_filtering():
    rng = np.random.RandomState(1000)
    total_participants = 5662
    planted_failures = 265
    failing = set(
        rng.choice(total_participants, planted_failures, replace=False).tolist()
    )
    votes = []
    for p in range(total_participants):
        votes.extend(
            build_participant_votes(f"p{p:05d}", p in failing, rng)
        )

    kept, report = filter_participants(votes)

    # independent recount: participants whose verification answers are all
    # correct, counted with a plain loop over the raw log
    correct = {}
    for v in votes:
        if v.is_verification:
            ok = v.choice is v.expected_choice
            correct[v.participant_id] = correct.get(v.participant_id, True) and ok
    valid_participants = {p for p, ok in correct.items() if ok}
    recount = sum(1 for v in votes if v.participant_id in valid_participants)

    assert report.total_participants == total_participants
    assert report.excluded_participants == planted_failures
    assert report.retained_votes == recount
    assert len(kept) == recount
    assert recount == (total_participants - planted_failures) * 25


@pytest.mark.criterion(11, "rater-UI flow: blinded sessions, JSONL feeds bt, exclusion")
def test_criterion_11_rater_ui_integration(tmp_path):
    from fastapi.testclient import TestClient

    from srvqa.subjective.api import create_study_app

    # 11 methods -> 55 pairs, 2 views each = 110 slots = 5 full 22+3 sessions
    methods = [f"m{i:02d}" for i in range(1, 12)]
    pool = [
        VerificationPair(PairId("src", "broken1", "c1"), Choice.A),
        VerificationPair(PairId("src", "broken2", "c1"), Choice.A),
        VerificationPair(PairId("src", "broken3", "c1"), Choice.A),
    ]
    plan = schedule_pairs(methods, ["c1"], pool, views_per_pair=2, seed=8)
    log_path = tmp_path / "votes.jsonl"
    client = TestClient(create_study_app(plan, log_path))

    sessions_by_id = {s.session_id: s for s in plan.sessions}
    full_session_payload = None
    wrong_participant = None
    for k in range(len(plan.sessions)):
        payload = client.get("/session").json()
        slots = sessions_by_id[payload["session_id"]].slots
        if len(slots) == 25 and full_session_payload is None:
            full_session_payload = (payload, slots)
        fail_this = k == 0
        if fail_this:
            wrong_participant = payload["participant_id"]
        for i, slot in enumerate(slots):
            if slot.is_verification:
                answer = "B" if fail_this else slot.expected.value
            else:
                answer = "A" if slot.pair.method_a < slot.pair.method_b else "B"
            response = client.post(
                "/vote",
                json={"session_id": payload["session_id"], "pair_index": i,
                      "choice": answer},
            )
            assert response.status_code == 200

    # a full session serves 25 pairs, 3 of them hidden verification ones
    assert full_session_payload is not None, "plan produced no full session"
    payload, slots = full_session_payload
    assert len(payload["pairs"]) == 25
    assert sum(1 for s in slots if s.is_verification) == 3
    text = json.dumps(payload)
    for method in methods + ["broken", "src"]:
        assert method not in text, f"blinding leak: {method}"
    assert "is_verification" not in text

    # the JSONL log feeds participant filtering and Bradley-Terry directly
    votes = read_votes(log_path)
    kept, report = filter_participants(votes)
    assert report.excluded_participants == 1
    assert all(v.participant_id != wrong_participant for v in kept)
    abilities = bradley_terry_fit(kept, "c1")
    assert set(abilities.methods) == set(methods)
    assert abilities.ability_of("m01") > abilities.ability_of("m11")
