import csv
import json

import numpy as np

from conftest import make_fusion_dataset, textured_luma
from srvqa.cli import main
from srvqa.fusion import FEATURE_NAMES
from srvqa.media import ColorSpace, Frame, VideoClip, write_y4m_file
from srvqa.subjective import Choice, PairId, Vote, write_votes


def write_feature_csv(path, samples):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(list(FEATURE_NAMES) + ["subjective_score", "group_id"])
        for s in samples:
            row = [getattr(s.features, n) for n in FEATURE_NAMES]
            writer.writerow(row + [s.subjective_score, s.group_id])


def y4m_clip(path, seed, frames=2, w=32, h=32):
    out = []
    for t in range(frames):
        y = np.roll(textured_luma(seed, h, w), t, axis=0)
        cb = np.full((h // 2, w // 2), 128, np.uint8)
        cr = np.full((h // 2, w // 2), 128, np.uint8)
        out.append(Frame(w, h, (y, cb, cr), ColorSpace.YCBCR_BT601))
    clip = VideoClip(frames=tuple(out), fps=30.0, fps_rational=(30, 1))
    write_y4m_file(clip, path)
    return path


def test_cli_score_features_only(tmp_path, capsys):
    ref = y4m_clip(tmp_path / "ref.y4m", 1)
    assert main(["score", str(ref), str(ref)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["features"]["erqa"] == 1.0
    assert payload["features"]["lpips"] == 0.0


def test_cli_train_then_score_with_model(tmp_path, capsys):
    samples = make_fusion_dataset(groups=8, per_group=4)
    features_csv = tmp_path / "features.csv"
    write_feature_csv(features_csv, samples)
    model_path = tmp_path / "model.json"
    assert main(["train", str(features_csv), str(model_path)]) == 0
    assert model_path.exists()
    capsys.readouterr()

    ref = y4m_clip(tmp_path / "r.y4m", 2)
    dist = y4m_clip(tmp_path / "d.y4m", 2)
    assert main(["score", str(ref), str(dist), "--model", str(model_path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert "score" in payload


def test_cli_bsq(tmp_path, capsys):
    def write_curve(path, rows):
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["bitrate_kbps", "quality"])
            w.writerows(rows)

    test_csv = tmp_path / "t.csv"
    ref_csv = tmp_path / "r.csv"
    write_curve(test_csv, [(200, 0.2), (600, 0.5), (2000, 0.8)])
    write_curve(ref_csv, [(100, 0.2), (300, 0.5), (1000, 0.8)])
    assert main(["bsq", str(test_csv), str(ref_csv)]) == 0
    out = capsys.readouterr().out
    assert "BSQ-rate 2.0000" in out


def test_cli_bt(tmp_path, capsys):
    votes = []
    for i in range(12):
        votes.append(
            Vote(f"p{i}", PairId("good", "bad", "c1"),
                 Choice.A if i % 4 else Choice.B)
        )
    log = tmp_path / "votes.jsonl"
    write_votes(votes, log)
    out_json = tmp_path / "scores.json"
    assert main(["bt", str(log), "--output", str(out_json)]) == 0
    scores = json.loads(out_json.read_text())
    assert scores["c1"]["scores"]["good"] == 1.0
    assert scores["c1"]["scores"]["bad"] == 0.0


def test_cli_curate(tmp_path, capsys):
    rng = np.random.RandomState(0)
    rows = []
    for c, center in enumerate([(0, 0), (8, 8), (-8, 4)]):
        for i in range(5):
            rows.append((f"v{c}_{i}", *(rng.randn(2) * 0.2 + center)))
    path = tmp_path / "videos.csv"
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["video_id", "si", "ti"])
        w.writerows(rows)
    assert main(["curate", str(path), "--clusters", "3"]) == 0
    out = capsys.readouterr().out
    assert out.count("cluster") == 3


def test_cli_ablate_small(tmp_path, capsys):
    samples = make_fusion_dataset(groups=6, per_group=3)
    features_csv = tmp_path / "features.csv"
    write_feature_csv(features_csv, samples)
    out_json = tmp_path / "ablation.json"
    assert main(["ablate", str(features_csv), "--output", str(out_json)]) == 0
    payload = json.loads(out_json.read_text())
    assert len(payload["entries"]) == 36


def test_cli_bench_smoke(tmp_path, capsys):
    src = y4m_clip(tmp_path / "src.y4m", 3, frames=2, w=32, h=32)
    config = {
        "version": 1,
        "output_dir": str(tmp_path / "out"),
        "seed": 0,
        "sources": [{"path": str(src), "id": "clip"}],
        "codecs": [
            {
                "name": "copy",
                "encode": "{python} -m srvqa.tools.mock_codec encode {input} {output} {bitrate_kbps}",
                "decode": "{python} -m srvqa.tools.mock_codec decode {input} {output}",
            }
        ],
        "sr_methods": [{"name": "no_sr"}],
        "target_bitrates_kbps": [100, 300],
        "metrics": ["psnr"],
        "downscale": {"width": 16, "height": 16},
        "bsq_quality": "psnr",
    }
    config_path = tmp_path / "bench.json"
    config_path.write_text(json.dumps(config))
    rc = main(["bench", str(config_path)])
    out = capsys.readouterr().out
    assert "pipeline done" in out
    assert rc in (0, 1)  # copy codec can yield degenerate-BSQ failures
