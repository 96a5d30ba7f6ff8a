"""Mock codecs for tests and dry runs.

Two variants, both driven through the regular subprocess/template path so
pipeline plumbing is exercised without third-party encoders:

  encode/decode    "copy": artifact is the input .y4m verbatim.
  qencode/qdecode  "quantize": luma-quantizes harder at lower bitrates and
                   pads the artifact toward the target size, so achieved
                   bitrates and qualities spread like a real rate ladder.
"""

import argparse
import json
import shutil
import sys
import zlib
from pathlib import Path

_MAGIC = b"SRVQA-QMOCK1\n"


def _qencode(input_path: str, output_path: str, bitrate_kbps: float) -> int:
    import numpy as np

    from ..media import read_y4m_file, y4m_bytes
    from ..media.frame import Frame, VideoClip

    clip = read_y4m_file(input_path)
    step = max(1, int(round(8000.0 / max(bitrate_kbps, 1.0))))
    frames = []
    for f in clip.frames:
        quant_y = np.clip(
            (f.planes[0].astype(np.int32) + step // 2) // step * step, 0, 255
        ).astype(np.uint8)
        frames.append(
            Frame(f.width, f.height, (quant_y, f.planes[1], f.planes[2]), f.color_space)
        )
    quantized = VideoClip(
        frames=tuple(frames), fps=clip.fps, source_id=clip.source_id,
        fps_rational=clip.fps_rational,
    )
    # zlib makes heavier quantization genuinely cheaper; padding pulls the
    # artifact up toward the target so achieved bitrates track the ladder
    payload = zlib.compress(y4m_bytes(quantized), level=6)
    header = _MAGIC + json.dumps({"payload_len": len(payload)}).encode() + b"\n"
    target_size = int(bitrate_kbps * 1000 / 8 * clip.duration_seconds)
    padding = max(0, target_size - len(header) - len(payload))
    Path(output_path).write_bytes(header + payload + b"\0" * padding)
    return 0


def _qdecode(input_path: str, output_path: str) -> int:
    data = Path(input_path).read_bytes()
    if not data.startswith(_MAGIC):
        print("not a quantize-mock artifact", file=sys.stderr)
        return 1
    rest = data[len(_MAGIC):]
    header_end = rest.index(b"\n")
    meta = json.loads(rest[:header_end])
    payload = rest[header_end + 1 : header_end + 1 + meta["payload_len"]]
    Path(output_path).write_bytes(zlib.decompress(payload))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="mock_codec")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("encode", "qencode"):
        p = sub.add_parser(name)
        p.add_argument("input")
        p.add_argument("output")
        p.add_argument("bitrate_kbps", type=float)
    for name in ("decode", "qdecode"):
        p = sub.add_parser(name)
        p.add_argument("input")
        p.add_argument("output")

    args = parser.parse_args(argv)
    if args.command == "encode":
        shutil.copyfile(args.input, args.output)
        return 0
    if args.command == "decode":
        shutil.copyfile(args.input, args.output)
        return 0
    if args.command == "qencode":
        return _qencode(args.input, args.output, args.bitrate_kbps)
    return _qdecode(args.input, args.output)


if __name__ == "__main__":
    sys.exit(main())
