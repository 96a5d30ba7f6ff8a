"""Mock super-resolution tool: bicubic upscaling of a PNG frame directory.

Stands in for external SR models so pipeline runs need no checkpoints.
"""

import argparse
import sys
from pathlib import Path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="mock_sr")
    parser.add_argument("in_dir")
    parser.add_argument("out_dir")
    parser.add_argument("--scale", type=int, default=2, choices=(2, 4))
    parser.add_argument(
        "--drop-last",
        action="store_true",
        help="drop the final frame (test hook for frame-count validation)",
    )
    args = parser.parse_args(argv)

    from ..media import read_png_sequence, resize_clip, write_png_sequence
    from ..media.frame import VideoClip

    clip = read_png_sequence(args.in_dir)
    if args.drop_last:
        if len(clip.frames) < 2:
            print("cannot drop the only frame", file=sys.stderr)
            return 1
        clip = VideoClip(
            frames=clip.frames[:-1],
            fps=clip.fps,
            source_id=clip.source_id,
            encoded_bitrate_kbps=clip.encoded_bitrate_kbps,
        )
    upscaled = resize_clip(clip, clip.width * args.scale, clip.height * args.scale)
    Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    write_png_sequence(upscaled, args.out_dir)
    return 0


if __name__ == "__main__":
    sys.exit(main())
