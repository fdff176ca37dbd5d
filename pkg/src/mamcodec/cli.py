"""Command-line interface.

Subcommands: compress, decompress, metrics, extract-patches,
latent-stats, info.  Every run is deterministic given its flags (and
seed, where one applies).  Failures print a class-tagged diagnostic to
stderr and exit nonzero.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import container, imageio, metrics
from ._backend import backend_name
from .errors import CodecError
from .model import load_weights

PATCH_MEAN_TOL = 1e-9
ATTEMPTS_PER_IMAGE_FACTOR = 1000


def _bits(value):
    bits = int(value)
    if not 1 <= bits <= 16:
        raise argparse.ArgumentTypeError("--bits must be in [1, 16]")
    return bits


def _depth(value):
    depth = int(value)
    if depth not in container.SUPPORTED_DEPTHS:
        raise argparse.ArgumentTypeError(
            f"--depth must be one of {container.SUPPORTED_DEPTHS}")
    return depth


def _patch_size(value):
    size = int(value)
    if size < 16:
        raise argparse.ArgumentTypeError("--size must be >= 16")
    return size


def _load_weights_file(path):
    return load_weights(Path(path).read_bytes())


def cmd_compress(args):
    pixels, depth = imageio.read_image(args.input)
    if args.depth is not None:
        depth = args.depth
    weights = _load_weights_file(args.weights)
    data = container.compress_image(pixels, depth, weights, args.bits)
    Path(args.output).write_bytes(data)
    bpp, factor = metrics.bpp_report(data, pixels.shape[1], pixels.shape[0], depth)
    print(f"wrote {args.output}: {len(data)} bytes, "
          f"bpp={bpp:.6g}, compression_factor={factor:.6g}")
    return 0


def cmd_decompress(args):
    data = Path(args.input).read_bytes()
    weights = _load_weights_file(args.weights)
    pixels, depth = container.decompress_image(data, weights, force=args.force)
    header, _ = container.read_container(data)
    if args.force and header.model_hash != weights.content_hash:
        print("warning: weight hash mismatch overridden by --force",
              file=sys.stderr)
    imageio.write_image(args.output, pixels, depth)
    print(f"wrote {args.output}: {pixels.shape[1]}x{pixels.shape[0]} "
          f"at {depth} bpp source depth")
    return 0


def cmd_metrics(args):
    ref, ref_depth = imageio.read_image(args.ref)
    test, test_depth = imageio.read_image(args.test)
    depth_ref = args.depth if args.depth is not None else ref_depth
    depth_test = args.depth if args.depth is not None else test_depth
    ref_n = container.normalize(ref, depth_ref)
    test_n = container.normalize(test, depth_test)

    entropy_bits = bpp = factor = None
    if args.compressed is not None:
        blob = Path(args.compressed).read_bytes()
        bpp, factor = metrics.bpp_report(
            blob, ref.shape[1], ref.shape[0], depth_ref)
        if blob[:4] == container.MAGIC:
            _, code = container.extract_latent(blob)
            entropy_bits = metrics.latent_entropy(code)

    report = metrics.MetricsReport(
        psnr_db=metrics.psnr(ref_n, test_n),
        ssim=metrics.ssim(ref_n, test_n),
        entropy_bits=entropy_bits, bpp=bpp, compression_factor=factor)
    sys.stdout.write(report.to_json() + "\n" if args.json else report.to_kv_text())
    return 0


def _iter_images(input_dir):
    paths = sorted(p for p in Path(input_dir).iterdir()
                   if p.suffix.lower() in (".pgm", ".pnm", ".raw"))
    if not paths:
        raise CodecError(f"no .pgm/.pnm/.raw images in {input_dir}")
    return paths


def _patch_ok(patch, max_value):
    normalized = patch.astype(np.float64) / max_value
    if np.count_nonzero(patch) * 2 <= patch.size:
        return False
    mean = normalized.mean()
    if mean <= PATCH_MEAN_TOL or mean >= 1.0 - PATCH_MEAN_TOL:
        return False
    return normalized.var() > 0.0


def cmd_extract_patches(args):
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    size = args.size

    images = []
    for path in _iter_images(args.input_dir):
        pixels, depth = imageio.read_image(path)
        if pixels.shape[0] < size or pixels.shape[1] < size:
            print(f"warning: {path.name} ({pixels.shape[1]}x{pixels.shape[0]}) "
                  f"smaller than patch size {size}, skipped", file=sys.stderr)
            continue
        images.append((pixels, depth))
    attempt_cap = ATTEMPTS_PER_IMAGE_FACTOR * args.count
    attempts = [0] * len(images)
    written = 0
    while written < args.count and images:
        alive = [i for i in range(len(images)) if attempts[i] < attempt_cap]
        if not alive:
            break
        idx = alive[int(rng.integers(len(alive)))]
        pixels, depth = images[idx]
        attempts[idx] += 1
        top = int(rng.integers(pixels.shape[0] - size + 1))
        left = int(rng.integers(pixels.shape[1] - size + 1))
        patch = pixels[top:top + size, left:left + size]
        if not _patch_ok(patch, (1 << depth) - 1):
            continue
        imageio.write_pgm(out_dir / f"patch_{written:05d}.pgm", patch, depth)
        written += 1
    if written < args.count:
        print(f"warning: wrote {written}/{args.count} patches before "
              "exhausting the attempt budget", file=sys.stderr)
    print(f"wrote {written} patches to {out_dir}")
    return 0


def cmd_info(args):
    header, payload = container.read_container(Path(args.input).read_bytes())
    for key, value in [
            ("width", header.width), ("height", header.height),
            ("depth", header.depth), ("n", header.n),
            ("channels", header.channels), ("k", header.k), ("m", header.m),
            ("model_hash", f"{header.model_hash:#018x}"),
            ("symbol_count", header.symbol_count),
            ("payload_length", header.payload_length)]:
        print(f"{key}={value}")
    size = container.HEADER_SIZE + len(payload)
    bpp, factor = metrics.bpp_report(size, header.width, header.height,
                                     header.depth)
    print(f"file_size={size}")
    print(f"bpp={bpp}")
    print(f"compression_factor={factor}")
    return 0


def cmd_latent_stats(args):
    header, code = container.extract_latent(Path(args.input).read_bytes())
    entropy_bits = metrics.latent_entropy(code)
    values, counts = np.unique(code.values, return_counts=True)
    print(f"n={header.n}")
    print(f"elements={code.values.size}")
    print(f"entropy_bits={entropy_bits}")
    print(f"distinct_values={values.size}")
    for value, count in zip(values, counts):
        print(f"value[{value}]={count}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mamcodec",
        description="Variable bit-length autoencoder codec for high "
                    "bit-depth grayscale images.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s 0.1.0 ({backend_name()} backend)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="image -> MAMC container")
    p.add_argument("--input", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--bits", required=True, type=_bits)
    p.add_argument("--output", required=True)
    p.add_argument("--depth", type=_depth,
                   help="override the source bit depth (e.g. 12-in-16 data)")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="MAMC container -> image")
    p.add_argument("--input", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--force", action="store_true",
                   help="proceed despite a weight hash mismatch")
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("metrics", help="score a reconstruction against a reference")
    p.add_argument("--ref", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--depth", type=_depth)
    p.add_argument("--json", action="store_true")
    p.add_argument("--compressed",
                   help="compressed file whose size yields bpp (MAMC files "
                        "also report latent entropy)")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("extract-patches",
                       help="sample training patches from an image directory")
    p.add_argument("--input-dir", required=True)
    p.add_argument("--count", required=True, type=int)
    p.add_argument("--size", type=_patch_size, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_extract_patches)

    p = sub.add_parser("latent-stats",
                       help="decode a container's latent and report its statistics")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_latent_stats)

    p = sub.add_parser("info", help="print MAMC header fields")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_info)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CodecError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
