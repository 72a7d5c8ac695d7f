"""Command-line front end.

Exit codes: 0 success, 1 I/O or format failure, 2 invalid arguments.
"""

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from slfac.afd import cumulative_ratio, split_index
from slfac.codec import CodecKind, baseline_compress, compress, decode, serialize
from slfac.errors import FormatError
from slfac.fqc import MAX_BITS, FqcConfig
from slfac.formats import read_npy_f32_3d, write_npy_f32_3d
from slfac.spectral import dct2_forward, spectral_energy, zigzag_scan

SPECTRUM_THETAS = (0.8, 0.9, 0.95, 0.99)


def _g(x: float) -> str:
    return f"{x:.6g}"


def _theta(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid theta {text!r}") from None
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError("theta out of range (0, 1]")
    return value


def _bits(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid bit width {text!r}") from None
    if not 1 <= value <= MAX_BITS:
        raise argparse.ArgumentTypeError(f"bit width out of range [1, {MAX_BITS}]")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _codec(text):
    try:
        return CodecKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _partition(text):
    from slfac.sim.runner import parse_partition

    try:
        parse_partition(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _shape(text):
    try:
        dims = tuple(int(d) for d in text.lower().split("x"))
    except ValueError:
        dims = ()
    if len(dims) != 3 or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"shape must look like CxMxN, got {text!r}")
    return dims


def _load_tensor(path) -> np.ndarray:
    return read_npy_f32_3d(Path(path).read_bytes())


def _write_text(path, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_compress(args) -> int:
    if args.bmin > args.bmax:
        raise UsageError("bmin must not exceed bmax")
    t = _load_tensor(args.inp)
    ct = compress(t, FqcConfig(args.bmin, args.bmax, args.theta))
    data = serialize(ct)
    Path(args.out).write_bytes(data)
    restored = decode(data).astype(np.float64)
    mse = float(np.mean((restored - t) ** 2))
    print(f"{_g(4 * t.size / len(data))},{_g(mse)}")
    return 0


def cmd_decompress(args) -> int:
    t = decode(Path(args.inp).read_bytes())
    Path(args.out).write_bytes(write_npy_f32_3d(t))
    return 0


def cmd_stats(args) -> int:
    t = _load_tensor(args.inp)
    rows = [["codec", "raw_bytes", "wire_bytes", "ratio", "spatial_mse", "max_abs_err"]]
    for kind in args.codec:
        _, _, s = baseline_compress(t, kind)
        rows.append([str(kind), s.raw_bytes, s.wire_bytes, _g(s.ratio), _g(s.spatial_mse), _g(s.max_abs_err)])
    sys.stdout.write(_csv(rows))
    return 0


def cmd_spectrum(args) -> int:
    t = _load_tensor(args.inp)
    if not 0 <= args.channel < t.shape[0]:
        raise UsageError(f"channel {args.channel} out of range [0, {t.shape[0]})")
    zz = zigzag_scan(dct2_forward(t[args.channel].astype(np.float64)))
    energy = spectral_energy(zz)
    rows = [["i", "coeff", "energy", "cumulative_ratio"]]
    for i, (c, e) in enumerate(zip(zz, energy), start=1):
        rows.append([i, _g(c), _g(e), _g(cumulative_ratio(energy, i))])
    text = _csv(rows) + "\n" + _csv([["theta", "k_star"]] + [[th, split_index(energy, th)] for th in SPECTRUM_THETAS])
    sys.stdout.write(text)
    return 0


def cmd_simulate(args) -> int:
    from slfac.sim import SimConfig, load_mnist, simulate, write_metrics_csv

    cfg = SimConfig(
        devices=args.devices,
        rounds=args.rounds,
        batch_size=args.batch,
        learning_rate=args.lr,
        seed=args.seed,
        partition=args.partition,
        codec=args.codec,
        local_batches_per_round=args.local_batches,
        average_clients=not args.no_average,
        n_train=args.n_train,
        n_test=args.n_test,
    )
    data = load_mnist(args.mnist_dir, args.n_train, args.n_test) if args.mnist_dir else None
    _write_text(args.out, write_metrics_csv(simulate(cfg, data)))
    return 0


def cmd_bench(args) -> int:
    from slfac.sim import synth_lowpass

    rows = [["shape", "codec", "trials", "mean_ratio", "mean_spatial_mse", "mean_max_abs_err"]]
    for shape in args.shapes:
        inputs = [
            synth_lowpass(*shape, args.cutoff, np.random.SeedSequence([args.seed, trial])).astype(np.float32)
            for trial in range(args.trials)
        ]
        for kind in args.codecs:
            stats = [baseline_compress(t, kind)[2] for t in inputs]
            rows.append([
                "x".join(map(str, shape)),
                str(kind),
                args.trials,
                _g(np.mean([s.ratio for s in stats])),
                _g(np.mean([s.spatial_mse for s in stats])),
                _g(np.mean([s.max_abs_err for s in stats])),
            ])
    _write_text(args.out, _csv(rows))
    return 0


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slfac", description="Frequency-aware smashed-data compression.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="compress an NPY tensor to SLFC bytes")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--theta", type=_theta, default=0.9)
    p.add_argument("--bmin", type=_bits, default=2)
    p.add_argument("--bmax", type=_bits, default=8)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="restore an NPY tensor from codec bytes")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("stats", help="codec size and distortion for one tensor")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--codec", type=_codec, nargs="+", default=[CodecKind.slfac()],
                   help="slfac[:theta,bmin,bmax] | uniform:<b> | topk:<rho>,<b> | identity")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("spectrum", help="zig-zag spectrum and split points of one channel")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--channel", type=int, default=0)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("simulate", help="run the split-learning simulation")
    p.add_argument("--devices", type=_positive_int, default=5)
    p.add_argument("--rounds", type=int, default=30)
    p.add_argument("--batch", type=_positive_int, default=128)
    p.add_argument("--codec", type=_codec, default=CodecKind.slfac())
    p.add_argument("--partition", type=_partition, default="dirichlet:0.5", help="iid | dirichlet:<beta>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lr", type=float, default=0.3)
    p.add_argument("--local-batches", type=_positive_int, default=2)
    p.add_argument("--no-average", action="store_true", help="relay client halves instead of averaging")
    p.add_argument("--n-train", type=_positive_int, default=5000)
    p.add_argument("--n-test", type=_positive_int, default=1000)
    p.add_argument("--mnist-dir", help="directory with MNIST IDX files; synthetic data otherwise")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="rate-distortion sweep over low-pass synthetic tensors")
    p.add_argument("--shapes", type=_shape, nargs="+", default=[(64, 8, 8)])
    p.add_argument("--codecs", type=_codec, nargs="+",
                   default=[CodecKind.slfac(), CodecKind.uniform(4), CodecKind.topk(0.25, 8), CodecKind.identity()])
    p.add_argument("--trials", type=_positive_int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cutoff", type=float, default=0.25)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, FormatError) as exc:
        print(f"slfac {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
