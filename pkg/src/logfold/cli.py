"""``logfold`` command line: compress, decompress, bench, verify."""

from __future__ import annotations

import argparse
import os
import shutil
import sys
import tempfile
import time
from pathlib import Path
from typing import List, Optional

from . import bench
from .compressor import compress_result
from .decompressor import STEP_NAMES, decompress, decompress_profile
from .errors import LogFoldError
from .model import BACKENDS, TOKEN_STRATEGIES, Config


def _config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("pipeline")
    g.add_argument("--chunk-lines", type=int, default=100_000)
    g.add_argument("--theta-rv", type=int, default=40, help="max unique values for a critical column")
    g.add_argument("--phi-d", type=float, default=0.6, help="dominance ratio threshold")
    g.add_argument("--zeta-uv", type=int, default=3, help="unique-value cap for frequent-item mining")
    g.add_argument("--backend", choices=BACKENDS, default="lzma")
    g.add_argument("--level", type=int, choices=range(1, 10), metavar="1..9")
    g.add_argument("--token-strategy", choices=TOKEN_STRATEGIES, default="num_path")
    g.add_argument("--disable-processor", action="store_true")
    g.add_argument("--disable-encoder", action="store_true",
                   help="send every dynamic token to the string dictionary")


def config_from_args(args) -> Config:
    return Config(
        chunk_lines=args.chunk_lines,
        theta_rv=args.theta_rv,
        phi_d=args.phi_d,
        zeta_uv=args.zeta_uv,
        backend=args.backend,
        backend_level=args.level,
        token_strategy=args.token_strategy,
        disable_processor=args.disable_processor,
        disable_hybrid_encoder=args.disable_encoder,
    )


def _scratch_dir() -> Optional[str]:
    d = os.environ.get("LOGFOLD_TMPDIR")
    if d:
        os.makedirs(d, exist_ok=True)
    return d or None


def _write_atomic(path: str, data: bytes) -> None:
    """Write through a scratch file so a failed run leaves nothing behind."""
    fd, tmp = tempfile.mkstemp(prefix="logfold-", dir=_scratch_dir())
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        shutil.move(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_compress(args) -> int:
    cfg = config_from_args(args)
    data = Path(args.input).read_bytes()
    res = compress_result(data, cfg, workers=max(1, args.parallel))
    out = args.output or args.input + ".lf"
    _write_atomic(out, res.archive)
    print(f"{args.input}: {res.original_size} -> {res.compressed_size} bytes  "
          f"CR={res.ratio:.3f}  CS={res.speed / 1e6:.3f} MB/s  -> {out}")
    return 0


def profile_report(steps: dict, total: float) -> str:
    lines = [f"{'step':>4}  {'name':<28} {'seconds':>10} {'share':>7}"]
    for k in sorted(STEP_NAMES):
        t = steps.get(k, 0.0)
        share = t / total if total > 0 else 0.0
        lines.append(f"{k:>4}  {STEP_NAMES[k]:<28} {t:>10.4f} {share:>7.1%}")
    lines.append(f"{'':>4}  {'total':<28} {total:>10.4f}")
    lines.append("")
    lines.append("step,name,seconds")
    for k in sorted(STEP_NAMES):
        lines.append(f"{k},{STEP_NAMES[k]},{steps.get(k, 0.0):.6f}")
    return "\n".join(lines)


def cmd_decompress(args) -> int:
    archive = Path(args.archive).read_bytes()
    if args.profile:
        data, steps, total = decompress_profile(archive)
    else:
        start = time.perf_counter()
        data = decompress(archive)
        total = time.perf_counter() - start
    out = args.output
    if out is None:
        out = args.archive[:-3] if args.archive.endswith(".lf") else args.archive + ".out"
    _write_atomic(out, data)
    ds = len(data) / total / 1e6 if total > 0 else float("inf")
    print(f"{args.archive}: {len(archive)} -> {len(data)} bytes  DS={ds:.3f} MB/s  -> {out}")
    if args.profile:
        print(profile_report(steps, total))
    return 0


def cmd_bench(args) -> int:
    files = bench.corpus_files(args.corpus)
    base = config_from_args(args)
    configs = []
    for grid in args.grid or ["default"]:
        configs.extend(bench.config_matrix(grid, base))
    cells = bench.bench_files(files, configs, parallel=args.parallel)
    print(bench.format_text(cells))
    print()
    print(bench.cr_table(cells))
    print()
    rows = bench.format_csv(cells)
    if args.csv:
        Path(args.csv).write_text(rows)
    else:
        print(rows, end="")
    bad = bench.unverified(cells)
    for c in bad:
        print(f"failed: {c.file} [{c.config}] {c.error}", file=sys.stderr)
    return 1 if bad and args.ci else 0


def cmd_verify(args) -> int:
    cfg = config_from_args(args)
    status = 0
    for name in args.inputs:
        cell = bench.run_cell(name, Path(name).read_bytes(), cfg)
        flag = "ok" if cell.verified else f"FAIL ({cell.error})"
        print(f"{name}: CR={cell.cr:.3f} CS={cell.cs:.3f} MB/s DS={cell.ds:.3f} MB/s  {flag}")
        if not cell.verified:
            status = 1
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logfold", description="Lossless log compressor.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compress", help="compress a log file")
    c.add_argument("input")
    c.add_argument("-o", "--output")
    c.add_argument("--parallel", type=int, default=1, help="worker processes for chunks")
    _config_flags(c)
    c.set_defaults(func=cmd_compress)

    d = sub.add_parser("decompress", help="restore a log file")
    d.add_argument("archive")
    d.add_argument("-o", "--output")
    d.add_argument("--profile", action="store_true", help="print per-step decode times")
    d.set_defaults(func=cmd_decompress)

    b = sub.add_parser("bench", help="CR/CS/DS over a corpus directory")
    b.add_argument("corpus")
    b.add_argument("--grid", action="append", choices=bench.GRIDS,
                   help="config sweep; may be repeated (default: default)")
    b.add_argument("--csv", help="write comma-delimited rows here instead of stdout")
    b.add_argument("--parallel", type=int, default=1, help="one worker process per file")
    b.add_argument("--ci", action="store_true", help="exit 1 if any cell fails round-trip")
    _config_flags(b)
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify", help="round-trip files in memory and compare")
    v.add_argument("inputs", nargs="+")
    _config_flags(v)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LogFoldError, OSError, ValueError) as exc:
        print(f"logfold: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
