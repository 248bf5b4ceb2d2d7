"""Benchmark harness: CR, CS and DS per file and configuration.

CR = original bytes / archive bytes, CS = original bytes / compression
seconds (backend included), DS = original bytes / decompression seconds.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from .compressor import compress_result
from .decompressor import decompress
from .model import BACKENDS, TOKEN_STRATEGIES, Config, default_config
from .packer import compress_backend

GRIDS = ("default", "ablation", "theta", "phi", "zeta", "levels", "strategies", "backends")
LEVELS = (1, 3, 6, 9)
THETA_VALUES = (20, 30, 40, 50)
PHI_VALUES = (0.5, 0.6, 0.7, 0.8, 0.9)
ZETA_VALUES = tuple(range(3, 11))


@dataclass
class BenchCell:
    file: str
    config: str
    original: int
    compressed: int = 0
    cr: float = 0.0
    cs: float = 0.0
    ds: float = 0.0
    verified: bool = False
    error: str = ""


def _mb(nbytes: int, seconds: float) -> float:
    return nbytes / seconds / 1e6 if seconds > 0 else float("inf")


def run_cell(name: str, data: bytes, cfg: Config, label: str = "default") -> BenchCell:
    cell = BenchCell(name, label, len(data))
    try:
        res = compress_result(data, cfg)
        start = time.perf_counter()
        restored = decompress(res.archive)
        dt = time.perf_counter() - start
    except Exception as exc:  # recorded in the table, the run goes on
        cell.error = f"{type(exc).__name__}: {exc}"
        return cell
    cell.compressed = res.compressed_size
    cell.cr = res.ratio
    cell.cs = _mb(len(data), res.seconds)
    cell.ds = _mb(len(data), dt)
    cell.verified = restored == data
    if not cell.verified:
        cell.error = "round-trip mismatch"
    return cell


def bare_ratio(data: bytes, backend: str = "lzma", level: Optional[int] = None) -> float:
    """CR of the backend alone on the raw bytes."""
    if level is None:
        level = default_config().replace(backend=backend).level
    out = compress_backend(data, backend, level)
    return len(data) / len(out)


def config_matrix(grid: str, base: Optional[Config] = None) -> List[Tuple[str, Config]]:
    base = base or default_config()
    if grid == "default":
        return [("default", base)]
    if grid == "ablation":
        return [
            ("full", base),
            ("no-processor", base.replace(disable_processor=True)),
            ("no-processor-no-encoder", base.replace(disable_processor=True, disable_hybrid_encoder=True)),
        ]
    if grid == "theta":
        return [(f"theta={v}", base.replace(theta_rv=v)) for v in THETA_VALUES]
    if grid == "phi":
        return [(f"phi={v}", base.replace(phi_d=v)) for v in PHI_VALUES]
    if grid == "zeta":
        return [(f"zeta={v}", base.replace(zeta_uv=v)) for v in ZETA_VALUES]
    if grid == "levels":
        return [(f"{base.backend}-{lv}", base.replace(backend_level=lv)) for lv in LEVELS]
    if grid == "strategies":
        return [(f"tokens={s}", base.replace(token_strategy=s)) for s in TOKEN_STRATEGIES]
    if grid == "backends":
        return [(f"{b}-{lv}", base.replace(backend=b, backend_level=lv)) for b in BACKENDS for lv in LEVELS]
    raise ValueError(f"unknown grid {grid!r}; choose from {', '.join(GRIDS)}")


def corpus_files(directory) -> List[Path]:
    d = Path(directory)
    if not d.is_dir():
        raise FileNotFoundError(f"not a directory: {d}")
    files = sorted(p for p in d.iterdir() if p.is_file())
    if not files:
        raise ValueError(f"no files in {d}")
    return files


def _bench_file(args) -> List[BenchCell]:
    path, configs = args
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        return [BenchCell(Path(path).name, label, 0, error=str(exc)) for label, _ in configs]
    return [run_cell(Path(path).name, data, cfg, label) for label, cfg in configs]


def bench_files(files: Sequence[Path], configs: Sequence[Tuple[str, Config]],
                parallel: int = 1) -> List[BenchCell]:
    """Files run one after another unless ``parallel`` > 1, in which case each
    file gets its own worker process (cells are still timed inside it)."""
    jobs = [(str(p), list(configs)) for p in files]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            chunks = list(pool.map(_bench_file, jobs))
    else:
        chunks = [_bench_file(j) for j in jobs]
    return [c for cells in chunks for c in cells]


def cr_table(cells: Iterable[BenchCell]) -> str:
    """File x config grid of CRs."""
    cells = list(cells)
    labels = list(dict.fromkeys(c.config for c in cells))
    files = list(dict.fromkeys(c.file for c in cells))
    by = {(c.file, c.config): c for c in cells}
    width = max([len(f) for f in files] + [4])
    cw = max([len(lb) for lb in labels] + [8])
    lines = ["file".ljust(width) + "".join(lb.rjust(cw + 2) for lb in labels)]
    for f in files:
        row = f.ljust(width)
        for lb in labels:
            c = by.get((f, lb))
            txt = "ERR" if c is None or c.error else f"{c.cr:.3f}"
            row += txt.rjust(cw + 2)
        lines.append(row)
    return "\n".join(lines)


def format_text(cells: Iterable[BenchCell]) -> str:
    cells = list(cells)
    head = f"{'file':<24} {'config':<26} {'orig':>10} {'comp':>9} {'CR':>8} {'CS MB/s':>8} {'DS MB/s':>8}  ok"
    out = [head, "-" * len(head)]
    for c in cells:
        if c.error and not c.compressed:
            out.append(f"{c.file:<24} {c.config:<26} {c.original:>10}  FAILED: {c.error}")
            continue
        out.append(f"{c.file:<24} {c.config:<26} {c.original:>10} {c.compressed:>9} "
                   f"{c.cr:>8.3f} {c.cs:>8.3f} {c.ds:>8.3f}  {'yes' if c.verified else 'NO'}")
    return "\n".join(out)


def format_csv(cells: Iterable[BenchCell]) -> str:
    buf = io.StringIO()
    fields = list(BenchCell.__dataclass_fields__)
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for c in cells:
        row = asdict(c)
        for k in ("cr", "cs", "ds"):
            row[k] = f"{row[k]:.6g}"
        w.writerow(row)
    return buf.getvalue()


def unverified(cells: Iterable[BenchCell]) -> List[BenchCell]:
    return [c for c in cells if not c.verified]
