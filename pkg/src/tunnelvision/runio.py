"""Run manifests, deterministic JSON/CSV writers, and the worker pool cap.

All floating-point output is written with 17 significant digits so files
round-trip exactly.  CSV files use comma separators, '.' decimal points and
LF line endings.  Parallelism only distributes independent evaluations whose
results are reduced with exactly rounded sums, so outputs are byte-identical
for any thread count.
"""

from __future__ import annotations

import json
import math
import numbers
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

__version__ = "0.1.0"

__all__ = ["RunManifest", "dump_json", "write_json", "write_csv",
           "thread_count", "pmap", "__version__"]


def thread_count(requested: int | None = None) -> int:
    """Resolve the worker cap: flag, then TUNNELVISION_THREADS, then all cores."""
    if requested is not None and requested >= 1:
        return requested
    env = os.environ.get("TUNNELVISION_THREADS")
    if env:
        try:
            n = int(env)
            if n >= 1:
                return n
        except ValueError:
            pass
    return os.cpu_count() or 1


def pmap(fn, items, threads: int = 1):
    """Ordered map over independent items, optionally on a thread pool."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _fmt_float(v: float) -> str:
    if math.isnan(v):
        return "null"
    if math.isinf(v):
        return '"Infinity"' if v > 0 else '"-Infinity"'
    return format(v, ".17g")


def dump_json(obj, indent: int = 0) -> str:
    """Serialize with floats at 17 significant digits; deterministic layout."""
    pad = " " * indent
    if isinstance(obj, dict):
        items = [f'{pad}  {json.dumps(str(k))}: {dump_json(v, indent + 2).lstrip()}'
                 for k, v in obj.items()]
        if not items:
            return pad + "{}"
        return pad + "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        items = [dump_json(v, indent + 2) for v in obj]
        if not items:
            return pad + "[]"
        return pad + "[\n" + ",\n".join(items) + "\n" + pad + "]"
    # numpy scalars arrive here too: match by abstract numeric type, with
    # booleans checked first (numpy bools are not subclasses of bool)
    if isinstance(obj, bool) or (hasattr(obj, "dtype") and obj.shape == ()
                                 and obj.dtype.kind == "b"):
        return pad + ("true" if obj else "false")
    if isinstance(obj, numbers.Integral):
        return pad + str(int(obj))
    if isinstance(obj, numbers.Real):
        return pad + _fmt_float(float(obj))
    if obj is None:
        return pad + "null"
    return pad + json.dumps(str(obj))


def write_json(path, obj):
    with open(path, "w", newline="\n") as fh:
        fh.write(dump_json(obj))
        fh.write("\n")


def write_csv(path, header, rows):
    """CSV with a header row naming columns and units; 17-digit floats."""
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = [format(c, ".17g") if isinstance(c, float) else str(c)
                     for c in row]
            fh.write(",".join(cells) + "\n")


@dataclass
class RunManifest:
    """Reproducibility record written alongside every CLI output."""

    command: str
    parameters: dict
    tolerances: dict
    seed: int
    version: str = __version__
    wall_time_s: float = 0.0
    outputs: list = field(default_factory=list)

    def to_obj(self):
        return {
            "command": self.command,
            "parameters": self.parameters,
            "tolerances": self.tolerances,
            "seed": self.seed,
            "version": self.version,
            "wall_time_s": self.wall_time_s,
            "outputs": list(self.outputs),
        }

    def finish(self, started: float, out_dir: str, stem: str):
        self.wall_time_s = time.monotonic() - started
        path = os.path.join(out_dir, f"{stem}.manifest.json")
        write_json(path, self.to_obj())
        return path
