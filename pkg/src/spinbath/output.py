"""Plot-ready tables for trajectories and Zeno runs (CSV or JSON)."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Sequence

from .dynamics import Trajectory
from .zeno import ZenoResult

TRAJECTORY_FIELDS = ("t", "concurrence", "purity", "trace_error")
ZENO_FIELDS = ("step", "t", "step_probability", "survival", "amplitude_product", "trace_diagnostic")


class OutputError(OSError):
    pass


def fmt(x: float) -> str:
    """Shortest decimal string that round-trips; integral values lose the ``.0``."""
    x = float(x)
    if x == 0:
        return "0"
    if math.isfinite(x) and x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def trajectory_name(lam: float, lam0: float, fmt_ext: str = "csv") -> str:
    return f"traj_lam{fmt(lam)}_l0{fmt(lam0)}.{fmt_ext}"


def zeno_name(lam0: float, n: int, fmt_ext: str = "csv") -> str:
    return f"zeno_l0{fmt(lam0)}_n{n}.{fmt_ext}"


def trajectory_rows(tr: Trajectory) -> list[tuple]:
    return list(zip(tr.times, tr.concurrences, tr.purities, tr.trace_errors))


def zeno_rows(res: ZenoResult) -> list[tuple]:
    return [
        (k + 1, res.times[k], res.step_probabilities[k], res.survival_probabilities[k],
         res.amplitude_product[k], res.trace_diagnostic[k])
        for k in range(len(res.times))
    ]


def render(rows: Sequence[tuple], fields: Sequence[str], fmt_ext: str) -> str:
    if fmt_ext == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        for r in rows:
            w.writerow([fmt(v) for v in r])
        return buf.getvalue()
    if fmt_ext == "json":
        records = [
            {f: (int(v) if f == "step" else float(v)) for f, v in zip(fields, r)} for r in rows
        ]
        return json.dumps(records, indent=1) + "\n"
    raise ValueError(f"unknown output format {fmt_ext!r}")


def emit_trajectory(tr: Trajectory, sink, fmt_ext: str = "csv") -> None:
    """Write a trajectory table to a text stream."""
    sink.write(render(trajectory_rows(tr), TRAJECTORY_FIELDS, fmt_ext))


def emit_zeno(res: ZenoResult, sink, fmt_ext: str = "csv") -> None:
    sink.write(render(zeno_rows(res), ZENO_FIELDS, fmt_ext))


def read_table(path: Path) -> list[dict]:
    """Parse a table written by this module back into records of floats."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        return json.loads(text)
    reader = csv.DictReader(io.StringIO(text))
    return [{k: float(v) for k, v in row.items()} for row in reader]


def write_table(path: Path, text: str, fields: Sequence[str], n_rows: int) -> None:
    """Write ``text`` to ``path`` and read it back to check it is complete."""
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8")
        records = read_table(path)
    except (OSError, ValueError) as exc:
        raise OutputError(f"failed to write {path}: {exc}") from exc
    if len(records) != n_rows or (records and tuple(records[0]) != tuple(fields)):
        raise OutputError(f"{path} did not validate after writing")
