"""Result rows and their CSV / JSON serialisation."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import IO, Sequence

CSV_HEADER = ("dataset,method,seed,b,n,m,num_communities,objective,cost1,nonempty_fraction,"
              "cost2_total_bits,bits_per_link,detect_ms,order_ms,cost_ms")


@dataclass(frozen=True)
class ReportRow:
    dataset: str
    method: str
    seed: int
    b: int
    n: int
    m: int
    num_communities: int | None
    objective: float | None
    cost1: int
    nonempty_fraction: float
    cost2_total_bits: float
    bits_per_link: float
    detect_ms: float | None = None
    order_ms: float | None = None
    cost_ms: float | None = None


COLUMNS = tuple(f.name for f in fields(ReportRow))
assert ",".join(COLUMNS) == CSV_HEADER


class ReportError(ValueError):
    pass


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def check_row(row: ReportRow) -> None:
    """Recompute the derived columns; raise if a row is inconsistent."""
    for name in COLUMNS:
        v = getattr(row, name)
        if isinstance(v, float) and not math.isfinite(v):
            raise ReportError(f"{row.dataset}/{row.method}/b={row.b}: {name} is not finite")
    if not math.isclose(row.bits_per_link, row.cost2_total_bits / row.m, rel_tol=1e-12):
        raise ReportError(f"{row.dataset}/{row.method}/b={row.b}: bits_per_link mismatch")
    nb = -(-row.n // row.b)
    if not math.isclose(row.nonempty_fraction, row.cost1 / (nb * nb), rel_tol=1e-12):
        raise ReportError(f"{row.dataset}/{row.method}/b={row.b}: nonempty_fraction mismatch")


def write_rows(rows: Sequence[ReportRow], stream: IO[str]) -> None:
    """Header plus one line per row; reals to 6 significant digits, ``None`` blank."""
    for row in rows:
        check_row(row)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, c)) for c in COLUMNS])


def emit_csv(rows: Sequence[ReportRow], path: str | Path) -> None:
    if not rows:
        raise ReportError("no rows to write")
    for row in rows:
        check_row(row)
    with open(path, "w", newline="") as fh:
        write_rows(rows, fh)


def emit_json(rows: Sequence[ReportRow], path: str | Path) -> None:
    if not rows:
        raise ReportError("no rows to write")
    for row in rows:
        check_row(row)
    with open(path, "w") as fh:
        json.dump([asdict(r) for r in rows], fh, indent=1)
        fh.write("\n")


def read_json(path: str | Path) -> list[ReportRow]:
    with open(path) as fh:
        return [ReportRow(**item) for item in json.load(fh)]


def read_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
