"""CSV helpers shared by the solver, simulator, and CLI outputs."""
from __future__ import annotations

import csv
from pathlib import Path


def fmt_float(x) -> str:
    """Shortest decimal string that round-trips to the same float64.

    Non-finite values serialize as ``inf``, ``-inf``, ``nan``; consumers must
    parse those spellings explicitly.
    """
    return repr(float(x))


def write_csv(path, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(header))
        writer.writerows(rows)


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]
