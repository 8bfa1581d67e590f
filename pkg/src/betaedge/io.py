"""CSV/JSON emission with reproducibility metadata.

Every output carries a metadata header (comment lines in CSV, a top-level
block in JSON) holding the full job configuration, artifact version and
backend precision, sufficient to reproduce the file bit-exactly.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Sequence

import mpmath

ARTIFACT_VERSION = "0.1.0"


def format_number(value, digits: int = 17) -> str:
    if isinstance(value, (mpmath.mpf, type(mpmath.mpf(0)))):
        return mpmath.nstr(value, digits, strip_zeros=False)
    return repr(float(value)) if digits <= 17 else mpmath.nstr(mpmath.mpf(value), digits)


def write_csv(path: Path, meta: dict, header: Sequence[str], rows: Sequence[Sequence],
              digits: int = 17) -> None:
    meta = {"artifact_version": ARTIFACT_VERSION, **meta}
    buf = io.StringIO()
    for line in json.dumps(meta, indent=None, sort_keys=True, default=str).splitlines():
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v, digits) if not isinstance(v, (str, int)) else v
                         for v in row])
    Path(path).write_text(buf.getvalue())


def write_json(path: Path, meta: dict, payload: dict) -> None:
    doc = {"metadata": {"artifact_version": ARTIFACT_VERSION, **meta}, **payload}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n")


def read_csv(path: Path) -> tuple[dict, list[str], list[list[str]]]:
    """Parse a package CSV back into (metadata, header, string rows)."""
    meta_lines, rows = [], []
    header = None
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            meta_lines.append(line[1:].strip())
        elif header is None:
            header = next(csv.reader([line]))
        elif line:
            rows.append(next(csv.reader([line])))
    meta = json.loads("\n".join(meta_lines)) if meta_lines else {}
    return meta, header or [], rows
