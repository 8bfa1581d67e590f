"""Parser for the betaedge CSV artifact format.

Artifacts carry a '#'-prefixed JSON metadata header followed by a plain
CSV table.  This module re-reads that external format; it deliberately
does not import the producing package.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path


class MissingInput(Exception):
    """An input CSV path does not exist or is empty."""


class MetadataMismatch(Exception):
    """An input CSV's metadata does not match the requested figure."""


@dataclass
class Artifact:
    path: Path
    meta: dict
    header: list[str]
    columns: dict[str, list[float]]

    def column(self, name: str) -> list[float]:
        if name not in self.columns:
            raise MetadataMismatch(
                f"{self.path}: expected column {name!r}, found {self.header}")
        return self.columns[name]


def read_artifact(path) -> Artifact:
    path = Path(path)
    if not path.is_file():
        raise MissingInput(f"input CSV not found: {path}")
    meta_lines, rows, header = [], [], None
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            meta_lines.append(line[1:].strip())
        elif header is None:
            header = next(csv.reader([line]))
        elif line:
            rows.append(next(csv.reader([line])))
    if header is None or not rows:
        raise MissingInput(f"input CSV has no data rows: {path}")
    try:
        meta = json.loads("\n".join(meta_lines)) if meta_lines else {}
    except json.JSONDecodeError as exc:
        raise MetadataMismatch(f"{path}: unparsable metadata header: {exc}") from exc
    columns = {name: [float(row[i]) for row in rows]
               for i, name in enumerate(header)}
    return Artifact(path, meta, header, columns)


def require(artifact: Artifact, **expected) -> None:
    """Check metadata keys against expected values; raise on any mismatch."""
    for key, want in expected.items():
        got = artifact.meta.get(key)
        if got != want:
            raise MetadataMismatch(
                f"{artifact.path}: metadata {key!r} is {got!r}, figure needs {want!r}")
