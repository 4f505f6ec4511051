"""File formats: graph/biclique/summary JSON and 0/1 matrix TSV.

Lines starting with ``#`` in a TSV file are comments (used for the run
manifest); JSON readers ignore unknown keys such as ``"manifest"``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import Biclique, ValidationError, WeightedBipartiteGraph


class ParseError(ValidationError):
    def __init__(self, path, line, col, msg):
        super().__init__(f"{path}:{line}:{col}: {msg}")
        self.path, self.line, self.col = path, line, col


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_json(path) -> dict:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.lineno, exc.colno, exc.msg) from None
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: expected a JSON object at top level")
    return data


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def read_graph(path) -> WeightedBipartiteGraph:
    return WeightedBipartiteGraph.from_dict(load_json(path))


def write_graph(path, g: WeightedBipartiteGraph, manifest: dict | None = None) -> None:
    d = g.to_dict()
    if manifest is not None:
        d["manifest"] = manifest
    write_json(path, d)


def read_biclique(path) -> Biclique:
    return Biclique.from_dict(load_json(path))


def parse_tsv(text: str, path="<string>") -> np.ndarray:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        row, col = [], 1
        for tok in line.split("\t"):
            t = tok.strip()
            if t not in ("0", "1"):
                raise ParseError(path, lineno, col, f"expected 0 or 1, got {tok!r}")
            row.append(int(t))
            col += len(tok) + 1
        if rows and len(row) != len(rows[0]):
            raise ParseError(path, lineno, 1, f"row has {len(row)} entries, expected {len(rows[0])}")
        rows.append(row)
    if not rows:
        raise ParseError(path, 1, 1, "no matrix rows found")
    return np.array(rows, dtype=np.int8)


def read_tsv(path) -> np.ndarray:
    return parse_tsv(Path(path).read_text(), str(path))


def format_tsv(m, manifest: dict | None = None) -> str:
    lines = []
    if manifest is not None:
        lines.append("# manifest: " + json.dumps(manifest, sort_keys=True))
    lines += ["\t".join(str(int(x)) for x in row) for row in np.asarray(m)]
    return "\n".join(lines) + "\n"


def write_tsv(path, m, manifest: dict | None = None) -> None:
    Path(path).write_text(format_tsv(m, manifest))
