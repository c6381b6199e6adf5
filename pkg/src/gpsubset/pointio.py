"""Text formats.

Point set::

    # dim=2
    # family=grid2d
    0 0
    0 1   # trailing comments are fine

Comment lines of the form ``# key=value`` are metadata; other comments are
ignored. Colorings use one ``<coords> -> <color>`` line per point.
"""

from __future__ import annotations

import io
import re
from pathlib import Path
from typing import Mapping

from .geometry import DuplicatePointError, PointSet
from .coloring import Coloring

_META = re.compile(r"^#\s*([A-Za-z_][\w.\-]*)\s*=\s*(.*?)\s*$")


class ParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}")


def _parse_coords(text: str, lineno: int) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split())
    except ValueError:
        raise ParseError(lineno, f"non-integer coordinate in {text.strip()!r}") from None


def parse_points(text: str) -> tuple[PointSet, dict[str, str]]:
    meta: dict[str, str] = {}
    pts: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], int] = {}
    dim = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            m = _META.match(line)
            if m:
                meta[m.group(1)] = m.group(2)
                if m.group(1) == "dim":
                    try:
                        dim = int(m.group(2))
                    except ValueError:
                        raise ParseError(lineno, f"bad dimension {m.group(2)!r}") from None
            continue
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        p = _parse_coords(body, lineno)
        if dim is None:
            dim = len(p)
        if len(p) != dim:
            raise ParseError(lineno, f"expected {dim} coordinates, got {len(p)}")
        if p in seen:
            raise DuplicatePointError(p, f"(line {lineno}, first seen on line {seen[p]})")
        seen[p] = lineno
        pts.append(p)
    return PointSet(pts, dim=dim or 2), meta


def format_points(points: PointSet, meta: Mapping[str, object] | None = None, footer: Mapping[str, object] | None = None) -> str:
    out = io.StringIO()
    out.write(f"# dim={points.dim}\n")
    for k, v in (meta or {}).items():
        out.write(f"# {k}={v}\n")
    for p in points:
        out.write(" ".join(str(c) for c in p) + "\n")
    for k, v in (footer or {}).items():
        out.write(f"# {k}={v}\n")
    return out.getvalue()


def load_points(path) -> PointSet:
    return parse_points(Path(path).read_text())[0]


def load_points_with_meta(path) -> tuple[PointSet, dict[str, str]]:
    return parse_points(Path(path).read_text())


def save_points(path, points: PointSet, meta=None, footer=None) -> None:
    Path(path).write_text(format_points(points, meta, footer))


def format_coloring(coloring: Coloring) -> str:
    lines = [f"# num_colors={coloring.num_colors}", f"# k={coloring.k}"]
    for p, c in sorted(coloring.assignment.items()):
        lines.append(" ".join(str(x) for x in p) + f" -> {c}")
    return "\n".join(lines) + "\n"


def parse_coloring(text: str) -> Coloring:
    assignment = {}
    meta = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            m = _META.match(line)
            if m:
                meta[m.group(1)] = m.group(2)
            continue
        if not line:
            continue
        if "->" not in line:
            raise ParseError(lineno, "expected '<coords> -> <color>'")
        left, right = line.split("->", 1)
        p = _parse_coords(left, lineno)
        try:
            c = int(right.split("#", 1)[0])
        except ValueError:
            raise ParseError(lineno, f"bad color id {right.strip()!r}") from None
        if p in assignment:
            raise DuplicatePointError(p, f"(line {lineno})")
        assignment[p] = c
    k = int(meta.get("k", 2))
    return Coloring(assignment, len(set(assignment.values())), k)


def save_coloring(path, coloring: Coloring) -> None:
    Path(path).write_text(format_coloring(coloring))


def load_coloring(path) -> Coloring:
    return parse_coloring(Path(path).read_text())
