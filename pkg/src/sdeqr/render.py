"""Portable text renderings of a module matrix and their parsers.

PBM (P1, 1 = dark), TXT ('#' dark, '.' light) and SVG carry a light quiet
zone; JSON holds the bare matrix plus metadata.
"""
import enum
import json

import numpy as np

from .errors import MalformedInput
from .qrencode import MAX_VERSION, MIN_VERSION, ModuleMatrix, build_function_patterns

DEFAULT_QUIET_ZONE = 4


class RenderFormat(enum.Enum):
    PBM = "pbm"
    SVG = "svg"
    TXT = "txt"
    JSON = "json"

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).lower().lstrip("."))


def _with_quiet_zone(modules, quiet_zone):
    return np.pad(modules, quiet_zone, constant_values=False)


def render(matrix, fmt, quiet_zone=DEFAULT_QUIET_ZONE, metadata=None):
    fmt = RenderFormat.coerce(fmt)
    modules = matrix.modules
    if fmt is RenderFormat.JSON:
        doc = {"size": matrix.size, "version": matrix.version}
        doc.update(metadata or {})
        doc["modules"] = modules.astype(int).tolist()
        return (json.dumps(doc, separators=(",", ":")) + "\n").encode("ascii")

    grid = _with_quiet_zone(modules, quiet_zone)
    n = grid.shape[0]
    if fmt is RenderFormat.PBM:
        rows = [" ".join("1" if x else "0" for x in row) for row in grid]
        return ("P1\n%d %d\n" % (n, n) + "\n".join(rows) + "\n").encode("ascii")
    if fmt is RenderFormat.TXT:
        return ("\n".join("".join("#" if x else "." for x in row) for row in grid) + "\n").encode("ascii")

    path = []
    for r, row in enumerate(grid):
        c = 0
        while c < n:
            if row[c]:
                start = c
                while c < n and row[c]:
                    c += 1
                path.append(f"M{start},{r}h{c - start}v1h-{c - start}z")
            else:
                c += 1
    svg = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {n} {n}" '
        f'width="{n * 4}" height="{n * 4}" shape-rendering="crispEdges">\n'
        f'<rect width="{n}" height="{n}" fill="#fff"/>\n'
        f'<path fill="#000" d="{"".join(path)}"/>\n'
        "</svg>\n"
    )
    return svg.encode("ascii")


def _as_symbol(grid, quiet_zone):
    n = grid.shape[0]
    if quiet_zone:
        inner = np.zeros_like(grid)
        inner[quiet_zone:n - quiet_zone, quiet_zone:n - quiet_zone] = True
        if grid[~inner].any():
            raise MalformedInput(f"quiet zone of {quiet_zone} modules contains dark modules")
        grid = grid[quiet_zone:n - quiet_zone, quiet_zone:n - quiet_zone]
    side = grid.shape[0]
    v, rem = divmod(side - 17, 4)
    if side <= 0 or rem or not MIN_VERSION <= v <= MAX_VERSION:
        raise MalformedInput(f"symbol side {side} (+{2 * quiet_zone} quiet zone) is not 4*v+17 for v in 1..40")
    return ModuleMatrix(grid, build_function_patterns(v).function_mask)


def _parse_pbm(text, quiet_zone):
    tokens = []  # (token, line, column)
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        col = 0
        for part in line.split():
            col = line.index(part, col)
            tokens.append((part, ln, col + 1))
            col += len(part)
    if not tokens or tokens[0][0] != "P1":
        raise MalformedInput("missing P1 magic number", 1, 1)
    if len(tokens) < 3:
        raise MalformedInput("missing PBM dimensions", tokens[-1][1])
    try:
        width, height = int(tokens[1][0]), int(tokens[2][0])
    except ValueError:
        raise MalformedInput("PBM dimensions are not integers", tokens[1][1], tokens[1][2]) from None
    if width != height:
        raise MalformedInput(f"PBM image is {width}x{height}, not square", tokens[1][1], tokens[1][2])
    bits = []
    for tok, ln, col in tokens[3:]:
        for k, ch in enumerate(tok):
            if ch not in "01":
                raise MalformedInput(f"unexpected character {ch!r} in PBM raster", ln, col + k)
            bits.append(ch == "1")
    if len(bits) != width * height:
        raise MalformedInput(f"PBM raster has {len(bits)} pixels, expected {width * height}")
    return _as_symbol(np.array(bits, dtype=bool).reshape(height, width), quiet_zone)


def _parse_txt(text, quiet_zone):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedInput("empty TXT matrix", 1)
    n = len(lines)
    rows = []
    for ln, line in enumerate(lines, 1):
        line = line.rstrip()
        if len(line) != n:
            raise MalformedInput(f"TXT grid is not square: row has {len(line)} modules, expected {n}", ln)
        row = []
        for col, ch in enumerate(line, 1):
            if ch not in "#.":
                raise MalformedInput(f"unexpected character {ch!r}", ln, col)
            row.append(ch == "#")
        rows.append(row)
    return _as_symbol(np.array(rows, dtype=bool), quiet_zone)


def _parse_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    modules = doc.get("modules") if isinstance(doc, dict) else None
    if not isinstance(modules, list) or not modules:
        raise MalformedInput("JSON matrix needs a non-empty 'modules' array")
    n = len(modules)
    for r, row in enumerate(modules):
        if not isinstance(row, list) or len(row) != n or any(x not in (0, 1) for x in row):
            raise MalformedInput(f"row {r} of 'modules' is not {n} values of 0/1")
    return _as_symbol(np.array(modules, dtype=bool), 0)


def parse_matrix(data, fmt, quiet_zone=DEFAULT_QUIET_ZONE):
    """Inverse of :func:`render` for PBM, TXT and JSON."""
    fmt = RenderFormat.coerce(fmt)
    if isinstance(data, (bytes, bytearray)):
        try:
            data = bytes(data).decode("ascii")
        except UnicodeDecodeError as exc:
            raise MalformedInput(f"non-ASCII byte at offset {exc.start}") from None
    if fmt is RenderFormat.PBM:
        return _parse_pbm(data, quiet_zone)
    if fmt is RenderFormat.TXT:
        return _parse_txt(data, quiet_zone)
    if fmt is RenderFormat.JSON:
        return _parse_json(data)
    raise ValueError("SVG output cannot be parsed back")
