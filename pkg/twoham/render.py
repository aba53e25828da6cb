#!/usr/bin/env python3
"""Static SVG figures of supertiles: one square per tile, bonds drawn by strength."""

from __future__ import annotations

from pathlib import Path
from typing import List, Union

import svgwrite

from twoham.core import Supertile, TileSet, binding_graph
from twoham.engine import ProducibleSet
from twoham.log import get_logger

log = get_logger(__name__)

CELL = 40
MARGIN = 10
STROKE_UNIT = 1.5
FONT = "font-size:9px;font-family:sans-serif;text-anchor:middle;dominant-baseline:middle"


def render_supertile(s: Supertile, tiles: TileSet) -> svgwrite.Drawing:
    cells = s.canonical.cells
    width = max(x for x, _, _ in cells) + 1
    height = max(y for _, y, _ in cells) + 1
    dwg = svgwrite.Drawing(size=(2 * MARGIN + width * CELL, 2 * MARGIN + height * CELL))

    def corner(x: int, y: int) -> tuple:
        return (MARGIN + x * CELL, MARGIN + (height - y) * CELL)

    for x, y, name in cells:
        left, top = corner(x, y + 1)
        dwg.add(dwg.rect((left, top), (CELL, CELL), fill="white", stroke=svgwrite.rgb(60, 60, 60, "%")))
        dwg.add(dwg.text(name, insert=(left + CELL / 2, top + CELL / 2), style=FONT))

    for (px, py), (qx, qy), weight in binding_graph(s.canonical, tiles).edges:
        if qx > px:
            start, end = corner(qx, py), corner(qx, py + 1)
        else:
            start, end = corner(px, qy), corner(px + 1, qy)
        dwg.add(dwg.line(start, end, stroke=svgwrite.rgb(0, 0, 0), stroke_width=STROKE_UNIT * weight))
    return dwg


def render_producibles(prods: ProducibleSet, tiles: TileSet, directory: Union[str, Path]) -> List[Path]:
    """Write one SVG per producible, numbered in listing order."""
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    width = len(str(len(prods)))
    written: List[Path] = []
    for number, supertile in enumerate(prods, start=1):
        path = target / f"supertile-{number:0{width}d}.svg"
        path.write_text(render_supertile(supertile, tiles).tostring(), encoding="utf-8")
        written.append(path)
    log.info("svg_rendered", directory=str(target), files=len(written))
    return written
