#!/usr/bin/env python3
"""m-block representation functions: block -> tile (R), assembly -> assembly (R*),
supertile -> supertile (R~), and the clean-mapping (fuzz) rule."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from twoham.core import Assembly, Cell, Coord, Supertile, canonicalize
from twoham.errors import InputError

Pattern = Tuple[Cell, ...]

_NEIGHBOURHOOD = ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1))


def make_pattern(cells: Iterable[Cell]) -> Pattern:
    return tuple(sorted((int(dx), int(dy), str(name)) for dx, dy, name in cells))


@dataclass(frozen=True)
class RepresentationFunction:
    scale: int
    entries: Tuple[Tuple[Pattern, str], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.scale, int) or self.scale < 1:
            raise InputError(f"scale must be a positive integer, got {self.scale!r}")
        seen = set()
        for pattern, target in self.entries:
            if not pattern:
                raise InputError("the empty block cannot be mapped to a tile")
            if not target:
                raise InputError("patterns must map to a non-empty tile name")
            positions = [(dx, dy) for dx, dy, _ in pattern]
            if len(set(positions)) != len(positions):
                raise InputError(f"pattern {pattern} places two tiles in one cell")
            for dx, dy in positions:
                if not (0 <= dx < self.scale and 0 <= dy < self.scale):
                    raise InputError(f"pattern offset ({dx}, {dy}) outside a {self.scale}-block")
            if pattern in seen:
                raise InputError(f"duplicate pattern {pattern}")
            seen.add(pattern)
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.scale, self.entries))

    @cached_property
    def lookup(self) -> Dict[Pattern, str]:
        return dict(self.entries)

    @classmethod
    def from_mapping(cls, scale: int, mapping: Mapping[Pattern, str]) -> RepresentationFunction:
        return cls(scale, tuple((make_pattern(p), t) for p, t in mapping.items()))

    @classmethod
    def renaming(cls, names: Mapping[str, str]) -> RepresentationFunction:
        """Scale-1 function sending simulator tile `k` to simulated tile `names[k]`."""
        return cls(1, tuple((((0, 0, src),), dst) for src, dst in names.items()))

    @classmethod
    def identity(cls, names: Iterable[str]) -> RepresentationFunction:
        return cls.renaming({name: name for name in names})

    def with_entry(self, pattern: Iterable[Cell], target: str) -> RepresentationFunction:
        """Copy with one pattern (re)assigned."""
        key = make_pattern(pattern)
        updated = dict(self.entries)
        updated[key] = target
        return RepresentationFunction(self.scale, tuple(updated.items()))

    def map_block(self, cells: Iterable[Cell]) -> Optional[str]:
        return self.lookup.get(make_pattern(cells))


@dataclass(frozen=True)
class BlockImage:
    """R* of an assembly for one grid phase, with fuzz bookkeeping."""

    offset: Coord
    assembly: Assembly
    blocks: Tuple[Coord, ...]
    unmapped: Tuple[Coord, ...]
    offending: Tuple[Coord, ...]

    @property
    def clean(self) -> bool:
        return not self.offending

    @property
    def image(self) -> Optional[Assembly]:
        return None if self.offending else self.assembly


@dataclass(frozen=True)
class CleanCheck:
    clean: bool
    witness: Optional[Coord] = None

    def __bool__(self) -> bool:
        return self.clean


@dataclass(frozen=True)
class SupertileImage:
    offset: Coord
    image: Optional[Supertile]
    block_image: BlockImage

    @property
    def clean(self) -> bool:
        return self.block_image.clean

    @property
    def size(self) -> int:
        return 0 if self.image is None else self.image.size


def partition_blocks(scale: int, a: Assembly, offset: Coord = (0, 0)) -> Dict[Coord, Pattern]:
    ox, oy = offset
    grouped: Dict[Coord, List[Cell]] = defaultdict(list)
    for x, y, name in a.cells:
        bx, dx = divmod(x - ox, scale)
        by, dy = divmod(y - oy, scale)
        grouped[(bx, by)].append((dx, dy, name))
    return {block: make_pattern(cells) for block, cells in grouped.items()}


def apply_rep(rep: RepresentationFunction, a: Assembly, *, offset: Coord = (0, 0)) -> BlockImage:
    blocks = partition_blocks(rep.scale, a, offset)
    mapped: Dict[Coord, str] = {}
    unmapped: List[Coord] = []
    for block, pattern in blocks.items():
        target = rep.lookup.get(pattern)
        if target is None:
            unmapped.append(block)
        else:
            mapped[block] = target
    offending: List[Coord] = []
    if len(blocks) > 1:
        for bx, by in unmapped:
            if not any((bx + u, by + v) in mapped for u, v in _NEIGHBOURHOOD):
                offending.append((bx, by))
    return BlockImage(
        offset=offset,
        assembly=Assembly.from_placements(mapped),
        blocks=tuple(sorted(blocks)),
        unmapped=tuple(sorted(unmapped)),
        offending=tuple(sorted(offending)),
    )


def check_clean_mapping(
    rep: RepresentationFunction, a: Assembly, *, offset: Coord = (0, 0)
) -> CleanCheck:
    result = apply_rep(rep, a, offset=offset)
    if result.clean:
        return CleanCheck(True)
    return CleanCheck(False, result.offending[0])


@lru_cache(maxsize=1 << 17)
def represent_supertile(rep: RepresentationFunction, s: Supertile) -> SupertileImage:
    """R~ of a supertile: try every grid phase, keep the clean one mapping the most blocks."""
    best: Optional[Tuple[Tuple[int, int, Coord], BlockImage]] = None
    for offset in product(range(rep.scale), repeat=2):
        candidate = apply_rep(rep, s.canonical, offset=offset)
        score = (0 if candidate.clean else 1, -len(candidate.assembly), offset)
        if best is None or score < best[0]:
            best = (score, candidate)
    assert best is not None
    block_image = best[1]
    image = None
    if block_image.clean and block_image.assembly:
        image = canonicalize(block_image.assembly)
    return SupertileImage(offset=block_image.offset, image=image, block_image=block_image)
