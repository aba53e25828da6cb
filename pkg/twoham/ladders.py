#!/usr/bin/env python3
"""Ladder systems.

The ladder tile set at temperature tau builds half-ladders: a vertical backbone
alternating A2/A3 (B2/B3 on the right) with two-tile rungs hanging off the
A2/B2 tiles. Opposite half-ladders bind only through the strength-1 rung tips,
so they combine exactly when at least tau rungs line up.

The scale-2 simulator at tau' replaces every ladder tile by a 2x2 block and
splits each half-ladder kind into two families whose rung tips only partially
match across sides; each half-ladder may carry one "special" rung of the
partner's type.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

from twoham.core import EAST, NORTH, SOUTH, TAS, WEST, Coord, Glue, Supertile, TileSet, TileType, canonicalize
from twoham.engine import SequenceBuilder, Step
from twoham.errors import InputError
from twoham.log import get_logger
from twoham.represent import RepresentationFunction, partition_blocks, represent_supertile

log = get_logger(__name__)

LEFT, RIGHT = "left", "right"
TIP_LABEL = "0"

# Ladder glue labels per tile and side. Every label but the tip has strength tau.
LADDER_GLUES: Dict[str, Dict[str, str]] = {
    "A2": {NORTH: "1", SOUTH: "2", EAST: "3"},
    "A3": {NORTH: "2", SOUTH: "1"},
    "A4": {SOUTH: "1"},
    "A1": {WEST: "3", EAST: "4"},
    "A0": {WEST: "4", EAST: TIP_LABEL},
    "B2": {NORTH: "5", SOUTH: "6", WEST: "7"},
    "B3": {NORTH: "6", SOUTH: "5"},
    "B1": {EAST: "7", WEST: "8"},
    "B0": {EAST: "8", WEST: TIP_LABEL},
}

ROLES: Dict[str, str] = {
    "A2": "backbone-A2",
    "A3": "backbone-A3",
    "A4": "cap-A4",
    "A1": "rung-A1",
    "A0": "rung-tip-A0",
    "B2": "backbone-B2",
    "B3": "backbone-B3",
    "B1": "rung-B1",
    "B0": "rung-tip-B0",
}

# column tile, spacer tile, rung tiles ordered from the column outwards, cap
_SIDE_TILES: Dict[str, Tuple[str, str, Tuple[str, str], Optional[str]]] = {
    LEFT: ("A2", "A3", ("A1", "A0"), "A4"),
    RIGHT: ("B2", "B3", ("B1", "B0"), None),
}
# x of the column and of the two rung tiles
_SIDE_COLUMNS: Dict[str, Tuple[int, Tuple[int, int]]] = {
    LEFT: (0, (1, 2)),
    RIGHT: (2, (1, 0)),
}


def _opposite(side: str) -> str:
    return RIGHT if side == LEFT else LEFT


@dataclass(frozen=True)
class LadderSystem:
    tas: TAS
    roles: Dict[str, str]

    @property
    def tau(self) -> int:
        return self.tas.temperature


def gen_ladder_system(tau: int) -> LadderSystem:
    if not isinstance(tau, int) or tau < 2:
        raise InputError(f"ladder systems need tau >= 2, got {tau!r}")
    tiles: List[TileType] = []
    for name, glues in LADDER_GLUES.items():
        sides = {side: Glue(label, 1 if label == TIP_LABEL else tau) for side, label in glues.items()}
        tiles.append(TileType(name=name, **sides))
    tas = TAS(name=f"ladder-tau{tau}", tiles=TileSet(tiles), temperature=tau)
    return LadderSystem(tas=tas, roles=dict(ROLES))


@dataclass(frozen=True)
class HalfLadderSpec:
    """`height` column positions (index 0 on top) with rungs at `rungs`."""

    side: str
    height: int
    rungs: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.side not in (LEFT, RIGHT):
            raise InputError(f"side must be {LEFT!r} or {RIGHT!r}, got {self.side!r}")
        if not isinstance(self.height, int) or self.height < 1:
            raise InputError(f"half-ladder height must be >= 1, got {self.height!r}")
        rungs = tuple(self.rungs)
        if any(b <= a for a, b in zip(rungs, rungs[1:])):
            raise InputError(f"rung positions must be strictly increasing, got {list(rungs)}")
        for index in rungs:
            if not 0 <= index < self.height:
                raise InputError(f"rung position {index} outside 0..{self.height - 1}")
        object.__setattr__(self, "rungs", rungs)

    @property
    def rung_count(self) -> int:
        return len(self.rungs)


def mirror_spec(spec: HalfLadderSpec) -> HalfLadderSpec:
    return HalfLadderSpec(side=_opposite(spec.side), height=spec.height, rungs=spec.rungs)


def _column_y(height: int, index: int) -> int:
    return 2 * (height - 1 - index)


def _ladder_layout(side: str, height: int, rungs: Iterable[int]) -> Tuple[Dict[Coord, str], List[Dict[Coord, str]]]:
    """Column placements and one placement dict per rung, in ladder-tile coordinates."""
    column_tile, spacer, (inner, outer), _ = _SIDE_TILES[side]
    x, (x_inner, x_outer) = _SIDE_COLUMNS[side]
    column: Dict[Coord, str] = {}
    for index in range(height):
        y = _column_y(height, index)
        column[(x, y)] = column_tile
        if index < height - 1:
            column[(x, y - 1)] = spacer
    pieces = []
    for index in rungs:
        y = _column_y(height, index)
        pieces.append({(x_inner, y): inner, (x_outer, y): outer})
    return column, pieces


def _build_ladder(spec: HalfLadderSpec) -> Tuple[Dict[Coord, str], Tuple[Step, ...]]:
    column, rungs = _ladder_layout(spec.side, spec.height, spec.rungs)
    builder = SequenceBuilder()
    cells = sorted(column.items(), key=lambda item: -item[0][1])
    current = {cells[0][0]: cells[0][1]}
    for pos, name in cells[1:]:
        current = builder.join(current, {pos: name})
    for rung in rungs:
        (p_inner, n_inner), (p_outer, n_outer) = sorted(rung.items(), key=lambda item: abs(item[0][0] - 1))
        piece = builder.join({p_inner: n_inner}, {p_outer: n_outer})
        current = builder.join(current, piece)
    return current, tuple(builder.steps)


def build_half_ladder(ls: LadderSystem, spec: HalfLadderSpec) -> Supertile:
    """The half-ladder supertile described by `spec`."""
    placements, _ = _build_ladder(spec)
    return canonicalize(placements)


def half_ladder_sequence(ls: LadderSystem, spec: HalfLadderSpec) -> Tuple[Step, ...]:
    """An assembly sequence in ls.tas ending with build_half_ladder(ls, spec)."""
    return _build_ladder(spec)[1]


# --- scale-2 simulator ----------------------------------------------------

SCALE = 2
LEFT_FAMILIES: Tuple[str, ...] = ("B", "C")
RIGHT_FAMILIES: Tuple[str, ...] = ("A", "D")
FAMILIES: Tuple[str, ...] = ("A", "B", "C", "D")
SPECIAL: Dict[str, str] = {"A": "C", "B": "A", "C": "D", "D": "B"}
HALF_BLOCK_RULES = ("both", "top")

CORNERS: Dict[str, Coord] = {"nw": (0, 1), "ne": (1, 1), "sw": (0, 0), "se": (1, 0)}
MARKER_TAGS = {"U": "top", "D": "bottom", "S": "special", "": "n/a"}


class FamilyTag(NamedTuple):
    family: str
    role: str
    marker: str


class BlockSpec(NamedTuple):
    key: str
    family: str
    tile: str
    marker: str


def family_side(family: str) -> str:
    if family in LEFT_FAMILIES:
        return LEFT
    if family in RIGHT_FAMILIES:
        return RIGHT
    raise InputError(f"unknown half-ladder family {family!r}")


def _block_specs(family: str) -> List[BlockSpec]:
    column_tile, spacer, rung_tiles, cap = _SIDE_TILES[family_side(family)]
    backbone = [column_tile, spacer] + ([cap] if cap else [])
    specs = [BlockSpec(f"{family}{m}-{t}", family, t, m) for t in backbone for m in ("U", "D")]
    specs.append(BlockSpec(f"{family}S-{column_tile}", family, column_tile, "S"))
    specs.extend(BlockSpec(f"{family}-{t}", family, t, "") for t in rung_tiles)
    specs.extend(BlockSpec(f"{family}S-{t}", family, t, "S") for t in rung_tiles)
    return specs


def _exterior_prefix(block: BlockSpec, side: str, label: str) -> str:
    if side in (NORTH, SOUTH):
        marker = block.marker
        if marker == "S":
            marker = "U" if side == NORTH else "D"
        return f"{block.family}{marker}:{label}"
    special = block.marker == "S"
    return f"{block.family}{'S' if special else ''}:{label}"


def _block_tiles(block: BlockSpec, tau: int, tau_prime: int) -> List[TileType]:
    strong, weak = -(-tau_prime // 2), tau_prime // 2
    key = block.key
    glues: Dict[str, Dict[str, Glue]] = {corner: {} for corner in CORNERS}
    glues["nw"][EAST] = glues["ne"][WEST] = Glue(f"{key}/n", tau_prime)
    glues["sw"][EAST] = glues["se"][WEST] = Glue(f"{key}/s", tau_prime)
    glues["nw"][SOUTH] = glues["sw"][NORTH] = Glue(f"{key}/w", strong)
    glues["ne"][SOUTH] = glues["se"][NORTH] = Glue(f"{key}/e", weak)

    # (corner carrying the stronger half, corner carrying the weaker half)
    halves = {NORTH: ("nw", "ne"), SOUTH: ("sw", "se"), EAST: ("ne", "se"), WEST: ("nw", "sw")}
    for side, label in LADDER_GLUES[block.tile].items():
        top, bottom = halves[side]
        if label == TIP_LABEL:
            rung_type = SPECIAL[block.family] if block.marker == "S" else block.family
            glues[top][side] = Glue(f"rung:{rung_type}", tau_prime - tau)
            glues[bottom][side] = Glue("H", 1)
            continue
        prefix = _exterior_prefix(block, side, label)
        glues[top][side] = Glue(f"{prefix}/a", strong)
        glues[bottom][side] = Glue(f"{prefix}/b", weak)
    return [TileType(name=f"{key}.{corner}", **glues[corner]) for corner in CORNERS]


def _rep_patterns(key: str, half_blocks: str) -> Iterator[Tuple[Tuple[int, int, str], ...]]:
    cells = {corner: (dx, dy, f"{key}.{corner}") for corner, (dx, dy) in CORNERS.items()}
    halves = [{"nw", "ne"}]
    if half_blocks == "both":
        halves.append({"sw", "se"})
    for size in (2, 3, 4):
        for chosen in combinations(sorted(CORNERS), size):
            if any(half <= set(chosen) for half in halves):
                yield tuple(sorted(cells[corner] for corner in chosen))


@dataclass(frozen=True)
class SimLadderSystem:
    tas: TAS
    tau: int
    tau_prime: int
    simulated: LadderSystem
    family: Dict[str, FamilyTag]
    blocks: Dict[str, BlockSpec]
    representation: RepresentationFunction
    half_blocks: str = "both"
    scale: int = field(default=SCALE)


def gen_sim_ladder_system(tau: int, tau_prime: int, *, half_blocks: str = "both") -> SimLadderSystem:
    """Scale-2 simulator of the tau ladder at tau'.

    `half_blocks="both"` maps a block to its ladder tile as soon as either its
    top pair or its bottom pair is present; "top" only honors the top pair.
    """
    if not isinstance(tau, int) or tau < 2:
        raise InputError(f"ladder systems need tau >= 2, got {tau!r}")
    if not isinstance(tau_prime, int) or tau_prime <= tau:
        raise InputError(f"simulator temperature must exceed tau={tau}, got {tau_prime!r}")
    if half_blocks not in HALF_BLOCK_RULES:
        raise InputError(f"half_blocks must be one of {HALF_BLOCK_RULES}, got {half_blocks!r}")

    tiles: List[TileType] = []
    family: Dict[str, FamilyTag] = {}
    blocks: Dict[str, BlockSpec] = {}
    entries: Dict[Tuple[Tuple[int, int, str], ...], str] = {}
    for fam in FAMILIES:
        for block in _block_specs(fam):
            blocks[block.key] = block
            for tile in _block_tiles(block, tau, tau_prime):
                tiles.append(tile)
                family[tile.name] = FamilyTag(fam, block.tile, MARKER_TAGS[block.marker])
            for pattern in _rep_patterns(block.key, half_blocks):
                entries[pattern] = block.tile
    tas = TAS(name=f"ladder-sim-{tau}-{tau_prime}", tiles=TileSet(tiles), temperature=tau_prime)
    representation = RepresentationFunction(SCALE, tuple(entries.items()))
    log.info("sim_ladder_generated", tau=tau, tau_prime=tau_prime, tiles=len(tiles), half_blocks=half_blocks)
    return SimLadderSystem(
        tas=tas,
        tau=tau,
        tau_prime=tau_prime,
        simulated=gen_ladder_system(tau),
        family=family,
        blocks=blocks,
        representation=representation,
        half_blocks=half_blocks,
    )


@dataclass(frozen=True)
class SimHalfLadderSpec:
    """Block-level half-ladder of one family.

    `special` is the rung position carrying the special rung, if any. Backbone
    blocks above it use the U set and those below the D set; without a special
    rung the whole backbone uses `backbone`.
    """

    family: str
    height: int
    rungs: Tuple[int, ...] = ()
    special: Optional[int] = None
    backbone: str = "U"

    def __post_init__(self) -> None:
        HalfLadderSpec(family_side(self.family), self.height, self.rungs)
        object.__setattr__(self, "rungs", tuple(self.rungs))
        if self.special is not None and self.special not in self.rungs:
            raise InputError(f"special rung {self.special} is not one of the rungs {list(self.rungs)}")
        if self.backbone not in ("U", "D"):
            raise InputError(f"backbone set must be 'U' or 'D', got {self.backbone!r}")

    @property
    def side(self) -> str:
        return family_side(self.family)

    def ladder_spec(self) -> HalfLadderSpec:
        return HalfLadderSpec(self.side, self.height, self.rungs)

    def rung_types(self) -> List[str]:
        return [SPECIAL[self.family] if index == self.special else self.family for index in self.rungs]


@dataclass(frozen=True)
class SimHalfLadder:
    spec: SimHalfLadderSpec
    supertile: Supertile
    steps: Tuple[Step, ...]


def _marker_below(spec: SimHalfLadderSpec, index: int) -> str:
    """Backbone set for a block strictly between column index `index` and `index + 1`."""
    if spec.special is None:
        return spec.backbone
    return "U" if index < spec.special else "D"


def _block_key(spec: SimHalfLadderSpec, tile: str, y: int) -> str:
    """Block key for ladder tile `tile` sitting on ladder row `y` of the half-ladder."""
    _, spacer, rung_tiles, _ = _SIDE_TILES[spec.side]
    if tile == spacer:
        return f"{spec.family}{_marker_below(spec, spec.height - 1 - (y + 1) // 2)}-{tile}"
    index = spec.height - 1 - y // 2
    if tile in rung_tiles:
        return f"{spec.family}{'S' if index == spec.special else ''}-{tile}"
    if index == spec.special:
        return f"{spec.family}S-{tile}"
    if spec.special is None:
        return f"{spec.family}{spec.backbone}-{tile}"
    return f"{spec.family}{'U' if index < spec.special else 'D'}-{tile}"


def _assemble_block(builder: SequenceBuilder, key: str, block: Coord) -> Dict[Coord, str]:
    bx, by = block
    corner = {
        name: {(SCALE * bx + dx, SCALE * by + dy): f"{key}.{name}"} for name, (dx, dy) in CORNERS.items()
    }
    top = builder.join(corner["nw"], corner["ne"])
    bottom = builder.join(corner["sw"], corner["se"])
    return builder.join(top, bottom)


def build_sim_half_ladder(sls: SimLadderSystem, spec: SimHalfLadderSpec) -> SimHalfLadder:
    """Block-level half-ladder with the sequence that assembles it block by block."""
    column, rungs = _ladder_layout(spec.side, spec.height, spec.rungs)
    builder = SequenceBuilder()
    current: Optional[Dict[Coord, str]] = None
    for pos, tile in sorted(column.items(), key=lambda item: -item[0][1]):
        block = _assemble_block(builder, _block_key(spec, tile, pos[1]), pos)
        current = block if current is None else builder.join(current, block)
    assert current is not None
    for rung in rungs:
        inner, outer = sorted(rung.items(), key=lambda item: abs(item[0][0] - 1))
        first = _assemble_block(builder, _block_key(spec, inner[1], inner[0][1]), inner[0])
        second = _assemble_block(builder, _block_key(spec, outer[1], outer[0][1]), outer[0])
        current = builder.join(current, builder.join(first, second))
    missing = {key for key in _keys_in(current) if key not in sls.blocks}
    if missing:
        raise InputError(f"half-ladder uses blocks unknown to {sls.tas.name}: {sorted(missing)}")
    return SimHalfLadder(spec=spec, supertile=canonicalize(current), steps=tuple(builder.steps))


def _keys_in(placements: Dict[Coord, str]) -> Set[str]:
    return {name.rsplit(".", 1)[0] for name in placements.values()}


def rung_seam_strength(
    left_family: str,
    left_types: Sequence[str],
    right_family: str,
    right_types: Sequence[str],
    tau: int,
    tau_prime: int,
) -> int:
    """Seam strength of two aligned rung lists: tau'-tau+1 per matching pair, else 1."""
    if family_side(left_family) != LEFT or family_side(right_family) != RIGHT:
        raise InputError(f"need a left and a right family, got {left_family!r} and {right_family!r}")
    if len(left_types) != len(right_types):
        raise InputError(f"rung lists differ in length: {len(left_types)} vs {len(right_types)}")
    return sum(tau_prime - tau + 1 if a == b else 1 for a, b in zip(left_types, right_types))


def _special_options(rungs: Tuple[int, ...]) -> List[Optional[int]]:
    return [None] + list(rungs)


@dataclass(frozen=True)
class Mate:
    spec: SimHalfLadderSpec
    seam: int


def find_mate(sls: SimLadderSystem, spec: SimHalfLadderSpec) -> Optional[Mate]:
    """First opposite half-ladder, same height and rungs, whose aligned seam reaches tau'."""
    families = RIGHT_FAMILIES if spec.side == LEFT else LEFT_FAMILIES
    for fam in families:
        for special in _special_options(spec.rungs):
            other = SimHalfLadderSpec(fam, spec.height, spec.rungs, special)
            left, right = (spec, other) if spec.side == LEFT else (other, spec)
            seam = rung_seam_strength(
                left.family, left.rung_types(), right.family, right.rung_types(), sls.tau, sls.tau_prime
            )
            if seam >= sls.tau_prime:
                return Mate(other, seam)
    return None


@dataclass(frozen=True)
class SeamMismatch:
    left: SimHalfLadderSpec
    right: SimHalfLadderSpec
    seam: int


def find_seam_mismatch(sls: SimLadderSystem, *, max_rungs: Optional[int] = None) -> Optional[SeamMismatch]:
    """Opposite half-ladders whose images combine but whose simulator seam is below tau'.

    Searched from the fewest rungs upward; images combine once tau rungs align.
    """
    limit = max_rungs if max_rungs is not None else sls.tau + 1
    for count in range(sls.tau, limit + 1):
        rungs = tuple(range(count))
        for left_fam in LEFT_FAMILIES:
            for right_fam in RIGHT_FAMILIES:
                for left_special in _special_options(rungs):
                    for right_special in _special_options(rungs):
                        left = SimHalfLadderSpec(left_fam, count, rungs, left_special)
                        right = SimHalfLadderSpec(right_fam, count, rungs, right_special)
                        seam = rung_seam_strength(
                            left_fam, left.rung_types(), right_fam, right.rung_types(), sls.tau, sls.tau_prime
                        )
                        if seam < sls.tau_prime:
                            return SeamMismatch(left, right, seam)
    return None


def special_base_blocks(sls: SimLadderSystem, supertile: Supertile) -> int:
    """Number of blocks holding a special base tile, at the supertile's grid phase."""
    offset = represent_supertile(sls.representation, supertile).offset
    count = 0
    for pattern in partition_blocks(sls.scale, supertile.canonical, offset).values():
        keys: Set[str] = {name.rsplit(".", 1)[0] for _, _, name in pattern}
        if any(
            sls.blocks[key].marker == "S" and sls.blocks[key].tile in ("A2", "B2")
            for key in keys
            if key in sls.blocks
        ):
            count += 1
    return count
