#!/usr/bin/env python3
"""Tiles, glues, assemblies, supertiles and tau-stability for the 2HAM."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

import networkx as nx

from twoham.errors import InputError

Coord = Tuple[int, int]
Cell = Tuple[int, int, str]

NORTH, EAST, SOUTH, WEST = "north", "east", "south", "west"
SIDES: Tuple[str, ...] = (NORTH, EAST, SOUTH, WEST)
OFFSETS: Dict[str, Coord] = {NORTH: (0, 1), EAST: (1, 0), SOUTH: (0, -1), WEST: (-1, 0)}
OPPOSITE: Dict[str, str] = {NORTH: SOUTH, SOUTH: NORTH, EAST: WEST, WEST: EAST}

INFINITE = "inf"
Count = Union[int, str]


@dataclass(frozen=True)
class Glue:
    label: str
    strength: int

    def __post_init__(self) -> None:
        if not self.label:
            raise InputError("glue label must be a non-empty string")
        if self.strength < 0:
            raise InputError(f"glue {self.label!r} has negative strength {self.strength}")

    def interacts(self, other: Optional[Glue]) -> bool:
        return (
            other is not None
            and self.label == other.label
            and self.strength > 0
            and other.strength > 0
        )


@dataclass(frozen=True)
class TileType:
    name: str
    north: Optional[Glue] = None
    east: Optional[Glue] = None
    south: Optional[Glue] = None
    west: Optional[Glue] = None

    def __post_init__(self) -> None:
        if not self.name:
            raise InputError("tile name must be a non-empty string")

    def glue(self, side: str) -> Optional[Glue]:
        return getattr(self, side)

    def glues(self) -> Iterator[Tuple[str, Glue]]:
        for side in SIDES:
            glue = getattr(self, side)
            if glue is not None:
                yield side, glue


class TileSet:
    """An immutable, name-indexed tile collection with consistent glue strengths."""

    def __init__(self, tiles: Iterable[TileType]) -> None:
        self._tiles: Tuple[TileType, ...] = tuple(tiles)
        by_name: Dict[str, TileType] = {}
        strengths: Dict[str, int] = {}
        for tile in self._tiles:
            if tile.name in by_name:
                raise InputError(f"duplicate tile name {tile.name!r}")
            by_name[tile.name] = tile
            for side, glue in tile.glues():
                known = strengths.setdefault(glue.label, glue.strength)
                if known != glue.strength:
                    raise InputError(
                        f"glue label {glue.label!r} used with strengths {known} and "
                        f"{glue.strength} (tile {tile.name!r}, {side} side)"
                    )
        self._by_name = by_name
        # Positive glues only: side -> (label, strength).
        self._bonds: Dict[str, Dict[str, Tuple[str, int]]] = {
            tile.name: {
                side: (glue.label, glue.strength)
                for side, glue in tile.glues()
                if glue.strength > 0
            }
            for tile in self._tiles
        }
        self._hash = hash(self._tiles)

    def __iter__(self) -> Iterator[TileType]:
        return iter(self._tiles)

    def __len__(self) -> int:
        return len(self._tiles)

    def __contains__(self, name: object) -> bool:
        return name in self._by_name

    def __getitem__(self, name: str) -> TileType:
        try:
            return self._by_name[name]
        except KeyError:
            raise InputError(f"unknown tile name {name!r}") from None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TileSet) and self._tiles == other._tiles

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"TileSet({len(self._tiles)} tiles)"

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(tile.name for tile in self._tiles)

    def bonds(self, name: str) -> Mapping[str, Tuple[str, int]]:
        """Return the positive-strength glues of a tile keyed by side."""
        try:
            return self._bonds[name]
        except KeyError:
            raise InputError(f"unknown tile name {name!r}") from None


@dataclass(frozen=True, eq=True)
class Assembly:
    """A finite placement of tile names on Z^2, stored as sorted (x, y, tile) cells."""

    cells: Tuple[Cell, ...]

    @classmethod
    def from_cells(cls, cells: Iterable[Cell]) -> Assembly:
        ordered = tuple(sorted((int(x), int(y), str(name)) for x, y, name in cells))
        for first, second in zip(ordered, ordered[1:]):
            if first[:2] == second[:2]:
                raise InputError(f"two tiles placed at {first[:2]}")
        return cls(ordered)

    @classmethod
    def from_placements(cls, placements: Mapping[Coord, str]) -> Assembly:
        return cls(tuple(sorted((x, y, name) for (x, y), name in placements.items())))

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash(self.cells)

    @cached_property
    def placements(self) -> Dict[Coord, str]:
        return {(x, y): name for x, y, name in self.cells}

    def __len__(self) -> int:
        return len(self.cells)

    def __bool__(self) -> bool:
        return bool(self.cells)

    def translate(self, dx: int, dy: int) -> Assembly:
        return Assembly(tuple((x + dx, y + dy, name) for x, y, name in self.cells))

    def tile_names(self) -> FrozenSet[str]:
        return frozenset(name for _, _, name in self.cells)


@dataclass(frozen=True)
class Supertile:
    """Translation class of an assembly, held by its canonical representative."""

    canonical: Assembly

    @property
    def size(self) -> int:
        return len(self.canonical)

    @property
    def key(self) -> Tuple[int, Tuple[Cell, ...]]:
        """Total order used for deterministic listings: size first, then cells."""
        return (len(self.canonical), self.canonical.cells)

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __len__(self) -> int:
        return len(self.canonical)

    def to_rows(self) -> List[List[Union[int, str]]]:
        return [[x, y, name] for x, y, name in self.canonical.cells]


@dataclass(frozen=True)
class BindingGraph:
    vertices: Tuple[Coord, ...]
    edges: Tuple[Tuple[Coord, Coord, int], ...]

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        for p, q, weight in self.edges:
            graph.add_edge(p, q, weight=weight)
        return graph

    def cut_weight(self, side: Iterable[Coord]) -> int:
        """Total weight of edges with exactly one endpoint in `side`."""
        chosen = set(side)
        return sum(w for p, q, w in self.edges if (p in chosen) != (q in chosen))


@dataclass(frozen=True)
class InitialSupertile:
    supertile: Supertile
    count: Count = INFINITE

    def __post_init__(self) -> None:
        if self.count != INFINITE and (not isinstance(self.count, int) or self.count < 1):
            raise InputError(f"initial count must be a positive integer or {INFINITE!r}")


@dataclass(frozen=True)
class TAS:
    """A 2HAM tile assembly system: tile set, initial state and temperature."""

    name: str
    tiles: TileSet
    temperature: int
    initial_state: Tuple[InitialSupertile, ...] = field(default=())

    def __post_init__(self) -> None:
        if not isinstance(self.temperature, int) or self.temperature < 1:
            raise InputError(f"temperature must be a positive integer, got {self.temperature!r}")
        if not self.initial_state:
            singletons = tuple(
                InitialSupertile(canonicalize(Assembly(((0, 0, tile.name),))))
                for tile in self.tiles
            )
            object.__setattr__(self, "initial_state", singletons)
        for entry in self.initial_state:
            assembly = entry.supertile.canonical
            for name in assembly.tile_names():
                if name not in self.tiles:
                    raise InputError(f"initial supertile uses unknown tile {name!r}")
            if not is_stable(assembly, self.tiles, self.temperature):
                weight, side = weakest_cut(assembly, self.tiles)
                raise InputError(
                    f"initial supertile of {len(assembly)} tiles is not {self.temperature}-stable: "
                    f"cut {sorted(side)} has weight {weight}"
                )

    @property
    def initial_supertiles(self) -> Tuple[Supertile, ...]:
        return tuple(entry.supertile for entry in self.initial_state)

    def has_default_initial_state(self) -> bool:
        expected = {(0, 0, tile.name) for tile in self.tiles}
        cells = {entry.supertile.canonical.cells for entry in self.initial_state}
        return (
            len(self.initial_state) == len(self.tiles)
            and all(entry.count == INFINITE for entry in self.initial_state)
            and cells == {(cell,) for cell in expected}
        )


def binding_graph(a: Assembly, tiles: TileSet) -> BindingGraph:
    placements = a.placements
    edges: List[Tuple[Coord, Coord, int]] = []
    for (x, y), name in sorted(placements.items()):
        bonds = tiles.bonds(name)
        for side in (EAST, NORTH):
            dx, dy = OFFSETS[side]
            neighbour = (x + dx, y + dy)
            other = placements.get(neighbour)
            if other is None:
                continue
            mine = bonds.get(side)
            theirs = tiles.bonds(other).get(OPPOSITE[side])
            if mine is not None and theirs is not None and mine[0] == theirs[0]:
                edges.append(((x, y), neighbour, mine[1]))
    return BindingGraph(vertices=tuple(sorted(placements)), edges=tuple(edges))


def min_cut_weight(g: BindingGraph) -> int:
    """Global minimum cut of a binding graph (Stoer-Wagner, deterministic)."""
    if len(g.vertices) < 2:
        raise InputError("minimum cut needs at least two vertices")
    graph = g.to_networkx()
    if not nx.is_connected(graph):
        return 0
    value, _ = nx.stoer_wagner(graph, weight="weight")
    return int(value)


def weakest_cut(a: Assembly, tiles: TileSet) -> Tuple[int, FrozenSet[Coord]]:
    """Return the minimum cut weight and one side of a cut achieving it."""
    g = binding_graph(a, tiles)
    if len(g.vertices) < 2:
        raise InputError("a single tile has no cuts")
    graph = g.to_networkx()
    if not nx.is_connected(graph):
        component = min(nx.connected_components(graph), key=lambda comp: sorted(comp))
        return 0, frozenset(component)
    value, (side, _) = nx.stoer_wagner(graph, weight="weight")
    return int(value), frozenset(side)


def is_stable(a: Assembly, tiles: TileSet, tau: int) -> bool:
    if len(a) == 1:
        return True
    if len(a) == 0:
        return False
    return min_cut_weight(binding_graph(a, tiles)) >= tau


def canonicalize(a: Union[Assembly, Mapping[Coord, str]]) -> Supertile:
    if not isinstance(a, Assembly):
        a = Assembly.from_placements(a)
    if not a.cells:
        raise InputError("cannot canonicalize an empty assembly")
    min_x = min(x for x, _, _ in a.cells)
    min_y = min(y for _, y, _ in a.cells)
    if min_x == 0 and min_y == 0:
        return Supertile(a)
    return Supertile(Assembly(tuple(sorted((x - min_x, y - min_y, n) for x, y, n in a.cells))))


def singleton(name: str) -> Supertile:
    return Supertile(Assembly(((0, 0, name),)))
