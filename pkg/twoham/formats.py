#!/usr/bin/env python3
"""JSON file schemas for systems and representation functions (pydantic v2)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from twoham.core import INFINITE, TAS, Assembly, Glue, InitialSupertile, TileSet, TileType, canonicalize
from twoham.errors import InputError
from twoham.represent import RepresentationFunction, make_pattern

ModelT = TypeVar("ModelT", bound=BaseModel)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GlueModel(_Strict):
    label: str = Field(min_length=1)
    strength: int = Field(ge=0)


class TileModel(_Strict):
    name: str = Field(min_length=1)
    north: Optional[GlueModel] = None
    east: Optional[GlueModel] = None
    south: Optional[GlueModel] = None
    west: Optional[GlueModel] = None

    def to_tile(self) -> TileType:
        sides = {
            side: Glue(glue.label, glue.strength)
            for side, glue in (("north", self.north), ("east", self.east), ("south", self.south), ("west", self.west))
            if glue is not None
        }
        return TileType(name=self.name, **sides)


class CellModel(_Strict):
    x: int
    y: int
    tile: str = Field(min_length=1)


class InitialSupertileModel(_Strict):
    assembly: List[CellModel] = Field(min_length=1)
    count: Union[int, Literal["inf"]] = INFINITE

    @model_validator(mode="after")
    def _check(self) -> InitialSupertileModel:
        if self.count != INFINITE and self.count < 1:
            raise ValueError(f"count must be a positive integer or {INFINITE!r}, got {self.count}")
        positions = [(cell.x, cell.y) for cell in self.assembly]
        if len(set(positions)) != len(positions):
            raise ValueError("initial supertile places two tiles in one cell")
        return self


class SystemFile(_Strict):
    name: str = Field(min_length=1)
    temperature: int = Field(ge=1)
    tiles: List[TileModel] = Field(min_length=1)
    initial_state: Optional[List[InitialSupertileModel]] = None

    @model_validator(mode="after")
    def _check(self) -> SystemFile:
        names = set()
        strengths: Dict[str, int] = {}
        for tile in self.tiles:
            if tile.name in names:
                raise ValueError(f"duplicate tile name {tile.name!r}")
            names.add(tile.name)
            for glue in (tile.north, tile.east, tile.south, tile.west):
                if glue is None:
                    continue
                known = strengths.setdefault(glue.label, glue.strength)
                if known != glue.strength:
                    raise ValueError(
                        f"glue label {glue.label!r} used with strengths {known} and {glue.strength}"
                    )
        for entry in self.initial_state or ():
            for cell in entry.assembly:
                if cell.tile not in names:
                    raise ValueError(f"initial supertile uses unknown tile {cell.tile!r}")
        return self

    def to_tas(self) -> TAS:
        initial = tuple(
            InitialSupertile(
                canonicalize(Assembly.from_cells((c.x, c.y, c.tile) for c in entry.assembly)),
                entry.count,
            )
            for entry in self.initial_state or ()
        )
        tiles = TileSet(tile.to_tile() for tile in self.tiles)
        return TAS(name=self.name, tiles=tiles, temperature=self.temperature, initial_state=initial)

    @classmethod
    def from_tas(cls, tas: TAS) -> SystemFile:
        tiles = [
            TileModel(
                name=tile.name,
                **{side: GlueModel(label=glue.label, strength=glue.strength) for side, glue in tile.glues()},
            )
            for tile in tas.tiles
        ]
        initial = None
        if not tas.has_default_initial_state():
            initial = [
                InitialSupertileModel(
                    assembly=[CellModel(x=x, y=y, tile=n) for x, y, n in entry.supertile.canonical.cells],
                    count=entry.count,
                )
                for entry in tas.initial_state
            ]
        return cls(name=tas.name, temperature=tas.temperature, tiles=tiles, initial_state=initial)


class PatternCellModel(_Strict):
    dx: int = Field(ge=0)
    dy: int = Field(ge=0)
    tile: str = Field(min_length=1)


class RepEntryModel(_Strict):
    pattern: List[PatternCellModel] = Field(min_length=1)
    maps_to: str = Field(min_length=1)


class RepFile(_Strict):
    scale: int = Field(ge=1)
    entries: List[RepEntryModel] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check(self) -> RepFile:
        seen = set()
        for number, entry in enumerate(self.entries):
            for cell in entry.pattern:
                if cell.dx >= self.scale or cell.dy >= self.scale:
                    raise ValueError(
                        f"entry {number}: offset ({cell.dx}, {cell.dy}) outside a {self.scale}-block"
                    )
            pattern = make_pattern((c.dx, c.dy, c.tile) for c in entry.pattern)
            if pattern in seen:
                raise ValueError(f"entry {number}: duplicate pattern")
            seen.add(pattern)
        return self

    def to_rep(self) -> RepresentationFunction:
        return RepresentationFunction(
            self.scale,
            tuple(
                (make_pattern((c.dx, c.dy, c.tile) for c in entry.pattern), entry.maps_to)
                for entry in self.entries
            ),
        )

    @classmethod
    def from_rep(cls, rep: RepresentationFunction) -> RepFile:
        entries = [
            RepEntryModel(
                pattern=[PatternCellModel(dx=dx, dy=dy, tile=n) for dx, dy, n in pattern],
                maps_to=target,
            )
            for pattern, target in rep.entries
        ]
        return cls(scale=rep.scale, entries=entries)


def _describe(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        where = ".".join(str(part) for part in error["loc"]) or "<document>"
        parts.append(f"{where}: {error['msg']}")
    return "; ".join(parts)


def parse_model(model: Type[ModelT], text: str, source: str = "<input>") -> ModelT:
    try:
        return model.model_validate_json(text)
    except ValidationError as exc:
        raise InputError(f"{source}: {_describe(exc)}") from None


def _read(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def to_json(payload: Any) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _dump(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json", exclude_none=True), indent=2) + "\n"


def load_system(path: Union[str, Path]) -> TAS:
    return parse_model(SystemFile, _read(path), str(path)).to_tas()


def dump_system(tas: TAS) -> str:
    return _dump(SystemFile.from_tas(tas))


def load_rep(path: Union[str, Path]) -> RepresentationFunction:
    return parse_model(RepFile, _read(path), str(path)).to_rep()


def dump_rep(rep: RepresentationFunction) -> str:
    return _dump(RepFile.from_rep(rep))
