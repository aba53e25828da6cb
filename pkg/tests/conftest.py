"""Shared fixtures."""

from __future__ import annotations

from typing import Callable, Dict, Tuple

import pytest

from twoham.core import TAS, Glue, TileSet, TileType
from twoham.ladders import LadderSystem, SimLadderSystem, gen_ladder_system, gen_sim_ladder_system
from twoham.log import configure_logging


@pytest.fixture(autouse=True)
def _logging_to_current_stderr() -> None:
    # bind structlog to the stream pytest is capturing for this test
    configure_logging()


def _tile(name: str, **sides: Tuple[str, int]) -> TileType:
    return TileType(name=name, **{side: Glue(label, strength) for side, (label, strength) in sides.items()})


@pytest.fixture
def make_tas() -> Callable[..., TAS]:
    def build(tiles: Dict[str, Dict[str, Tuple[str, int]]], temperature: int, name: str = "test") -> TAS:
        return TAS(
            name=name,
            tiles=TileSet(_tile(tile_name, **sides) for tile_name, sides in tiles.items()),
            temperature=temperature,
        )

    return build


@pytest.fixture
def domino(make_tas: Callable[..., TAS]) -> TAS:
    """X and Y bind east-west at strength 2; nothing else binds."""
    return make_tas({"X": {"east": ("a", 2)}, "Y": {"west": ("a", 2)}}, 2, "domino")


@pytest.fixture(scope="session")
def ladder2() -> LadderSystem:
    return gen_ladder_system(2)


@pytest.fixture(scope="session")
def ladder3() -> LadderSystem:
    return gen_ladder_system(3)


@pytest.fixture(scope="session")
def sim34() -> SimLadderSystem:
    return gen_sim_ladder_system(3, 4)


@pytest.fixture(scope="session")
def sim34_top() -> SimLadderSystem:
    return gen_sim_ladder_system(3, 4, half_blocks="top")
