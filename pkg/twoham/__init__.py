"""Two-handed tile assembly: producibles, temperature lifts, ladder simulators and
bounded simulation checks."""

from twoham.core import TAS, Assembly, Glue, Supertile, TileSet, TileType, canonicalize, is_stable
from twoham.engine import combine, enumerate_producibles
from twoham.errors import InputError, NoUniformMapping, SequenceError, TwohamError

__all__ = [
    "TAS",
    "Assembly",
    "Glue",
    "InputError",
    "NoUniformMapping",
    "SequenceError",
    "Supertile",
    "TileSet",
    "TileType",
    "TwohamError",
    "canonicalize",
    "combine",
    "enumerate_producibles",
    "is_stable",
]
