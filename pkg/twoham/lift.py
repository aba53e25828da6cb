#!/usr/bin/env python3
"""Rewrite a temperature-tau system into one at tau' through a uniform mapping.

Every glue strength s becomes M(s); tiles are renamed with a fixed suffix and
the scale-1 representation function undoes the renaming.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Set, Tuple

from twoham.core import TAS, Assembly, Glue, InitialSupertile, Supertile, TileSet, TileType
from twoham.engine import ProducibleSet, enumerate_producibles
from twoham.errors import InputError, NoUniformMapping
from twoham.log import get_logger
from twoham.represent import RepresentationFunction
from twoham.temps import UniformMapping, find_uniform_mapping

log = get_logger(__name__)

LIFT_SUFFIX = "'"

StepKey = Tuple[Supertile, Supertile, Supertile, Tuple[int, int], Tuple[int, int]]


def lift_strength(mapping: UniformMapping, strength: int) -> int:
    """M(s), with 0 kept at 0 and strengths above tau treated as tau."""
    if strength == 0:
        return 0
    return mapping(min(strength, mapping.tau))


def _lift_glue(mapping: UniformMapping, glue: Optional[Glue]) -> Optional[Glue]:
    if glue is None:
        return None
    return Glue(glue.label, lift_strength(mapping, glue.strength))


def _lift_tile(mapping: UniformMapping, tile: TileType) -> TileType:
    return TileType(
        name=tile.name + LIFT_SUFFIX,
        north=_lift_glue(mapping, tile.north),
        east=_lift_glue(mapping, tile.east),
        south=_lift_glue(mapping, tile.south),
        west=_lift_glue(mapping, tile.west),
    )


def rename_supertile(s: Supertile, names: Mapping[str, str]) -> Supertile:
    return Supertile(Assembly(tuple(sorted((x, y, names[n]) for x, y, n in s.canonical.cells))))


@dataclass(frozen=True)
class LiftedSystem:
    original: TAS
    lifted: TAS
    mapping: UniformMapping
    representation: RepresentationFunction

    @property
    def names(self) -> Dict[str, str]:
        """Lifted tile name -> original tile name."""
        return {pattern[0][2]: target for pattern, target in self.representation.entries}


def lift_system(sys: TAS, tau_prime: int) -> LiftedSystem:
    mapping = find_uniform_mapping(sys.temperature, tau_prime)
    if mapping is None:
        log.warning("lift_refused", system=sys.name, tau=sys.temperature, tau_prime=tau_prime)
        raise NoUniformMapping(sys.temperature, tau_prime)
    tiles = TileSet(_lift_tile(mapping, tile) for tile in sys.tiles)
    forward = {tile.name: tile.name + LIFT_SUFFIX for tile in sys.tiles}
    initial = tuple(
        InitialSupertile(rename_supertile(entry.supertile, forward), entry.count)
        for entry in sys.initial_state
    )
    lifted = TAS(name=f"{sys.name}{LIFT_SUFFIX}", tiles=tiles, temperature=tau_prime, initial_state=initial)
    representation = RepresentationFunction.renaming({dst: src for src, dst in forward.items()})
    log.info("lift_built", system=sys.name, tau=sys.temperature, tau_prime=tau_prime, multiplier=mapping.c)
    return LiftedSystem(original=sys, lifted=lifted, mapping=mapping, representation=representation)


@dataclass(frozen=True)
class LiftDiscrepancy:
    kind: str
    supertiles: Tuple[Supertile, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "supertiles": [s.to_rows() for s in self.supertiles]}


@dataclass(frozen=True)
class LiftReport:
    bound: int
    original_count: int
    lifted_count: int
    steps_checked: int
    discrepancies: Tuple[LiftDiscrepancy, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bound": self.bound,
            "original_producibles": self.original_count,
            "lifted_producibles": self.lifted_count,
            "steps_checked": self.steps_checked,
            "ok": self.ok,
            "discrepancies": [d.to_dict() for d in self.discrepancies],
        }


def _step_keys(prods: ProducibleSet, names: Optional[Mapping[str, str]] = None) -> Set[StepKey]:
    keys: Set[StepKey] = set()
    for step in prods.steps:
        left, right, result = step.left, step.right, step.result
        if names is not None:
            left, right, result = (rename_supertile(s, names) for s in (left, right, result))
        keys.add((left, right, result, step.left_shift, step.right_shift))
    return keys


def _ordered(items: Set[Any], key: Any) -> List[Any]:
    return sorted(items, key=key)


def verify_lift(ls: LiftedSystem, max_size: int, *, workers: int = 1) -> LiftReport:
    """Compare producibles and combination steps of both systems up to `max_size` tiles.

    At scale 1 the representation is a renaming, so strong modeling amounts to
    the renamed step relation coinciding with the original one.
    """
    if not isinstance(max_size, int) or max_size < 1:
        raise InputError(f"size bound must be a positive integer, got {max_size!r}")
    names = ls.names
    original = enumerate_producibles(ls.original, max_size, workers=workers)
    lifted = enumerate_producibles(ls.lifted, max_size, workers=workers)

    discrepancies: List[LiftDiscrepancy] = []
    images = {rename_supertile(s, names) for s in lifted}
    members = set(original)
    for s in _ordered(members - images, key=lambda s: s.key):
        discrepancies.append(LiftDiscrepancy("missing_in_lift", (s,)))
    for s in _ordered(images - members, key=lambda s: s.key):
        discrepancies.append(LiftDiscrepancy("extra_in_lift", (s,)))

    expected = _step_keys(original)
    observed = _step_keys(lifted, names)
    step_order = lambda k: (k[0].key, k[1].key, k[2].key, k[3], k[4])  # noqa: E731
    for key in _ordered(expected - observed, key=step_order):
        discrepancies.append(LiftDiscrepancy("step_missing_in_lift", key[:3]))
    for key in _ordered(observed - expected, key=step_order):
        discrepancies.append(LiftDiscrepancy("step_extra_in_lift", key[:3]))

    report = LiftReport(
        bound=max_size,
        original_count=len(original),
        lifted_count=len(lifted),
        steps_checked=len(expected | observed),
        discrepancies=tuple(discrepancies),
    )
    log.info("lift_verified", bound=max_size, ok=report.ok, discrepancies=len(discrepancies))
    return report
