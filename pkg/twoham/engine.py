#!/usr/bin/env python3
"""Two-handed combination, bounded producible enumeration and assembly sequences."""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from twoham.core import (
    OFFSETS,
    OPPOSITE,
    SIDES,
    TAS,
    Assembly,
    Coord,
    Supertile,
    TileSet,
    canonicalize,
    is_stable,
)
from twoham.errors import InputError, SequenceError
from twoham.log import get_logger

log = get_logger(__name__)

GlueKey = Tuple[str, str]


@dataclass(frozen=True)
class Contact:
    """One interacting glue pair across a seam: a's tile at a_pos, b's tile at b_pos."""

    label: str
    strength: int
    a_pos: Coord
    b_pos: Coord


@dataclass(frozen=True)
class Attachment:
    result: Supertile
    offset: Coord
    contacts: Tuple[Contact, ...]
    a_shift: Coord
    b_shift: Coord

    @property
    def seam_strength(self) -> int:
        return sum(contact.strength for contact in self.contacts)


@dataclass(frozen=True)
class CombinationResult:
    results: FrozenSet[Supertile]
    attachments: Tuple[Attachment, ...]

    def __bool__(self) -> bool:
        return bool(self.results)

    def __contains__(self, item: object) -> bool:
        return item in self.results


@dataclass(frozen=True)
class Step:
    """left + right -> result; shifts move each operand's canonical cells into result's frame."""

    left: Supertile
    right: Supertile
    result: Supertile
    left_shift: Coord = (0, 0)
    right_shift: Coord = (0, 0)


@lru_cache(maxsize=1 << 16)
def _exposed(supertile: Supertile, tiles: TileSet) -> Dict[GlueKey, Tuple[Coord, ...]]:
    """Positive glues of a supertile facing an empty neighbour, keyed by (side, label)."""
    placements = supertile.canonical.placements
    index: Dict[GlueKey, List[Coord]] = defaultdict(list)
    for (x, y), name in placements.items():
        for side, (label, _) in tiles.bonds(name).items():
            dx, dy = OFFSETS[side]
            if (x + dx, y + dy) not in placements:
                index[(side, label)].append((x, y))
    return {key: tuple(sorted(positions)) for key, positions in index.items()}


@lru_cache(maxsize=1 << 16)
def _wanted(supertile: Supertile, tiles: TileSet) -> FrozenSet[GlueKey]:
    return frozenset((OPPOSITE[side], label) for side, label in _exposed(supertile, tiles))


@lru_cache(maxsize=1 << 16)
def _stable(supertile: Supertile, tiles: TileSet, tau: int) -> bool:
    return is_stable(supertile.canonical, tiles, tau)


def may_interact(a: Supertile, b: Supertile, tiles: TileSet) -> bool:
    """Cheap necessary condition for C(a, b) to be non-empty."""
    exposed_b = _exposed(b, tiles)
    return any(key in exposed_b for key in _wanted(a, tiles))


def seam_contacts(
    a: Supertile, b: Supertile, offset: Coord, tiles: TileSet
) -> Optional[Tuple[Contact, ...]]:
    """Interacting contacts when b is translated by `offset`; None if the domains overlap."""
    a_cells = a.canonical.placements
    ox, oy = offset
    contacts: List[Contact] = []
    for (bx, by), b_name in b.canonical.placements.items():
        x, y = bx + ox, by + oy
        if (x, y) in a_cells:
            return None
        b_bonds = tiles.bonds(b_name)
        for side, (label, strength) in b_bonds.items():
            dx, dy = OFFSETS[side]
            neighbour = (x + dx, y + dy)
            a_name = a_cells.get(neighbour)
            if a_name is None:
                continue
            facing = tiles.bonds(a_name).get(OPPOSITE[side])
            if facing is not None and facing[0] == label:
                contacts.append(Contact(label, strength, neighbour, (bx, by)))
    contacts.sort(key=lambda c: (c.a_pos, c.b_pos))
    return tuple(contacts)


def _candidate_offsets(a: Supertile, b: Supertile, tiles: TileSet) -> List[Coord]:
    exposed_b = _exposed(b, tiles)
    offsets: Set[Coord] = set()
    for (side, label), positions in _exposed(a, tiles).items():
        matches = exposed_b.get((OPPOSITE[side], label))
        if not matches:
            continue
        dx, dy = OFFSETS[side]
        for ax, ay in positions:
            for bx, by in matches:
                offsets.add((ax + dx - bx, ay + dy - by))
    return sorted(offsets)


def _union(a: Supertile, b: Supertile, offset: Coord) -> Tuple[Supertile, Coord, Coord]:
    ox, oy = offset
    cells = list(a.canonical.cells)
    cells.extend((x + ox, y + oy, name) for x, y, name in b.canonical.cells)
    min_x = min(x for x, _, _ in cells)
    min_y = min(y for _, y, _ in cells)
    shifted = tuple(sorted((x - min_x, y - min_y, name) for x, y, name in cells))
    return Supertile(Assembly(shifted)), (-min_x, -min_y), (ox - min_x, oy - min_y)


def combine(
    a: Supertile, b: Supertile, tiles: TileSet, tau: int, *, assume_stable: bool = False
) -> CombinationResult:
    """All tau-stable supertiles obtained by translating b next to a without overlap.

    When both operands are tau-stable, the union is stable iff the seam weighs at
    least tau: any other cut splits an operand and already weighs tau or more.
    """
    for supertile in (a, b):
        for name in supertile.canonical.tile_names():
            tiles.bonds(name)
    operands_stable = assume_stable or (_stable(a, tiles, tau) and _stable(b, tiles, tau))
    attachments: List[Attachment] = []
    for offset in _candidate_offsets(a, b, tiles):
        contacts = seam_contacts(a, b, offset, tiles)
        if not contacts:
            continue
        if sum(contact.strength for contact in contacts) < tau and operands_stable:
            continue
        result, a_shift, b_shift = _union(a, b, offset)
        if not operands_stable and not is_stable(result.canonical, tiles, tau):
            continue
        attachments.append(Attachment(result, offset, contacts, a_shift, b_shift))
    return CombinationResult(
        results=frozenset(att.result for att in attachments),
        attachments=tuple(attachments),
    )


@dataclass
class ProducibleSet:
    """Producible supertiles of a system up to `bound` tiles, with witnesses and steps."""

    bound: int
    supertiles: Tuple[Supertile, ...]
    witnesses: Dict[Supertile, Optional[Tuple[Supertile, Supertile]]]
    steps: Tuple[Step, ...] = ()
    _members: FrozenSet[Supertile] = field(default=frozenset(), repr=False)
    _successors: Optional[Dict[Supertile, Tuple[Step, ...]]] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self._members = frozenset(self.supertiles)

    def __contains__(self, item: object) -> bool:
        return item in self._members

    def __iter__(self) -> Iterator[Supertile]:
        return iter(self.supertiles)

    def __len__(self) -> int:
        return len(self.supertiles)

    def successors(self, supertile: Supertile) -> Tuple[Step, ...]:
        """Steps whose left operand is `supertile`."""
        if self._successors is None:
            grouped: Dict[Supertile, List[Step]] = defaultdict(list)
            for step in self.steps:
                grouped[step.left].append(step)
            self._successors = {key: tuple(value) for key, value in grouped.items()}
        return self._successors.get(supertile, ())


def _pair_steps(
    x: Supertile, y: Supertile, tiles: TileSet, tau: int
) -> List[Tuple[Supertile, Supertile, Attachment]]:
    return [(x, y, att) for att in combine(x, y, tiles, tau, assume_stable=True).attachments]


def enumerate_producibles(
    sys: TAS,
    max_size: int,
    *,
    keep: Optional[Callable[[Supertile], bool]] = None,
    workers: int = 1,
) -> ProducibleSet:
    """Least fixed point of pairwise combination restricted to results of <= max_size tiles.

    `keep` prunes results (never initial supertiles); pruned results are neither
    members nor recorded in steps.
    """
    if not isinstance(max_size, int) or max_size < 1:
        raise InputError(f"size bound must be a positive integer, got {max_size!r}")
    initial = sorted(set(sys.initial_supertiles), key=lambda s: s.key)
    if not initial:
        raise InputError(f"system {sys.name!r} has no initial supertiles")
    largest = max(s.size for s in initial)
    if max_size < largest:
        raise InputError(f"size bound {max_size} is smaller than an initial supertile ({largest} tiles)")

    tiles, tau = sys.tiles, sys.temperature
    witnesses: Dict[Supertile, Optional[Tuple[Supertile, Supertile]]] = {s: None for s in initial}
    queue: List[Supertile] = list(initial)
    processed: List[Supertile] = []
    by_exposed: Dict[GlueKey, List[int]] = defaultdict(list)
    steps: List[Step] = []
    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        head = 0
        while head < len(queue):
            current = queue[head]
            head += 1
            index = len(processed)
            processed.append(current)
            for key in _exposed(current, tiles):
                by_exposed[key].append(index)
            room = max_size - current.size
            partners: Set[int] = set()
            for key in _wanted(current, tiles):
                partners.update(by_exposed.get(key, ()))
            candidates = [processed[i] for i in sorted(partners) if processed[i].size <= room]
            if executor is not None:
                batches = executor.map(lambda other: _pair_steps(current, other, tiles, tau), candidates)
            else:
                batches = (_pair_steps(current, other, tiles, tau) for other in candidates)
            fresh: List[Supertile] = []
            for batch in batches:
                for left, right, att in batch:
                    result = att.result
                    if result not in witnesses:
                        if keep is not None and not keep(result):
                            continue
                        witnesses[result] = (left, right)
                        fresh.append(result)
                    steps.append(Step(left, right, result, att.a_shift, att.b_shift))
                    if left != right:
                        steps.append(Step(right, left, result, att.b_shift, att.a_shift))
            fresh.sort(key=lambda s: s.key)
            queue.extend(fresh)
            if fresh:
                log.debug("enumeration_progress", members=len(witnesses), processed=len(processed))
    finally:
        if executor is not None:
            executor.shutdown()

    ordered = tuple(sorted(witnesses, key=lambda s: s.key))
    log.info("enumeration_done", system=sys.name, bound=max_size, members=len(ordered), steps=len(steps))
    return ProducibleSet(bound=max_size, supertiles=ordered, witnesses=witnesses, steps=tuple(steps))


def is_terminal(s: Supertile, prods: ProducibleSet, sys: TAS) -> bool:
    """Terminal up to the bound of `prods`: s combines with no member of prods."""
    if s not in prods:
        raise InputError("supertile is not a member of the producible set")
    if prods.successors(s):
        return False
    for other in prods:
        if not may_interact(s, other, sys.tiles):
            continue
        if combine(s, other, sys.tiles, sys.temperature, assume_stable=True).results:
            return False
    return True


def terminal_supertiles(prods: ProducibleSet, sys: TAS) -> Tuple[Supertile, ...]:
    """Every terminal-up-to-bound member of `prods`."""
    tiles, tau = sys.tiles, sys.temperature
    members = prods.supertiles
    by_exposed: Dict[GlueKey, List[int]] = defaultdict(list)
    for index, member in enumerate(members):
        for key in _exposed(member, tiles):
            by_exposed[key].append(index)
    terminal: List[Supertile] = []
    for s in members:
        if prods.successors(s):
            continue
        partners: Set[int] = set()
        for key in _wanted(s, tiles):
            partners.update(by_exposed.get(key, ()))
        if any(combine(s, members[i], tiles, tau, assume_stable=True).results for i in sorted(partners)):
            continue
        terminal.append(s)
    return tuple(terminal)


def verify_sequence(sys: TAS, steps: Sequence[Step]) -> Supertile:
    """Replay an assembly sequence and return its final supertile."""
    if not steps:
        raise SequenceError("empty assembly sequence")
    available: Set[Supertile] = set(sys.initial_supertiles)
    for number, step in enumerate(steps):
        for operand in (step.left, step.right):
            if operand not in available:
                raise SequenceError("operand is neither initial nor an earlier result", number)
        outcome = combine(step.left, step.right, sys.tiles, sys.temperature)
        if step.result not in outcome.results:
            raise SequenceError("result is not in the combination set of its operands", number)
        available.add(step.result)
    return steps[-1].result


class SequenceBuilder:
    """Record an assembly sequence while joining positioned pieces."""

    def __init__(self) -> None:
        self.steps: List[Step] = []

    def join(self, left: Dict[Coord, str], right: Dict[Coord, str]) -> Dict[Coord, str]:
        union = dict(left)
        for pos, name in right.items():
            if pos in union:
                raise InputError(f"pieces overlap at {pos}")
            union[pos] = name
        ux = min(x for x, _ in union)
        uy = min(y for _, y in union)
        self.steps.append(
            Step(
                left=canonicalize(left),
                right=canonicalize(right),
                result=canonicalize(union),
                left_shift=(min(x for x, _ in left) - ux, min(y for _, y in left) - uy),
                right_shift=(min(x for x, _ in right) - ux, min(y for _, y in right) - uy),
            )
        )
        return union
