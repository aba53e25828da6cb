#!/usr/bin/env python3
"""Bounded checks of the simulation relations between a simulator and a simulated system.

All checks work on producibles up to a simulated bound N. The simulator side is
enumerated up to N*m^2 tiles and pruned to supertiles whose image has at most N
tiles. Reachability ("grow a'' from a' while the image stays put") follows
recorded combination steps up to `step_cap` steps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Set, Tuple

from twoham.core import TAS, Supertile, canonicalize
from twoham.engine import (
    ProducibleSet,
    combine,
    enumerate_producibles,
    may_interact,
    seam_contacts,
    terminal_supertiles,
    verify_sequence,
)
from twoham.errors import InputError
from twoham.ladders import SeamMismatch, SimHalfLadder, SimLadderSystem, build_sim_half_ladder, find_seam_mismatch
from twoham.log import get_logger
from twoham.represent import RepresentationFunction, SupertileImage, apply_rep, represent_supertile

log = get_logger(__name__)

VERIFIED = "verified-at-bound"
VIOLATED = "violated"

EQUIVALENT_PRODUCTIONS = "equivalent_productions"
FOLLOWS = "follows"
WEAKLY_MODELS = "weakly_models"
STRONGLY_MODELS = "strongly_models"
CLEAN_MAPPING = "clean_mapping"

MODES: Dict[str, Tuple[str, ...]] = {
    "standard": (EQUIVALENT_PRODUCTIONS, FOLLOWS, WEAKLY_MODELS, CLEAN_MAPPING),
    "strong": (EQUIVALENT_PRODUCTIONS, FOLLOWS, WEAKLY_MODELS, STRONGLY_MODELS, CLEAN_MAPPING),
}

MAX_WITNESSES = 10


def _rows(supertiles: Tuple[Supertile, ...]) -> List[Any]:
    return [s.to_rows() for s in supertiles]


@dataclass(frozen=True)
class Witness:
    kind: str
    supertiles: Tuple[Supertile, ...]
    detail: Tuple[Tuple[str, Any], ...] = ()

    @property
    def sort_key(self) -> Tuple[Any, ...]:
        return (self.kind, tuple(s.key for s in self.supertiles), self.detail)

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"kind": self.kind, "supertiles": _rows(self.supertiles)}
        payload.update({name: value for name, value in self.detail})
        return payload


@dataclass(frozen=True)
class RelationStatus:
    relation: str
    status: str
    checked: int
    violations: int = 0
    witnesses: Tuple[Witness, ...] = ()

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "checked": self.checked,
            "violations": self.violations,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


@dataclass(frozen=True)
class SimCheckReport:
    bound: int
    simulator_bound: int
    step_cap: int
    relations: Tuple[RelationStatus, ...]
    terminal_rule: str = "terminal-up-to-bound"

    @property
    def ok(self) -> bool:
        return all(status.ok for status in self.relations)

    def status(self, relation: str) -> RelationStatus:
        for status in self.relations:
            if status.relation == relation:
                return status
        raise KeyError(relation)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bound": self.bound,
            "simulator_bound": self.simulator_bound,
            "step_cap": self.step_cap,
            "terminal_rule": self.terminal_rule,
            "ok": self.ok,
            "relations": {status.relation: status.to_dict() for status in self.relations},
        }


class _Collector:
    def __init__(self, relation: str, limit: int) -> None:
        self.relation = relation
        self.limit = limit
        self.checked = 0
        self.found: List[Witness] = []

    def add(self, kind: str, *supertiles: Supertile, **detail: Any) -> None:
        self.found.append(Witness(kind, tuple(supertiles), tuple(sorted(detail.items()))))

    def status(self) -> RelationStatus:
        ordered = sorted(self.found, key=lambda w: w.sort_key)
        result = RelationStatus(
            relation=self.relation,
            status=VIOLATED if ordered else VERIFIED,
            checked=self.checked,
            violations=len(ordered),
            witnesses=tuple(ordered[: self.limit]),
        )
        log.info("relation_checked", relation=self.relation, status=result.status, witnesses=len(ordered))
        return result


class SimulationChecker:
    """Bounded simulation checks of `simulated` by `simulator` under `rep`."""

    def __init__(
        self,
        simulator: TAS,
        simulated: TAS,
        rep: RepresentationFunction,
        max_size: int,
        *,
        step_cap: Optional[int] = None,
        workers: int = 1,
        max_witnesses: int = MAX_WITNESSES,
    ) -> None:
        if not isinstance(max_size, int) or max_size < 1:
            raise InputError(f"size bound must be a positive integer, got {max_size!r}")
        if step_cap is not None and step_cap < 0:
            raise InputError(f"step cap must be >= 0, got {step_cap}")
        self.simulator = simulator
        self.simulated = simulated
        self.rep = rep
        self.max_size = max_size
        self.simulator_bound = max_size * rep.scale * rep.scale
        self.step_cap = 4 * rep.scale * rep.scale if step_cap is None else step_cap
        self.workers = workers
        self.max_witnesses = max_witnesses
        self._reach: Dict[Supertile, Tuple[Supertile, ...]] = {}
        self._partners: Dict[Supertile, Dict[Supertile, FrozenSet[Supertile]]] = {}

    def image(self, s: Supertile) -> SupertileImage:
        return represent_supertile(self.rep, s)

    def _image_size(self, s: Supertile) -> int:
        return len(self.image(s).block_image.assembly)

    @cached_property
    def pool(self) -> ProducibleSet:
        limit = self.max_size
        return enumerate_producibles(
            self.simulator,
            self.simulator_bound,
            keep=lambda s: self._image_size(s) <= limit,
            workers=self.workers,
        )

    @cached_property
    def target(self) -> ProducibleSet:
        return enumerate_producibles(self.simulated, self.max_size, workers=self.workers)

    @cached_property
    def preimages(self) -> Dict[Supertile, Tuple[Supertile, ...]]:
        grouped: Dict[Supertile, List[Supertile]] = {}
        for s in self.pool:
            image = self.image(s).image
            if image is not None:
                grouped.setdefault(image, []).append(s)
        return {image: tuple(members) for image, members in grouped.items()}

    def _target_steps(self) -> List[Tuple[Supertile, Supertile, Supertile]]:
        triples = {(step.left, step.right, step.result) for step in self.target.steps}
        return sorted(triples, key=lambda t: (t[0].key, t[1].key, t[2].key))

    def reach(self, start: Supertile) -> Tuple[Supertile, ...]:
        """Pool members reachable from `start` by steps that leave its image unchanged."""
        cached = self._reach.get(start)
        if cached is not None:
            return cached
        image = self.image(start).image
        seen: Set[Supertile] = {start}
        frontier = deque([(start, 0)])
        while frontier:
            current, depth = frontier.popleft()
            if depth >= self.step_cap:
                continue
            for step in self.pool.successors(current):
                if step.result in seen or self.image(step.result).image != image:
                    continue
                seen.add(step.result)
                frontier.append((step.result, depth + 1))
        result = tuple(sorted(seen, key=lambda s: s.key))
        self._reach[start] = result
        return result

    def _reach_partners(self, start: Supertile) -> Dict[Supertile, FrozenSet[Supertile]]:
        """Result image -> right operands usable from some member of reach(start)."""
        cached = self._partners.get(start)
        if cached is not None:
            return cached
        grouped: Dict[Supertile, Set[Supertile]] = {}
        for node in self.reach(start):
            for step in self.pool.successors(node):
                image = self.image(step.result).image
                if image is not None:
                    grouped.setdefault(image, set()).add(step.right)
        result = {image: frozenset(rights) for image, rights in grouped.items()}
        self._partners[start] = result
        return result

    def equivalent_productions(self) -> RelationStatus:
        out = _Collector(EQUIVALENT_PRODUCTIONS, self.max_witnesses)
        for s in self.pool:
            out.checked += 1
            image = self.image(s)
            if not image.clean:
                out.add("unclean_mapping", s, block=list(image.block_image.offending[0]))
            elif image.image is not None and image.image not in self.target:
                out.add("image_not_producible", s, image.image)
        for t in self.target:
            out.checked += 1
            if t not in self.preimages:
                out.add("no_preimage", t)

        simulator_terminal = terminal_supertiles(self.pool, self.simulator)
        simulated_terminal = set(terminal_supertiles(self.target, self.simulated))
        terminal_images = set()
        for s in simulator_terminal:
            image = self.image(s).image
            if image is None:
                continue
            terminal_images.add(image)
            if image not in simulated_terminal:
                out.add("terminal_maps_to_non_terminal", s, image)
        for t in sorted(simulated_terminal - terminal_images, key=lambda s: s.key):
            out.add("terminal_without_terminal_preimage", t)
        return out.status()

    def follows(self) -> RelationStatus:
        out = _Collector(FOLLOWS, self.max_witnesses)
        seen: Set[Tuple[Supertile, Supertile, Tuple[int, int]]] = set()
        tiles, tau = self.simulated.tiles, self.simulated.temperature
        for step in self.pool.steps:
            marker = (step.left, step.result, step.left_shift)
            if marker in seen:
                continue
            seen.add(marker)
            before, after = self.image(step.left), self.image(step.result)
            if not before.clean or not after.clean:
                continue
            out.checked += 1
            if before.image is None:
                if after.image is not None and after.image not in self.target:
                    out.add("result_not_producible", step.left, step.result)
                continue
            aligned = apply_rep(
                self.rep, step.left.canonical.translate(*step.left_shift), offset=after.offset
            )
            if not aligned.clean:
                out.add("grid_phase_changed", step.left, step.result)
                continue
            old, new = aligned.assembly.placements, after.block_image.assembly.placements
            if old == new:
                continue
            if any(new.get(pos) != name for pos, name in old.items()):
                out.add("image_not_preserved", step.left, step.result)
                continue
            added = canonicalize({pos: name for pos, name in new.items() if pos not in old})
            if added not in self.target:
                out.add("difference_not_producible", step.left, step.result, added)
                continue
            if after.image not in combine(canonicalize(aligned.assembly), added, tiles, tau).results:
                out.add("not_one_step", step.left, step.result)
        return out.status()

    def weakly_models(self) -> RelationStatus:
        out = _Collector(WEAKLY_MODELS, self.max_witnesses)
        pairs = sorted({(a, c) for a, _, c in self._target_steps()}, key=lambda p: (p[0].key, p[1].key))
        for a, c in pairs:
            for a_pre in self.preimages.get(a, ()):
                out.checked += 1
                if c not in self._reach_partners(a_pre):
                    out.add("no_simulating_step", a, c, a_pre)
        return out.status()

    def strongly_models(self) -> RelationStatus:
        """Every pair of preimages of a step's operands must grow into a combining pair.

        Witnesses list the least failing pairs inside the bound. For the scale-2
        ladder simulator these are half blocks whose rung families disagree, well
        before any half-ladder fits; `find_strong_failure` builds the half-ladder
        pair whose aligned seam stays below the simulator temperature.
        """
        out = _Collector(STRONGLY_MODELS, self.max_witnesses)
        for a, b, c in self._target_steps():
            for a_pre in self.preimages.get(a, ()):
                rights = self._reach_partners(a_pre).get(c, frozenset())
                for b_pre in self.preimages.get(b, ()):
                    out.checked += 1
                    if rights.isdisjoint(self.reach(b_pre)):
                        out.add("no_combining_preimages", a, b, c, a_pre, b_pre)
        return out.status()

    def clean_mapping(self) -> RelationStatus:
        out = _Collector(CLEAN_MAPPING, self.max_witnesses)
        for s in self.pool:
            out.checked += 1
            image = self.image(s)
            if not image.clean:
                out.add(
                    "unclean_mapping",
                    s,
                    offset=list(image.offset),
                    block=list(image.block_image.offending[0]),
                )
        return out.status()

    def run(self, relation: str) -> RelationStatus:
        checks: Dict[str, Callable[[], RelationStatus]] = {
            EQUIVALENT_PRODUCTIONS: self.equivalent_productions,
            FOLLOWS: self.follows,
            WEAKLY_MODELS: self.weakly_models,
            STRONGLY_MODELS: self.strongly_models,
            CLEAN_MAPPING: self.clean_mapping,
        }
        if relation not in checks:
            raise InputError(f"unknown relation {relation!r}")
        return checks[relation]()

    def report(self, mode: str = "standard") -> SimCheckReport:
        if mode not in MODES:
            raise InputError(f"mode must be one of {sorted(MODES)}, got {mode!r}")
        log.info(
            "simulation_check_started",
            simulator=self.simulator.name,
            simulated=self.simulated.name,
            bound=self.max_size,
            mode=mode,
        )
        return SimCheckReport(
            bound=self.max_size,
            simulator_bound=self.simulator_bound,
            step_cap=self.step_cap,
            relations=tuple(self.run(relation) for relation in MODES[mode]),
        )


def check_equivalent_productions(sim: TAS, simd: TAS, rep: RepresentationFunction, max_size: int) -> RelationStatus:
    return SimulationChecker(sim, simd, rep, max_size).equivalent_productions()


def check_follows(sim: TAS, simd: TAS, rep: RepresentationFunction, max_size: int) -> RelationStatus:
    return SimulationChecker(sim, simd, rep, max_size).follows()


def check_weakly_models(sim: TAS, simd: TAS, rep: RepresentationFunction, max_size: int) -> RelationStatus:
    return SimulationChecker(sim, simd, rep, max_size).weakly_models()


def check_strongly_models(sim: TAS, simd: TAS, rep: RepresentationFunction, max_size: int) -> RelationStatus:
    return SimulationChecker(sim, simd, rep, max_size).strongly_models()


def check_clean_mapping_at_bound(sim: TAS, rep: RepresentationFunction, max_size: int) -> RelationStatus:
    """Clean-mapping check over every bounded simulator producible."""
    return SimulationChecker(sim, sim, rep, max_size).clean_mapping()


# --- targeted strong-failure search ------------------------------------------


@dataclass(frozen=True)
class ProbeResult:
    found: bool
    explored_left: int
    explored_right: int
    left: Optional[Supertile] = None
    right: Optional[Supertile] = None
    result: Optional[Supertile] = None


class StrongPairProbe:
    """Grow two simulator preimages (image unchanged) and look for a pair combining into `target`.

    Growth combines with members of `pool`, by default every simulator
    producible of at most one block's worth of tiles.
    """

    def __init__(
        self,
        simulator: TAS,
        rep: RepresentationFunction,
        *,
        pool: Optional[ProducibleSet] = None,
        step_cap: Optional[int] = None,
        node_cap: int = 256,
    ) -> None:
        self.simulator = simulator
        self.rep = rep
        self.pool = pool if pool is not None else enumerate_producibles(simulator, rep.scale * rep.scale)
        self.step_cap = 4 * rep.scale * rep.scale if step_cap is None else step_cap
        self.node_cap = node_cap

    def _image(self, s: Supertile) -> Optional[Supertile]:
        return represent_supertile(self.rep, s).image

    def grow(self, start: Supertile) -> Tuple[Supertile, ...]:
        tiles, tau = self.simulator.tiles, self.simulator.temperature
        image = self._image(start)
        seen: Set[Supertile] = {start}
        frontier = deque([(start, 0)])
        while frontier and len(seen) < self.node_cap:
            current, depth = frontier.popleft()
            if depth >= self.step_cap:
                continue
            for other in self.pool:
                if not may_interact(current, other, tiles):
                    continue
                for result in sorted(combine(current, other, tiles, tau).results, key=lambda s: s.key):
                    if result not in seen and self._image(result) == image:
                        seen.add(result)
                        frontier.append((result, depth + 1))
        return tuple(sorted(seen, key=lambda s: s.key))

    def probe(self, left: Supertile, right: Supertile, target: Supertile) -> ProbeResult:
        tiles, tau = self.simulator.tiles, self.simulator.temperature
        lefts, rights = self.grow(left), self.grow(right)
        for u in lefts:
            for v in rights:
                if not may_interact(u, v, tiles):
                    continue
                for result in sorted(combine(u, v, tiles, tau).results, key=lambda s: s.key):
                    if self._image(result) == target:
                        return ProbeResult(True, len(lefts), len(rights), u, v, result)
        return ProbeResult(False, len(lefts), len(rights))


@dataclass(frozen=True)
class StrongFailure:
    mismatch: SeamMismatch
    left: SimHalfLadder
    right: SimHalfLadder
    left_image: Supertile
    right_image: Supertile
    target: Supertile
    seam: int
    direct_results: int
    probe: ProbeResult = field(repr=False)

    @property
    def confirmed(self) -> bool:
        return self.direct_results == 0 and not self.probe.found

    def to_dict(self) -> Dict[str, Any]:
        left, right = self.mismatch.left, self.mismatch.right
        return {
            "confirmed": self.confirmed,
            "left": {"family": left.family, "height": left.height, "rungs": left.rung_types()},
            "right": {"family": right.family, "height": right.height, "rungs": right.rung_types()},
            "seam_strength": self.seam,
            "images_combine": True,
            "simulator_combinations": self.direct_results,
            "grown_left": self.probe.explored_left,
            "grown_right": self.probe.explored_right,
            "target": self.target.to_rows(),
        }


def _aligned_seam(sls: SimLadderSystem, left: Supertile, right: Supertile) -> int:
    """Seam strength with the right half-ladder's tips one block east of the left's tips."""
    left_tip = max(x for x, _, _ in left.canonical.cells)
    contacts = seam_contacts(left, right, (left_tip + 1, 0), sls.tas.tiles)
    return 0 if contacts is None else sum(contact.strength for contact in contacts)


def find_strong_failure(sls: SimLadderSystem, *, step_cap: Optional[int] = None) -> Optional[StrongFailure]:
    """Two producible opposite half-ladders whose images combine while no growth of them does."""
    mismatch = find_seam_mismatch(sls)
    if mismatch is None:
        return None
    left = build_sim_half_ladder(sls, mismatch.left)
    right = build_sim_half_ladder(sls, mismatch.right)
    verify_sequence(sls.tas, left.steps)
    verify_sequence(sls.tas, right.steps)

    left_image = represent_supertile(sls.representation, left.supertile).image
    right_image = represent_supertile(sls.representation, right.supertile).image
    if left_image is None or right_image is None:
        raise RuntimeError("half-ladder image is undefined")
    ladder = sls.simulated.tas
    targets = combine(left_image, right_image, ladder.tiles, ladder.temperature).results
    if not targets:
        raise RuntimeError("half-ladder images do not combine in the simulated system")
    target = min(targets, key=lambda s: s.key)

    direct = combine(left.supertile, right.supertile, sls.tas.tiles, sls.tas.temperature)
    probe = StrongPairProbe(sls.tas, sls.representation, step_cap=step_cap).probe(
        left.supertile, right.supertile, target
    )
    failure = StrongFailure(
        mismatch=mismatch,
        left=left,
        right=right,
        left_image=left_image,
        right_image=right_image,
        target=target,
        seam=_aligned_seam(sls, left.supertile, right.supertile),
        direct_results=len(direct.results),
        probe=probe,
    )
    log.info(
        "strong_failure_probed",
        left=mismatch.left.rung_types(),
        right=mismatch.right.rung_types(),
        seam=failure.seam,
        confirmed=failure.confirmed,
    )
    return failure
