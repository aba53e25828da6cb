#!/usr/bin/env python3
"""Uniform mappings between temperatures.

A uniform mapping M: {1..tau} -> {1..tau'} satisfies, for every multiset S over
{1..tau}: sum(M(x) for x in S) >= tau' iff sum(S) >= tau. Such a mapping exists
iff some integer c has c*(tau-1) < tau' <= c*tau, and then the almost-linear map
x -> c*x (x < tau), tau -> tau' is one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from twoham.errors import InputError

Table = Union[Mapping[int, int], Sequence[int]]


@dataclass(frozen=True)
class UniformMapping:
    tau: int
    tau_prime: int
    c: int
    table: Tuple[int, ...]

    def __call__(self, strength: int) -> int:
        if not 1 <= strength <= self.tau:
            raise InputError(f"strength {strength} outside 1..{self.tau}")
        return self.table[strength - 1]

    def as_dict(self) -> Dict[int, int]:
        return {x: value for x, value in enumerate(self.table, start=1)}


def _check_pair(tau: int, tau_prime: int) -> None:
    if not isinstance(tau, int) or not isinstance(tau_prime, int) or tau < 1:
        raise InputError(f"temperatures must be positive integers, got ({tau!r}, {tau_prime!r})")
    if tau > tau_prime:
        raise InputError(f"mappings only go upward: tau={tau} > tau'={tau_prime}")


def almost_linear(tau: int, tau_prime: int, c: int) -> UniformMapping:
    """The almost-linear candidate for multiplier c (not validated)."""
    table = tuple(c * x for x in range(1, tau)) + (tau_prime,)
    return UniformMapping(tau=tau, tau_prime=tau_prime, c=c, table=table)


def valid_multipliers(tau: int, tau_prime: int) -> range:
    """Every c with c*(tau-1) < tau' <= c*tau (for tau == 1, only the least such c)."""
    _check_pair(tau, tau_prime)
    low = -(-tau_prime // tau)
    if tau == 1:
        return range(low, low + 1)
    high = (tau_prime - 1) // (tau - 1)
    return range(low, max(low, high + 1))


def find_uniform_mapping(tau: int, tau_prime: int) -> Optional[UniformMapping]:
    """Return the almost-linear uniform mapping with c = ceil(tau'/tau), or None.

    tau' <= c*tau forces c >= ceil(tau'/tau) and c*(tau-1) < tau' only gets harder
    as c grows, so the smallest admissible c is the only one worth testing.
    """
    _check_pair(tau, tau_prime)
    c = -(-tau_prime // tau)
    if c * (tau - 1) < tau_prime <= c * tau:
        return almost_linear(tau, tau_prime, c)
    return None


def _normalize_table(table: Table, tau: int, tau_prime: int) -> Dict[int, int]:
    if isinstance(table, Mapping):
        values = dict(table)
    else:
        values = {x: v for x, v in enumerate(table, start=1)}
    if set(values) != set(range(1, tau + 1)):
        raise InputError(f"mapping must be total on 1..{tau}, got keys {sorted(values)}")
    for x, value in values.items():
        if not isinstance(value, int) or not 1 <= value <= tau_prime:
            raise InputError(f"M({x}) = {value!r} is outside 1..{tau_prime}")
    return values


def _cheapest_cover(
    gain: Dict[int, int], cost: Dict[int, int], target: int, track: bool
) -> Tuple[int, Tuple[int, ...]]:
    """Minimum total cost of a non-empty multiset whose total gain reaches `target`.

    Unbounded knapsack over capped gain. With `track`, ties keep the
    lexicographically smaller sorted multiset.
    """
    best: List[Optional[Tuple[int, Tuple[int, ...]]]] = [None] * (target + 1)
    best[0] = (0, ())
    items = sorted(gain)
    for progress in range(target):
        entry = best[progress]
        if entry is None:
            continue
        spent, chosen = entry
        for x in items:
            reach = min(target, progress + gain[x])
            if reach == progress:
                continue
            candidate = (spent + cost[x], tuple(sorted(chosen + (x,))) if track else ())
            current = best[reach]
            if current is None or candidate < current:
                best[reach] = candidate
    final = best[target]
    assert final is not None
    return final


def find_oracle_violation(table: Table, tau: int, tau_prime: int) -> Optional[Tuple[int, ...]]:
    """Return a multiset violating the threshold biconditional, or None.

    Completeness of the search space (multisets of cardinality < tau'): a
    multiset with sum >= tau but image sum < tau' has fewer than tau' elements
    because every image is >= 1; one with image sum >= tau' but sum < tau has
    fewer than tau elements because every element is >= 1. The cheapest-cover
    search below ranges over exactly those multisets.
    """
    _check_pair(tau, tau_prime)
    values = _normalize_table(table, tau, tau_prime)
    identity = {x: x for x in values}
    for gain, cost, target, limit in (
        (identity, values, tau, tau_prime),
        (values, identity, tau_prime, tau),
    ):
        spent, _ = _cheapest_cover(gain, cost, target, track=False)
        if spent < limit:
            return _cheapest_cover(gain, cost, target, track=True)[1]
    return None


def is_uniform_mapping_oracle(table: Table, tau: int, tau_prime: int) -> bool:
    return find_oracle_violation(table, tau, tau_prime) is None


def almost_linear_from(table: Table, tau: int, tau_prime: int) -> UniformMapping:
    """Rewrite a validated uniform mapping into almost-linear form with c = M(1)."""
    values = _normalize_table(table, tau, tau_prime)
    witness = find_oracle_violation(values, tau, tau_prime)
    if witness is not None:
        raise InputError(f"not a uniform mapping: multiset {list(witness)} breaks the threshold")
    mapping = almost_linear(tau, tau_prime, values[1])
    if find_oracle_violation(mapping.table, tau, tau_prime) is not None:
        raise RuntimeError(f"almost-linear rewrite with c={values[1]} failed the oracle")
    return mapping


def no_mapping_gaps(tau: int, limit: int) -> List[int]:
    """Every tau' in [tau, limit] without a uniform mapping."""
    if not isinstance(tau, int) or tau < 1:
        raise InputError(f"tau must be a positive integer, got {tau!r}")
    if not isinstance(limit, int) or limit < tau:
        raise InputError(f"limit must be at least tau={tau}, got {limit!r}")
    return [tau_prime for tau_prime in range(tau, limit + 1) if find_uniform_mapping(tau, tau_prime) is None]


def check_gap_implication(tau: int, tau_prime: int) -> bool:
    """(tau-1) * ceil(tau'/tau) >= tau' for a pair with no uniform mapping."""
    _check_pair(tau, tau_prime)
    if not 1 < tau < tau_prime:
        raise InputError(f"need 1 < tau < tau', got ({tau}, {tau_prime})")
    if find_uniform_mapping(tau, tau_prime) is not None:
        raise InputError(f"({tau}, {tau_prime}) has a uniform mapping")
    return (tau - 1) * -(-tau_prime // tau) >= tau_prime
