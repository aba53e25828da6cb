from __future__ import annotations

from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoham.errors import InputError, NoUniformMapping
from twoham.temps import (
    almost_linear,
    almost_linear_from,
    check_gap_implication,
    find_oracle_violation,
    find_uniform_mapping,
    is_uniform_mapping_oracle,
    no_mapping_gaps,
    valid_multipliers,
)


def brute_force_uniform(table, tau, tau_prime):
    """Every multiset over 1..tau of at most max(tau, tau') elements."""
    for size in range(1, max(tau, tau_prime) + 1):
        for multiset in combinations_with_replacement(range(1, tau + 1), size):
            if (sum(multiset) >= tau) != (sum(table[x - 1] for x in multiset) >= tau_prime):
                return False
    return True


def test_known_pairs():
    assert find_uniform_mapping(2, 4).as_dict() == {1: 2, 2: 4}
    assert find_uniform_mapping(3, 6).table == (2, 4, 6)
    assert find_uniform_mapping(2, 3).table == (2, 3)
    assert find_uniform_mapping(3, 4) is None
    assert find_uniform_mapping(5, 5).table == (1, 2, 3, 4, 5)


def test_mapping_call_checks_domain():
    mapping = find_uniform_mapping(2, 4)
    assert mapping(1) == 2
    with pytest.raises(InputError):
        mapping(3)


def test_downward_pairs_are_rejected():
    with pytest.raises(InputError):
        find_uniform_mapping(4, 3)
    with pytest.raises(InputError):
        find_uniform_mapping(0, 3)


def test_search_agrees_with_exhaustive_multipliers():
    for tau in range(1, 40):
        for tau_prime in range(tau + 1, 41):
            found = find_uniform_mapping(tau, tau_prime)
            # larger c push c*(tau-1) past tau', outside the codomain
            top = tau_prime // (tau - 1) if tau > 1 else 1
            exhaustive = [
                c
                for c in range(1, min(top, tau_prime) + 1)
                if is_uniform_mapping_oracle(almost_linear(tau, tau_prime, c).table, tau, tau_prime)
            ]
            assert (found is not None) == bool(exhaustive), (tau, tau_prime)
            if found is not None:
                assert is_uniform_mapping_oracle(found.table, tau, tau_prime)
                assert found.c in exhaustive


def test_gap_lists():
    assert no_mapping_gaps(3, 20) == [4]
    assert no_mapping_gaps(2, 30) == []
    for tau in range(2, 13):
        limit = (tau - 1) ** 2 + 3 * tau
        gaps = no_mapping_gaps(tau, limit)
        expected = [
            tp for tp in range(tau, limit + 1) if tau < tp < 2 * tau - 1 or not valid_multipliers(tau, tp)
        ]
        assert gaps == expected
        assert all(gap <= (tau - 1) ** 2 for gap in gaps)
        assert all(check_gap_implication(tau, gap) for gap in gaps)
    with pytest.raises(InputError, match="limit"):
        no_mapping_gaps(5, 4)


def test_gap_implication_needs_a_gap():
    with pytest.raises(InputError):
        check_gap_implication(2, 4)


def test_valid_multipliers_ranges():
    assert list(valid_multipliers(3, 6)) == [2]
    assert list(valid_multipliers(3, 4)) == []
    assert list(valid_multipliers(2, 4)) == [2, 3]


def test_oracle_witness_is_least_cheapest_multiset():
    assert find_oracle_violation({1: 1, 2: 2, 3: 4}, 3, 4) == (1, 1, 1)
    assert find_oracle_violation((2, 4), 2, 4) is None


def test_oracle_rejects_partial_tables():
    with pytest.raises(InputError):
        find_oracle_violation({1: 2}, 2, 4)
    with pytest.raises(InputError):
        find_oracle_violation({1: 2, 2: 9}, 2, 4)


@settings(max_examples=150, derandomize=True, deadline=None)
@given(st.integers(1, 4).flatmap(lambda tau: st.tuples(st.just(tau), st.integers(tau, 8))).flatmap(
    lambda pair: st.tuples(
        st.just(pair[0]),
        st.just(pair[1]),
        st.lists(st.integers(1, pair[1]), min_size=pair[0], max_size=pair[0]),
    )
))
def test_oracle_matches_brute_force(case):
    tau, tau_prime, table = case
    assert is_uniform_mapping_oracle(table, tau, tau_prime) == brute_force_uniform(table, tau, tau_prime)


def test_almost_linear_rewrite():
    assert almost_linear_from({1: 2, 2: 4}, 2, 4).c == 2
    rewritten = almost_linear_from((3, 7, 9), 3, 9)
    assert rewritten.table == (3, 6, 9)
    with pytest.raises(InputError, match="not a uniform mapping"):
        almost_linear_from({1: 1, 2: 2, 3: 4}, 3, 4)


def test_refusal_names_the_gap():
    error = NoUniformMapping(3, 4)
    assert (error.tau, error.tau_prime) == (3, 4)
    assert "3 < 4 < 5" in str(error)
    assert "no integer c" in str(NoUniformMapping(4, 9))
