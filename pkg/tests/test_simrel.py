from __future__ import annotations

import pytest

from twoham.engine import combine
from twoham.errors import InputError
from twoham.lift import lift_system
from twoham.represent import RepresentationFunction
from twoham.simrel import (
    CLEAN_MAPPING,
    EQUIVALENT_PRODUCTIONS,
    FOLLOWS,
    STRONGLY_MODELS,
    VERIFIED,
    VIOLATED,
    WEAKLY_MODELS,
    SimulationChecker,
    check_clean_mapping_at_bound,
    check_follows,
    check_strongly_models,
    find_strong_failure,
)


def identity_checker(tas, bound):
    rep = RepresentationFunction.identity(tile.name for tile in tas.tiles)
    return SimulationChecker(tas, tas, rep, bound)


def test_system_simulates_itself(ladder2, domino):
    for tas, bound in ((ladder2.tas, 4), (domino, 2)):
        report = identity_checker(tas, bound).report("strong")
        assert report.ok, report.to_dict()
        assert report.simulator_bound == bound
        assert report.step_cap == 4


@pytest.mark.parametrize(
    ("fixture", "tau_prime", "bound"),
    [
        ("ladder2", 4, 6),
        ("ladder3", 6, 6),
        ("ladder2", 4, 12),
        pytest.param("ladder3", 6, 12, marks=pytest.mark.slow),
    ],
)
def test_lifted_ladder_strongly_simulates_original(request, fixture, tau_prime, bound):
    original = request.getfixturevalue(fixture).tas
    lifted = lift_system(original, tau_prime)
    report = SimulationChecker(lifted.lifted, original, lifted.representation, bound).report("strong")
    assert report.ok, report.to_dict()
    assert report.status(STRONGLY_MODELS).checked > 0
    assert report.status(WEAKLY_MODELS).ok


def test_wrong_representation_breaks_production_and_follows(domino):
    lifted = lift_system(domino, 4)
    rep = lifted.representation.with_entry([(0, 0, "X'")], "Y")
    checker = SimulationChecker(lifted.lifted, domino, rep, 2)
    equivalence = checker.equivalent_productions()
    assert equivalence.status == VIOLATED
    assert "image_not_producible" in {w.kind for w in equivalence.witnesses}
    follows = checker.follows()
    assert follows.status == VIOLATED
    assert {w.kind for w in follows.witnesses} == {"not_one_step"}
    assert check_follows(lifted.lifted, domino, rep, 2).violations == follows.violations


def test_terminal_supertile_without_terminal_preimage(domino, make_tas):
    simulator = make_tas(
        {
            "X'": {"east": ("a", 2)},
            "Y'": {"west": ("a", 2), "east": ("z", 2)},
            "Z'": {"west": ("z", 2)},
        },
        2,
        "domino-with-tail",
    )
    rep = RepresentationFunction.renaming({"X'": "X", "Y'": "Y"})
    status = SimulationChecker(simulator, domino, rep, 2).equivalent_productions()
    assert status.status == VIOLATED
    assert [w.kind for w in status.witnesses] == ["terminal_without_terminal_preimage"]
    assert status.witnesses[0].to_dict()["supertiles"] == [[[0, 0, "X"], [1, 0, "Y"]]]


def test_spread_out_unmapped_blocks_are_unclean(make_tas):
    chain = make_tas(
        {
            "a": {"east": ("g", 2)},
            "b": {"west": ("g", 2), "east": ("h", 2)},
            "c": {"west": ("h", 2)},
        },
        2,
    )
    assert check_clean_mapping_at_bound(chain, RepresentationFunction.identity(["a", "b", "c"]), 3).ok
    # three tiles in a row span two 2-blocks at every phase, none of them mapped
    status = check_clean_mapping_at_bound(chain, RepresentationFunction(2, ()), 1)
    assert status.status == VIOLATED
    assert {w.kind for w in status.witnesses} == {"unclean_mapping"}
    assert status.witnesses[0].supertiles[0].size == 3


def test_sim_ladder_standard_relations(sim34):
    checker = SimulationChecker(sim34.tas, sim34.simulated.tas, sim34.representation, 4)
    report = checker.report()
    assert report.ok, report.to_dict()
    assert report.simulator_bound == 16
    assert report.step_cap == 16
    assert [s.relation for s in report.relations] == [
        EQUIVALENT_PRODUCTIONS,
        FOLLOWS,
        WEAKLY_MODELS,
        CLEAN_MAPPING,
    ]


@pytest.mark.slow
def test_sim_ladder_standard_relations_at_desk_bound(sim34):
    report = SimulationChecker(sim34.tas, sim34.simulated.tas, sim34.representation, 6, workers=2).report()
    assert report.ok, report.to_dict()
    assert report.simulator_bound == 24


@pytest.mark.slow
def test_top_half_rule_loses_weak_modeling(sim34_top):
    checker = SimulationChecker(sim34_top.tas, sim34_top.simulated.tas, sim34_top.representation, 3, workers=2)
    status = checker.weakly_models()
    assert status.status == VIOLATED
    assert status.witnesses[0].kind == "no_simulating_step"


def test_half_ladders_defeat_strong_simulation(sim34):
    failure = find_strong_failure(sim34)
    assert failure is not None
    assert failure.confirmed
    assert failure.seam == 3
    assert failure.direct_results == 0
    payload = failure.to_dict()
    assert payload["left"]["rungs"] == ["B", "B", "B"]
    assert payload["right"]["rungs"] == ["A", "A", "A"]
    assert payload["seam_strength"] == 3
    ladder = sim34.simulated.tas
    assert combine(failure.left_image, failure.right_image, ladder.tiles, ladder.temperature)
    assert not combine(failure.left.supertile, failure.right.supertile, sim34.tas.tiles, sim34.tas.temperature)


def test_sim_ladder_is_not_a_strong_simulation(sim34):
    args = (sim34.tas, sim34.simulated.tas, sim34.representation, 2)
    status = check_strongly_models(*args)
    assert status.status == VIOLATED
    assert 0 < status.violations <= status.checked
    assert len(status.witnesses) == 10
    assert {w.kind for w in status.witnesses} == {"no_combining_preimages"}

    report = SimulationChecker(*args).report("strong")
    assert not report.ok
    assert report.status(STRONGLY_MODELS).violations == status.violations
    assert all(report.status(name).ok for name in (EQUIVALENT_PRODUCTIONS, FOLLOWS, WEAKLY_MODELS, CLEAN_MAPPING))


def test_report_serialization_and_arguments(domino):
    checker = identity_checker(domino, 2)
    payload = checker.report().to_dict()
    assert payload["ok"] is True
    assert payload["terminal_rule"] == "terminal-up-to-bound"
    assert set(payload["relations"]) == {EQUIVALENT_PRODUCTIONS, FOLLOWS, WEAKLY_MODELS, CLEAN_MAPPING}
    assert payload["relations"][FOLLOWS]["status"] == VERIFIED
    with pytest.raises(InputError, match="mode"):
        checker.report("weak")
    with pytest.raises(InputError):
        checker.run("bisimilar")
    with pytest.raises(InputError):
        SimulationChecker(domino, domino, checker.rep, 0)
    with pytest.raises(InputError):
        SimulationChecker(domino, domino, checker.rep, 2, step_cap=-1)
