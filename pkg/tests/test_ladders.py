from __future__ import annotations

import pytest

from twoham.core import Assembly, Glue, canonicalize, is_stable, singleton
from twoham.engine import combine, enumerate_producibles, verify_sequence
from twoham.errors import InputError
from twoham.ladders import (
    CORNERS,
    LEFT,
    RIGHT,
    HalfLadderSpec,
    SimHalfLadderSpec,
    build_half_ladder,
    build_sim_half_ladder,
    find_mate,
    find_seam_mismatch,
    gen_ladder_system,
    gen_sim_ladder_system,
    half_ladder_sequence,
    mirror_spec,
    rung_seam_strength,
    special_base_blocks,
)
from twoham.represent import represent_supertile


def block(key: str):
    return canonicalize({pos: f"{key}.{corner}" for corner, pos in CORNERS.items()})


def test_ladder_tile_set(ladder3):
    tiles = ladder3.tas.tiles
    assert len(tiles) == 9
    assert {glue.strength for tile in tiles for _, glue in tile.glues()} == {1, 3}
    assert tiles["A0"].east == Glue("0", 1)
    assert tiles["B0"].west == Glue("0", 1)
    assert ladder3.roles["A0"] == "rung-tip-A0"
    assert ladder3.tas.has_default_initial_state()


def test_ladder_rejects_low_temperature():
    with pytest.raises(InputError):
        gen_ladder_system(1)


def test_rung_is_stable(ladder3):
    rung = Assembly.from_cells([(0, 0, "A2"), (1, 0, "A1"), (2, 0, "A0")])
    assert is_stable(rung, ladder3.tas.tiles, 3)


@pytest.mark.parametrize("tau", [2, 3, 5])
def test_backbone_tiles_alternate(tau):
    tiles = gen_ladder_system(tau).tas.tiles
    for name in ("A2", "A3", "B2", "B3"):
        assert not combine(singleton(name), singleton(name), tiles, tau), name
    assert combine(singleton("A2"), singleton("A3"), tiles, tau)
    assert combine(singleton("B3"), singleton("B2"), tiles, tau)


def test_half_ladder_shapes(ladder3):
    left = build_half_ladder(ladder3, HalfLadderSpec(LEFT, 3, (0, 1, 2)))
    assert left.size == 11
    assert {name for _, _, name in left.canonical.cells} == {"A2", "A3", "A1", "A0"}
    assert build_half_ladder(ladder3, HalfLadderSpec(RIGHT, 1)) == singleton("B2")
    assert half_ladder_sequence(ladder3, HalfLadderSpec(RIGHT, 1)) == ()


def test_half_ladder_spec_validation():
    with pytest.raises(InputError):
        HalfLadderSpec("up", 2)
    with pytest.raises(InputError):
        HalfLadderSpec(LEFT, 0)
    with pytest.raises(InputError, match="strictly increasing"):
        HalfLadderSpec(LEFT, 3, (1, 1))
    with pytest.raises(InputError, match="outside"):
        HalfLadderSpec(LEFT, 2, (2,))
    assert mirror_spec(HalfLadderSpec(LEFT, 2, (1,))) == HalfLadderSpec(RIGHT, 2, (1,))


@pytest.mark.parametrize("tau", [3, 4])
def test_half_ladders_combine_once_tau_rungs_align(tau):
    ladder = gen_ladder_system(tau)
    for rungs in range(1, tau + 2):
        rows = tuple(range(rungs))
        left = build_half_ladder(ladder, HalfLadderSpec(LEFT, rungs + 1, rows))
        right = build_half_ladder(ladder, HalfLadderSpec(RIGHT, rungs + 1, rows))
        outcome = combine(left, right, ladder.tas.tiles, tau)
        assert bool(outcome) == (rungs >= tau), rungs
        if outcome:
            assert max(a.seam_strength for a in outcome.attachments) == rungs


def test_sim_ladder_glues_at_3_4(sim34):
    tiles = sim34.tas.tiles
    assert len(tiles) == 160
    assert tiles["BU-A2.nw"].north == Glue("BU:1/a", 2)
    assert tiles["BU-A2.ne"].north == Glue("BU:1/b", 2)
    assert tiles["BU-A2.nw"].east == Glue("BU-A2/n", 4)
    assert tiles["BU-A2.nw"].south == Glue("BU-A2/w", 2)
    assert tiles["BS-A2.nw"].north == Glue("BU:1/a", 2)
    assert tiles["BS-A2.sw"].south == Glue("BD:2/a", 2)
    assert tiles["BS-A2.ne"].east == Glue("BS:3/a", 2)
    assert tiles["B-A0.ne"].east == Glue("rung:B", 1)
    assert tiles["B-A0.se"].east == Glue("H", 1)
    assert tiles["BS-A0.ne"].east == Glue("rung:A", 1)
    assert tiles["AS-B0.nw"].west == Glue("rung:C", 1)
    assert sim34.family["DU-B2.se"].family == "D"
    assert sim34.family["CS-A2.nw"].marker == "special"


def test_sim_ladder_glues_at_2_5():
    sls = gen_sim_ladder_system(2, 5)
    tiles = sls.tas.tiles
    assert tiles["AU-B2.nw"].north == Glue("AU:5/a", 3)
    assert tiles["AU-B2.ne"].north == Glue("AU:5/b", 2)
    assert tiles["AU-B2.ne"].south == Glue("AU-B2/e", 2)
    assert tiles["A-B0.nw"].west == Glue("rung:A", 3)
    assert tiles["DS-B0.nw"].west == Glue("rung:B", 3)


def test_sim_ladder_argument_checks():
    with pytest.raises(InputError):
        gen_sim_ladder_system(1, 4)
    with pytest.raises(InputError):
        gen_sim_ladder_system(3, 3)
    with pytest.raises(InputError, match="half_blocks"):
        gen_sim_ladder_system(3, 4, half_blocks="bottom")


def test_rung_seam_strength():
    assert rung_seam_strength("B", ["B", "B", "B"], "A", ["A", "A", "A"], 3, 4) == 3
    assert rung_seam_strength("B", ["B", "B", "B"], "D", ["B", "D", "D"], 3, 4) == 4
    assert rung_seam_strength("C", ["C", "D"], "D", ["D", "D"], 2, 5) == 5
    with pytest.raises(InputError):
        rung_seam_strength("A", [], "B", [], 3, 4)
    with pytest.raises(InputError, match="length"):
        rung_seam_strength("B", ["B"], "A", [], 3, 4)


def test_sim_half_ladder_spec_checks():
    with pytest.raises(InputError, match="special rung"):
        SimHalfLadderSpec("B", 2, (0,), special=1)
    with pytest.raises(InputError):
        SimHalfLadderSpec("B", 2, (0,), backbone="S")
    assert SimHalfLadderSpec("A", 3, (0, 2), special=2).rung_types() == ["A", "C"]


@pytest.mark.parametrize(
    ("family", "side", "special"),
    [("B", LEFT, 1), ("C", LEFT, None), ("A", RIGHT, 0), ("D", RIGHT, None)],
)
def test_sim_half_ladders_assemble_and_represent(sim34, ladder3, family, side, special):
    spec = SimHalfLadderSpec(family, 2, (0, 1), special=special)
    built = build_sim_half_ladder(sim34, spec)
    assert verify_sequence(sim34.tas, built.steps) == built.supertile
    assert built.supertile.size == 4 * 7
    image = represent_supertile(sim34.representation, built.supertile)
    assert image.clean
    assert image.image == build_half_ladder(ladder3, HalfLadderSpec(side, 2, (0, 1)))
    assert special_base_blocks(sim34, built.supertile) == (0 if special is None else 1)


def test_engine_seam_matches_prediction(sim34):
    left = build_sim_half_ladder(sim34, SimHalfLadderSpec("B", 3, (0, 1, 2))).supertile
    mate = build_sim_half_ladder(sim34, SimHalfLadderSpec("D", 3, (0, 1, 2), special=0)).supertile
    plain = build_sim_half_ladder(sim34, SimHalfLadderSpec("A", 3, (0, 1, 2))).supertile
    joined = combine(left, mate, sim34.tas.tiles, 4)
    assert joined
    assert max(a.seam_strength for a in joined.attachments) == 4
    assert not combine(left, plain, sim34.tas.tiles, 4)


def test_find_mate_uses_a_special_rung(sim34):
    mate = find_mate(sim34, SimHalfLadderSpec("B", 3, (0, 1, 2)))
    assert mate is not None
    assert (mate.spec.family, mate.spec.special, mate.seam) == ("D", 0, 4)


def test_find_seam_mismatch(sim34):
    mismatch = find_seam_mismatch(sim34)
    assert mismatch is not None
    assert mismatch.left.rung_types() == ["B", "B", "B"]
    assert mismatch.right.rung_types() == ["A", "A", "A"]
    assert mismatch.seam == 3


def test_special_base_only_sits_between_up_and_down_sets(sim34):
    tiles = sim34.tas.tiles
    assert combine(block("BU-A3"), block("BS-A2"), tiles, 4)
    # a special base only ever sits above a D spacer, never below one
    joined = combine(block("BD-A3"), block("BS-A2"), tiles, 4)
    assert joined
    for result in joined.results:
        spacer = [y for _, y, name in result.canonical.cells if name.startswith("BD-A3")]
        special = [y for _, y, name in result.canonical.cells if name.startswith("BS-A2")]
        assert max(spacer) < min(special)


def test_no_single_tile_binds_to_a_full_block(sim34):
    tiles = sim34.tas.tiles
    for key in ("BU-A2", "AS-B2", "C-A0", "D-B1"):
        for tile in tiles:
            assert not combine(block(key), singleton(tile.name), tiles, 4), (key, tile.name)


@pytest.mark.slow
def test_producibles_hold_at_most_one_special_base(sim34):
    def small_image(s):
        return represent_supertile(sim34.representation, s).size <= 6

    prods = enumerate_producibles(sim34.tas, 24, keep=small_image, workers=2)
    counts = [special_base_blocks(sim34, s) for s in prods]
    assert max(counts) == 1
    # room for two special bases with a rung on each
    assert max(represent_supertile(sim34.representation, s).size for s in prods) == 6
