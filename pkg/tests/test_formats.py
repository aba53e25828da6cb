from __future__ import annotations

import json

import pytest

from twoham.core import TAS, Assembly, InitialSupertile, canonicalize, singleton
from twoham.errors import InputError
from twoham.formats import RepFile, SystemFile, dump_rep, dump_system, load_rep, load_system, parse_model, to_json

DOMINO_FILE = {
    "name": "domino",
    "temperature": 2,
    "tiles": [
        {"name": "X", "east": {"label": "a", "strength": 2}},
        {"name": "Y", "west": {"label": "a", "strength": 2}},
    ],
}


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
    return path


def test_load_system_defaults_to_infinite_singletons(tmp_path, domino):
    tas = load_system(write(tmp_path, "domino.json", DOMINO_FILE))
    assert tas == domino
    assert tas.has_default_initial_state()


def test_system_files_survive_a_dump(tmp_path, domino, sim34):
    for system in (domino, sim34.tas):
        text = dump_system(system)
        assert "initial_state" not in json.loads(text)
        assert load_system(write(tmp_path, "copy.json", text)) == system


def test_initial_state_with_counts(tmp_path, domino):
    pair = canonicalize(Assembly.from_cells([(0, 0, "X"), (1, 0, "Y")]))
    seeded = TAS("seeded", domino.tiles, 2, (InitialSupertile(pair, 5), InitialSupertile(singleton("X"))))
    payload = json.loads(dump_system(seeded))
    assert payload["initial_state"][0]["count"] == 5
    assert payload["initial_state"][1]["count"] == "inf"
    assert load_system(write(tmp_path, "seeded.json", payload)).initial_state == seeded.initial_state


@pytest.mark.parametrize(
    ("change", "message"),
    [
        ({"temperature": 0}, "temperature"),
        ({"tiles": []}, "tiles"),
        ({"colour": "red"}, "colour"),
        ({"tiles": DOMINO_FILE["tiles"] * 2}, "duplicate tile name"),
        (
            {
                "tiles": [
                    {"name": "X", "east": {"label": "a", "strength": 2}},
                    {"name": "Y", "west": {"label": "a", "strength": 1}},
                ]
            },
            "strengths 2 and 1",
        ),
        ({"initial_state": [{"assembly": [{"x": 0, "y": 0, "tile": "Q"}]}]}, "unknown tile 'Q'"),
        ({"initial_state": [{"assembly": [{"x": 0, "y": 0, "tile": "X"}], "count": 0}]}, "count"),
        (
            {"initial_state": [{"assembly": [{"x": 0, "y": 0, "tile": "X"}, {"x": 0, "y": 0, "tile": "Y"}]}]},
            "two tiles in one cell",
        ),
    ],
)
def test_invalid_systems_name_the_problem(tmp_path, change, message):
    path = write(tmp_path, "bad.json", {**DOMINO_FILE, **change})
    with pytest.raises(InputError, match=message) as info:
        load_system(path)
    assert str(path) in str(info.value)


def test_unstable_initial_supertile_is_rejected(tmp_path):
    loose = [{"x": 0, "y": 0, "tile": "Y"}, {"x": 1, "y": 0, "tile": "X"}]
    payload = {**DOMINO_FILE, "initial_state": [{"assembly": loose}]}
    with pytest.raises(InputError, match="not 2-stable"):
        load_system(write(tmp_path, "loose.json", payload))


def test_malformed_and_missing_files(tmp_path):
    with pytest.raises(InputError, match="<document>"):
        load_system(write(tmp_path, "broken.json", "{not json"))
    with pytest.raises(InputError, match="cannot read"):
        load_system(tmp_path / "absent.json")


def test_rep_files(tmp_path, sim34):
    rep = load_rep(write(tmp_path, "rep.json", dump_rep(sim34.representation)))
    assert rep == sim34.representation
    bad = {"scale": 2, "entries": [{"pattern": [{"dx": 2, "dy": 0, "tile": "a"}], "maps_to": "T"}]}
    with pytest.raises(InputError, match="outside a 2-block"):
        load_rep(write(tmp_path, "bad.json", bad))
    twice = {"scale": 1, "entries": [{"pattern": [{"dx": 0, "dy": 0, "tile": "a"}], "maps_to": t} for t in "TU"]}
    with pytest.raises(InputError, match="duplicate pattern"):
        load_rep(write(tmp_path, "twice.json", twice))


def test_parse_model_labels_the_source():
    with pytest.raises(InputError, match="^stdin: scale"):
        parse_model(RepFile, '{"scale": 0}', "stdin")
    assert parse_model(SystemFile, json.dumps(DOMINO_FILE)).name == "domino"


def test_to_json_is_stable():
    assert to_json({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
