import json
import random

import pytest

from dialccs.dialgebra import bff_bisim_pr
from dialccs.gen import random_mealy
from dialccs.mealy import (
    INPUT_SHAPE, MealyFormatError, MealyMachine, mealy_bisim, mealy_to_dialgebra,
    parity_machine, table_filling,
)
from dialccs.partition import Partition


def test_empty_rows():
    m = MealyMachine(("s",), ("0", "1"), ("x",), {})
    d = mealy_to_dialgebra(m)
    assert d.n_states == 1 and d.transition_count() == 0
    assert [s.id for s in d.signature.shapes] == [INPUT_SHAPE]
    assert d.signature.shapes[0].params == ("0", "1")
    assert d.obs_alphabet == {"x"}


def test_parity_machine():
    m = parity_machine()
    assert m.is_deterministic()
    assert bff_bisim_pr(mealy_to_dialgebra(m)) == Partition([[0], [1]])
    assert not mealy_bisim(m, "even", "odd")
    assert mealy_bisim(m, "odd", "odd")


def test_disjoint_copies_pair_up():
    m = parity_machine()
    states = m.states + tuple(s + "'" for s in m.states)
    trans = dict(m.trans)
    for (i, s), results in m.trans.items():
        trans[(i, s + "'")] = {(o, t + "'") for o, t in results}
    double = MealyMachine(states, m.inputs, m.outputs, trans)
    assert bff_bisim_pr(mealy_to_dialgebra(double)) == Partition([[0, 2], [1, 3]])


def test_duplicated_row():
    m = MealyMachine(("s1", "s2", "t"), ("i",), ("o", "p"),
                     {("i", "s1"): {("o", "t")}, ("i", "s2"): {("o", "t")},
                      ("i", "t"): {("p", "t")}})
    assert mealy_bisim(m, "s1", "s2")
    assert not mealy_bisim(m, "s1", "t")


def test_unknown_state():
    with pytest.raises(KeyError):
        mealy_bisim(parity_machine(), "even", "nope")


def test_nondeterminism_counts():
    m = MealyMachine(("s", "t"), ("i",), ("o",), {("i", "s"): {("o", "s"), ("o", "t")}})
    assert not m.is_deterministic()
    assert m.transition_count() == mealy_to_dialgebra(m).transition_count() == 2
    with pytest.raises(ValueError):
        table_filling(m)


def test_table_filling_matches_on_random():
    rng = random.Random(17)
    for _ in range(300):
        m = random_mealy(rng, rng.randint(1, 6), deterministic=True)
        assert bff_bisim_pr(mealy_to_dialgebra(m)) == table_filling(m)


def test_json_round_trip(tmp_path):
    m = random_mealy(random.Random(2), 4)
    path = tmp_path / "m.json"
    path.write_text(json.dumps(m.to_json()))
    assert MealyMachine.load(path) == m


@pytest.mark.parametrize("data, location", [
    ([], "$"),
    ({"states": ["s"], "inputs": ["i"], "outputs": ["o"]}, "$"),
    ({"states": "s", "inputs": [], "outputs": [], "trans": []}, "$.states"),
    ({"states": ["s"], "inputs": ["i"], "outputs": ["o"],
      "trans": [{"in": "i", "state": "s", "out": [{"o": "o", "next": "u"}]}]}, "$.trans[0].out[0].next"),
    ({"states": ["s"], "inputs": ["i"], "outputs": ["o"],
      "trans": [{"in": "j", "state": "s", "out": []}]}, "$.trans[0].in"),
    ({"states": ["s"], "inputs": ["i"], "outputs": ["o"],
      "trans": [{"in": "i", "state": "s", "out": []}, {"in": "i", "state": "s", "out": []}]},
     "$.trans[1]"),
])
def test_malformed_descriptions(data, location):
    with pytest.raises(MealyFormatError) as exc:
        MealyMachine.from_json(data)
    assert exc.value.location == location


def test_bad_json_location(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"states": [\n  "s",,\n]}')
    with pytest.raises(MealyFormatError) as exc:
        MealyMachine.load(path)
    assert exc.value.location == f"{path}:2:7"


def test_constructor_validation():
    with pytest.raises(MealyFormatError):
        MealyMachine(("s", "s"), ("i",), ("o",), {})
    with pytest.raises(MealyFormatError):
        MealyMachine(("s",), ("i",), ("o",), {("i", "s"): {("q", "s")}})
