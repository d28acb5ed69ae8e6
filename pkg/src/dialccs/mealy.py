"""Non-deterministic Mealy machines as dialgebras for ``F X = I x X``."""
from __future__ import annotations

import json
from dataclasses import dataclass

from .dialgebra import FiniteDialgebra, Shape, bff_bisim_pr
from .partition import Partition

INPUT_SHAPE = "in"


class MealyFormatError(ValueError):
    """A machine description is malformed; ``location`` points at the culprit."""

    def __init__(self, location, message):
        self.location = location
        super().__init__(f"{location}: {message}")


@dataclass(frozen=True)
class MealyMachine:
    states: tuple
    inputs: tuple
    outputs: tuple
    trans: dict  # (input, state) -> frozenset of (output, next_state)

    def __post_init__(self):
        for field_name in ("states", "inputs", "outputs"):
            values = tuple(getattr(self, field_name))
            if len(set(values)) != len(values):
                raise MealyFormatError(field_name, "duplicate entries")
            object.__setattr__(self, field_name, values)
        states, inputs, outputs = set(self.states), set(self.inputs), set(self.outputs)
        table = {}
        for (i, s), results in self.trans.items():
            if i not in inputs:
                raise MealyFormatError("trans", f"unknown input {i!r}")
            if s not in states:
                raise MealyFormatError("trans", f"unknown state {s!r}")
            results = frozenset(results)
            for o, nxt in results:
                if o not in outputs:
                    raise MealyFormatError("trans", f"unknown output {o!r}")
                if nxt not in states:
                    raise MealyFormatError("trans", f"unknown state {nxt!r}")
            table[(i, s)] = results
        for i in self.inputs:
            for s in self.states:
                table.setdefault((i, s), frozenset())
        object.__setattr__(self, "trans", table)

    def is_deterministic(self):
        return all(len(r) == 1 for r in self.trans.values())

    def transition_count(self):
        return sum(len(r) for r in self.trans.values())

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict):
            raise MealyFormatError("$", "expected an object")
        lists = {}
        for key in ("states", "inputs", "outputs", "trans"):
            if key not in data:
                raise MealyFormatError("$", f"missing key {key!r}")
            if not isinstance(data[key], list):
                raise MealyFormatError(f"$.{key}", "expected a list")
            lists[key] = data[key]
        for key in ("states", "inputs", "outputs"):
            for j, v in enumerate(lists[key]):
                if not isinstance(v, str):
                    raise MealyFormatError(f"$.{key}[{j}]", "expected a string")
        known = {k: set(lists[k]) for k in ("states", "inputs", "outputs")}
        trans = {}
        for j, entry in enumerate(lists["trans"]):
            where = f"$.trans[{j}]"
            if not isinstance(entry, dict):
                raise MealyFormatError(where, "expected an object")
            for key, pool in (("in", "inputs"), ("state", "states")):
                if entry.get(key) not in known[pool]:
                    raise MealyFormatError(f"{where}.{key}", f"unknown {pool[:-1]} {entry.get(key)!r}")
            outs = entry.get("out")
            if not isinstance(outs, list):
                raise MealyFormatError(f"{where}.out", "expected a list")
            results = set()
            for k, o in enumerate(outs):
                owhere = f"{where}.out[{k}]"
                if not isinstance(o, dict):
                    raise MealyFormatError(owhere, "expected an object")
                if o.get("o") not in known["outputs"]:
                    raise MealyFormatError(f"{owhere}.o", f"unknown output {o.get('o')!r}")
                if o.get("next") not in known["states"]:
                    raise MealyFormatError(f"{owhere}.next", f"unknown state {o.get('next')!r}")
                results.add((o["o"], o["next"]))
            key = (entry["in"], entry["state"])
            if key in trans:
                raise MealyFormatError(where, f"duplicate row for input {key[0]!r}, state {key[1]!r}")
            trans[key] = results
        return cls(tuple(lists["states"]), tuple(lists["inputs"]), tuple(lists["outputs"]), trans)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MealyFormatError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
        return cls.from_json(data)

    def to_json(self):
        return {
            "states": list(self.states),
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "trans": [{"in": i, "state": s,
                       "out": [{"o": o, "next": n} for o, n in sorted(self.trans[(i, s)])]}
                      for i in self.inputs for s in self.states],
        }


def mealy_to_dialgebra(m: MealyMachine) -> FiniteDialgebra:
    index = {s: k for k, s in enumerate(m.states)}
    trans = {(INPUT_SHAPE, i, index[s]): [(o, index[n]) for o, n in results]
             for (i, s), results in m.trans.items()}
    return FiniteDialgebra(m.states, [Shape(INPUT_SHAPE, m.inputs)], m.outputs, trans)


def mealy_bisim(m: MealyMachine, s1, s2) -> bool:
    for s in (s1, s2):
        if s not in m.states:
            raise KeyError(f"unknown state {s!r}")
    d = mealy_to_dialgebra(m)
    return bff_bisim_pr(d).same(m.states.index(s1), m.states.index(s2))


def table_filling(m: MealyMachine) -> Partition:
    """Classical state equivalence of a deterministic machine.

    Marks pairs that differ on some output, then pairs with a marked pair of
    successors, until no new pair is marked.
    """
    if not m.is_deterministic():
        raise ValueError("table filling needs a deterministic machine")
    n = len(m.states)
    index = {s: k for k, s in enumerate(m.states)}
    out = {}
    nxt = {}
    for (i, s), results in m.trans.items():
        (o, t), = results
        out[(i, index[s])] = o
        nxt[(i, index[s])] = index[t]
    marked = [[False] * n for _ in range(n)]
    for p in range(n):
        for q in range(n):
            if any(out[(i, p)] != out[(i, q)] for i in m.inputs):
                marked[p][q] = True
    changed = True
    while changed:
        changed = False
        for p in range(n):
            for q in range(n):
                if not marked[p][q] and any(marked[nxt[(i, p)]][nxt[(i, q)]] for i in m.inputs):
                    marked[p][q] = True
                    changed = True
    return Partition.from_keys([tuple(marked[p]) for p in range(n)])


def parity_machine() -> MealyMachine:
    """Two states tracking the parity of the inputs seen; each step emits it."""
    return MealyMachine(
        ("even", "odd"), ("0", "1"), ("0", "1"),
        {("0", "even"): {("0", "even")}, ("1", "even"): {("1", "odd")},
         ("0", "odd"): {("1", "odd")}, ("1", "odd"): {("0", "even")}})
