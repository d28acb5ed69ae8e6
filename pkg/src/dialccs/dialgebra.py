"""Finite dialgebras ``f : F X -> P_fin(O x X)`` for unary interaction functors.

The interaction functor is a finite sum ``F X = sum_i (A_i x X)``: an
experiment picks a shape ``i``, a parameter ``a`` in ``A_i`` and a single
state. The identity summand ``X`` is the shape whose only parameter is
:data:`UNIT`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

from .lts import LtsGraph
from .partition import Partition, signature_refinement

UNIT = "·"


class SignatureMismatch(ValueError):
    pass


class QuotientError(ValueError):
    """The partition does not induce a well-defined quotient dialgebra."""

    def __init__(self, x, y, experiment):
        self.pair = (x, y)
        self.experiment = experiment
        shape, param = experiment
        super().__init__(
            f"states {x} and {y} share a block but their lifted rows differ "
            f"on experiment ({shape}, {param})")


@dataclass(frozen=True)
class Shape:
    id: str
    params: tuple

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if len(set(self.params)) != len(self.params):
            raise ValueError(f"shape {self.id!r} has repeated parameters")


class InteractionSignature:
    """An ordered list of shapes, each with an ordered parameter set."""

    def __init__(self, shapes):
        self.shapes = tuple(s if isinstance(s, Shape) else Shape(*s) for s in shapes)
        ids = [s.id for s in self.shapes]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate shape ids in {ids}")
        self.keys = tuple((s.id, a) for s in self.shapes for a in s.params)
        self._key_index = {k: i for i, k in enumerate(self.keys)}

    def key_index(self, shape_id, param):
        try:
            return self._key_index[(shape_id, param)]
        except KeyError:
            raise KeyError(f"no experiment ({shape_id}, {param!r}) in signature") from None

    def __eq__(self, other):
        return isinstance(other, InteractionSignature) and self.shapes == other.shapes

    def __hash__(self):
        return hash(self.shapes)

    def __repr__(self):
        return f"InteractionSignature({list(self.shapes)!r})"


@dataclass(frozen=True)
class Experiment:
    shape_id: str
    param: object
    state: int


class ExperimentLabel(NamedTuple):
    """Label of the induced LTS: which experiment, and what was observed."""
    shape_id: str
    param: object
    obs: object

    def __str__(self):
        return f"{self.shape_id}[{self.param}]/{self.obs}"


class FiniteDialgebra:
    """A dialgebra over states ``0 .. n-1``, each carrying a payload.

    ``trans`` maps ``(shape_id, param, state)`` to an iterable of
    ``(obs, next_state)``. Experiments absent from the mapping have an empty
    result, so the structure is always total.
    """

    def __init__(self, states, signature, obs_alphabet, trans):
        self.states = tuple(states)
        self.signature = (signature if isinstance(signature, InteractionSignature)
                          else InteractionSignature(signature))
        self.obs_alphabet = frozenset(obs_alphabet)
        n = len(self.states)
        empty = frozenset()
        rows = [[empty] * len(self.signature.keys) for _ in range(n)]
        for (shape_id, param, x), results in trans.items():
            k = self.signature.key_index(shape_id, param)
            if not 0 <= x < n:
                raise ValueError(f"experiment state {x} out of range")
            row = frozenset(results)
            for obs, nxt in row:
                if obs not in self.obs_alphabet:
                    raise ValueError(f"observation {obs!r} not in the alphabet")
                if not 0 <= nxt < n:
                    raise ValueError(f"successor {nxt} out of range")
            rows[x][k] = row
        self.rows = tuple(tuple(r) for r in rows)
        self._index = None

    @property
    def n_states(self):
        return len(self.states)

    def __len__(self):
        return len(self.states)

    def row(self, shape_id, param, x):
        return self.rows[x][self.signature.key_index(shape_id, param)]

    def __call__(self, e: Experiment):
        return self.row(e.shape_id, e.param, e.state)

    def experiments(self):
        for x in range(self.n_states):
            for shape_id, param in self.signature.keys:
                yield Experiment(shape_id, param, x)

    def index_of(self, payload):
        if self._index is None:
            self._index = {}
            for i, s in enumerate(self.states):
                self._index.setdefault(s, i)
        return self._index[payload]

    def transition_count(self):
        return sum(len(r) for row in self.rows for r in row)

    def to_json(self):
        trans = []
        for x in range(self.n_states):
            for k, (shape_id, param) in enumerate(self.signature.keys):
                out = sorted(({"obs": str(o), "next": y} for o, y in self.rows[x][k]),
                             key=lambda e: (e["obs"], e["next"]))
                trans.append({"shape": shape_id, "param": str(param), "state": x, "out": out})
        return {
            "states": [str(s) for s in self.states],
            "shapes": [{"id": s.id, "params": [str(a) for a in s.params]}
                       for s in self.signature.shapes],
            "obs": sorted(str(o) for o in self.obs_alphabet),
            "trans": trans,
        }

    @classmethod
    def from_json(cls, data):
        """Inverse of :meth:`to_json`; payloads, params and labels stay strings."""
        shapes = [Shape(s["id"], tuple(s["params"])) for s in data["shapes"]]
        trans = {}
        for entry in data["trans"]:
            key = (entry["shape"], entry["param"], entry["state"])
            trans[key] = [(o["obs"], o["next"]) for o in entry["out"]]
        return cls(data["states"], shapes, data["obs"], trans)

    def dumps(self, fmt):
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"
        graph = induced_lts(self)
        if fmt == "dot":
            return graph.to_dot("dialgebra")
        return graph.to_text()


class StateMap:
    """A total map between the state sets of two dialgebras."""

    def __init__(self, domain, codomain, mapping):
        self.domain = domain
        self.codomain = codomain
        self.mapping = tuple(mapping)
        if len(self.mapping) != domain.n_states:
            raise ValueError("state map is not total on the domain")
        if any(not 0 <= y < codomain.n_states for y in self.mapping):
            raise ValueError("state map leaves the codomain")

    def __call__(self, x):
        return self.mapping[x]


def induced_lts(d: FiniteDialgebra) -> LtsGraph:
    """Curry experiments into labels: ``x --(s, a, o)--> x'`` per result."""
    transitions = []
    for x in range(d.n_states):
        for k, (shape_id, param) in enumerate(d.signature.keys):
            for obs, nxt in sorted(d.rows[x][k], key=lambda r: (str(r[0]), r[1])):
                transitions.append((x, ExperimentLabel(shape_id, param, obs), nxt))
    return LtsGraph(d.states, transitions)


# -- back-and-forth bisimilarity --------------------------------------------

def _simulates(d, rel, x, y):
    for rx, ry in zip(d.rows[x], d.rows[y]):
        for o, x2 in rx:
            if not any(o2 == o and (x2, y2) in rel for o2, y2 in ry):
                return False
    return True


def bff_bisim_relation(d: FiniteDialgebra) -> set:
    """Largest back-and-forth bisimulation, as a set of ordered pairs.

    Greatest-fixpoint iteration from the total relation: every round drops
    the pairs whose rows cannot be matched inside the current relation.
    """
    n = d.n_states
    rel = {(x, y) for x in range(n) for y in range(n)}
    while True:
        kept = {(x, y) for x, y in rel if _simulates(d, rel, x, y) and _simulates(d, rel, y, x)}
        if kept == rel:
            return rel
        rel = kept


def relation_to_partition(n, rel):
    classes = [frozenset(y for y in range(n) if (x, y) in rel) for x in range(n)]
    part = Partition.from_keys(classes)
    if part.pairs() != set(rel):
        raise ValueError("relation is not an equivalence")
    return part


def bff_bisim_naive(d: FiniteDialgebra) -> Partition:
    return relation_to_partition(d.n_states, bff_bisim_relation(d))


def bff_bisim_pr(d: FiniteDialgebra) -> Partition:
    """Back-and-forth bisimilarity by partition refinement on the induced LTS."""
    return signature_refinement(d.n_states, induced_lts(d).transitions)


def is_bff_bisimulation(d: FiniteDialgebra, rel) -> bool:
    """Check both transfer clauses for every pair of ``rel`` and its inverse."""
    rel = set(rel)
    return all(_simulates(d, rel, x, y) for x, y in rel) and \
        all(_simulates(d, {(b, a) for a, b in rel}, y, x) for x, y in rel)


# -- quotients, homomorphisms, kernels --------------------------------------

def lifted_row(d, part, x, k):
    return frozenset((o, part.block_of[y]) for o, y in d.rows[x][k])


def quotient(d: FiniteDialgebra, part: Partition):
    """The quotient dialgebra over the blocks of ``part`` and its projection.

    Block ``i`` carries the payload of its least member. Raises
    :class:`QuotientError` if two states of one block disagree on a lifted row.
    """
    if part.n_states != d.n_states:
        raise ValueError("partition and dialgebra have different state counts")
    trans = {}
    keys = d.signature.keys
    for bi, block in enumerate(part.blocks):
        rep = block[0]
        for k, (shape_id, param) in enumerate(keys):
            row = lifted_row(d, part, rep, k)
            for other in block[1:]:
                if lifted_row(d, part, other, k) != row:
                    raise QuotientError(rep, other, (shape_id, param))
            if row:
                trans[(shape_id, param, bi)] = row
    q = FiniteDialgebra([d.states[b[0]] for b in part.blocks], d.signature,
                        d.obs_alphabet, trans)
    return q, StateMap(d, q, part.block_of)


class HomCheck(NamedTuple):
    ok: bool
    counterexample: Experiment | None = None

    def __bool__(self):
        return self.ok


def is_homomorphism(h: StateMap) -> HomCheck:
    """Does ``g . F h = B h . f`` hold on every domain experiment?"""
    dom, cod = h.domain, h.codomain
    if dom.signature != cod.signature:
        raise SignatureMismatch("domain and codomain have different interaction signatures")
    if dom.obs_alphabet != cod.obs_alphabet:
        raise SignatureMismatch("domain and codomain have different observation alphabets")
    for x in range(dom.n_states):
        hx = h(x)
        for k, (shape_id, param) in enumerate(dom.signature.keys):
            image = frozenset((o, h(y)) for o, y in dom.rows[x][k])
            if image != cod.rows[hx][k]:
                return HomCheck(False, Experiment(shape_id, param, x))
    return HomCheck(True)


def kernel(h: StateMap) -> Partition:
    """Domain states grouped by equal image."""
    return Partition.from_keys(h.mapping)
