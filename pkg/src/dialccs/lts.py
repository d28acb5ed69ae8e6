"""Structural operational semantics of CCS and strong bisimilarity."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import StateCapExceeded, default_cap
from .partition import Partition, kanellakis_smolka
from .syntax import NIL, Input, Nil, Output, Par, Process, Sum, Tau, render

__all__ = [
    "In", "Out", "TauAction", "TAU", "label_key", "step", "LtsGraph",
    "reachable", "explore", "strong_bisim", "StrongResult",
    "naive_strong_partition", "quotient_lts",
]


@dataclass(frozen=True, slots=True)
class In:
    chan: str

    def __str__(self):
        return self.chan


@dataclass(frozen=True, slots=True)
class Out:
    chan: str

    def __str__(self):
        return "'" + self.chan


@dataclass(frozen=True, slots=True)
class TauAction:
    def __str__(self):
        return "tau"

    def __repr__(self):
        return "TAU"


TAU = TauAction()


def label_key(label):
    """Total order on labels: tau, then inputs, then outputs, by channel."""
    if isinstance(label, TauAction):
        return (0, "")
    if isinstance(label, In):
        return (1, label.chan)
    return (2, label.chan)


@lru_cache(maxsize=1 << 18)
def step(p: Process) -> frozenset:
    """All ``(label, successor)`` pairs derivable for ``p``."""
    if isinstance(p, Nil):
        return frozenset()
    if isinstance(p, Tau):
        return frozenset({(TAU, p.cont)})
    if isinstance(p, Input):
        return frozenset({(In(p.chan), p.cont)})
    if isinstance(p, Output):
        return frozenset({(Out(p.chan), NIL)})
    if isinstance(p, Sum):
        return step(p.left) | step(p.right)
    if isinstance(p, Par):
        left, right = step(p.left), step(p.right)
        moves = {(a, Par(l2, p.right)) for a, l2 in left}
        moves.update((a, Par(p.left, r2)) for a, r2 in right)
        # synchronisation, in both orientations
        for a, l2 in left:
            for b, r2 in right:
                if _complementary(a, b):
                    moves.add((TAU, Par(l2, r2)))
        return frozenset(moves)
    raise TypeError(f"not a process: {p!r}")


def _complementary(a, b):
    return ((isinstance(a, In) and isinstance(b, Out) or isinstance(a, Out) and isinstance(b, In))
            and a.chan == b.chan)


def sorted_moves(p):
    """``step(p)`` in a deterministic order."""
    return sorted(step(p), key=lambda m: (label_key(m[0]), render(m[1])))


class LtsGraph:
    """A finite LTS with states indexed in breadth-first discovery order.

    ``transitions`` holds ``(src, label, dst)`` with integer endpoints; the
    payloads live in ``states``.
    """

    def __init__(self, states, transitions):
        self.states = tuple(states)
        self.transitions = tuple(transitions)
        self.index = {s: i for i, s in enumerate(self.states)}
        for src, _, dst in self.transitions:
            if not (0 <= src < len(self.states) and 0 <= dst < len(self.states)):
                raise ValueError(f"transition endpoint out of range: {src} -> {dst}")

    def __len__(self):
        return len(self.states)

    def edges(self):
        """Transitions as ``(source, label, target)`` payload triples."""
        return [(self.states[s], lab, self.states[t]) for s, lab, t in self.transitions]

    def out(self, i):
        return [(lab, t) for s, lab, t in self.transitions if s == i]

    def to_json(self):
        return {
            "states": [str(s) for s in self.states],
            "transitions": [{"src": s, "label": str(lab), "dst": t}
                            for s, lab, t in self.transitions],
        }

    def to_dot(self, name="lts"):
        lines = [f"digraph {name} {{"]
        for i, s in enumerate(self.states):
            lines.append(f"  {i} [label={_dot_quote(str(s))}];")
        for s, lab, t in self.transitions:
            lines.append(f"  {s} -> {t} [label={_dot_quote(str(lab))}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_text(self):
        lines = [f"{len(self.states)} states, {len(self.transitions)} transitions"]
        for i, s in enumerate(self.states):
            lines.append(f"  [{i}] {s}")
        for s, lab, t in self.transitions:
            lines.append(f"  {s} --{lab}--> {t}")
        return "\n".join(lines) + "\n"

    def dumps(self, fmt):
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2) + "\n"
        if fmt == "dot":
            return self.to_dot()
        return self.to_text()


def _dot_quote(text):
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def explore(roots, successors, cap=None):
    """Breadth-first closure of ``roots`` under ``successors``.

    ``successors(x)`` returns an ordered iterable of ``(label, y)``. Returns
    the state list and the indexed transitions.
    """
    cap = default_cap() if cap is None else cap
    states = []
    index = {}
    queue = deque()
    for r in roots:
        if r not in index:
            if len(states) >= cap:
                raise StateCapExceeded(cap)
            index[r] = len(states)
            states.append(r)
            queue.append(r)
    transitions = []
    while queue:
        x = queue.popleft()
        i = index[x]
        for label, y in successors(x):
            j = index.get(y)
            if j is None:
                if len(states) >= cap:
                    raise StateCapExceeded(cap)
                j = index[y] = len(states)
                states.append(y)
                queue.append(y)
            transitions.append((i, label, j))
    return states, transitions


def reachable(*roots: Process, cap=None) -> LtsGraph:
    """The LTS of everything reachable from ``roots`` (root order kept)."""
    states, transitions = explore(roots, sorted_moves, cap)
    return LtsGraph(states, transitions)


@dataclass(frozen=True)
class StrongResult:
    equivalent: bool
    partition: Partition
    graph: LtsGraph

    def __bool__(self):
        return self.equivalent


def strong_bisim(p: Process, q: Process, cap=None) -> StrongResult:
    """Strong (synchronous) bisimilarity of ``p`` and ``q``.

    Runs Kanellakis-Smolka refinement on the joint reachable LTS; the result
    is truthy iff the two roots share a block.
    """
    graph = reachable(p, q, cap=cap)
    part = kanellakis_smolka(len(graph), graph.transitions)
    return StrongResult(part.same(graph.index[p], graph.index[q]), part, graph)


def naive_strong_partition(graph: LtsGraph) -> Partition:
    """Greatest-fixpoint strong bisimilarity, straight from the definition.

    Starts from the full relation and removes pairs violating the transfer
    condition until nothing changes. Quadratic in the state count; meant as
    a test oracle.
    """
    n = len(graph)
    ids = {}
    moves = [{} for _ in range(n)]
    for s, lab, t in graph.transitions:
        moves[s].setdefault(ids.setdefault(lab, len(ids)), []).append(t)
    rel = {(x, y) for x in range(n) for y in range(n)}

    def simulates(x, y):
        my = moves[y]
        for lab, xts in moves[x].items():
            yts = my.get(lab)
            if yts is None:
                return False
            for xt in xts:
                if not any((xt, yt) in rel for yt in yts):
                    return False
        return True

    # the transfer condition is symmetric, so test each unordered pair once
    diagonal = {(x, x) for x in range(n)}
    while True:
        kept = set(diagonal)
        for x, y in rel:
            if x < y and simulates(x, y) and simulates(y, x):
                kept.add((x, y))
                kept.add((y, x))
        if kept == rel:
            break
        rel = kept
    classes = [frozenset(y for y in range(n) if (x, y) in rel) for x in range(n)]
    return Partition.from_keys(classes)


def quotient_lts(graph: LtsGraph, part: Partition) -> LtsGraph:
    """Collapse each block to its least member; duplicate edges merge."""
    reps = [graph.states[b[0]] for b in part.blocks]
    edges = sorted({(part.block_of[s], lab, part.block_of[t])
                    for s, lab, t in graph.transitions},
                   key=lambda e: (e[0], str(e[1]), e[2]))
    return LtsGraph(reps, edges)
