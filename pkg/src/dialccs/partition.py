"""Partitions of ``range(n)`` and the refinement algorithms that produce them."""
from __future__ import annotations

from collections import defaultdict


class Partition:
    """An equivalence relation on the states ``0 .. n-1``.

    Blocks are stored sorted, and ordered by their least member, so two
    partitions of the same relation compare (and serialise) identically.
    """

    __slots__ = ("blocks", "block_of")

    def __init__(self, blocks, n=None):
        blocks = [tuple(sorted(b)) for b in blocks]
        if any(not b for b in blocks):
            raise ValueError("partition blocks must be nonempty")
        blocks.sort(key=lambda b: b[0])
        total = sum(len(b) for b in blocks)
        if n is None:
            n = total
        block_of = [-1] * n
        for idx, block in enumerate(blocks):
            for s in block:
                if not 0 <= s < n:
                    raise ValueError(f"state {s} out of range for {n} states")
                if block_of[s] != -1:
                    raise ValueError(f"state {s} occurs in two blocks")
                block_of[s] = idx
        if total != n:
            missing = [s for s, b in enumerate(block_of) if b == -1]
            raise ValueError(f"states not covered by any block: {missing}")
        self.blocks = tuple(blocks)
        self.block_of = tuple(block_of)

    @classmethod
    def from_keys(cls, keys):
        """Group state ``i`` with every ``j`` such that ``keys[i] == keys[j]``."""
        groups = {}
        for s, k in enumerate(keys):
            groups.setdefault(k, []).append(s)
        return cls(groups.values(), len(keys))

    @classmethod
    def discrete(cls, n):
        return cls(([s] for s in range(n)), n)

    @classmethod
    def total(cls, n):
        return cls([range(n)] if n else [], n)

    def __len__(self):
        return len(self.blocks)

    @property
    def n_states(self):
        return len(self.block_of)

    def same(self, x, y):
        return self.block_of[x] == self.block_of[y]

    def refines(self, other):
        """True when every block of ``self`` sits inside a block of ``other``."""
        if self.n_states != other.n_states:
            raise ValueError("partitions over different state sets")
        return all(len({other.block_of[s] for s in b}) == 1 for b in self.blocks)

    def pairs(self):
        """The relation as a set of ordered pairs."""
        return {(x, y) for b in self.blocks for x in b for y in b}

    def to_json(self):
        return [list(b) for b in self.blocks]

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.blocks == other.blocks and self.n_states == other.n_states

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"Partition({self.to_json()})"


def _successor_index(n, transitions):
    """Successor lists keyed by small integer label ids, ordered by ``repr``."""
    transitions = list(transitions)
    names = sorted({label for _, label, _ in transitions}, key=repr)
    ids = {label: i for i, label in enumerate(names)}
    succ = [defaultdict(list) for _ in range(n)]
    for src, label, dst in transitions:
        succ[src][ids[label]].append(dst)
    return succ, list(range(len(names)))


def kanellakis_smolka(n, transitions):
    """Coarsest strong bisimulation of an indexed LTS.

    ``transitions`` is an iterable of ``(src, label, dst)`` with integer
    endpoints. Passes over the blocks in ascending index order, splitting a
    block on the first label whose successor-block sets disagree; new blocks
    are appended and visited later in the same pass. Stops after a pass
    without splits.
    """
    succ, labels = _successor_index(n, transitions)
    if n == 0:
        return Partition([], 0)
    blocks = [list(range(n))]
    block_of = [0] * n

    def split(block, label):
        reach = [frozenset(block_of[t] for t in succ[s].get(label, ())) for s in block]
        first = reach[0]
        same = [s for s, r in zip(block, reach) if r == first]
        if len(same) == len(block):
            return None
        return same, [s for s, r in zip(block, reach) if r != first]

    changed = True
    while changed:
        changed = False
        bi = 0
        while bi < len(blocks):
            block = blocks[bi]
            if len(block) > 1:
                present = {lab for s in block for lab in succ[s]}
                for label in labels:
                    if label not in present:
                        continue
                    halves = split(block, label)
                    if halves is None:
                        continue
                    blocks[bi], new = halves
                    blocks.append(new)
                    for s in new:
                        block_of[s] = len(blocks) - 1
                    changed = True
                    break
                else:
                    bi += 1
                continue
            bi += 1
    return Partition(blocks, n)


def signature_refinement(n, transitions):
    """Coarsest strong bisimulation by iterated signature hashing.

    Each round maps a state to its current block together with the set of
    ``(label, successor block)`` pairs, then renumbers; the loop stops once
    the number of blocks is stable.
    """
    out = [[] for _ in range(n)]
    for src, label, dst in transitions:
        out[src].append((label, dst))
    block_of = [0] * n
    count = 1 if n else 0
    while True:
        sigs = [(block_of[s], frozenset((lab, block_of[t]) for lab, t in out[s]))
                for s in range(n)]
        ids = {}
        new = [ids.setdefault(sig, len(ids)) for sig in sigs]
        if len(ids) == count:
            break
        block_of, count = new, len(ids)
    return Partition.from_keys(block_of)
