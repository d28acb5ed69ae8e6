"""Seeded random terms, term pairs and machines, plus counterexample shrinking."""
from __future__ import annotations

import itertools
import random

from .dialgebra import FiniteDialgebra, Shape
from .mealy import MealyMachine
from .syntax import NIL, Input, Nil, Output, Par, Process, Sum, Tau, subterms

CHANNEL_POOL = ("a", "b", "c")

_LEAVES = ("nil", "out")
_UNARY = ("tau", "in")
_BINARY = ("par", "sum")


def random_term(rng: random.Random, size: int, pool=CHANNEL_POOL) -> Process:
    """A term with at most ``size`` constructors.

    Constructors are drawn uniformly among those that fit the remaining
    budget; binary nodes split what is left at random.
    """
    if size < 1:
        raise ValueError("size must be at least 1")
    choices = list(_LEAVES)
    if size >= 2:
        choices += _UNARY
    if size >= 3:
        choices += _BINARY
    kind = rng.choice(choices)
    if kind == "nil":
        return NIL
    if kind == "out":
        return Output(rng.choice(pool))
    if kind == "tau":
        return Tau(random_term(rng, size - 1, pool))
    if kind == "in":
        return Input(rng.choice(pool), random_term(rng, size - 1, pool))
    left = rng.randint(1, size - 2)
    right = rng.randint(1, size - 1 - left)
    l, r = random_term(rng, left, pool), random_term(rng, right, pool)
    return Par(l, r) if kind == "par" else Sum(l, r)


def _replace_at(p, target_index, replacement):
    """Rebuild ``p`` with its ``target_index``-th pre-order subterm replaced."""
    counter = [0]

    def go(q):
        i = counter[0]
        counter[0] += 1
        if i == target_index:
            return replacement
        if isinstance(q, Tau):
            return Tau(go(q.cont))
        if isinstance(q, Input):
            return Input(q.chan, go(q.cont))
        if isinstance(q, Par):
            return Par(go(q.left), go(q.right))
        if isinstance(q, Sum):
            return Sum(go(q.left), go(q.right))
        return q

    return go(p)


def _shrinks(p):
    """Smaller variants of ``p``: a subterm hoisted over its parent, or set to ``0``."""
    for i, q in enumerate(subterms(p)):
        if isinstance(q, (Par, Sum)):
            yield _replace_at(p, i, q.left)
            yield _replace_at(p, i, q.right)
        elif isinstance(q, (Tau, Input)):
            yield _replace_at(p, i, q.cont)
        if not isinstance(q, Nil):
            yield _replace_at(p, i, NIL)


def _law_variant(rng, p):
    """A term that differs from ``p`` by a sound algebraic law or small tweak."""
    moves = [
        lambda: Par(p, NIL),
        lambda: Sum(p, p),
        lambda: Par(p.right, p.left) if isinstance(p, Par) else Par(NIL, p),
        lambda: Sum(p.right, p.left) if isinstance(p, Sum) else Sum(p, p),
        lambda: Sum(Input(c := rng.choice(CHANNEL_POOL), Output(c)), Tau(p)),
        lambda: Tau(p),
        lambda: _replace_at(p, rng.randrange(sum(1 for _ in subterms(p))),
                            random_term(rng, 2)),
    ]
    return rng.choice(moves)()


def related_term(rng: random.Random, p: Process, size: int) -> Process:
    """A variant of ``p`` within the size budget, or ``p`` itself if none fits."""
    q = _law_variant(rng, p)
    return q if sum(1 for _ in subterms(q)) <= size else p


def random_pair(rng: random.Random, size: int):
    """Two terms of at most ``size`` constructors each.

    A quarter of the pairs are independent draws. The rest relate the second
    term to the first, by an algebraic variant or by placing ``c.'c + tau.0``
    and ``tau.0`` beside a common context, so that equivalent pairs (and
    asynchronous-only ones) show up regularly.
    """
    mode = rng.randrange(4)
    if mode == 3 and size >= 7:
        ctx = random_term(rng, size - 6)
        c = rng.choice(CHANNEL_POOL)
        return Par(ctx, Sum(Input(c, Output(c)), Tau(NIL))), Par(ctx, Tau(NIL))
    p = random_term(rng, size)
    if mode == 0:
        return p, random_term(rng, size)
    q = _law_variant(rng, p)
    if sum(1 for _ in subterms(q)) > size:
        q = p if mode == 1 else random_term(rng, size)
    return p, q


def shrink_pair(p, q, fails, max_rounds=200):
    """Greedily shrink either term while ``fails(p, q)`` stays true."""
    for _ in range(max_rounds):
        for p2 in _shrinks(p):
            if fails(p2, q):
                p = p2
                break
        else:
            for q2 in _shrinks(q):
                if fails(p, q2):
                    q = q2
                    break
            else:
                return p, q
    return p, q


def shrink_term(p, fails, max_rounds=200):
    for _ in range(max_rounds):
        for p2 in _shrinks(p):
            if fails(p2):
                p = p2
                break
        else:
            return p
    return p


def random_mealy(rng: random.Random, n_states: int, inputs=("0", "1"), outputs=("0", "1"),
                 deterministic=False, max_branch=2):
    states = tuple(f"s{i}" for i in range(n_states))
    trans = {}
    for i in inputs:
        for s in states:
            if deterministic:
                trans[(i, s)] = {(rng.choice(outputs), rng.choice(states))}
            else:
                k = rng.randint(0, max_branch)
                trans[(i, s)] = {(rng.choice(outputs), rng.choice(states)) for _ in range(k)}
    return MealyMachine(states, tuple(inputs), tuple(outputs), trans)


def all_terms(n: int, pool=("a",)):
    """Every term with exactly ``n`` constructors over channels ``pool``."""
    if n < 1:
        return []
    out = [NIL] + [Output(c) for c in pool] if n == 1 else []
    if n >= 2:
        for t in all_terms(n - 1, pool):
            out.append(Tau(t))
            out.extend(Input(c, t) for c in pool)
    for k in range(1, n - 1):
        lefts, rights = all_terms(k, pool), all_terms(n - 1 - k, pool)
        for l in lefts:
            for r in rights:
                out.append(Par(l, r))
                out.append(Sum(l, r))
    return out


def all_deterministic_mealy(n_states: int, inputs=("0", "1"), outputs=("0", "1")):
    """Every deterministic machine with ``n_states`` states over the given alphabets."""
    states = tuple(f"s{i}" for i in range(n_states))
    cells = [(i, s) for i in inputs for s in states]
    choices = [(o, t) for o in outputs for t in states]
    for combo in itertools.product(choices, repeat=len(cells)):
        yield MealyMachine(states, tuple(inputs), tuple(outputs),
                           {cell: {ch} for cell, ch in zip(cells, combo)})


def random_dialgebra(rng: random.Random, n_states: int, shapes=(("run", ("·",)), ("send", ("a", "b"))),
                     obs=("o", "p"), max_branch=2) -> FiniteDialgebra:
    """A dialgebra with random rows of at most ``max_branch`` results each."""
    shapes = [Shape(sid, tuple(params)) for sid, params in shapes]
    trans = {}
    for x in range(n_states):
        for s in shapes:
            for a in s.params:
                k = rng.randint(0, max_branch)
                trans[(s.id, a, x)] = {(rng.choice(obs), rng.randrange(n_states)) for _ in range(k)}
    return FiniteDialgebra(range(n_states), shapes, obs, trans)


def with_copies(rng: random.Random, d: FiniteDialgebra, copies=2) -> FiniteDialgebra:
    """``copies`` interleaved replicas of ``d``; state ``c * n + x`` copies ``x``.

    Each successor is sent to a random replica, so replicas of one state are
    bisimilar while the transition structure stays irregular.
    """
    n = d.n_states
    trans = {}
    for c in range(copies):
        for x in range(n):
            for k, (sid, a) in enumerate(d.signature.keys):
                trans[(sid, a, c * n + x)] = {(o, rng.randrange(copies) * n + y)
                                               for o, y in d.rows[x][k]}
    states = [(c, s) for c in range(copies) for s in d.states]
    return FiniteDialgebra(states, d.signature, d.obs_alphabet, trans)
