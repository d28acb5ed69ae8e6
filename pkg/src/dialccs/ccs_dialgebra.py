"""The asynchronous CCS as a dialgebra for ``F X = X + L_o x X``.

An experiment either watches a process run (``Run``) or offers it a message
on a channel (``Send``). Observations are outputs and silent steps only:

* ``Run(x)`` sees every output or tau move of ``x``;
* ``Send(c, x)`` sees tau, reaching ``x'`` if ``x`` inputs on ``c``, or
  ``'c | x'`` if ``x`` does a tau step and buffers the message.
"""
from __future__ import annotations

from dataclasses import dataclass

from .dialgebra import UNIT, FiniteDialgebra, Shape, bff_bisim_pr
from .lts import TAU, In, Out, TauAction, explore, label_key, step
from .syntax import Output, Par, Process, channels, render

__all__ = [
    "Run", "Send", "RUN", "SEND", "dialgebra_step", "experiment_channels",
    "build_ccs_dialgebra", "async_bisim_dialgebraic",
]

RUN = "run"
SEND = "send"


@dataclass(frozen=True)
class Run:
    state: Process


@dataclass(frozen=True)
class Send:
    chan: str
    state: Process


def dialgebra_step(e) -> frozenset:
    if isinstance(e, Run):
        return frozenset((a, x2) for a, x2 in step(e.state)
                         if isinstance(a, (TauAction, Out)))
    if isinstance(e, Send):
        result = set()
        for a, x2 in step(e.state):
            if a == In(e.chan):
                result.add((TAU, x2))
            elif a == TAU:
                result.add((TAU, Par(Output(e.chan), x2)))
        return frozenset(result)
    raise TypeError(f"not an experiment: {e!r}")


def fresh_channels(taken, count):
    """``count`` deterministic names ``fresh_0, fresh_1, ...`` avoiding ``taken``."""
    names = []
    i = 0
    while len(names) < count:
        name = f"fresh_{i}"
        if name not in taken:
            names.append(name)
        i += 1
    return names


def experiment_channels(p: Process, q: Process, extra_fresh: int = 0) -> frozenset:
    if extra_fresh < 0:
        raise ValueError("extra_fresh must be nonnegative")
    base = channels(p) | channels(q)
    return base | frozenset(fresh_channels(base, extra_fresh))


def _ordered(results):
    return sorted(results, key=lambda r: (label_key(r[0]), render(r[1])))


def build_ccs_dialgebra(roots, chans, cap=None) -> FiniteDialgebra:
    """Close ``roots`` under all ``Run`` and ``Send(c, -)`` experiments, ``c`` in ``chans``.

    State 0.. are the roots in the order given (duplicates dropped).
    """
    chans = tuple(sorted(set(chans)))
    roots = list(roots)

    def successors(x):
        for obs, y in _ordered(dialgebra_step(Run(x))):
            yield (RUN, UNIT, obs), y
        for c in chans:
            for obs, y in _ordered(dialgebra_step(Send(c, x))):
                yield (SEND, c, obs), y

    states, transitions = explore(roots, successors, cap)
    trans = {}
    for src, (shape_id, param, obs), dst in transitions:
        trans.setdefault((shape_id, param, src), []).append((obs, dst))
    alphabet = {TAU}
    for r in roots:
        alphabet.update(Out(c) for c in channels(r))
    alphabet.update(Out(c) for c in chans)
    shapes = [Shape(RUN, (UNIT,)), Shape(SEND, chans)]
    return FiniteDialgebra(states, shapes, alphabet, trans)


def async_bisim_dialgebraic(p: Process, q: Process, extra_fresh: int = 0, cap=None) -> bool:
    """Asynchronous bisimilarity decided as back-and-forth bisimilarity."""
    d = build_ccs_dialgebra([p, q], experiment_channels(p, q, extra_fresh), cap)
    part = bff_bisim_pr(d)
    return part.same(d.index_of(p), d.index_of(q))
