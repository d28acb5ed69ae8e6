"""Asynchronous bisimilarity computed directly on the CCS transition relation.

This is the cross-check for the dialgebraic checker and deliberately shares
nothing with it except :func:`dialccs.lts.step`.

A pair ``(x, y)`` owes one obligation per move of either side. An output or
tau move must be matched by the same label. An input ``x --c--> x'`` may be
matched loosely, in one of two interchangeable forms:

``composed``
    ``'c | y --tau--> y'``
``disjunctive``
    ``y --c--> y'``, or ``y --tau--> y''`` with ``y' = 'c | y''``

The pair graph is explored breadth-first and refutations are propagated
backwards from pairs with an unmatchable obligation.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import StateCapExceeded, default_cap
from .lts import TAU, In, label_key, step
from .syntax import Output, Par, Process, render

__all__ = [
    "FORMS", "explore_pairs", "async_bisim_oracle", "async_check_pair_trace", "AsyncResult",
    "check_certificate", "check_trace",
]

FORMS = ("composed", "disjunctive")


def _moves(p):
    return sorted(step(p), key=lambda m: (label_key(m[0]), render(m[1])))


def _input_responses(c, y, form):
    """States ``y'`` that may answer an input on ``c`` from the other side."""
    if form == "composed":
        return [y2 for a, y2 in _moves(Par(Output(c), y)) if a == TAU]
    if form == "disjunctive":
        direct = [y2 for a, y2 in _moves(y) if a == In(c)]
        stored = [Par(Output(c), y2) for a, y2 in _moves(y) if a == TAU]
        return direct + stored
    raise ValueError(f"unknown clause form {form!r}; expected one of {FORMS}")


def _responses(label, other, form):
    if isinstance(label, In):
        return _input_responses(label.chan, other, form), "input"
    return [o2 for b, o2 in _moves(other) if b == label], "run"


def _dedup(xs):
    return list(dict.fromkeys(xs))


@dataclass
class _Obligation:
    side: str          # which component moved: "left" or "right"
    label: object
    target: Process
    clause: str
    candidates: list


def _obligations(pair, form):
    x, y = pair
    obs = []
    for a, x2 in _moves(x):
        ys, clause = _responses(a, y, form)
        obs.append(_Obligation("left", a, x2, clause, _dedup((x2, y2) for y2 in ys)))
    for a, y2 in _moves(y):
        xs, clause = _responses(a, x, form)
        obs.append(_Obligation("right", a, y2, clause, _dedup((x2, y2) for x2 in xs)))
    return obs


@dataclass
class AsyncResult:
    equivalent: bool
    certificate: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    explored: int = 0

    def __bool__(self):
        return self.equivalent

    def to_json(self):
        verdict = "equivalent" if self.equivalent else "distinguished"
        if self.equivalent:
            return {"verdict": verdict,
                    "pairs": [[render(x), render(y)] for x, y in self.certificate]}
        return {"verdict": verdict,
                "trace": [{"side": s["side"], "move": s["move"], "clause": s["clause"]}
                          for s in self.trace]}


def explore_pairs(p: Process, q: Process, form="composed", cap=None) -> dict:
    """Breadth-first closure of ``(p, q)`` under obligation candidates.

    Maps every reached pair to its list of obligations, in discovery order.
    """
    if form not in FORMS:
        raise ValueError(f"unknown clause form {form!r}; expected one of {FORMS}")
    cap = default_cap() if cap is None else cap
    root = (p, q)
    obligations = {}
    queue = deque([root])
    seen = {root}
    while queue:
        pair = queue.popleft()
        obs = obligations[pair] = _obligations(pair, form)
        for ob in obs:
            for cand in ob.candidates:
                if cand not in seen:
                    if len(seen) >= cap:
                        raise StateCapExceeded(cap, "state pairs")
                    seen.add(cand)
                    queue.append(cand)
    return obligations


def async_check_pair_trace(p: Process, q: Process, form="composed", cap=None) -> AsyncResult:
    """Decide ``p ~ q`` and explain the verdict.

    On success the result carries a bisimulation containing ``(p, q)``; on
    failure a sequence of attacker moves, each answered by the defender's
    least-bad response, ending in a move that has no response at all.
    """
    root = (p, q)
    obligations = explore_pairs(p, q, form, cap)
    parents = {}
    for pair, obs in obligations.items():
        for oi, ob in enumerate(obs):
            for cand in ob.candidates:
                parents.setdefault(cand, []).append((pair, oi))

    # backward refutation
    alive = {pair: [len(ob.candidates) for ob in obs] for pair, obs in obligations.items()}
    reason = {}
    depth = {}
    work = deque()
    for pair, obs in obligations.items():
        for oi, ob in enumerate(obs):
            if not ob.candidates:
                reason[pair] = oi
                depth[pair] = 0
                work.append(pair)
                break
    while work:
        bad = work.popleft()
        for parent, oi in parents.get(bad, ()):
            if parent in reason:
                continue
            alive[parent][oi] -= 1
            if alive[parent][oi] == 0:
                reason[parent] = oi
                depth[parent] = 1 + max(depth[c] for c in obligations[parent][oi].candidates)
                work.append(parent)

    if root in reason:
        return AsyncResult(False, trace=_trace(root, obligations, reason, depth),
                           explored=len(obligations))
    return AsyncResult(True, certificate=_certificate(root, obligations, reason),
                       explored=len(obligations))


def _trace(pair, obligations, reason, depth):
    steps = []
    while True:
        ob = obligations[pair][reason[pair]]
        entry = {
            "pair": pair,
            "side": ob.side,
            "label": ob.label,
            "target": ob.target,
            "move": f"{ob.label} -> {render(ob.target)}",
            "clause": ob.clause,
            "response": None,
        }
        steps.append(entry)
        if not ob.candidates:
            return steps
        nxt = min(ob.candidates, key=lambda c: depth[c])
        entry["response"] = nxt
        pair = nxt


def _certificate(root, obligations, reason):
    keep = [root]
    seen = {root}
    i = 0
    while i < len(keep):
        for ob in obligations[keep[i]]:
            for cand in ob.candidates:
                if cand not in reason and cand not in seen:
                    seen.add(cand)
                    keep.append(cand)
        i += 1
    return keep


def async_bisim_oracle(p: Process, q: Process, form="composed", cap=None) -> bool:
    return async_check_pair_trace(p, q, form, cap).equivalent


# -- replay ------------------------------------------------------------------

def _answers(label, other, form):
    """Admissible answers of ``other`` to a move labelled ``label``."""
    if not isinstance(label, In):
        return [o2 for b, o2 in step(other) if b == label]
    if form == "composed":
        return [o2 for b, o2 in step(Par(Output(label.chan), other)) if b == TAU]
    return ([o2 for b, o2 in step(other) if b == label]
            + [Par(Output(label.chan), o2) for b, o2 in step(other) if b == TAU])


def _matched(mover, other, rel, form, flip):
    """Every move of ``mover`` has an answer from ``other`` landing in ``rel``."""
    for a, m2 in step(mover):
        pairs = [(o2, m2) if flip else (m2, o2) for o2 in _answers(a, other, form)]
        if not any(pr in rel for pr in pairs):
            return False
    return True


def check_certificate(pairs, form="composed") -> bool:
    """Replay both simulation clauses on ``pairs`` and on its inverse."""
    rel = set(pairs)
    return all(_matched(x, y, rel, form, False) and _matched(y, x, rel, form, True)
               for x, y in rel)


def check_trace(p, q, trace, form="composed") -> bool:
    """Replay a distinguishing trace from ``(p, q)``.

    Each step must be a genuine move of the named side; intermediate
    responses must be admissible answers; the final move must have none.
    """
    if not trace:
        return False
    pair = (p, q)
    for i, entry in enumerate(trace):
        x, y = pair
        mover, other = (x, y) if entry["side"] == "left" else (y, x)
        label, target = entry["label"], entry["target"]
        if (label, target) not in step(mover):
            return False
        answers = _answers(label, other, form)
        if entry["side"] == "left":
            options = [(target, a) for a in answers]
        else:
            options = [(a, target) for a in answers]
        last = i == len(trace) - 1
        if last:
            return not options
        if entry["response"] not in options:
            return False
        pair = entry["response"]
    return False
