import json
import random

import pytest
from hypothesis import given

from conftest import terms
from dialccs.errors import StateCapExceeded
from dialccs.gen import random_pair
from dialccs.lts import Out
from dialccs.oracle import (
    FORMS, async_bisim_oracle, async_check_pair_trace, check_certificate, check_trace,
    explore_pairs,
)
from dialccs.syntax import NIL, Input, Output, Tau, parse

PAIR = parse("c.'c.0 + tau.0"), parse("tau.0")


@pytest.mark.parametrize("form", FORMS)
def test_examples(form):
    assert async_bisim_oracle(*PAIR, form=form)
    assert async_bisim_oracle(parse("a.'b | 'a"), parse("a.'b | 'a"), form=form)
    assert not async_bisim_oracle(Input("a", NIL), Tau(NIL), form=form)
    assert not async_bisim_oracle(Output("a"), Output("b"), form=form)


def test_certificate_examples():
    res = async_check_pair_trace(NIL, NIL)
    assert res and res.certificate == [(NIL, NIL)]
    assert res.to_json() == {"verdict": "equivalent", "pairs": [["0", "0"]]}
    res = async_check_pair_trace(*PAIR)
    assert res.certificate[0] == PAIR and len(res.certificate) > 1
    assert check_certificate(res.certificate)
    assert check_certificate(res.certificate, "disjunctive")


def test_trace_example():
    res = async_check_pair_trace(Output("a"), Output("b"))
    assert not res
    assert len(res.trace) == 1
    step = res.trace[0]
    assert (step["side"], step["label"], step["target"]) == ("left", Out("a"), NIL)
    assert check_trace(Output("a"), Output("b"), res.trace)
    out = res.to_json()
    assert out["verdict"] == "distinguished"
    assert out["trace"] == [{"side": "left", "move": "'a -> 0", "clause": "run"}]
    json.dumps(out)


def test_forged_evidence_is_rejected():
    assert not check_certificate([(Output("a"), NIL)])
    # a certificate missing the successor pairs does not replay
    assert not check_certificate([PAIR])
    res = async_check_pair_trace(Output("a"), Output("b"))
    assert not check_trace(Output("a"), Output("a"), res.trace)
    assert not check_trace(Output("a"), Output("b"), [])


@pytest.mark.parametrize("form", FORMS)
def test_evidence_replays_on_random_pairs(form):
    rng = random.Random(5)
    for _ in range(200):
        p, q = random_pair(rng, 8)
        res = async_check_pair_trace(p, q, form)
        if res:
            assert check_certificate(res.certificate, form)
        else:
            assert check_trace(p, q, res.trace, form)
            assert res.trace[-1]["response"] is None


def test_unknown_form():
    with pytest.raises(ValueError):
        async_bisim_oracle(NIL, NIL, form="lazy")


def test_pair_cap():
    with pytest.raises(StateCapExceeded):
        explore_pairs(parse("tau.tau.'a"), parse("tau.tau.'a"), cap=2)


@given(terms)
def test_reflexive(p):
    assert async_bisim_oracle(p, p)


@given(terms, terms, terms)
def test_equivalence_relation(p, q, r):
    pq = async_bisim_oracle(p, q)
    assert pq == async_bisim_oracle(q, p)
    if pq and async_bisim_oracle(q, r):
        assert async_bisim_oracle(p, r)
