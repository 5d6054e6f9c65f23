import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commont import (
    CyclicProtocolError,
    InvalidActError,
    ParseError,
    Protocol,
    ProtocolError,
    Transition,
    enumerate_runs,
    load_protocol,
    serialize,
    simulate,
    validate,
)
from commont.protocol import is_acyclic, structural_findings

from helpers import random_act_ontology, random_protocol, run_count_oracle

HEADER = "protocol P\nroles A B\n"


def test_asktime_loads(asktime):
    assert asktime.name == "AskTime"
    assert asktime.states == ("S0", "S1", "S2", "S3")
    assert asktime.initial == "S0"
    assert asktime.finals == {"S3"}
    assert len(asktime.transitions) == 3


def test_degenerate_protocol(ont):
    p = load_protocol(HEADER + "state S0 initial final\n", ont)
    assert enumerate_runs(p) == [enumerate_runs(p)[0]]
    assert len(enumerate_runs(p)[0]) == 0


def test_nondeterminism_rejected(ont):
    src = HEADER + (
        "state S0 initial\nstate S1 final\nstate S2 final\n"
        "transition S0 -> S1 on TimeRequest from A to B\n"
        "transition S0 -> S2 on TimeRequest from A to B\n"
    )
    with pytest.raises(ProtocolError) as info:
        load_protocol(src, ont)
    assert "E302" in [d.code for d in info.value.diagnostics]


def test_unknown_act_rejected(ont):
    src = HEADER + "state S0 initial\nstate S1 final\ntransition S0 -> S1 on Shout from A to B\n"
    with pytest.raises(ProtocolError) as info:
        load_protocol(src, ont)
    assert [(d.code, d.span.line) for d in info.value.diagnostics] == [("E301", 5)]


def test_unreachable_and_dead_end_rejected(ont):
    unreachable = HEADER + "state S0 initial final\nstate S1 final\n"
    with pytest.raises(ProtocolError) as info:
        load_protocol(unreachable, ont)
    assert [d.code for d in info.value.diagnostics] == ["E303"]

    dead_end = HEADER + (
        "state S0 initial\nstate S1\nstate S2 final\n"
        "transition S0 -> S1 on TimeRequest from A to B\n"
        "transition S0 -> S2 on RequestTemp from A to B\n"
    )
    with pytest.raises(ProtocolError) as info:
        load_protocol(dead_end, ont)
    assert [d.code for d in info.value.diagnostics] == ["E304"]


def test_parse_errors_surface_as_parse_error(ont):
    with pytest.raises(ParseError):
        load_protocol("protocol P\n", ont)


def test_asktime_single_run(asktime):
    runs = enumerate_runs(asktime)
    assert [r.acts for r in runs] == [("TimeRequest", "TimeAccept", "TimeInform")]


def test_two_arm_runs(two_arms):
    runs = enumerate_runs(two_arms)
    assert [r.acts for r in runs] == [
        ("RequestTemp", "AcceptTemp", "TempInform"),
        ("TimeRequest", "TimeAccept", "TimeInform"),
    ]


def test_final_state_with_successors_ends_a_run(ont):
    src = HEADER + (
        "state S0 initial\nstate S1\nstate S2 final\nstate S3\nstate S4\nstate S5 final\n"
        "transition S0 -> S1 on TimeRequest from A to B\n"
        "transition S1 -> S2 on TimeAccept from B to A\n"
        "transition S2 -> S3 on TimeInform from B to A\n"
        "transition S3 -> S4 on RequestTemp from A to B\n"
        "transition S4 -> S5 on AcceptTemp from B to A\n"
    )
    p = load_protocol(src, ont)
    assert [len(r) for r in enumerate_runs(p)] == [2, 5]


CYCLIC = HEADER + (
    "state S0 initial final\nstate S1\n"
    "transition S0 -> S1 on TimeRequest from A to B\n"
    "transition S1 -> S0 on TimeAccept from B to A\n"
)


def test_cyclic_protocol(ont):
    p = load_protocol(CYCLIC, ont)
    assert not is_acyclic(p)
    with pytest.raises(CyclicProtocolError):
        enumerate_runs(p)
    assert [len(r) for r in enumerate_runs(p, max_steps=4)] == [0, 2, 4]


def test_simulate_asktime(ont, asktime):
    steps = simulate(asktime, ont, ["TimeRequest", "TimeAccept", "TimeInform"])
    assert [s for s, _ in steps] == ["S0", "S1", "S2", "S3"]
    assert [str(store) for _, store in steps] == [
        "{}",
        "{CC(B,A,accept(B,A,TimeReq),TimeReq)@t1}",
        "{accept(B,A,TimeReq)@t2, C(B,A,TimeReq)@t3}",
        "{accept(B,A,TimeReq)@t2, TimeInfo@t4}",
    ]


def test_simulate_wrong_act_lists_allowed(ont, asktime):
    with pytest.raises(InvalidActError) as info:
        simulate(asktime, ont, ["TimeRequest", "TimeInform"])
    assert info.value.allowed == ("TimeAccept",)
    assert info.value.state == "S1"
    assert "{TimeAccept}" in str(info.value)


def test_simulate_cyclic_with_bound(ont):
    p = load_protocol(CYCLIC, ont)
    steps = simulate(p, ont, ["TimeRequest", "TimeAccept"] * 2, max_steps=4)
    assert steps[-1][0] == "S0"
    with pytest.raises(ProtocolError):
        simulate(p, ont, ["TimeRequest", "TimeAccept"] * 3, max_steps=4)


def test_validate_asktime_clean(ont, asktime):
    report = validate(asktime, ont)
    assert report.ok
    assert report.all_findings() == []


def test_validate_truncated_asktime(ont):
    src = (
        "protocol Truncated\nroles A B\nstate S0 initial\nstate S1\nstate S2 final\n"
        "transition S0 -> S1 on TimeRequest from A to B\n"
        "transition S1 -> S2 on TimeAccept from B to A\n"
    )
    report = validate(load_protocol(src, ont), ont)
    assert not report.ok
    (finding,) = report.all_findings()
    assert finding.code == "E401"
    assert "active commitment at final state" in finding.message
    assert "C(B,A,TimeReq)@t3" in finding.message


def test_validate_reports_dead_end(ont):
    p = Protocol(
        "P",
        ("A", "B"),
        ("S0", "S1", "S2"),
        "S0",
        frozenset({"S2"}),
        (
            Transition("S0", "S1", "TimeRequest", "A", "B"),
            Transition("S0", "S2", "RequestTemp", "A", "B"),
        ),
    )
    report = validate(p, ont)
    assert [d.code for d in report.findings] == ["E304"]
    assert not report.ok


def test_validate_cycle_is_warning(ont):
    report = validate(load_protocol(CYCLIC, ont), ont)
    assert [(d.severity, d.code) for d in report.findings] == [("warning", "W401")]
    assert report.ok


def test_structural_findings_clean(ont, p1, p2):
    assert structural_findings(p1, ont) == []
    assert structural_findings(p2, ont) == []


def _random_case(seed):
    rng = random.Random(seed)
    ont = random_act_ontology(rng)
    acts = [a.name for a in ont.user_act_classes()]
    return ont, random_protocol(rng, acts)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_run_count_matches_oracle(seed):
    ont, p = _random_case(seed)
    assert structural_findings(p, ont) == []
    runs = enumerate_runs(p)
    assert len(runs) == run_count_oracle(p)
    assert len({r.acts for r in runs}) == len(runs)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_serialize_roundtrip_keeps_runs(seed):
    ont, p = _random_case(seed)
    again = load_protocol(serialize(p), ont)
    assert [r.acts for r in enumerate_runs(again)] == [r.acts for r in enumerate_runs(p)]
    assert serialize(again) == serialize(p)
