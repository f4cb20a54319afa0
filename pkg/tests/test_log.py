"""Audit log tests: append discipline, replay, NDJSON round-trip."""

from __future__ import annotations

import random

import pytest

from gatework.core import (
    AuditEvent,
    AuditLog,
    EventKind,
    Phase,
    append,
    apply_event,
    initial_state,
    read_events_file,
    replay,
    write_events_file,
)
from gatework.core.types import Actor
from gatework.errors import IllegalTransition, SequenceGap

from util_machine import generate_legal_sequence, make_event

E = EventKind


def test_append_to_empty_log():
    log = append(AuditLog(), make_event(0, E.TASK_SUBMITTED, {}))
    assert len(log) == 1


def test_append_sequence_gap():
    log = append(AuditLog(), make_event(0, E.TASK_SUBMITTED, {}))
    log = append(log, make_event(1, E.CLARIFICATION_STARTED, {}))
    log = append(log, make_event(2, E.PLANNING_STARTED, {}))
    with pytest.raises(SequenceGap):
        append(log, make_event(5, E.PLAN_COMMITTED, {}))


def test_thousand_appends_gapless():
    log = AuditLog()
    for seq in range(1000):
        log = append(log, make_event(seq, E.CLARIFICATION_STARTED, {}))
    assert [event.seq for event in log] == list(range(1000))


def test_append_preserves_prior_entries():
    events, _ = generate_legal_sequence(seed=3, length=8)
    log = AuditLog()
    for event in events:
        before = log.events
        log = append(log, event)
        assert log.events[:-1] == before


def test_replay_empty_log_is_submitted_v0():
    state = replay(AuditLog())
    assert state.phase is Phase.SUBMITTED
    assert state.version == 0


@pytest.mark.parametrize("seed", range(15))
def test_replay_fold_law(seed):
    events, _ = generate_legal_sequence(seed=seed, length=random.Random(seed).randint(1, 12))
    log = AuditLog()
    for event in events:
        assert apply_event(replay(log), event) == replay(append(log, event))
        log = append(log, event)
    assert replay(log).version == len(log)


def test_replay_happy_path_reaches_finalized():
    # all eight workflow phases touched in order
    script = [
        (E.TASK_SUBMITTED, {}, Actor.CLIENT),
        (E.CLARIFICATION_STARTED, {}, Actor.AI_WORKER),
        (E.PLANNING_STARTED, {}, Actor.AI_WORKER),
        (E.PLAN_COMMITTED, {"steps": [{"index": 0, "gated": True, "risk": "high"}]}, Actor.AI_WORKER),
        (E.WORKER_ASSIGNED, {"role": "expert", "worker_id": "x-9"}, Actor.SYSTEM),
        (E.GATE_REQUESTED, {"step_index": 0}, Actor.SYSTEM),
        (E.GATE_APPROVED, {"step_index": 0}, Actor.EXPERT),
        (E.STEP_STARTED, {"step_index": 0}, Actor.AI_WORKER),
        (E.STEP_COMPLETED, {"step_index": 0}, Actor.AI_WORKER),
        (E.ONLINE_QA_STARTED, {"step_index": 0}, Actor.SYSTEM),
        (E.ONLINE_QA_PASSED, {"step_index": 0}, Actor.SYSTEM),
        (E.OFFLINE_QA_STARTED, {}, Actor.SYSTEM),
        (E.QA_ESCALATED_TO_HUMAN, {}, Actor.SYSTEM),
        (E.QA_PASSED, {}, Actor.QA_EXPERT),
    ]
    log = AuditLog()
    for seq, (kind, payload, actor) in enumerate(script):
        log = append(log, AuditEvent(seq=seq, wall_time=seq * 100, actor=actor, kind=kind, payload=payload))
    state = replay(log)
    assert state.phase is Phase.FINALIZED
    assert state.version == len(script)


def test_replay_rejects_corrupt_log():
    log = append(AuditLog(), make_event(0, E.PLAN_COMMITTED, {"steps": [{"index": 0}]}))
    with pytest.raises(IllegalTransition):
        replay(log)


def test_replay_determinism_byte_for_byte(tmp_path):
    events, _ = generate_legal_sequence(seed=11, length=14)
    log = AuditLog()
    for event in events:
        log = append(log, event)
    assert replay(log).to_json() == replay(log).to_json()

    path = tmp_path / "t-001.events"
    write_events_file(path, log)
    loaded = read_events_file(path)
    assert loaded == log
    assert replay(loaded).to_json() == replay(log).to_json()
    # lossless file round-trip
    path2 = tmp_path / "copy.events"
    write_events_file(path2, loaded)
    assert path.read_bytes() == path2.read_bytes()


def test_unknown_payload_fields_survive_round_trip(tmp_path):
    event = AuditEvent(
        seq=0,
        wall_time=5,
        actor=Actor.CLIENT,
        kind=E.TASK_SUBMITTED,
        payload={"schema": 1, "future_field": {"nested": [1, 2, 3]}, "brief_digest": "abc"},
    )
    line = event.to_json_line()
    back = AuditEvent.from_json_line(line)
    assert back == event
    assert back.payload["future_field"] == {"nested": [1, 2, 3]}
    assert back.to_json_line() == line


def test_gate_ordering_invariant_on_accepted_logs():
    """In any accepted log, approval of a gated step precedes its completion."""
    for seed in range(25):
        events, _ = generate_legal_sequence(seed=seed, length=20)
        state = initial_state()
        gated: dict[int, bool] = {}
        last_approval: dict[int, int] = {}
        for event in events:
            state = apply_event(state, event)
            if event.kind is E.PLAN_COMMITTED:
                gated = {s["index"]: bool(s.get("gated")) for s in event.payload["steps"]}
                last_approval = {}
            elif event.kind in (E.GATE_APPROVED, E.GATE_EDITED):
                last_approval[event.payload["step_index"]] = event.seq
            elif event.kind is E.STEP_COMPLETED:
                i = event.payload["step_index"]
                if gated.get(i):
                    assert i in last_approval and last_approval[i] < event.seq


def test_no_events_after_terminal():
    for seed in range(25):
        events, _ = generate_legal_sequence(seed=seed, length=25)
        state = initial_state()
        for event in events:
            assert not state.terminal
            state = apply_event(state, event)
