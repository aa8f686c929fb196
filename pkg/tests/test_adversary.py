"""Adversary strategies, event validation, and the JSONL trace format."""

from __future__ import annotations

import random

import pytest

from selfheal.adversary import (
    Event,
    StrategySpec,
    TraceFormatError,
    format_trace,
    new_state,
    next_event,
    parse_trace,
    validate_event,
)
from selfheal.families import path_graph, star_graph
from selfheal.graph import Graph


def complete(n: int) -> Graph:
    g = Graph(nodes=range(n))
    for u in range(n):
        for v in range(u + 1, n):
            g.add_edge(u, v)
    return g


class TestStrategies:
    def test_max_degree_picks_star_center(self):
        g = star_graph(6)
        spec = StrategySpec(kind="max-degree")
        event = next_event(spec, g, g.copy(), new_state(spec))
        assert event == Event(op="delete", node=0)

    def test_articulation_picks_cut_vertex(self):
        g = path_graph(3)
        spec = StrategySpec(kind="articulation")
        event = next_event(spec, g, g.copy(), new_state(spec))
        assert event == Event(op="delete", node=1)

    def test_articulation_falls_back_on_complete_graph(self):
        # K4 has no cut vertex (removing any node leaves K3), so the rule
        # falls back to max degree with the smallest-id tie-break.
        g = complete(4)
        spec = StrategySpec(kind="articulation")
        event = next_event(spec, g, g.copy(), new_state(spec))
        assert event == Event(op="delete", node=0)

    def test_clustered_walks_neighbors(self):
        g = path_graph(6)
        spec = StrategySpec(kind="clustered")
        state = new_state(spec)
        shadow = g.copy()
        first = next_event(spec, g, shadow, state)
        assert first.op == "delete"
        g.remove_node(first.node)
        second = next_event(spec, g, shadow, state)
        assert second.node in shadow.neighbors(first.node)

    def test_exhausted_on_empty_network(self):
        empty = Graph()
        for kind in ("mixed", "max-degree", "articulation", "clustered", "random"):
            spec = StrategySpec(kind=kind, p_delete=1.0)
            assert next_event(spec, empty, empty.copy(), new_state(spec)) is None

    def test_scripted_replays_and_exhausts(self):
        events = (Event(op="delete", node=1), Event(op="delete", node=2))
        spec = StrategySpec(kind="scripted", events=events)
        state = new_state(spec)
        g = path_graph(4)
        assert next_event(spec, g, g.copy(), state) == events[0]
        assert next_event(spec, g, g.copy(), state) == events[1]
        assert next_event(spec, g, g.copy(), state) is None

    def test_insert_caps_degree_at_live_size(self):
        g = path_graph(2)
        spec = StrategySpec(kind="mixed", p_delete=0.0, insert_degree=5, seed=3)
        event = next_event(spec, g, g.copy(), new_state(spec))
        assert event.op == "insert"
        assert event.node == 2
        assert set(event.neighbors) == {0, 1}

    def test_determinism_replay(self):
        def emit(seed):
            spec = StrategySpec(kind="mixed", p_delete=0.6, insert_degree=2, seed=seed)
            state = new_state(spec, run_seed=17)
            live = path_graph(8)
            shadow = live.copy()
            out = []
            for _ in range(30):
                event = next_event(spec, live, shadow, state)
                if event is None:
                    break
                out.append(event)
                if event.op == "insert":
                    shadow.add_node(event.node)
                    live.add_node(event.node)
                    for w in event.neighbors:
                        shadow.add_edge(event.node, w)
                        live.add_edge(event.node, w)
                else:
                    live.remove_node(event.node)
            return out

        assert emit(5) == emit(5)
        assert emit(5) != emit(6)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            StrategySpec(kind="bogus")
        with pytest.raises(ValueError):
            StrategySpec(p_delete=1.5)
        with pytest.raises(ValueError):
            StrategySpec(insert_degree=0)


class TestValidateEvent:
    def test_legal_delete(self):
        g = path_graph(3)
        assert validate_event(Event(op="delete", node=1), g) == []

    def test_id_reuse_detected_against_shadow(self):
        live = Graph(nodes=[1])
        shadow = Graph(nodes=[0, 1])  # node 0 existed once
        event = Event(op="insert", node=0, neighbors=(1,))
        assert "id-reuse" in validate_event(event, live, shadow)

    def test_unattached_insert(self):
        g = path_graph(2)
        event = Event(op="insert", node=9)
        assert "unattached-insert" in validate_event(event, g)

    def test_unknown_neighbor(self):
        g = path_graph(2)
        event = Event(op="insert", node=9, neighbors=(55,))
        assert "unknown-neighbor" in validate_event(event, g)

    def test_unknown_delete_target(self):
        g = path_graph(2)
        assert "unknown-node" in validate_event(Event(op="delete", node=9), g)


def test_fuzz_emitted_events_all_validate():
    # 10^5 emitted events across many seeds, all legal at emission time.
    checked = 0
    seed = 0
    while checked < 100_000:
        spec = StrategySpec(kind="mixed", p_delete=0.5, insert_degree=2, seed=seed)
        state = new_state(spec, run_seed=seed)
        live = path_graph(12)
        shadow = live.copy()
        for _ in range(2000):
            event = next_event(spec, live, shadow, state)
            if event is None:
                break
            assert validate_event(event, live, shadow) == []
            checked += 1
            if event.op == "insert":
                shadow.add_node(event.node)
                live.add_node(event.node)
                for w in event.neighbors:
                    shadow.add_edge(event.node, w)
                    live.add_edge(event.node, w)
            else:
                live.remove_node(event.node)
        seed += 1
    assert checked >= 100_000


class TestTraceFormat:
    def test_round_trip(self):
        events = [
            Event(op="delete", node=5),
            Event(op="insert", node=12, neighbors=(3, 1)),
        ]
        text = format_trace(events)
        lines = text.splitlines()
        assert lines[0] == '{"t": 1, "op": "delete", "node": 5}'
        assert lines[1] == '{"t": 2, "op": "insert", "node": 12, "neighbors": [1, 3]}'
        back = parse_trace(text)
        assert back == [
            Event(op="delete", node=5),
            Event(op="insert", node=12, neighbors=(1, 3)),
        ]

    def test_non_increasing_t_rejected(self):
        text = '{"t": 1, "op": "delete", "node": 1}\n{"t": 1, "op": "delete", "node": 2}\n'
        with pytest.raises(TraceFormatError):
            parse_trace(text)

    def test_bad_json_rejected(self):
        with pytest.raises(TraceFormatError):
            parse_trace("{not json}\n")

    def test_unknown_op_rejected(self):
        with pytest.raises(TraceFormatError):
            parse_trace('{"t": 1, "op": "explode", "node": 1}\n')

    def test_missing_key_rejected(self):
        with pytest.raises(TraceFormatError):
            parse_trace('{"t": 1, "op": "delete"}\n')
