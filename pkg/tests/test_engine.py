"""Engine loop: shadow maintenance, replay equivalence, determinism."""

from __future__ import annotations

import random

import pytest

from selfheal.adversary import Event, StrategySpec, next_event
from selfheal.engine import InvalidEventError, RunConfig, run, shadow_distance, start, step
from selfheal.families import path_graph, random_tree
from selfheal.graph import Graph, UnknownNodeError

from conftest import INF


def triangle() -> Graph:
    return Graph(nodes=[0, 1, 2], edges=[(0, 1), (1, 2), (0, 2)])


def scripted(events, initial, healer="haft", **kw):
    return RunConfig(
        initial=initial,
        healer=healer,
        strategy=StrategySpec(kind="scripted", events=tuple(events)),
        t_max=len(events),
        **kw,
    )


class TestRun:
    def test_t_zero_snapshot_only(self):
        state = run(RunConfig(initial=triangle(), t_max=0))
        assert state.records == []
        assert state.initial_record is not None
        assert state.initial_record.t == 0
        assert state.initial_record.connected

    def test_triangle_single_delete(self):
        state = run(scripted([Event(op="delete", node=2)], triangle()))
        live = state.live_graph()
        assert set(live.edges()) == {(0, 1)}
        assert state.records[-1].connected

    def test_deterministic_records(self):
        def once():
            cfg = RunConfig(
                initial=random_tree(12, random.Random(3)),
                strategy=StrategySpec(kind="mixed", p_delete=0.6, seed=4),
                t_max=30,
                seed=9,
            )
            return run(cfg).records

        assert once() == once()

    def test_annihilation_ends_early(self):
        cfg = RunConfig(
            initial=path_graph(3),
            strategy=StrategySpec(kind="max-degree"),
            t_max=50,
        )
        state = run(cfg)
        assert state.status == "annihilated"
        assert len(state.records) == 3
        assert state.live_count == 0

    def test_exhausted_status(self):
        cfg = scripted([Event(op="delete", node=1)], path_graph(3))
        cfg.t_max = 10
        state = run(cfg)
        assert state.status == "exhausted"
        assert len(state.records) == 1

    def test_disconnected_initial_warns(self):
        g = Graph(nodes=[0, 1, 2], edges=[(0, 1)])
        state = run(RunConfig(initial=g, t_max=0))
        assert state.warnings


class TestStep:
    def test_insert_updates_shadow_and_live(self):
        state = start(RunConfig(initial=Graph(nodes=[0, 1], edges=[(0, 1)]), t_max=0))
        step(state, Event(op="insert", node=2, neighbors=(0,)))
        assert state.shadow.has_edge(2, 0)
        assert state.live_graph().has_edge(2, 0)
        assert state.records[-1].op == "insert"

    def test_delete_marks_but_keeps_shadow(self):
        state = start(RunConfig(initial=triangle(), t_max=0))
        step(state, Event(op="delete", node=1))
        assert state.shadow.has_node(1)
        assert state.shadow.has_edge(0, 1)
        assert 1 in state.deleted
        assert not state.live_graph().has_node(1)

    def test_shadow_distance_through_deleted(self):
        state = start(RunConfig(initial=path_graph(3), t_max=0))
        step(state, Event(op="delete", node=1))
        assert shadow_distance(state, 0, 2) == 2

    def test_shadow_distance_identity_and_unknown(self):
        state = start(RunConfig(initial=path_graph(2), t_max=0))
        assert shadow_distance(state, 0, 0) == 0
        with pytest.raises(UnknownNodeError):
            shadow_distance(state, 0, 9)

    def test_shadow_distance_unjoined_components(self):
        g = Graph(nodes=[0, 1], edges=[])
        state = start(RunConfig(initial=g, t_max=0))
        assert shadow_distance(state, 0, 1) == INF

    def test_invalid_event_rejected(self):
        state = start(RunConfig(initial=path_graph(2), t_max=0))
        with pytest.raises(InvalidEventError):
            step(state, Event(op="delete", node=77))
        with pytest.raises(InvalidEventError):
            step(state, Event(op="insert", node=0, neighbors=(1,)))  # id reuse


class TestInvariants:
    def test_replay_equivalence(self):
        cfg = RunConfig(
            initial=random_tree(14, random.Random(0)),
            strategy=StrategySpec(kind="mixed", p_delete=0.6, seed=2),
            t_max=25,
            seed=5,
        )
        full = run(cfg)

        manual = start(cfg)
        while len(manual.records) < len(full.records):
            event = next_event(
                cfg.strategy, manual.live_graph(), manual.shadow, manual.adversary
            )
            assert event is not None
            step(manual, event)
        assert manual.records == full.records

    def test_shadow_monotone_and_live_subset(self):
        cfg = RunConfig(
            initial=random_tree(16, random.Random(1)),
            strategy=StrategySpec(kind="mixed", p_delete=0.5, seed=1),
            t_max=40,
            seed=1,
        )
        state = start(cfg)
        healed: set = set()
        prev_nodes, prev_edges = set(state.shadow.nodes), set(state.shadow.edges())
        for _ in range(cfg.t_max):
            event = next_event(cfg.strategy, state.live_graph(), state.shadow, state.adversary)
            if event is None:
                break
            before = set(state.live_graph().edges())
            if event.op == "insert":
                before |= {
                    (min(event.node, w), max(event.node, w)) for w in event.neighbors
                }
            step(state, event)
            nodes, edges = set(state.shadow.nodes), set(state.shadow.edges())
            assert prev_nodes <= nodes and prev_edges <= edges
            prev_nodes, prev_edges = nodes, edges
            after = set(state.live_graph().edges())
            healed |= after - before - edges
            # every live edge not added by healing exists in the shadow graph
            for e in after:
                assert e in edges or e in healed
            if state.live_count == 0:
                break

    def test_live_count_matches_shadow_minus_deleted(self):
        cfg = RunConfig(
            initial=random_tree(10, random.Random(2)),
            strategy=StrategySpec(kind="mixed", p_delete=0.5, seed=3),
            t_max=20,
            seed=3,
        )
        state = run(cfg)
        assert state.live_count == state.live_graph().node_count
