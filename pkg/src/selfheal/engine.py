"""The simulation loop: adversary event, recovery phase, measurement.

Each timestep applies one adversary event, lets the healer respond, then
measures the healed graph against the shadow graph G'. The shadow graph
contains every node ever created, with original plus insertion edges only,
never healing edges; deletions mark nodes instead of removing them, so
shadow distances keep flowing through deleted nodes. Live processors are
the shadow nodes minus the deleted set.

Runs are deterministic: one master seed drives the adversary and the stretch
sampler, and all iteration orders are sorted. Running the same config twice
produces identical records, byte for byte once serialized.

A run ends early with status "annihilated" if the adversary deletes the
whole network, or "exhausted" when the strategy has no legal move left.

One engine instance is strictly sequential; parallel sweeps use independent
instances that share nothing.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

import numpy as np

from . import metrics
from .adversary import AdversaryState, Event, StrategySpec, new_state, next_event, validate_event
from .graph import Graph, UnknownNodeError
from .healers import Healer, make_healer
from .metrics import MetricsRecord, StretchResult, all_pairs_distances


class InvalidEventError(ValueError):
    pass


@dataclass
class RunConfig:
    initial: Graph
    healer: str = "haft"
    strategy: StrategySpec = field(default_factory=StrategySpec)
    t_max: int = 0
    seed: int = 0
    exact_apsp_cap: int = 256
    stretch_samples: int = 1000
    dedup_slots: bool = False


class ShadowOracle:
    """Cached exact distances over the shadow graph (deleted nodes included).

    The shadow graph only grows on insertions, so the matrix is recomputed
    lazily after each insert and shared across the deletions in between.
    """

    def __init__(self, shadow: Graph):
        self._shadow = shadow
        self._dist: np.ndarray | None = None
        self._index: dict[int, int] = {}

    def invalidate(self) -> None:
        self._dist = None

    def matrix(self) -> tuple[np.ndarray, dict[int, int]]:
        if self._dist is None:
            self._dist, self._index = all_pairs_distances(self._shadow)
        return self._dist, self._index

    def distance(self, u: int, v: int) -> float:
        dist, index = self.matrix()
        return float(dist[index[u], index[v]])


@dataclass
class RunState:
    config: RunConfig
    healer: Healer
    shadow: Graph
    deleted: set[int] = field(default_factory=set)
    records: list[MetricsRecord] = field(default_factory=list)
    events: list[Event] = field(default_factory=list)
    t: int = 0
    status: str = "ok"
    warnings: list[str] = field(default_factory=list)
    adversary: AdversaryState | None = None
    initial_record: MetricsRecord | None = None
    setup_messages: int = 0
    oracle: ShadowOracle | None = None
    timers: dict[str, float] = field(default_factory=dict)

    def live_graph(self) -> Graph:
        return self.healer.live_graph()

    @property
    def live_count(self) -> int:
        return self.shadow.node_count - len(self.deleted)


def start(config: RunConfig) -> RunState:
    """Preprocessing: build healer state and the shadow graph, snapshot G0."""
    healer = make_healer(config.healer, dedup_slots=config.dedup_slots)
    setup = healer.preprocess(config.initial)
    state = RunState(
        config=config,
        healer=healer,
        shadow=config.initial.copy(),
        adversary=new_state(config.strategy, config.seed),
        setup_messages=setup.messages,
    )
    state.oracle = ShadowOracle(state.shadow)
    if not config.initial.is_connected():
        state.warnings.append("initial graph is not connected")
    state.initial_record = _measure(state, op="init", node=-1, report=setup)
    return state


def step(state: RunState, event: Event) -> RunState:
    """Apply one validated event: shadow update, recovery phase, measurement."""
    live = state.live_graph()
    violations = validate_event(event, live, state.shadow)
    if violations:
        raise InvalidEventError(f"illegal event {event}: {', '.join(violations)}")
    t0 = time.perf_counter()
    if event.op == "insert":
        state.shadow.add_node(event.node)
        for w in event.neighbors:
            state.shadow.add_edge(event.node, w)
        if state.oracle is not None:
            state.oracle.invalidate()
        report = state.healer.on_insert(event.node, set(event.neighbors))
    else:
        state.deleted.add(event.node)
        report = state.healer.on_delete(event.node)
    state.timers["heal"] = state.timers.get("heal", 0.0) + (time.perf_counter() - t0)
    state.t += 1
    state.events.append(event)
    state.records.append(_measure(state, op=event.op, node=event.node, report=report))
    return state


def run(config: RunConfig) -> RunState:
    """The full loop: T events or until the strategy/network gives out."""
    state = start(config)
    for _ in range(config.t_max):
        event = _next(state)
        if event is None:
            state.status = "exhausted"
            break
        step(state, event)
        if state.live_count == 0:
            state.status = "annihilated"
            break
    return state


def _next(state: RunState) -> Event | None:
    return next_event(
        state.config.strategy, state.live_graph(), state.shadow, state.adversary
    )


def shadow_distance(state: RunState, u: int, v: int) -> float:
    """Hop count in the shadow graph, deleted nodes included."""
    for x in (u, v):
        if not state.shadow.has_node(x):
            raise UnknownNodeError(f"node {x} never existed")
    assert state.oracle is not None
    return state.oracle.distance(u, v)


def _measure(state: RunState, op: str, node: int, report) -> MetricsRecord:
    config = state.config
    live = state.live_graph()

    t0 = time.perf_counter()
    connected = live.is_connected()
    state.timers["connectivity"] = state.timers.get("connectivity", 0.0) + (
        time.perf_counter() - t0
    )

    t0 = time.perf_counter()
    ratio, _ = metrics.degree_ratio_max(live, state.shadow, state.deleted)
    assert state.oracle is not None
    if live.node_count > config.exact_apsp_cap and config.stretch_samples <= 0:
        result = StretchResult(None, "skipped", None)
        diameter_shadow = None
    else:
        shadow_dist, shadow_index = state.oracle.matrix()
        stretch_rng = random.Random(f"{config.seed}:stretch:{state.t}")
        result = metrics.stretch_max(
            live,
            shadow_dist,
            shadow_index,
            exact_cap=config.exact_apsp_cap,
            samples=config.stretch_samples,
            rng=stretch_rng,
        )
        diameter_shadow = metrics.diameter_from(shadow_dist)
    state.timers["metrics"] = state.timers.get("metrics", 0.0) + (time.perf_counter() - t0)

    return MetricsRecord(
        t=state.t,
        op=op,
        node=node,
        connected=connected,
        max_degree_ratio=ratio,
        max_stretch=result.max_stretch,
        stretch_mode=result.mode,
        diameter_live=result.diameter_live,
        diameter_shadow=diameter_shadow,
        messages=report.messages,
        rounds=report.rounds,
        max_hops=report.max_hops,
        edges_added=len(report.edges_added),
        edges_dropped=len(report.edges_dropped),
        virtual_count=state.healer.virtual_node_count(),
        shadow_nodes=state.shadow.node_count,
        live_nodes=live.node_count,
        touched_count=len(report.touched),
    )
