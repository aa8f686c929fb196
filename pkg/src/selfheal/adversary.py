"""Event generation: scripted traces and online adversary strategies.

The adversary is omniscient: a strategy sees the live graph, the shadow
graph and the healer's identity (implicitly, by being chosen against it),
and performs exactly one node insertion or deletion per timestep.

Strategies are deterministic given (StrategySpec, graph sequence, state):
all randomness flows through the explicit AdversaryState, which carries the
seeded generator plus the last deletion (for the clustered strategy) and the
scripted cursor. Ties break toward the smallest node id everywhere.

The pinned generator is CPython's `random.Random` (Mersenne Twister); its
identity is recorded in every manifest the CLI writes.

Scripted traces are JSON lines, one event per line with strictly increasing
timesteps:

    {"t": 1, "op": "delete", "node": 5}
    {"t": 2, "op": "insert", "node": 12, "neighbors": [1, 3]}
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .graph import Graph

RNG_NAME = "python-random-mt19937"

STRATEGY_KINDS = (
    "scripted",
    "random",
    "max-degree",
    "articulation",
    "mixed",
    "clustered",
)


class TraceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Event:
    op: str  # "insert" | "delete"
    node: int
    neighbors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.op not in ("insert", "delete"):
            raise ValueError(f"bad op {self.op!r}")


@dataclass(frozen=True)
class StrategySpec:
    kind: str = "mixed"
    p_delete: float = 0.7
    insert_degree: int = 2
    seed: int = 0
    events: tuple[Event, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if not 0.0 <= self.p_delete <= 1.0:
            raise ValueError(f"p_delete {self.p_delete} outside [0, 1]")
        if self.insert_degree < 1:
            raise ValueError(f"insert_degree {self.insert_degree} < 1")


@dataclass
class AdversaryState:
    """Everything a strategy is allowed to remember between calls."""

    rng: random.Random
    last_deleted: int | None = None
    cursor: int = 0


def new_state(spec: StrategySpec, run_seed: int = 0) -> AdversaryState:
    return AdversaryState(rng=random.Random(f"{run_seed}:{spec.seed}:adversary"))


def next_event(
    spec: StrategySpec, live: Graph, shadow: Graph, state: AdversaryState
) -> Event | None:
    """One legal event, or None when the strategy is exhausted."""
    if spec.kind == "scripted":
        if state.cursor >= len(spec.events):
            return None
        ev = spec.events[state.cursor]
        state.cursor += 1
        if ev.op == "delete":
            state.last_deleted = ev.node
        return ev

    live_nodes = sorted(live.nodes)

    if spec.kind == "mixed" or spec.kind == "random":
        p_delete = spec.p_delete if spec.kind == "mixed" else 0.5
        if not live_nodes:
            return None
        if state.rng.random() < p_delete:
            return _emit_delete(live_nodes[state.rng.randrange(len(live_nodes))], state)
        return _insert(spec, live_nodes, shadow, state)

    # Pure deleters from here on.
    if not live_nodes:
        return None
    if spec.kind == "max-degree":
        return _emit_delete(_max_degree_node(live, live_nodes), state)
    if spec.kind == "articulation":
        cuts = live.articulation_points()
        target = cuts[0] if cuts else _max_degree_node(live, live_nodes)
        return _emit_delete(target, state)
    if spec.kind == "clustered":
        target = None
        if state.last_deleted is not None and shadow.has_node(state.last_deleted):
            prev_neighbors = sorted(
                _live_neighbors_of_deleted(live, shadow, state.last_deleted)
            )
            if prev_neighbors:
                target = prev_neighbors[0]
        if target is None:
            target = _max_degree_node(live, live_nodes)
        return _emit_delete(target, state)
    raise AssertionError(f"unhandled kind {spec.kind}")


def _emit_delete(node: int, state: AdversaryState) -> Event:
    state.last_deleted = node
    return Event(op="delete", node=node)


def _live_neighbors_of_deleted(live: Graph, shadow: Graph, dead: int) -> set[int]:
    """Live nodes adjacent to the previous deletion, in the graph as it was:
    shadow adjacency works because healers never touch shadow edges."""
    return {w for w in shadow.neighbors(dead) if live.has_node(w)}


def _max_degree_node(live: Graph, live_nodes: list[int]) -> int:
    best = live_nodes[0]
    best_deg = live.degree(best)
    for v in live_nodes[1:]:
        d = live.degree(v)
        if d > best_deg:
            best, best_deg = v, d
    return best


def _insert(
    spec: StrategySpec, live_nodes: list[int], shadow: Graph, state: AdversaryState
) -> Event:
    fresh = max(shadow.nodes) + 1 if shadow.nodes else 0
    k = min(spec.insert_degree, len(live_nodes))
    neighbors = tuple(sorted(state.rng.sample(live_nodes, k)))
    return Event(op="insert", node=fresh, neighbors=neighbors)


def validate_event(
    e: Event,
    live: Graph,
    shadow: Graph | None = None,
) -> list[str]:
    """Model-constraint check; empty list means the event is legal.

    With the shadow graph available, id freshness is checked against every
    node that ever existed (ids are never reused, even after deletion).
    """
    violations = []
    if e.op == "delete":
        if not live.has_node(e.node):
            violations.append("unknown-node")
        if e.neighbors:
            violations.append("delete-with-neighbors")
        return violations
    known = shadow if shadow is not None else live
    if known.has_node(e.node):
        violations.append("id-reuse")
    if not e.neighbors:
        violations.append("unattached-insert")
    for w in e.neighbors:
        if w == e.node:
            violations.append("self-neighbor")
        elif not live.has_node(w):
            violations.append("unknown-neighbor")
    if len(set(e.neighbors)) != len(e.neighbors):
        violations.append("duplicate-neighbor")
    return violations


# -- JSONL trace format -------------------------------------------------------


def format_trace(events: list[Event]) -> str:
    lines = []
    for t, e in enumerate(events, start=1):
        obj: dict = {"t": t, "op": e.op, "node": e.node}
        if e.op == "insert":
            obj["neighbors"] = sorted(e.neighbors)
        lines.append(json.dumps(obj))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_trace(text: str) -> list[Event]:
    events = []
    last_t = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceFormatError(f"line {lineno}: not valid JSON ({exc})") from None
        if not isinstance(obj, dict):
            raise TraceFormatError(f"line {lineno}: expected an object")
        try:
            t = obj["t"]
            op = obj["op"]
            node = obj["node"]
        except KeyError as exc:
            raise TraceFormatError(f"line {lineno}: missing key {exc}") from None
        if not isinstance(t, int) or t <= last_t:
            raise TraceFormatError(f"line {lineno}: t={t!r} not strictly increasing")
        last_t = t
        if op == "insert":
            neighbors = obj.get("neighbors", [])
            if not isinstance(neighbors, list):
                raise TraceFormatError(f"line {lineno}: neighbors must be a list")
            events.append(Event(op="insert", node=node, neighbors=tuple(sorted(neighbors))))
        elif op == "delete":
            events.append(Event(op="delete", node=node))
        else:
            raise TraceFormatError(f"line {lineno}: unknown op {op!r}")
    return events


def write_trace(events: list[Event], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_trace(events))


def read_trace(path) -> list[Event]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_trace(fh.read())
