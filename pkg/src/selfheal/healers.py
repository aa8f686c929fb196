"""Healing algorithms for the recovery phase.

Five healers share one interface: `preprocess` the initial graph, then
`on_insert` / `on_delete` per adversary event, each returning a HealerReport
with the edge changes and cost accounting. `live_graph` yields the current
healed graph.

* null     - does nothing on deletion; negative control for the checkers.
* star     - wires all orphans to the minimum-id orphan.
* ring     - wires the orphans into a cycle by ascending id.
* rebuild  - reconstruction trees rebuilt from scratch: every tree the
             deleted node touched is dissolved and one fresh haft is built
             over all surviving slots; messages scale with the whole region.
* haft     - the flagship: surviving complete subtrees are preserved and
             merged by binary addition, so only the spine, the carries and
             the reassigned simulators are touched, and edges of dissolved
             internal nodes are dropped.

Recovery is modeled with knowledge replication: every processor pushes its
neighbor-list and tree-metadata updates to current neighbors on change, so
after a deletion every orphan computes the same replacement structure locally
and no election is needed. Message counts are the audited metric: per
deletion, the notified live neighbors, plus two messages per virtual-graph
edge change, plus one per new simulator assignment. Rounds follow the
synchronous convention 1 + ceil(log2 |touched|) for the structural healers
and 1 for the baselines.

A healer instance owns its state exclusively; distinct instances share
nothing and may run in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graph import Graph, UnknownNodeError
from .haft import (
    Haft,
    HaftNode,
    Leaf,
    LeafSlot,
    _assemble,
    assign_simulators,
    haft_slots,
    leaf_count,
    split_out,
    to_virtual_edges,
    validate_haft,
)
from .virtual_graph import VirtualGraph, real

HEALER_NAMES = ("null", "star", "ring", "rebuild", "haft")


class HealerError(ValueError):
    pass


@dataclass
class HealerReport:
    """Per-event cost and change accounting.

    touched covers every endpoint of every added or dropped real edge, and
    messages is always at least |edges_added| + |edges_dropped|.
    max_hops is the farthest touched node from the deleted node, measured in
    the pre-deletion live graph.
    """

    edges_added: set[tuple[int, int]] = field(default_factory=set)
    edges_dropped: set[tuple[int, int]] = field(default_factory=set)
    virtual_nodes_created: int = 0
    messages: int = 0
    rounds: int = 0
    touched: set[int] = field(default_factory=set)
    max_hops: int = 0


def make_healer(name: str, dedup_slots: bool = False) -> "Healer":
    if name == "null":
        return NullHealer()
    if name == "star":
        return StarHealer()
    if name == "ring":
        return RingHealer()
    if name == "rebuild":
        return HaftHealer(mode="rebuild", dedup_slots=dedup_slots)
    if name == "haft":
        return HaftHealer(mode="haft", dedup_slots=dedup_slots)
    raise HealerError(f"unknown healer {name!r}; expected one of {HEALER_NAMES}")


class Healer:
    """Interface shared by all healers."""

    name = "abstract"

    def preprocess(self, initial: Graph) -> HealerReport:
        raise NotImplementedError

    def on_insert(self, v: int, neighbors: set[int]) -> HealerReport:
        raise NotImplementedError

    def on_delete(self, v: int) -> HealerReport:
        raise NotImplementedError

    def live_graph(self) -> Graph:
        raise NotImplementedError

    def virtual_node_count(self) -> int:
        return 0

    def audit(self) -> list[str]:
        return []

    def _check_insert(self, v: int, neighbors: set[int], live: Graph) -> None:
        if live.has_node(v):
            raise HealerError(f"insert reuses live id {v}")
        if not neighbors:
            raise HealerError("insert must attach to at least one live node")
        for w in neighbors:
            if not live.has_node(w):
                raise UnknownNodeError(f"insert neighbor {w} is not live")


class BaselineHealer(Healer):
    """Keeps a plain Graph; subclasses choose the edges that replace a node."""

    def __init__(self) -> None:
        self.graph = Graph()

    def preprocess(self, initial: Graph) -> HealerReport:
        self.graph = initial.copy()
        return HealerReport(
            messages=2 * self.graph.edge_count,
            rounds=1 if self.graph.edge_count else 0,
            touched=set(self.graph.nodes),
        )

    def on_insert(self, v: int, neighbors: set[int]) -> HealerReport:
        self._check_insert(v, neighbors, self.graph)
        self.graph.add_node(v)
        for w in sorted(neighbors):
            self.graph.add_edge(v, w)
        return HealerReport(
            messages=len(neighbors),
            rounds=1,
            touched={v} | set(neighbors),
            max_hops=1,
        )

    def on_delete(self, v: int) -> HealerReport:
        hops = self.graph.bfs_distances(v)
        orphans = sorted(self.graph.remove_node(v))
        added = set()
        for u, w in self._heal_edges(orphans):
            if self.graph.add_edge(u, w):
                added.add((min(u, w), max(u, w)))
        touched = set(orphans) | {x for e in added for x in e}
        return HealerReport(
            edges_added=added,
            messages=len(orphans) + 2 * len(added),
            rounds=1 if touched else 0,
            touched=touched,
            max_hops=max((hops[p] for p in touched), default=0),
        )

    def live_graph(self) -> Graph:
        return self.graph.copy()

    def audit(self) -> list[str]:
        return self.graph.audit()

    def _heal_edges(self, orphans: list[int]) -> list[tuple[int, int]]:
        raise NotImplementedError


class NullHealer(BaselineHealer):
    name = "null"

    def _heal_edges(self, orphans: list[int]) -> list[tuple[int, int]]:
        return []


class StarHealer(BaselineHealer):
    name = "star"

    def _heal_edges(self, orphans: list[int]) -> list[tuple[int, int]]:
        if len(orphans) < 2:
            return []
        hub = orphans[0]
        return [(hub, w) for w in orphans[1:]]


class RingHealer(BaselineHealer):
    name = "ring"

    def _heal_edges(self, orphans: list[int]) -> list[tuple[int, int]]:
        if len(orphans) < 2:
            return []
        if len(orphans) == 2:
            return [(orphans[0], orphans[1])]
        pairs = list(zip(orphans, orphans[1:]))
        pairs.append((orphans[-1], orphans[0]))
        return pairs


@dataclass
class HaftRecord:
    haft: Haft
    assignment: dict[int, LeafSlot]


def _slot_key(slot: LeafSlot) -> tuple[int, tuple[int, int]]:
    return (slot.processor if slot.processor is not None else -1, slot.origin)


class HaftHealer(Healer):
    """Reconstruction-tree healer over a virtual graph.

    mode "haft" merges surviving complete subtrees by binary addition;
    mode "rebuild" rebuilds the whole affected region from its slots.
    With dedup_slots, the new slots of one deletion collapse to one per
    orphan processor (smallest origin kept); the default keeps one slot
    per consumed edge.
    """

    def __init__(self, mode: str = "haft", dedup_slots: bool = False):
        if mode not in ("haft", "rebuild"):
            raise HealerError(f"unknown mode {mode!r}")
        self.name = mode
        self.mode = mode
        self.dedup_slots = dedup_slots
        self.vg = VirtualGraph()
        self.hafts: dict[int, HaftRecord] = {}
        self.index: dict[int, set[int]] = {}
        self._next_haft_id = 0

    # -- lifecycle ---------------------------------------------------------

    def preprocess(self, initial: Graph) -> HealerReport:
        self.vg = VirtualGraph.from_graph(initial)
        self.hafts.clear()
        self.index.clear()
        self._next_haft_id = 0
        return HealerReport(
            messages=2 * initial.edge_count,
            rounds=1 if initial.edge_count else 0,
            touched=set(initial.nodes),
        )

    def on_insert(self, v: int, neighbors: set[int]) -> HealerReport:
        if v in self.vg.reals:
            raise HealerError(f"insert reuses live id {v}")
        if not neighbors:
            raise HealerError("insert must attach to at least one live node")
        for w in neighbors:
            if w not in self.vg.reals:
                raise UnknownNodeError(f"insert neighbor {w} is not live")
        self.vg.add_real_node(v)
        for w in sorted(neighbors):
            self.vg.add_edge(real(v), real(w))
        return HealerReport(
            messages=len(neighbors),
            rounds=1,
            touched={v} | set(neighbors),
            max_hops=1,
        )

    def on_delete(self, v: int) -> HealerReport:
        if v not in self.vg.reals:
            raise UnknownNodeError(f"processor {v} is not live")
        pre_live = self.live_graph()
        hops = pre_live.bfs_distances(v)
        notified = pre_live.neighbors(v)

        direct = sorted(
            w.id for w in self.vg.neighbors(real(v)) if w.kind == "r"
        )
        affected = sorted(self.index.get(v, set()))

        # Adversary's removal: v, everything v simulates, their edges.
        old_sim = dict(self.vg.sim)
        self.vg.remove_processor(v)

        # Snapshot after the adversary's damage; diffs below are healer work.
        mid_virtual_edges = self.vg.edge_set()
        mid_real_edges = _edge_set(self.vg.de_simulate())

        pieces: list[HaftNode] = []
        for hid in affected:
            rec = self._unregister(hid)
            tree_pieces, dissolved = split_out(rec.haft, v)
            pieces.extend(tree_pieces)
            for vid in dissolved:
                if vid in self.vg.virtuals:
                    self.vg.remove_virtual(vid)

        new_slots = [
            LeafSlot(processor=w, origin=(min(v, w), max(v, w)), endpoint=real(w))
            for w in direct
        ]
        if self.dedup_slots:
            by_proc: dict[int, LeafSlot] = {}
            for slot in sorted(new_slots, key=_slot_key):
                by_proc.setdefault(slot.processor, slot)
            new_slots = list(by_proc.values())

        if self.mode == "rebuild":
            survivors = [s for piece in pieces for s in _piece_slots(piece)]
            for vid in {x for piece in pieces for x in _piece_vids(piece)}:
                if vid in self.vg.virtuals:
                    self.vg.remove_virtual(vid)
            items: list[HaftNode] = [
                Leaf(s) for s in sorted(survivors + new_slots, key=_slot_key)
            ]
        else:
            items = sorted(pieces, key=_piece_key)
            items += [Leaf(s) for s in sorted(new_slots, key=_slot_key)]

        created_virtuals = self._install(items)

        post_virtual_edges = self.vg.edge_set()
        post_real_edges = _edge_set(self.vg.de_simulate())
        v_added = post_virtual_edges - mid_virtual_edges
        v_dropped = mid_virtual_edges - post_virtual_edges
        edges_added = post_real_edges - mid_real_edges
        edges_dropped = mid_real_edges - post_real_edges

        touched = set(notified)
        for a, b in edges_added | edges_dropped:
            touched.update((a, b))
        for a, b in v_added:
            touched.add(self.vg.processor_of(a))
            touched.add(self.vg.processor_of(b))
        for a, b in v_dropped:
            for x in (a, b):
                touched.add(x.id if x.kind == "r" else old_sim[x.id])

        messages = len(notified) + 2 * (len(v_added) + len(v_dropped)) + created_virtuals
        rounds = 1 + math.ceil(math.log2(len(touched))) if touched else 0
        max_hops = max((hops[p] for p in touched if p in hops), default=0)
        return HealerReport(
            edges_added=edges_added,
            edges_dropped=edges_dropped,
            virtual_nodes_created=created_virtuals,
            messages=messages,
            rounds=rounds,
            touched=touched,
            max_hops=max_hops,
        )

    def _install(self, items: list[HaftNode]) -> int:
        """Assemble the replacement structure and wire it into the virtual
        graph. Returns the number of virtual nodes created."""
        total = sum(leaf_count(it) for it in items)
        if total == 0:
            return 0
        if total == 1:
            return 0  # lone claimant: nothing left to connect
        if total == 2 and len(items) == 2:
            # Two separate single slots: direct real edge, no virtual nodes.
            procs = sorted({s.processor for it in items for s in _piece_slots(it)})
            if len(procs) == 2:
                self.vg.add_edge(real(procs[0]), real(procs[1]))
            return 0
        new_haft = _assemble(items, self.vg.vids)
        assignment = assign_simulators(new_haft)
        decls, vedges = to_virtual_edges(new_haft, assignment)
        created = 0
        for vid, proc in decls:
            if vid in self.vg.virtuals:
                if self.vg.sim[vid] != proc:
                    raise HealerError(
                        f"preserved vid {vid} changed simulator "
                        f"{self.vg.sim[vid]} -> {proc}"
                    )
            else:
                self.vg.declare_virtual(vid, proc)
                created += 1
        for a, b in vedges:
            self.vg.add_edge(a, b)
        self._register(new_haft, assignment)
        return created

    # -- views ---------------------------------------------------------------

    def live_graph(self) -> Graph:
        return self.vg.de_simulate()

    def virtual_node_count(self) -> int:
        return len(self.vg.virtuals)

    # -- bookkeeping -----------------------------------------------------------

    def _register(self, haft: Haft, assignment: dict[int, LeafSlot]) -> int:
        hid = self._next_haft_id
        self._next_haft_id += 1
        self.hafts[hid] = HaftRecord(haft, assignment)
        for slot in haft_slots(haft):
            self.index.setdefault(slot.processor, set()).add(hid)
        return hid

    def _unregister(self, hid: int) -> HaftRecord:
        rec = self.hafts.pop(hid)
        for slot in haft_slots(rec.haft):
            bucket = self.index.get(slot.processor)
            if bucket is not None:
                bucket.discard(hid)
                if not bucket:
                    del self.index[slot.processor]
        return rec

    def audit(self) -> list[str]:
        """State consistency: virtual graph invariants, haft shapes,
        assignment validity, index agreement."""
        problems = list(self.vg.audit())
        seen_vids: set[int] = set()
        seen_origins: set[tuple[int, int]] = set()
        for hid in sorted(self.hafts):
            rec = self.hafts[hid]
            for issue in validate_haft(rec.haft):
                problems.append(f"haft {hid}: {issue}")
            if assign_simulators(rec.haft) != rec.assignment:
                problems.append(f"haft {hid}: stale-assignment")
            decls, vedges = to_virtual_edges(rec.haft, rec.assignment)
            for vid, proc in decls:
                if vid in seen_vids:
                    problems.append(f"haft {hid}: vid {vid} in two hafts")
                seen_vids.add(vid)
                if vid not in self.vg.virtuals:
                    problems.append(f"haft {hid}: vid {vid} missing from virtual graph")
                elif self.vg.sim[vid] != proc:
                    problems.append(f"haft {hid}: vid {vid} simulator mismatch")
            for a, b in vedges:
                if not (self.vg.has_node(a) and b in self.vg.neighbors(a)):
                    problems.append(f"haft {hid}: edge {a}-{b} missing from virtual graph")
            for slot in haft_slots(rec.haft):
                if slot.origin in seen_origins:
                    problems.append(f"haft {hid}: origin {slot.origin} in two slots")
                seen_origins.add(slot.origin)
                if hid not in self.index.get(slot.processor, set()):
                    problems.append(f"haft {hid}: index misses processor {slot.processor}")
        if seen_vids != self.vg.virtuals:
            stray = sorted(self.vg.virtuals - seen_vids)
            problems.append(f"virtual nodes outside any haft: {stray}")
        for proc, hids in self.index.items():
            for hid in hids:
                if hid not in self.hafts:
                    problems.append(f"index: processor {proc} -> dead haft {hid}")
                elif all(s.processor != proc for s in haft_slots(self.hafts[hid].haft)):
                    problems.append(f"index: processor {proc} not in haft {hid}")
        return problems


def _piece_slots(node: HaftNode) -> list[LeafSlot]:
    if isinstance(node, Leaf):
        return [node.slot]
    return _piece_slots(node.left) + _piece_slots(node.right)


def _piece_vids(node: HaftNode) -> list[int]:
    if isinstance(node, Leaf):
        return []
    return [node.vid] + _piece_vids(node.left) + _piece_vids(node.right)


def _piece_key(node: HaftNode) -> tuple[int, tuple[int, tuple[int, int]]]:
    return (-leaf_count(node), min(_slot_key(s) for s in _piece_slots(node)))
def _edge_set(g: Graph) -> set[tuple[int, int]]:
    out: set[tuple[int, int]] = set()
    for u in g.nodes:
        for w in g.neighbors(u):
            out.add((u, w) if u < w else (w, u))
    return out
