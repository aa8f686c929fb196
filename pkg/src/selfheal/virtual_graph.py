"""Virtual graphs: real nodes, simulated helper nodes, and de-simulation.

A virtual graph partitions its nodes into *real* nodes (one per live
processor) and *virtual* nodes, each simulated by exactly one real node.
Mapping every node to its simulating processor and taking edge images is a
graph homomorphism onto the real graph; `de_simulate` materializes that
image. Parallel images collapse and self-loop images are dropped, so the
real graph is always a simple graph whose edges are exactly the images of
the virtual-graph edges.

Two consequences of the homomorphism that downstream bounds lean on, and
that the property tests check against a breadth-first oracle:

* image distances never exceed virtual-graph distances, and
* a processor's image degree never exceeds the sum of the virtual-graph
  degrees of its real node and all virtual nodes it simulates.

Virtual-node ids come from a monotone per-run counter and are never reused,
even after removal. A virtual node cannot outlive its simulator: removing a
processor cascades to everything it simulates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .graph import DuplicateNodeError, Graph, UnknownNodeError


@dataclass(frozen=True, order=True)
class VNode:
    """Node id in a virtual graph: kind 'r' wraps a processor id, 'v' a vid."""

    kind: str
    id: int

    def __repr__(self) -> str:
        return f"{self.kind}{self.id}"


def real(processor: int) -> VNode:
    return VNode("r", processor)


def virt(vid: int) -> VNode:
    return VNode("v", vid)


class VidSource:
    """Monotone counter handing out virtual-node ids; ids are never reused."""

    __slots__ = ("_next",)

    def __init__(self, start: int = 0):
        self._next = start

    def take(self) -> int:
        vid = self._next
        self._next += 1
        return vid

    @property
    def next_vid(self) -> int:
        return self._next


class VirtualGraph:
    """Simple graph over VNodes with a total simulation map on virtual nodes."""

    def __init__(self, vids: VidSource | None = None):
        self.reals: set[int] = set()
        self.virtuals: set[int] = set()
        self.sim: dict[int, int] = {}
        self.vids = vids if vids is not None else VidSource()
        self._adj: dict[VNode, set[VNode]] = {}
        self._spent_vids: set[int] = set()

    # -- construction -----------------------------------------------------

    @classmethod
    def from_graph(cls, g: Graph) -> "VirtualGraph":
        """Lift a real graph: every node real, no virtual nodes."""
        vg = cls()
        for v in sorted(g.nodes):
            vg.add_real_node(v)
        for u, v in g.edges():
            vg.add_edge(real(u), real(v))
        return vg

    def add_real_node(self, processor: int) -> None:
        if processor in self.reals:
            raise DuplicateNodeError(f"real node {processor} already present")
        self.reals.add(processor)
        self._adj[real(processor)] = set()

    def add_virtual_node(self, simulator: int) -> int:
        """Mint a fresh vid simulated by `simulator`."""
        if simulator not in self.reals:
            raise UnknownNodeError(f"simulator {simulator} is not a real node")
        vid = self.vids.take()
        self.declare_virtual(vid, simulator)
        return vid

    def declare_virtual(self, vid: int, simulator: int) -> None:
        """Register a vid already minted from this graph's VidSource.

        Lets callers build structures (e.g. reconstruction trees) with fresh
        vids before wiring them in. A vid can be declared at most once per
        run, matching the no-reuse invariant.
        """
        if simulator not in self.reals:
            raise UnknownNodeError(f"simulator {simulator} is not a real node")
        if vid in self._spent_vids:
            raise DuplicateNodeError(f"vid {vid} was already used in this run")
        if vid >= self.vids.next_vid:
            raise UnknownNodeError(f"vid {vid} was not minted from this graph's counter")
        self._spent_vids.add(vid)
        self.virtuals.add(vid)
        self.sim[vid] = simulator
        self._adj[virt(vid)] = set()

    def add_edge(self, a: VNode, b: VNode) -> bool:
        """Add edge a-b; returns False if already present."""
        if a == b:
            raise UnknownNodeError(f"self-loop at {a}")
        for x in (a, b):
            if x not in self._adj:
                raise UnknownNodeError(f"{x} not in virtual graph")
        if b in self._adj[a]:
            return False
        self._adj[a].add(b)
        self._adj[b].add(a)
        return True

    # -- removal ----------------------------------------------------------

    def remove_processor(self, processor: int) -> dict[VNode, set[VNode]]:
        """Remove a processor, cascading to every virtual node it simulates.

        Returns the orphan report: each removed VNode mapped to the full set
        of its former neighbors (co-removed neighbors included); callers
        filter for survivors.
        """
        if processor not in self.reals:
            raise UnknownNodeError(f"real node {processor} not present")
        doomed = [real(processor)]
        doomed += [virt(vid) for vid in sorted(self.virtuals) if self.sim[vid] == processor]
        report: dict[VNode, set[VNode]] = {}
        for node in doomed:
            report[node] = set(self._adj[node])
        for node in doomed:
            self._detach(node)
        self.reals.discard(processor)
        for node in doomed:
            if node.kind == "v":
                self.virtuals.discard(node.id)
                self.sim.pop(node.id, None)
        return report

    def remove_virtual(self, vid: int) -> set[VNode]:
        """Dissolve one virtual node; returns its former neighbors."""
        if vid not in self.virtuals:
            raise UnknownNodeError(f"virtual node {vid} not present")
        node = virt(vid)
        former = set(self._adj[node])
        self._detach(node)
        self.virtuals.discard(vid)
        del self.sim[vid]
        return former

    def _detach(self, node: VNode) -> None:
        for nbr in self._adj.pop(node):
            self._adj[nbr].discard(node)

    # -- views ------------------------------------------------------------

    def has_node(self, x: VNode) -> bool:
        return x in self._adj

    def neighbors(self, x: VNode) -> set[VNode]:
        if x not in self._adj:
            raise UnknownNodeError(f"{x} not in virtual graph")
        return set(self._adj[x])

    def degree(self, x: VNode) -> int:
        if x not in self._adj:
            raise UnknownNodeError(f"{x} not in virtual graph")
        return len(self._adj[x])

    def edges(self) -> Iterator[tuple[VNode, VNode]]:
        for a in sorted(self._adj):
            for b in sorted(self._adj[a]):
                if a < b:
                    yield (a, b)

    @property
    def edge_count(self) -> int:
        return sum(len(n) for n in self._adj.values()) // 2

    def processor_of(self, x: VNode) -> int:
        """The homomorphism H: a real node is its own processor."""
        if x.kind == "r":
            return x.id
        return self.sim[x.id]

    # -- de-simulation ------------------------------------------------------

    def de_simulate(self) -> Graph:
        """Homomorphic image: nodes are the live processors, edges the images
        of virtual-graph edges (self-loop images dropped, parallels collapsed)."""
        g = Graph()
        adj = {p: set() for p in self.reals}
        sim = self.sim
        for a, nbrs in self._adj.items():
            pa = a.id if a.kind == "r" else sim[a.id]
            row = adj[pa]
            for b in nbrs:
                pb = b.id if b.kind == "r" else sim[b.id]
                if pa != pb:
                    row.add(pb)
        g._adj = adj
        return g

    def edge_set(self) -> set[tuple[VNode, VNode]]:
        """All edges as canonically ordered pairs (no sorting of the set)."""
        out: set[tuple[VNode, VNode]] = set()
        for a, nbrs in self._adj.items():
            for b in nbrs:
                out.add((a, b) if a < b else (b, a))
        return out

    # -- diagnostics --------------------------------------------------------

    def audit(self) -> list[str]:
        """Machine-readable invariant check; empty list means healthy."""
        problems = []
        for vid in sorted(self.virtuals):
            if vid not in self.sim:
                problems.append(f"sim-missing: {vid}")
            elif self.sim[vid] not in self.reals:
                problems.append(f"dangling-simulator: {vid}->{self.sim[vid]}")
        for vid in sorted(self.sim):
            if vid not in self.virtuals:
                problems.append(f"sim-orphan: {vid}")
        expected = {real(p) for p in self.reals} | {virt(v) for v in self.virtuals}
        for node in sorted(self._adj):
            if node not in expected:
                problems.append(f"unknown-adjacency-key: {node}")
        for node in sorted(expected):
            if node not in self._adj:
                problems.append(f"missing-adjacency-key: {node}")
        for a in sorted(self._adj):
            if a in self._adj[a]:
                problems.append(f"self-loop: {a}")
            for b in self._adj[a]:
                if b not in self._adj:
                    problems.append(f"dangling-edge: {a}-{b}")
                elif a not in self._adj[b]:
                    problems.append(f"asymmetric-adjacency: {a}-{b}")
        return problems

    def to_dot(self, name: str = "virtual") -> str:
        """Debug DOT export: circles for real nodes, triangles labeled
        "vid/simulator" for virtual ones."""
        lines = [f"graph {name} {{"]
        for p in sorted(self.reals):
            lines.append(f'  "r{p}" [shape=circle, label="{p}"];')
        for vid in sorted(self.virtuals):
            lines.append(f'  "v{vid}" [shape=triangle, label="{vid}/{self.sim[vid]}"];')
        for a, b in self.edges():
            lines.append(f'  "{a}" -- "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return (
            f"VirtualGraph(reals={len(self.reals)}, virtuals={len(self.virtuals)}, "
            f"edges={self.edge_count})"
        )
