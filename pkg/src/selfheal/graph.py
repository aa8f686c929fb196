"""Undirected simple graphs over integer node ids, plus the classic algorithms.

Everything downstream (virtual graphs, healers, metrics) builds on this module.
Graphs are plain dict-of-sets adjacency structures; node ids are non-negative
integers that are never reused within a run, even after deletion.

Distances are computed by breadth-first traversal. At desk scale we recompute
per query instead of maintaining dynamic-connectivity structures.

Concurrency contract: a Graph is either exclusively owned while being mutated
or treated as immutable once shared; instances hold no hidden shared state and
may be handed freely between threads.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator

INF = float("inf")


class GraphError(ValueError):
    """Base class for graph contract violations."""


class DuplicateNodeError(GraphError):
    pass


class UnknownNodeError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class Graph:
    """Undirected simple graph: no self-loops, no parallel edges."""

    __slots__ = ("_adj",)

    def __init__(self, nodes: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()):
        self._adj: dict[int, set[int]] = {}
        for v in nodes:
            self.add_node(v)
        for u, v in edges:
            for x in (u, v):
                if x not in self._adj:
                    self.add_node(x)
            self.add_edge(u, v)

    # -- basic accessors -------------------------------------------------

    @property
    def nodes(self) -> set[int]:
        return set(self._adj)

    @property
    def node_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2

    def has_node(self, v: int) -> bool:
        return v in self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def neighbors(self, v: int) -> set[int]:
        if v not in self._adj:
            raise UnknownNodeError(f"node {v} not in graph")
        return set(self._adj[v])

    def degree(self, v: int) -> int:
        if v not in self._adj:
            raise UnknownNodeError(f"node {v} not in graph")
        return len(self._adj[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Each edge once, as (min, max), in sorted order."""
        for u in sorted(self._adj):
            for v in sorted(self._adj[u]):
                if u < v:
                    yield (u, v)

    def copy(self) -> "Graph":
        g = Graph()
        g._adj = {v: set(nbrs) for v, nbrs in self._adj.items()}
        return g

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(nodes={self.node_count}, edges={self.edge_count})"

    # -- mutation --------------------------------------------------------

    def add_node(self, v: int) -> None:
        if v in self._adj:
            raise DuplicateNodeError(f"node {v} already present")
        self._adj[v] = set()

    def add_edge(self, u: int, v: int) -> bool:
        """Add edge u-v. Returns False (and changes nothing) if already present."""
        if u == v:
            raise SelfLoopError(f"self-loop at {u}")
        for x in (u, v):
            if x not in self._adj:
                raise UnknownNodeError(f"node {x} not in graph")
        if v in self._adj[u]:
            return False
        self._adj[u].add(v)
        self._adj[v].add(u)
        return True

    def remove_node(self, v: int) -> set[int]:
        """Remove v and its incident edges; returns the former neighbors."""
        if v not in self._adj:
            raise UnknownNodeError(f"node {v} not in graph")
        orphans = self._adj.pop(v)
        for u in orphans:
            self._adj[u].discard(v)
        return orphans

    # -- traversal & distances -------------------------------------------

    def bfs_distances(self, source: int) -> dict[int, int]:
        if source not in self._adj:
            raise UnknownNodeError(f"node {source} not in graph")
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            d = dist[u] + 1
            for w in self._adj[u]:
                if w not in dist:
                    dist[w] = d
                    queue.append(w)
        return dist

    def is_connected(self) -> bool:
        """Empty and singleton graphs count as connected."""
        if len(self._adj) <= 1:
            return True
        start = next(iter(self._adj))
        return len(self.bfs_distances(start)) == len(self._adj)

    def component_count(self) -> int:
        seen: set[int] = set()
        count = 0
        for v in self._adj:
            if v not in seen:
                count += 1
                seen.update(self.bfs_distances(v))
        return count

    def distance(self, u: int, v: int) -> float:
        """Minimum hop count, 0 for u == v, INF when disconnected."""
        if v not in self._adj:
            raise UnknownNodeError(f"node {v} not in graph")
        dist = self.bfs_distances(u)
        return dist.get(v, INF)

    def diameter(self) -> float:
        """Max pairwise distance; 0 for <= 1 node, INF when disconnected."""
        if len(self._adj) <= 1:
            return 0
        best = 0
        for v in self._adj:
            dist = self.bfs_distances(v)
            if len(dist) != len(self._adj):
                return INF
            ecc = max(dist.values())
            if ecc > best:
                best = ecc
        return best

    def articulation_points(self) -> list[int]:
        """Cut vertices, ascending. Brute force: remove, compare component counts."""
        base = self.component_count()
        cuts = []
        for v in sorted(self._adj):
            if len(self._adj) == 1:
                break
            g = self.copy()
            g.remove_node(v)
            if g.component_count() > base:
                cuts.append(v)
        return cuts

    def audit(self) -> list[str]:
        """Invariant walk: adjacency symmetry, no self-loops, key consistency."""
        problems = []
        for u, nbrs in self._adj.items():
            if u in nbrs:
                problems.append(f"self-loop: {u}")
            for v in nbrs:
                if v not in self._adj:
                    problems.append(f"dangling-edge: {u}-{v}")
                elif u not in self._adj[v]:
                    problems.append(f"asymmetric-adjacency: {u}-{v}")
        return problems

    def to_dot(self, name: str = "g") -> str:
        lines = [f"graph {name} {{"]
        for v in sorted(self._adj):
            lines.append(f'  "{v}";')
        for u, v in self.edges():
            lines.append(f'  "{u}" -- "{v}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- edge-list text format ------------------------------------------------
#
# One "u v" pair per line, whitespace separated, '#' starts a comment.
# A line with a single token declares an isolated node so any graph
# round-trips.


def parse_edge_list(text: str) -> Graph:
    g = Graph()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            v = _parse_id(parts[0], lineno)
            if v not in g:
                g.add_node(v)
        elif len(parts) == 2:
            u, v = (_parse_id(p, lineno) for p in parts)
            for x in (u, v):
                if x not in g:
                    g.add_node(x)
            g.add_edge(u, v)
        else:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
    return g


def _parse_id(token: str, lineno: int) -> int:
    try:
        v = int(token)
    except ValueError:
        raise GraphError(f"line {lineno}: bad node id {token!r}") from None
    if v < 0:
        raise GraphError(f"line {lineno}: negative node id {v}")
    return v


def format_edge_list(g: Graph) -> str:
    lines = []
    seen: set[int] = set()
    for u, v in g.edges():
        lines.append(f"{u} {v}")
        seen.add(u)
        seen.add(v)
    for v in sorted(g.nodes - seen):
        lines.append(f"{v}")
    return "\n".join(lines) + ("\n" if lines else "")


def load_edge_list(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def dump_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g))
