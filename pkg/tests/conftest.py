"""Shared oracles and generators.

The oracles here are written from scratch against plain adjacency dicts so
they stay independent of the library code they check: breadth-first search
with an explicit queue, and Floyd-Warshall for all-pairs distances.
"""

from __future__ import annotations

import random
from collections import deque

from selfheal.graph import Graph
from selfheal.virtual_graph import VirtualGraph, real, virt

INF = float("inf")


# -- independent distance oracles ------------------------------------------


def oracle_bfs(adj: dict, source) -> dict:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def oracle_apsp_floyd(adj: dict) -> dict:
    """Floyd-Warshall over an adjacency dict; keys (u, v) for all pairs."""
    nodes = sorted(adj)
    dist = {(u, v): (0 if u == v else INF) for u in nodes for v in nodes}
    for u in nodes:
        for w in adj[u]:
            dist[(u, w)] = 1
            dist[(w, u)] = 1
    for k in nodes:
        for i in nodes:
            dik = dist[(i, k)]
            if dik is INF:
                continue
            for j in nodes:
                alt = dik + dist[(k, j)]
                if alt < dist[(i, j)]:
                    dist[(i, j)] = alt
    return dist


def adj_of(g: Graph) -> dict:
    return {v: g.neighbors(v) for v in g.nodes}


def vg_adj(vg: VirtualGraph) -> dict:
    nodes = [real(p) for p in vg.reals] + [virt(v) for v in vg.virtuals]
    return {x: vg.neighbors(x) for x in nodes}


# -- generators --------------------------------------------------------------


def random_graph(rng: random.Random, max_nodes: int = 24, p: float = 0.2) -> Graph:
    n = rng.randint(1, max_nodes)
    g = Graph(nodes=range(n))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                g.add_edge(u, v)
    return g


def random_virtual_graph(
    rng: random.Random, max_reals: int = 20, max_virtuals: int = 20
) -> VirtualGraph:
    vg = VirtualGraph()
    n_real = rng.randint(1, max_reals)
    for p in range(n_real):
        vg.add_real_node(p)
    for _ in range(rng.randint(0, max_virtuals)):
        vg.add_virtual_node(rng.randrange(n_real))
    nodes = [real(p) for p in range(n_real)] + [virt(v) for v in sorted(vg.virtuals)]
    if len(nodes) >= 2:
        for _ in range(rng.randint(0, 3 * len(nodes))):
            a, b = rng.sample(nodes, 2)
            vg.add_edge(a, b)
    return vg
