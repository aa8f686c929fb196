"""Initial-graph families for trace generation and benchmarks."""

from __future__ import annotations

import random

from .graph import Graph

FAMILY_NAMES = ("path", "star", "random-tree", "erdos-renyi")


def path_graph(n: int) -> Graph:
    g = Graph(nodes=range(n))
    for i in range(n - 1):
        g.add_edge(i, i + 1)
    return g


def star_graph(n: int) -> Graph:
    """Center 0 plus n-1 leaves."""
    g = Graph(nodes=range(n))
    for i in range(1, n):
        g.add_edge(0, i)
    return g


def random_tree(n: int, rng: random.Random) -> Graph:
    """Random attachment tree: node i picks a parent uniformly among 0..i-1."""
    g = Graph(nodes=range(n))
    for i in range(1, n):
        g.add_edge(i, rng.randrange(i))
    return g


def erdos_renyi(n: int, p: float, rng: random.Random) -> Graph:
    g = Graph(nodes=range(n))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                g.add_edge(u, v)
    return g


def connected_erdos_renyi(
    n: int, p: float, rng: random.Random, max_tries: int = 1000
) -> Graph:
    """Resample until connected (the usual conditioning at these densities)."""
    for _ in range(max_tries):
        g = erdos_renyi(n, p, rng)
        if g.is_connected():
            return g
    raise ValueError(f"no connected G({n}, {p}) after {max_tries} tries")


def make_family(name: str, n: int, p: float, rng: random.Random) -> Graph:
    if name == "path":
        return path_graph(n)
    if name == "star":
        return star_graph(n)
    if name == "random-tree":
        return random_tree(n, rng)
    if name == "erdos-renyi":
        return connected_erdos_renyi(n, p, rng)
    raise ValueError(f"unknown graph family {name!r}; expected one of {FAMILY_NAMES}")
