"""Virtual-graph layer: simulation map, cascade removal, de-simulation."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfheal.graph import DuplicateNodeError, UnknownNodeError
from selfheal.virtual_graph import VirtualGraph, real, virt

from conftest import oracle_bfs, random_virtual_graph, vg_adj


class TestAddNodes:
    def test_add_real(self):
        vg = VirtualGraph()
        vg.add_real_node(3)
        assert vg.reals == {3}
        vg.add_real_node(7)
        assert vg.reals == {3, 7}

    def test_duplicate_real(self):
        vg = VirtualGraph()
        vg.add_real_node(3)
        with pytest.raises(DuplicateNodeError):
            vg.add_real_node(3)

    def test_add_virtual(self):
        vg = VirtualGraph()
        vg.add_real_node(1)
        vid = vg.add_virtual_node(1)
        assert vid == 0
        assert vg.sim == {0: 1}

    def test_one_real_simulates_many(self):
        vg = VirtualGraph()
        vg.add_real_node(1)
        vg.add_real_node(2)
        a = vg.add_virtual_node(1)
        b = vg.add_virtual_node(1)
        assert (a, b) == (0, 1)
        assert vg.sim == {0: 1, 1: 1}

    def test_unknown_simulator(self):
        vg = VirtualGraph()
        with pytest.raises(UnknownNodeError):
            vg.add_virtual_node(9)

    def test_vids_never_reused(self):
        vg = VirtualGraph()
        vg.add_real_node(1)
        vid = vg.add_virtual_node(1)
        vg.remove_virtual(vid)
        assert vg.add_virtual_node(1) == vid + 1
        with pytest.raises(DuplicateNodeError):
            vg.declare_virtual(vid, 1)


class TestRemoveProcessor:
    def test_cascade_with_orphan_report(self):
        # reals {1, 2}, virtual h simulated by 1, edge (h, 2); removing 1
        # removes h too and reports h's orphaned neighbor 2.
        vg = VirtualGraph()
        vg.add_real_node(1)
        vg.add_real_node(2)
        h = vg.add_virtual_node(1)
        vg.add_edge(virt(h), real(2))
        report = vg.remove_processor(1)
        assert vg.reals == {2}
        assert vg.virtuals == set()
        assert report == {real(1): set(), virt(h): {real(2)}}

    def test_last_node(self):
        vg = VirtualGraph()
        vg.add_real_node(1)
        report = vg.remove_processor(1)
        assert vg.reals == set()
        assert report == {real(1): set()}

    def test_unknown(self):
        vg = VirtualGraph()
        with pytest.raises(UnknownNodeError):
            vg.remove_processor(4)


class TestDeSimulate:
    def test_collapsing_image(self):
        # reals {1,2,3}; virtual h sim by 1; edges (h,2), (h,3), (1,2).
        # Image of (h,2) collapses with (1,2); image set {(1,2),(1,3)}.
        vg = VirtualGraph()
        for p in (1, 2, 3):
            vg.add_real_node(p)
        h = vg.add_virtual_node(1)
        vg.add_edge(virt(h), real(2))
        vg.add_edge(virt(h), real(3))
        vg.add_edge(real(1), real(2))
        image = vg.de_simulate()
        assert set(image.edges()) == {(1, 2), (1, 3)}

    def test_identity_without_virtuals(self):
        vg = VirtualGraph()
        vg.add_real_node(1)
        vg.add_real_node(2)
        vg.add_edge(real(1), real(2))
        image = vg.de_simulate()
        assert image.nodes == {1, 2}
        assert set(image.edges()) == {(1, 2)}

    def test_self_loop_image_dropped(self):
        vg = VirtualGraph()
        vg.add_real_node(1)
        h = vg.add_virtual_node(1)
        vg.add_edge(virt(h), real(1))
        image = vg.de_simulate()
        assert set(image.edges()) == set()
        assert image.nodes == {1}


class TestAudit:
    def test_clean(self):
        rng = random.Random(1)
        assert random_virtual_graph(rng).audit() == []

    def test_dangling_simulator(self):
        vg = VirtualGraph()
        vg.add_real_node(1)
        h = vg.add_virtual_node(1)
        vg.sim[h] = 99  # corrupt
        assert any(p.startswith("dangling-simulator") for p in vg.audit())

    def test_dangling_edge(self):
        vg = VirtualGraph()
        vg.add_real_node(1)
        vg.add_real_node(2)
        vg.add_edge(real(1), real(2))
        vg._adj[real(1)].add(virt(42))  # corrupt
        assert any(p.startswith("dangling-edge") for p in vg.audit())


class TestDot:
    def test_shapes_and_labels(self):
        vg = VirtualGraph()
        vg.add_real_node(3)
        h = vg.add_virtual_node(3)
        vg.add_edge(virt(h), real(3))
        dot = vg.to_dot()
        assert 'shape=circle, label="3"' in dot
        assert f'shape=triangle, label="{h}/3"' in dot
        assert '"r3" -- "v0";' in dot


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_distance_transfer_inequality(seed):
    # dist_image(H(u), H(v)) <= dist_virtual(u, v) for every pair.
    vg = random_virtual_graph(random.Random(seed))
    adj = vg_adj(vg)
    image = vg.de_simulate()
    image_adj = {v: image.neighbors(v) for v in image.nodes}
    for u in adj:
        du = oracle_bfs(adj, u)
        hu = oracle_bfs(image_adj, vg.processor_of(u))
        for v, d in du.items():
            assert hu[vg.processor_of(v)] <= d


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_degree_sum_inequality(seed):
    # deg_image(p) <= deg(real p) + sum of deg(virtual v) over sim[v] == p.
    vg = random_virtual_graph(random.Random(seed))
    image = vg.de_simulate()
    for p in vg.reals:
        preimage_total = vg.degree(real(p)) + sum(
            vg.degree(virt(v)) for v in vg.virtuals if vg.sim[v] == p
        )
        assert image.degree(p) <= preimage_total


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_de_simulate_is_identity_on_virtual_free_graphs(seed):
    rng = random.Random(seed)
    vg = random_virtual_graph(rng, max_virtuals=0)
    image = vg.de_simulate()
    assert image.nodes == vg.reals
    expected = {(min(a.id, b.id), max(a.id, b.id)) for a, b in vg.edges()}
    assert set(image.edges()) == expected
