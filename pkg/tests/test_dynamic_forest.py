"""Tests for the Euler-tour forest.

Oracle strategy: every randomized script is replayed against a shadow
model that stores the forest as an explicit edge set plus a per-vertex
weight table, recomputing components and XOR folds from scratch. The
structure under test must agree after every single operation.
"""

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from xorforest.dynamic_forest import EulerTourForest


class ForestShadow:
    """Explicit edge-set model recomputed from scratch on demand."""

    def __init__(self, n, levels):
        self.n = n
        self.levels = levels
        self.edges = set()
        self.vals = [[0] * levels for _ in range(n)]

    def link(self, u, v):
        self.edges.add((min(u, v), max(u, v)))

    def cut(self, u, v):
        self.edges.remove((min(u, v), max(u, v)))

    def xor_update(self, v, level, name):
        self.vals[v][level] ^= name

    def component(self, v):
        adj = {w: [] for w in range(self.n)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {v}
        frontier = [v]
        while frontier:
            x = frontier.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)

    def component_xor(self, v, level):
        out = 0
        for w in self.component(v):
            out ^= self.vals[w][level]
        return out


def check_against_shadow(forest, shadow):
    """Compare every component's size and every channel's fold."""
    done = set()
    for v in range(shadow.n):
        comp = shadow.component(v)
        if comp in done:
            continue
        done.add(comp)
        t = forest.tree_of(v)
        assert forest.tree_size(t) == len(comp)
        assert set(forest.tree_vertices(t)) == set(comp)
        for w in comp:
            assert forest.tree_of(w) == t
        for level in range(shadow.levels):
            assert forest.tree_xor(t, level) == shadow.component_xor(v, level)


def run_script(n, levels, steps, seed):
    rng = random.Random(seed)
    forest = EulerTourForest(n, levels, seed=seed)
    shadow = ForestShadow(n, levels)
    max_name = n * (n + 1) + n
    for _ in range(steps):
        roll = rng.random()
        u = rng.randrange(n)
        v = rng.randrange(n)
        if roll < 0.45 and u != v:
            if forest.tree_of(u) != forest.tree_of(v):
                forest.link(u, v)
                shadow.link(u, v)
        elif roll < 0.65 and shadow.edges:
            a, b = rng.choice(sorted(shadow.edges))
            forest.cut(a, b)
            shadow.cut(a, b)
        else:
            level = rng.randrange(levels)
            name = rng.randrange(1, max_name + 1)
            forest.xor_update(u, level, name)
            shadow.xor_update(u, level, name)
        check_against_shadow(forest, shadow)
        forest.check_consistency()
    return forest, shadow


def test_single_vertex():
    forest = EulerTourForest(1, 2, seed=0, stride=8)
    t = forest.tree_of(0)
    assert forest.tree_size(t) == 1
    assert forest.tree_xor(t, 0) == 0
    forest.xor_update(0, 1, 9)
    assert forest.tree_xor(forest.tree_of(0), 1) == 9
    assert forest.tree_xor(forest.tree_of(0), 0) == 0


def test_link_then_cut_pair():
    forest = EulerTourForest(2, 1, seed=1)
    forest.xor_update(0, 0, 5)
    forest.xor_update(1, 0, 12)
    forest.link(0, 1)
    t = forest.tree_of(0)
    assert forest.tree_of(1) == t
    assert forest.tree_size(t) == 2
    assert forest.tree_xor(t, 0) == 5 ^ 12
    forest.cut(0, 1)
    assert forest.tree_of(0) != forest.tree_of(1)
    assert forest.tree_xor(forest.tree_of(0), 0) == 5
    assert forest.tree_xor(forest.tree_of(1), 0) == 12


def test_tour_shape_path():
    # a path on 4 vertices has a tour of 3*4 - 2 = 10 entries
    forest = EulerTourForest(4, 1, seed=2)
    forest.link(0, 1)
    forest.link(1, 2)
    forest.link(2, 3)
    entries = list(forest.tour(forest.tree_of(0)))
    assert len(entries) == 10
    assert sum(1 for h, t in entries if h == t) == 4
    arcs = [(h, t) for h, t in entries if h != t]
    assert sorted(arcs) == sorted(
        [(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2)]
    )


def test_cut_detaches_correct_side():
    # star center 0 with leaves 1..4; cutting one spoke isolates its leaf
    forest = EulerTourForest(5, 1, seed=3)
    for leaf in (1, 2, 3, 4):
        forest.link(0, leaf)
    forest.cut(0, 3)
    assert forest.tree_size(forest.tree_of(3)) == 1
    assert forest.tree_size(forest.tree_of(0)) == 4
    assert forest.tree_of(3) != forest.tree_of(0)
    for leaf in (1, 2, 4):
        assert forest.tree_of(leaf) == forest.tree_of(0)


@pytest.mark.parametrize("n,steps,seed", [
    (2, 60, 11),
    (3, 120, 12),
    (8, 250, 13),
    (17, 300, 14),
    (40, 350, 15),
])
def test_random_scripts_match_shadow(n, steps, seed):
    run_script(n, levels=3, steps=steps, seed=seed)


def test_packed_update_matches_per_level():
    n, levels = 12, 4
    stride = (n * (n + 1) + n).bit_length()
    a = EulerTourForest(n, levels, seed=77)
    b = EulerTourForest(n, levels, seed=77)
    rng = random.Random(99)
    for v in range(n - 1):
        a.link(v, v + 1)
        b.link(v, v + 1)
    for _ in range(200):
        v = rng.randrange(n)
        names = [rng.randrange(0, 1 << stride) for _ in range(levels)]
        packed = 0
        for level, name in enumerate(names):
            a.xor_update(v, level, name)
            packed |= name << (stride * level)
        b.xor_update_packed(v, packed)
    ta, tb = a.tree_of(0), b.tree_of(0)
    assert a.tree_agg(ta) == b.tree_agg(tb)
    for level in range(levels):
        assert a.tree_xor(ta, level) == b.tree_xor(tb, level)


def test_same_seed_same_structure():
    script = [("link", 0, 1), ("link", 2, 3), ("link", 1, 2),
              ("cut", 2, 3), ("link", 3, 4), ("link", 2, 3)]
    aggs = []
    for _ in range(2):
        forest = EulerTourForest(6, 2, seed=4242)
        forest.xor_update(4, 1, 31)
        for op, u, v in script:
            getattr(forest, op)(u, v)
        t = forest.tree_of(0)
        aggs.append((forest.tree_size(t), forest.tree_agg(t),
                     forest.depth_profile()))
    assert aggs[0] == aggs[1]


def test_tree_depth_stays_logarithmic():
    # Randomized rebalancing must keep node depths logarithmic in the
    # tour size; a degenerate treap would show depths near the node
    # count (766 here) instead. Expected mean is ~1.4 log2 N and max
    # ~3 log2 N, so the factors below have ample slack without letting
    # linear-depth bugs through.
    n, steps, seed = 256, 4000, 5
    rng = random.Random(seed)
    forest = EulerTourForest(n, 3, seed=seed)
    edges = set()
    for _ in range(steps):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if rng.random() < 0.55 and u != v:
            if forest.tree_of(u) != forest.tree_of(v):
                forest.link(u, v)
                edges.add((min(u, v), max(u, v)))
        elif edges:
            a, b = rng.choice(sorted(edges))
            forest.cut(a, b)
            edges.remove((a, b))
    bound = math.log2(3 * n)
    deepest, mean = forest.depth_profile()
    assert mean <= 3 * bound
    assert deepest <= 8 * bound


def test_link_same_tree_rejected():
    forest = EulerTourForest(3, 1, seed=6)
    forest.link(0, 1)
    forest.link(1, 2)
    with pytest.raises(ValueError):
        forest.link(0, 2)
    with pytest.raises(ValueError):
        forest.link(0, 0)


def test_cut_missing_edge_rejected():
    forest = EulerTourForest(3, 1, seed=7)
    forest.link(0, 1)
    with pytest.raises(ValueError):
        forest.cut(1, 2)
    forest.cut(0, 1)
    with pytest.raises(ValueError):
        forest.cut(0, 1)


def test_level_out_of_range_rejected():
    forest = EulerTourForest(3, 2, seed=8)
    with pytest.raises(ValueError):
        forest.xor_update(0, 2, 1)
    with pytest.raises(ValueError):
        forest.tree_xor(forest.tree_of(0), -1)


def test_stale_tree_name_rejected():
    forest = EulerTourForest(4, 1, seed=9)
    forest.link(0, 1)
    t = forest.tree_of(1)
    forest.link(1, 2)
    stale = t if forest._parent[t] != -1 else None
    if stale is not None:
        with pytest.raises(ValueError):
            forest.tree_size(stale)


def test_tree_edges_enumeration():
    forest = EulerTourForest(6, 1, seed=10)
    forest.link(0, 1)
    forest.link(4, 2)
    forest.link(1, 4)
    assert sorted(forest.tree_edges()) == [(0, 1), (1, 4), (2, 4)]
    forest.cut(1, 4)
    assert sorted(forest.tree_edges()) == [(0, 1), (2, 4)]


def test_constructor_contracts():
    with pytest.raises(ValueError):
        EulerTourForest(0, 1)
    with pytest.raises(ValueError):
        EulerTourForest(4, 0)


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(min_value=2, max_value=14),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_random_scripts_property(n, seed):
    run_script(n, levels=2, steps=40, seed=seed)
