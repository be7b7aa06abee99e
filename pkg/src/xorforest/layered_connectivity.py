"""Layered fully dynamic connectivity with one-sided error.

A stack of ell+1 cut-recovery structures maintains nested forests
F_0 <= F_1 <= ... <= F_ell over the same dynamic graph. Layer ell's
forest answers queries; the lower layers exist to re-knit trees after
tree-edge deletions, each layer feeding replacement edges to the ones
above it. An edge's `level` is the lowest layer at which it is a tree
edge (None for non-tree edges); nesting makes per-layer membership an
interval property, so one integer replaces a per-layer bit vector.

Query errors are one-sided by construction: every tree edge is a real
graph edge, so "connected" answers are always genuinely true; a
"disconnected" answer can be wrong only when every relevant layer
failed to recover a replacement edge, which the layer count makes
vanishingly rare.

Single-writer: serialize all calls on one instance.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from xorforest.cutset import Cutset


class StateCorruptionError(RuntimeError):
    """Internal invariants failed; the structure can no longer be trusted."""


@dataclass
class InvariantReport:
    """Violation tallies from one `check_invariants` pass.

    The structural counters must always be zero; the growth fields are
    populated only by full (non-structure_only) passes and may be
    legitimately nonzero, bounded by the failure probability.
    """

    num_layers: int
    nesting_violations: int = 0
    acyclicity_violations: int = 0
    subset_violations: int = 0
    monotonicity_violations: int = 0
    level_map_violations: int = 0
    table_violations: int = 0
    invariant1_violations: list[int] | None = None  # per layer 0..ell-1
    undersized_nonmaximal: list[int] | None = None  # per layer 0..ell
    top_partition_exact: bool | None = None

    def structural_ok(self) -> bool:
        return (
            self.nesting_violations == 0
            and self.acyclicity_violations == 0
            and self.subset_violations == 0
            and self.monotonicity_violations == 0
            and self.level_map_violations == 0
            and self.table_violations == 0
        )


class LayerStack:
    """Fully dynamic connectivity over vertices [0, n).

    `c_factor` scales the layer count: ell = ceil(c_factor * log2(n)).
    `families` is passed through to each layer's cut structure.
    `num_layers` overrides the layer count directly (benchmark
    configurations); `cutset_factory(index, seed)` overrides how each
    layer's structure is built, for composing boosted variants.
    """

    def __init__(self, n: int, seed: int | None = None, c_factor: int = 4,
                 families: int = 3, num_layers: int | None = None,
                 cutset_factory=None):
        if n < 2:
            raise ValueError("need at least two vertices")
        if num_layers is None:
            if c_factor < 1:
                raise ValueError("layer factor must be positive")
            self.ell = math.ceil(c_factor * math.log2(n))
        else:
            if num_layers < 2:
                raise ValueError("need at least two layers")
            self.ell = num_layers - 1
        self.n = n
        rng = random.Random(seed)
        if cutset_factory is None:
            cutset_factory = lambda index, s: Cutset(n, families=families, seed=s)
        self.layers = [
            cutset_factory(i, rng.getrandbits(64)) for i in range(self.ell + 1)
        ]
        self.codec = self.layers[0].codec
        # name -> level (minimal layer where e is a tree edge), or None
        # for a non-tree edge; key present exactly when e is in G
        self.edge_level: dict[int, int | None] = {}

    @property
    def num_layers(self) -> int:
        return self.ell + 1

    def num_edges(self) -> int:
        return len(self.edge_level)

    def cutset_ops(self) -> int:
        """Total cut-structure operations performed so far, all layers."""
        return sum(lay.op_count for lay in self.layers)

    # -- the three public graph operations ------------------------------------

    def insert(self, u: int, v: int) -> None:
        """Insert edge {u, v}; it must not be present."""
        name = self.codec.encode(u, v)
        if name in self.edge_level:
            raise ValueError(f"insert({u}, {v}): edge already present")
        top = self.layers[self.ell]
        disjoint = top.tree(u) != top.tree(v)
        for lay in self.layers:
            lay.insert_edge(u, v)
        if disjoint:
            for lay in self.layers:
                lay.insert_tree_edge(u, v)
            self.edge_level[name] = 0
        else:
            self.edge_level[name] = None

    def delete(self, u: int, v: int) -> None:
        """Delete edge {u, v}; it must be present."""
        name = self.codec.encode(u, v)
        if name not in self.edge_level:
            raise ValueError(f"delete({u}, {v}): edge not present")
        level = self.edge_level.pop(name)
        for lay in self.layers:
            lay.delete_edge(u, v)
        if level is not None:
            for i in range(level, self.ell + 1):
                self.layers[i].delete_tree_edge(u, v)
        # rebuild pass runs regardless of whether e was a tree edge; the
        # size check makes untouched layers cheap no-ops
        for i in range(self.ell):
            self._update(i, u)
            self._update(i, v)

    def query(self, u: int, v: int) -> bool:
        """Are u and v connected? True answers are always genuine."""
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"query({u}, {v}): vertex out of range")
        top = self.layers[self.ell]
        return top.tree(u) == top.tree(v)

    # -- rebuild machinery -----------------------------------------------------

    def _update(self, i: int, u: int) -> None:
        """Try to merge u's layer-i tree with a partner one layer up."""
        lay = self.layers[i]
        above = self.layers[i + 1]
        t = lay.tree(u)
        if not lay.cut_hint(t):
            # no edge leaves this tree, so there is nothing to do
            # whether or not it already merged; skip the size probe
            return
        if lay.tree_size(t) < above.tree_size(above.tree(u)):
            return  # already merged with a partner
        found = lay.outgoing_edge(t)
        if found is None:
            return
        v, w = found
        kfound = None
        for k in range(i + 1, self.ell + 1):
            layk = self.layers[k]
            if layk.tree(v) == layk.tree(w):
                kfound = k
                break
        if kfound is not None:
            a, b = self._find_cycle_edge(kfound, v, w)
            for j in range(kfound, self.ell + 1):
                self.layers[j].delete_tree_edge(a, b)
            self.edge_level[self.codec.encode(a, b)] = None
        for j in range(i + 1, self.ell + 1):
            self.layers[j].insert_tree_edge(v, w)
        self.edge_level[self.codec.encode(v, w)] = i + 1

    def _find_cycle_edge(self, k: int, v: int, w: int) -> tuple[int, int]:
        """A level-k tree edge on the layer-k tree path between v and w.

        Deleting it from layers k..ell separates v from w at all of
        them, clearing the way to re-link v and w lower down. Scans the
        path explicitly (linear in tree size).
        """
        lay = self.layers[k]
        t = lay.tree(v)
        if lay.tree(w) != t:
            raise StateCorruptionError(
                f"cycle-edge search at layer {k}: {v} and {w} not in one tree"
            )
        below = self.layers[k - 1]
        if below.tree(v) == below.tree(w):
            raise StateCorruptionError(
                f"cycle-edge search at layer {k}: {v} and {w} already "
                f"joined one layer down"
            )
        adj: dict[int, list[int]] = {}
        for a, b in lay.forest.tour(t):
            if a != b:
                adj.setdefault(a, []).append(b)
        parent = {v: None}
        frontier = [v]
        while frontier and w not in parent:
            nxt = []
            for x in frontier:
                for y in adj.get(x, ()):
                    if y not in parent:
                        parent[y] = x
                        nxt.append(y)
            frontier = nxt
        if w not in parent:
            raise StateCorruptionError(
                f"cycle-edge search at layer {k}: no tree path {v}..{w}"
            )
        x = w
        while parent[x] is not None:
            p = parent[x]
            if self.edge_level.get(self.codec.encode(p, x)) == k:
                return (p, x)
            x = p
        raise StateCorruptionError(
            f"cycle-edge search at layer {k}: no level-{k} edge on the "
            f"{v}..{w} path"
        )

    # -- inspection -------------------------------------------------------------

    def layer_tree_edges(self, i: int) -> set[int]:
        """Names of layer i's tree edges, read from the forest itself."""
        enc = self.codec.encode
        return {enc(u, v) for u, v in self.layers[i].forest.tree_edges()}

    def layer_partition(self, i: int) -> list[int]:
        """rep[v] = smallest vertex in v's layer-i tree (from the forest)."""
        forest = self.layers[i].forest
        rep = [-1] * self.n
        for v in range(self.n):
            if rep[v] >= 0:
                continue
            members = list(forest.tree_vertices(forest.tree_of(v)))
            m = min(members)
            for x in members:
                rep[x] = m
        return rep

    def components(self) -> list[int]:
        """rep[v] = smallest vertex in v's true component of G."""
        adj: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for name in self.edge_level:
            a, b = self.codec.decode(name)
            adj[a].append(b)
            adj[b].append(a)
        rep = [-1] * self.n
        for v in range(self.n):
            if rep[v] >= 0:
                continue
            seen = [v]
            rep[v] = v
            stack = [v]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if rep[y] < 0:
                        rep[y] = v
                        seen.append(y)
                        stack.append(y)
            m = min(seen)
            for x in seen:
                rep[x] = m
        return rep

    def check_invariants(self, components: list[int] | None = None,
                         structure_only: bool = False) -> InvariantReport:
        """Audit the cross-layer invariants; see InvariantReport.

        Structural checks (always): per-layer tree edges match the
        level map, tree edges are current graph edges, the per-layer
        edge sets nest, every layer's edge set is acyclic, every
        layer's edge table equals the graph, and per-vertex tree sizes
        never shrink going up. Full passes additionally compare the
        forests' own partitions, count layer trees that should have
        merged with a partner but did not, and census non-maximal trees
        below the expected growth size. `components` supplies the
        ground-truth partition (from an external oracle); if omitted it
        is derived from the exact edge set.
        """
        rep = InvariantReport(num_layers=self.ell + 1)
        graph_names = set(self.edge_level)
        # expected tree-edge sets, accumulated over levels
        by_level: dict[int, list[int]] = {}
        for name, lvl in self.edge_level.items():
            if lvl is not None:
                by_level.setdefault(lvl, []).append(name)

        prev_set: set[int] | None = None
        sizes_prev: list[int] | None = None
        expected: set[int] = set()
        part_all = []
        for i in range(self.ell + 1):
            expected |= set(by_level.get(i, ()))
            actual = self.layer_tree_edges(i)
            if actual != expected:
                rep.level_map_violations += 1
            rep.subset_violations += len(actual - graph_names)
            if prev_set is not None and not prev_set <= actual:
                rep.nesting_violations += 1
            prev_set = actual
            if set(self.layers[i].edge_names()) != graph_names:
                rep.table_violations += 1
            # union-find over the layer's edge set: acyclicity + sizes
            parent = list(range(self.n))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            acyclic = True
            for name in actual:
                a, b = self.codec.decode(name)
                ra, rb = find(a), find(b)
                if ra == rb:
                    acyclic = False
                else:
                    parent[ra] = rb
            if not acyclic:
                rep.acyclicity_violations += 1
            roots = [find(v) for v in range(self.n)]
            counts: dict[int, int] = {}
            for r in roots:
                counts[r] = counts.get(r, 0) + 1
            sizes = [counts[r] for r in roots]
            if sizes_prev is not None:
                rep.monotonicity_violations += sum(
                    1 for v in range(self.n) if sizes[v] < sizes_prev[v]
                )
            sizes_prev = sizes
            if not structure_only:
                part_all.append((roots, sizes))

        if structure_only:
            return rep

        if components is None:
            components = self.components()
        comp_sizes: dict[int, int] = {}
        for r in components:
            comp_sizes[r] = comp_sizes.get(r, 0) + 1

        rep.invariant1_violations = [0] * self.ell
        rep.undersized_nonmaximal = [0] * (self.ell + 1)
        for i in range(self.ell + 1):
            roots, sizes = part_all[i]
            # cross-check: the forest's own partition must agree with
            # the one induced by its edge set
            forest_part = self.layer_partition(i)
            pairs = {(roots[v], forest_part[v]) for v in range(self.n)}
            if (len({a for a, _ in pairs}) != len(pairs)
                    or len({b for _, b in pairs}) != len(pairs)):
                raise StateCorruptionError(
                    f"layer {i}: forest partition diverges from its edge set"
                )
            seen_tree = set()
            for v in range(self.n):
                r = roots[v]
                if r in seen_tree:
                    continue
                seen_tree.add(r)
                maximal = sizes[v] == comp_sizes[components[v]]
                if maximal:
                    continue
                if sizes[v] < (1 << i):
                    rep.undersized_nonmaximal[i] += 1
                if i < self.ell and part_all[i + 1][1][v] <= sizes[v]:
                    rep.invariant1_violations[i] += 1
        top = part_all[self.ell][0]
        canon_pairs = {(top[v], components[v]) for v in range(self.n)}
        rep.top_partition_exact = (
            len({a for a, _ in canon_pairs}) == len(canon_pairs)
            and len({b for _, b in canon_pairs}) == len(canon_pairs)
        )
        return rep

    def audit_forests(self) -> None:
        """Deep per-layer forest audit; raises on any internal defect."""
        for lay in self.layers:
            lay.forest.check_consistency()
