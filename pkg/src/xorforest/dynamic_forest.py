"""Euler-tour dynamic forest with per-tree XOR and size aggregates.

Each tree over the fixed vertex set [0, n) is represented by the
sequence of its Euler tour, stored in a treap keyed by tour position.
The tour of a tree on s vertices has exactly 3s - 2 entries: one
self-loop entry (v, v) per vertex and two directed arc entries (u, v),
(v, u) per tree edge. Singletons are the one-entry tour [(v, v)].

Aggregation: every vertex carries a weight vector of `levels` XOR
channels, packed at a fixed bit stride and stored as little-endian
64-bit words, so combining two subtree aggregates is one short word
loop regardless of the channel count. Arc entries carry weight zero.
Subtree counts double as vertex counts through the 3s - 2 identity.

The treap gives O(log n) time per operation with high probability over
its internal priorities, independent of the operation sequence. That is
a per-operation (not amortized) guarantee, which is what the layered
connectivity algorithm's worst-case accounting needs; a splay-style
amortized structure would not do.

Layout: one forest is a set of parallel arrays indexed by node id.
Ids 0..n-1 are the permanent vertex self-entries; arc entries are
recycled through a free list and never exceed 2(n - 1) live ids, so
capacity is fixed at 3n - 2 up front. The structural kernels below the
class are compiled (numba) and treat -1 as the null pointer; they do
the pointer-chasing work, while the class handles naming, bookkeeping
and validation. Tree names returned by `tree_of` are root node ids and
are ephemeral: they stay valid only until the next link or cut (XOR
updates do not invalidate them).

A forest is single-writer: interleave mutations from one thread only.
Distinct instances are fully independent.
"""

from __future__ import annotations

import random
from typing import Iterator

import numpy as np
from numba import njit


@njit(cache=True)
def _k_root(parent, x):
    p = parent[x]
    while p != -1:
        x = p
        p = parent[x]
    return x


@njit(cache=True)
def _k_rank_root(left, right, parent, cnt, x):
    """(0-based tour position of x, root of x's tree), one walk."""
    l = left[x]
    r = cnt[l] if l != -1 else 0
    p = parent[x]
    while p != -1:
        if right[p] == x:
            l = left[p]
            r += (cnt[l] if l != -1 else 0) + 1
        x = p
        p = parent[x]
    return r, x


@njit(cache=True)
def _k_fix_chain(left, right, parent, cnt, val, agg, x, stop):
    """Recompute cnt/agg from x up to and including stop (both node ids)."""
    words = agg.shape[1]
    while True:
        l = left[x]
        r = right[x]
        c = 1
        if l != -1:
            c += cnt[l]
        if r != -1:
            c += cnt[r]
        cnt[x] = c
        for w in range(words):
            g = val[x, w]
            if l != -1:
                g ^= agg[l, w]
            if r != -1:
                g ^= agg[r, w]
            agg[x, w] = g
        if x == stop:
            return
        x = parent[x]


@njit(cache=True)
def _k_merge(left, right, parent, prio, cnt, val, agg, a, b):
    """Concatenate tours a and b (all of a precedes all of b)."""
    if a == -1:
        return b
    if b == -1:
        return a
    # weave a's right spine with b's left spine by priority, then fix
    # counts and aggregates bottom-up along the woven path
    if prio[a] >= prio[b]:
        root = a
        tail = a
        from_a = True
        a = right[a]
    else:
        root = b
        tail = b
        from_a = False
        b = left[b]
    while True:
        if a == -1:
            if from_a:
                right[tail] = b
            else:
                left[tail] = b
            parent[b] = tail
            tail = b
            break
        if b == -1:
            if from_a:
                right[tail] = a
            else:
                left[tail] = a
            parent[a] = tail
            tail = a
            break
        if prio[a] >= prio[b]:
            if from_a:
                right[tail] = a
            else:
                left[tail] = a
            parent[a] = tail
            tail = a
            from_a = True
            a = right[a]
        else:
            if from_a:
                right[tail] = b
            else:
                left[tail] = b
            parent[b] = tail
            tail = b
            from_a = False
            b = left[b]
    # the attach chain is exactly the path tail..root
    x = tail
    words = agg.shape[1]
    while True:
        l = left[x]
        r = right[x]
        c = 1
        if l != -1:
            c += cnt[l]
        if r != -1:
            c += cnt[r]
        cnt[x] = c
        for w in range(words):
            g = val[x, w]
            if l != -1:
                g ^= agg[l, w]
            if r != -1:
                g ^= agg[r, w]
            agg[x, w] = g
        if x == root:
            break
        x = parent[x]
    parent[root] = -1
    return root


@njit(cache=True)
def _k_split(left, right, parent, cnt, val, agg, root, k):
    """Split into (first k entries, rest). Both results are roots."""
    if root == -1:
        return -1, -1
    if k <= 0:
        return -1, root
    if k >= cnt[root]:
        return root, -1
    # descend once, hanging each node off the part it belongs to; the
    # two open hooks trace the cut line
    lroot = -1
    rroot = -1
    lhook = -1  # deepest left-part node whose right child is open
    rhook = -1  # deepest right-part node whose left child is open
    node = root
    while node != -1:
        l = left[node]
        lc = cnt[l] if l != -1 else 0
        if k <= lc:
            if rhook == -1:
                rroot = node
                parent[node] = -1
            else:
                left[rhook] = node
                parent[node] = rhook
            rhook = node
            node = l
        else:
            k -= lc + 1
            if lhook == -1:
                lroot = node
                parent[node] = -1
            else:
                right[lhook] = node
                parent[node] = lhook
            lhook = node
            node = right[node]
    # 0 < k < cnt guarantees both parts are nonempty
    right[lhook] = -1
    left[rhook] = -1
    _k_fix_chain(left, right, parent, cnt, val, agg, lhook, lroot)
    _k_fix_chain(left, right, parent, cnt, val, agg, rhook, rroot)
    return lroot, rroot


@njit(cache=True)
def _k_rotate(left, right, parent, prio, cnt, val, agg, root, k):
    """Rotate the tour so position k comes first; return new root."""
    if k == 0:
        return root
    a, b = _k_split(left, right, parent, cnt, val, agg, root, k)
    return _k_merge(left, right, parent, prio, cnt, val, agg, b, a)


@njit(cache=True)
def _k_link(left, right, parent, prio, cnt, val, agg, head, tail,
            u, v, e1, e2, p1, p2):
    """Join the trees of u and v via fresh arc nodes e1, e2.

    Returns False (changing nothing) when u and v already share a tree.
    """
    ku, ru = _k_rank_root(left, right, parent, cnt, u)
    kv, rv = _k_rank_root(left, right, parent, cnt, v)
    if ru == rv:
        return False
    prio[e1] = p1
    prio[e2] = p2
    head[e1] = u
    tail[e1] = v
    head[e2] = v
    tail[e2] = u
    ru = _k_rotate(left, right, parent, prio, cnt, val, agg, ru, ku)
    rv = _k_rotate(left, right, parent, prio, cnt, val, agg, rv, kv)
    m = _k_merge(left, right, parent, prio, cnt, val, agg, ru, e1)
    m = _k_merge(left, right, parent, prio, cnt, val, agg, m, rv)
    _k_merge(left, right, parent, prio, cnt, val, agg, m, e2)
    return True


@njit(cache=True)
def _k_cut(left, right, parent, prio, cnt, val, agg, e1, e2):
    """Remove the arc pair e1, e2, splitting their tree into two."""
    r1, root = _k_rank_root(left, right, parent, cnt, e1)
    r2, root2 = _k_rank_root(left, right, parent, cnt, e2)
    if r1 > r2:
        t = r1
        r1 = r2
        r2 = t
    head, rest = _k_split(left, right, parent, cnt, val, agg, root, r1)
    mid, tail = _k_split(left, right, parent, cnt, val, agg, rest, r2 - r1)
    # mid starts with the first arc; tail starts with the second
    _k_split(left, right, parent, cnt, val, agg, mid, 1)
    dummy, outer = _k_split(left, right, parent, cnt, val, agg, tail, 1)
    _k_merge(left, right, parent, prio, cnt, val, agg, head, outer)
    # the inner tour is the detached side and is already a root
    left[e1] = -1
    right[e1] = -1
    parent[e1] = -1
    left[e2] = -1
    right[e2] = -1
    parent[e2] = -1


@njit(cache=True)
def _k_xor_edge(parent, val, agg, u, v, delta):
    """XOR delta into the weight vectors of u and v, one walk each."""
    words = delta.shape[0]
    for w in range(words):
        val[u, w] ^= delta[w]
    x = u
    while x != -1:
        for w in range(words):
            agg[x, w] ^= delta[w]
        x = parent[x]
    for w in range(words):
        val[v, w] ^= delta[w]
    x = v
    while x != -1:
        for w in range(words):
            agg[x, w] ^= delta[w]
        x = parent[x]


@njit(cache=True)
def _k_xor_one(parent, val, agg, x, delta):
    words = delta.shape[0]
    for w in range(words):
        val[x, w] ^= delta[w]
    while x != -1:
        for w in range(words):
            agg[x, w] ^= delta[w]
        x = parent[x]


@njit(cache=True)
def _k_agg_zero(agg, t):
    for w in range(agg.shape[1]):
        if agg[t, w] != 0:
            return False
    return True


@njit(cache=True)
def _k_tour(left, right, parent, t, out):
    """Write tree t's node ids to out in tour order; return the count."""
    x = t
    while left[x] != -1:
        x = left[x]
    i = 0
    while x != -1:
        out[i] = x
        i += 1
        if right[x] != -1:
            x = right[x]
            while left[x] != -1:
                x = left[x]
        else:
            p = parent[x]
            while p != -1 and right[p] == x:
                x = p
                p = parent[x]
            x = p
    return i


@njit(cache=True)
def _k_depth_stats(parent, ids):
    """(max, sum) of node depth over the given node ids (root depth 1)."""
    deepest = 0
    total = 0
    for i in range(ids.shape[0]):
        d = 1
        x = ids[i]
        while parent[x] != -1:
            x = parent[x]
            d += 1
        total += d
        if d > deepest:
            deepest = d
    return deepest, total


class EulerTourForest:
    """Dynamic forest over [0, n) with link/cut and per-tree aggregates.

    `levels` is the number of XOR channels per vertex; `stride` is the
    bit width reserved per channel and defaults to the width of the
    widest edge name for n vertices. Tree names returned by `tree_of`
    are ephemeral: they stay valid only until the next link or cut
    (XOR updates do not invalidate them).
    """

    def __init__(self, n: int, levels: int, seed: int | None = None,
                 stride: int | None = None):
        if n < 1:
            raise ValueError("need at least one vertex")
        if levels < 1:
            raise ValueError("need at least one XOR channel")
        self.n = n
        self.levels = levels
        self.stride = stride if stride is not None else (n * (n + 1) + n).bit_length()
        self._mask = (1 << self.stride) - 1
        self._words = (levels * self.stride + 63) // 64
        self._nbytes = self._words * 8
        self._rng = random.Random(seed)
        # a forest on n vertices holds at most n - 1 tree edges, so the
        # node count is bounded by 3n - 2 and never grows
        cap = max(3 * n - 2, 1)
        self._left = np.full(cap, -1, dtype=np.int64)
        self._right = np.full(cap, -1, dtype=np.int64)
        self._parent = np.full(cap, -1, dtype=np.int64)
        self._prio = np.zeros(cap, dtype=np.int64)
        self._cnt = np.ones(cap, dtype=np.int64)
        self._head = np.zeros(cap, dtype=np.int64)
        self._tail = np.zeros(cap, dtype=np.int64)
        self._val = np.zeros((cap, self._words), dtype=np.uint64)
        self._agg = np.zeros((cap, self._words), dtype=np.uint64)
        rnd = self._rng.getrandbits
        for v in range(n):
            self._prio[v] = rnd(60)
            self._head[v] = v
            self._tail[v] = v
        # arc ids n..cap-1, recycled LIFO; freed arc rows keep weight 0
        self._free = list(range(cap - 1, n - 1, -1))
        self._arcs: dict[int, int] = {}  # u * n + v -> arc node id

    # -- public operations --------------------------------------------------

    def tree_of(self, v: int) -> int:
        """Ephemeral name of v's tree (valid until the next link/cut)."""
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range [0, {self.n})")
        return _k_root(self._parent, v)

    def tree_size(self, t: int) -> int:
        """Vertex count of tree t."""
        self._check_fresh(t)
        return (int(self._cnt[t]) + 2) // 3

    def tree_member(self, t: int) -> int:
        """Some vertex belonging to tree t (O(1))."""
        self._check_fresh(t)
        return int(self._head[t])

    def link(self, u: int, v: int) -> None:
        """Join the trees of u and v with tree edge {u, v}."""
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"link({u}, {v}): vertex out of range")
        rnd = self._rng.getrandbits
        free = self._free
        if len(free) < 2:
            # n - 1 tree edges already live: any link closes a cycle
            raise ValueError(f"link({u}, {v}): same tree, would close a cycle")
        e1 = free.pop()
        e2 = free.pop()
        if not _k_link(self._left, self._right, self._parent, self._prio,
                       self._cnt, self._val, self._agg, self._head, self._tail,
                       u, v, e1, e2, rnd(60), rnd(60)):
            free.append(e2)
            free.append(e1)
            raise ValueError(f"link({u}, {v}): same tree, would close a cycle")
        n = self.n
        self._arcs[u * n + v] = e1
        self._arcs[v * n + u] = e2

    def cut(self, u: int, v: int) -> None:
        """Remove tree edge {u, v}, splitting its tree into two."""
        n = self.n
        e1 = self._arcs.pop(u * n + v, None)
        if e1 is None:
            raise ValueError(f"cut({u}, {v}): not a tree edge")
        e2 = self._arcs.pop(v * n + u)
        _k_cut(self._left, self._right, self._parent, self._prio,
               self._cnt, self._val, self._agg, e1, e2)
        self._free.append(e1)
        self._free.append(e2)

    def xor_update(self, v: int, level: int, name: int) -> None:
        """XOR `name` into channel `level` of v's weight vector."""
        if not 0 <= level < self.levels:
            raise ValueError(f"level {level} out of range [0, {self.levels})")
        if name > self._mask:
            raise ValueError("name wider than the channel stride")
        self.xor_update_packed(v, name << (self.stride * level))

    def xor_update_packed(self, v: int, delta: int) -> None:
        """XOR a whole packed weight vector into v in one tree walk."""
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range [0, {self.n})")
        arr = np.frombuffer(delta.to_bytes(self._nbytes, "little"), dtype=np.uint64)
        _k_xor_one(self._parent, self._val, self._agg, v, arr)

    def xor_update_edge(self, u: int, v: int, delta: int) -> None:
        """XOR the same packed vector into u and v (both endpoints at once)."""
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge update ({u}, {v}): vertex out of range")
        arr = np.frombuffer(delta.to_bytes(self._nbytes, "little"), dtype=np.uint64)
        _k_xor_edge(self._parent, self._val, self._agg, u, v, arr)

    def tree_xor(self, t: int, level: int) -> int:
        """XOR of channel `level` over all vertices of tree t."""
        self._check_fresh(t)
        if not 0 <= level < self.levels:
            raise ValueError(f"level {level} out of range [0, {self.levels})")
        return (self.tree_agg(t) >> (self.stride * level)) & self._mask

    def tree_agg(self, t: int) -> int:
        """Whole packed aggregate of tree t (all channels at once)."""
        self._check_fresh(t)
        return int.from_bytes(self._agg[t].tobytes(), "little")

    def tree_agg_is_zero(self, t: int) -> bool:
        """Whether tree t's packed aggregate is all zeros (O(1))."""
        self._check_fresh(t)
        return _k_agg_zero(self._agg, t)

    def vertex_xor(self, v: int, level: int) -> int:
        """Channel `level` of one vertex's own weight vector."""
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range [0, {self.n})")
        packed = int.from_bytes(self._val[v].tobytes(), "little")
        return (packed >> (self.stride * level)) & self._mask

    def has_tree_edge(self, u: int, v: int) -> bool:
        return u * self.n + v in self._arcs

    # -- enumeration (O(size); tests and the cycle-edge fallback only) ------

    def tour(self, t: int) -> Iterator[tuple[int, int]]:
        """Tour entries of tree t in order: (v, v) and arc (u, v) pairs."""
        self._check_fresh(t)
        out = np.empty(int(self._cnt[t]), dtype=np.int64)
        _k_tour(self._left, self._right, self._parent, t, out)
        head = self._head
        tail = self._tail
        for x in out:
            yield int(head[x]), int(tail[x])

    def tree_vertices(self, t: int) -> Iterator[int]:
        """Vertices of tree t in tour order."""
        for head, tail in self.tour(t):
            if head == tail:
                yield head

    def tree_edges(self) -> Iterator[tuple[int, int]]:
        """Current tree edges of the whole forest, one direction each."""
        n = self.n
        for key in self._arcs:
            u, v = divmod(key, n)
            if u < v:
                yield u, v

    def depth_profile(self) -> tuple[int, float]:
        """(max, mean) node depth over every tour entry in the forest.

        Balance audit: randomized priorities keep depths logarithmic in
        tree size with high probability, so a blowup here means the
        rebalancing went wrong. O(total nodes); tests and debugging.
        """
        ids = np.empty(self.n + len(self._arcs), dtype=np.int64)
        ids[:self.n] = np.arange(self.n)
        if self._arcs:
            ids[self.n:] = np.fromiter(
                self._arcs.values(), dtype=np.int64, count=len(self._arcs))
        deepest, total = _k_depth_stats(self._parent, ids)
        return int(deepest), total / ids.shape[0]

    # -- validation ----------------------------------------------------------

    def _check_fresh(self, t: int) -> None:
        if self._parent[t] != -1:
            raise ValueError("stale tree name (tree was restructured)")

    def check_consistency(self) -> None:
        """Full structural audit; raises AssertionError on any defect.

        O(n), meant for tests and debug-mode fuzzing, not hot paths.
        """
        n = self.n
        seen_vertices = 0
        visited_roots = set()
        for v in range(n):
            root = _k_root(self._parent, v)
            if root in visited_roots:
                continue
            visited_roots.add(root)
            entries = list(self.tour(root))
            selfs = [h for h, t in entries if h == t]
            arcs = [(h, t) for h, t in entries if h != t]
            assert len(entries) == int(self._cnt[root]), "cnt aggregate out of sync"
            assert len(entries) == 3 * len(selfs) - 2, "tour shape broken"
            assert len(set(selfs)) == len(selfs), "vertex visited twice"
            assert len(arcs) == 2 * (len(selfs) - 1), "arc count broken"
            for (a, b) in arcs:
                assert a * n + b in self._arcs, "arc not registered"
            agg = 0
            for h, t in entries:
                if h == t:
                    agg ^= int.from_bytes(self._val[h].tobytes(), "little")
            assert agg == int.from_bytes(self._agg[root].tobytes(), "little"), \
                "XOR aggregate out of sync"
            seen_vertices += len(selfs)
        assert seen_vertices == n, "vertex lost from the partition"
        # every registered arc must be reachable as part of some tour
        for node in self._arcs.values():
            assert _k_root(self._parent, node) in visited_roots, "orphan arc node"
        # recycled arc ids must have kept their weight rows clean
        for node in self._free:
            assert not self._val[node].any(), "freed arc carries weight"
