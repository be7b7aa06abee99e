"""Cut-edge recovery structure: dynamic forest plus XOR sketches.

One instance maintains an exact edge table for a graph on [0, n), a
dynamic forest whose trees the caller keeps consistent with that graph,
and per-vertex XOR signatures that let `outgoing_edge` recover an edge
leaving a given tree with constant success probability per call.

Sampling scheme: every edge draws, per family, one geometric depth d
with Pr[d >= i] = 2**-i, and its name is XOR-ed into that family's
channels 0..d of both endpoints. Channel (f, 0) therefore holds every
edge, and channel (f, i) holds each edge independently with probability
2**-i, nested within the same family. XOR-ing a channel over a tree's
vertices cancels internal edges in pairs and leaves the fold of the cut
edges sampled at that channel; when exactly one survives, the fold IS
its name. Validation against the edge table plus an endpoint check
makes every returned edge sound, never just probably right.

Multiple independent families are a hedge against the single-family
constant falling below 1/2; `families` is a knob, default 3.

Single-writer: do not interleave calls from multiple threads. Distinct
instances are independent.
"""

from __future__ import annotations

import math
import random

from xorforest.edge_space import EdgeCodec
from xorforest.dynamic_forest import EulerTourForest

_WORD = (1 << 64) - 1


def _trailing_ones(x: int) -> int:
    return ((x + 1) & ~x).bit_length() - 1


class Cutset:
    """Forest + sketch + edge table over a fixed vertex set [0, n).

    The caller is responsible for keeping the forest a subforest of the
    graph held in the edge table (tree edges must be current edges and
    trees must never span disconnected vertices). `outgoing_edge`
    additionally assumes the queried tree's membership was not chosen
    adversarially against this instance's own random bits; that
    independence obligation rests on the caller and is not checkable
    here.
    """

    def __init__(self, n: int, families: int = 3, seed: int | None = None):
        if families < 1:
            raise ValueError("need at least one sampling family")
        self.n = n
        self.families = families
        self.codec = EdgeCodec(n)  # also rejects n < 2
        self.levels_per_family = 2 * math.ceil(math.log2(n)) + 1
        self.num_channels = families * self.levels_per_family
        self.stride = self.codec.name_bits
        self._rng = random.Random(seed)
        self.forest = EulerTourForest(
            n, self.num_channels,
            seed=self._rng.getrandbits(64), stride=self.stride,
        )
        # name -> packed channel mask (one bit per touched channel)
        self._edges: dict[int, int] = {}
        # _fam_masks[f][d] has one bit per channel (f, 0..d), at the
        # channel's bit offset; name * mask replicates the name into
        # those channels without carries (names are narrower than the
        # stride by construction).
        lpf = self.levels_per_family
        self._fam_masks = []
        for f in range(families):
            masks = []
            acc = 0
            for d in range(lpf):
                acc |= 1 << ((f * lpf + d) * self.stride)
                masks.append(acc)
            self._fam_masks.append(masks)
        self._name_mask = (1 << self.stride) - 1
        self.op_count = 0  # public-operation tally for benchmarking

    # -- edge set -------------------------------------------------------------

    def insert_edge(self, u: int, v: int) -> None:
        """Add graph edge {u, v}; draws fresh sampling depths."""
        self.op_count += 1
        name = self.codec.encode(u, v)
        if name in self._edges:
            raise ValueError(f"insert_edge({u}, {v}): already present")
        cap = self.levels_per_family - 1
        bits = self._rng.getrandbits(64 * self.families)
        mask = 0
        for masks in self._fam_masks:
            word = bits & _WORD
            d = ((word + 1) & ~word).bit_length() - 1
            mask |= masks[d if d < cap else cap]
            bits >>= 64
        self._edges[name] = mask
        self.forest.xor_update_edge(u, v, name * mask)

    def delete_edge(self, u: int, v: int) -> None:
        """Remove graph edge {u, v}; undoes exactly the channels it touched."""
        self.op_count += 1
        name = self.codec.encode(u, v)
        mask = self._edges.pop(name, None)
        if mask is None:
            raise ValueError(f"delete_edge({u}, {v}): not present")
        self.forest.xor_update_edge(u, v, name * mask)

    def has_edge(self, u: int, v: int) -> bool:
        return self.codec.encode(u, v) in self._edges

    def num_edges(self) -> int:
        return len(self._edges)

    def edge_names(self):
        """Current edge names (iteration order unspecified)."""
        return self._edges.keys()

    def sample_depths(self, u: int, v: int) -> tuple[int, ...]:
        """Per-family sampled depths of a current edge.

        Recovered from the stored channel mask: a depth-d edge set the
        d+1 consecutive channel bits 0..d of its family.
        """
        mask = self._edges[self.codec.encode(u, v)]
        lpf = self.levels_per_family
        depths = []
        for f in range(self.families):
            d = 0
            while d + 1 < lpf and (mask >> ((f * lpf + d + 1) * self.stride)) & 1:
                d += 1
            depths.append(d)
        return tuple(depths)

    # -- forest ---------------------------------------------------------------

    def insert_tree_edge(self, u: int, v: int) -> None:
        """Make {u, v} a forest edge; endpoints must be in different trees."""
        self.op_count += 1
        self.forest.link(u, v)

    def delete_tree_edge(self, u: int, v: int) -> None:
        """Remove forest edge {u, v}, splitting its tree."""
        self.op_count += 1
        self.forest.cut(u, v)

    def tree(self, v: int):
        """Ephemeral name of v's tree (valid until the next link/cut)."""
        self.op_count += 1
        return self.forest.tree_of(v)

    def tree_size(self, t) -> int:
        return self.forest.tree_size(t)

    # -- cut-edge recovery ----------------------------------------------------

    def cut_hint(self, t) -> bool:
        """False only when no edge leaves tree t; True is just a hint.

        O(1) peek at the packed fold: an empty cut folds every channel
        to zero, so False is conclusive and `outgoing_edge` would
        certainly return None. A nonzero fold proves nothing (multiple
        cut edges can still mask each other). Not counted as an
        operation: callers use it to skip certainly-fruitless queries.
        """
        return not self.forest.tree_agg_is_zero(t)

    def outgoing_edge(self, t) -> tuple[int, int] | None:
        """Some current edge with exactly one endpoint in tree t, or None.

        Sound by construction: a candidate is returned only if it is a
        current edge and genuinely crosses t. When no edge leaves t the
        answer is always None; when some does, the answer is an edge
        leaving t with constant probability (raise `families` to push
        it up). Scan order is families outer, levels inner ascending.
        """
        self.op_count += 1
        agg = self.forest.tree_agg(t)  # also rejects stale tree names
        if agg == 0:
            return None
        stride = self.stride
        name_mask = self._name_mask
        edges = self._edges
        forest = self.forest
        decode = self.codec.decode
        while agg:
            cand = agg & name_mask
            if cand and cand in edges:
                u, v = decode(cand)
                in_u = forest.tree_of(u) == t
                in_v = forest.tree_of(v) == t
                if in_u != in_v:
                    return (u, v)
            agg >>= stride
        return None

    # -- introspection (tests and debugging) ----------------------------------

    def vertex_channel(self, v: int, family: int, level: int) -> int:
        """Raw signature of one vertex at channel (family, level)."""
        return self.forest.vertex_xor(v, family * self.levels_per_family + level)

    def tree_channel(self, t, family: int, level: int) -> int:
        """Tree-wide XOR fold at channel (family, level)."""
        return self.forest.tree_xor(t, family * self.levels_per_family + level)
