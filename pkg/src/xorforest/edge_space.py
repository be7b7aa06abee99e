"""Canonical integer names for undirected edges.

Every edge {u, v} on a fixed vertex set [0, n) gets a unique nonzero
integer name. Names are the unit of XOR arithmetic everywhere else: the
XOR of several names is usually garbage, so ``decode`` must cheaply and
reliably reject non-names without raising.
"""

from __future__ import annotations


class EdgeCodec:
    """Bijection between unordered vertex pairs and nonzero integer names.

    The name of {u, v} is ``a * (n + 1) + b`` with ``a = min(u, v) + 1``
    and ``b = max(u, v) + 1``. The one-based endpoints make 0 an
    impossible name, so 0 can serve as the "empty" word in XOR
    accumulators, and decoding is two divisions instead of a search.
    """

    __slots__ = ("n", "_base", "max_name", "name_bits")

    def __init__(self, n: int):
        if not 2 <= n < 2**31:
            raise ValueError(f"vertex count must be in [2, 2**31), got {n}")
        self.n = n
        self._base = n + 1
        # largest encodable name: a = n-1+1, b = n+1
        self.max_name = n * (n + 1) + n
        self.name_bits = self.max_name.bit_length()

    def encode(self, u: int, v: int) -> int:
        """Name of the unordered pair {u, v}. Symmetric, never zero."""
        n = self.n
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"not a valid edge: ({u}, {v}) with n={n}")
        if u > v:
            u, v = v, u
        return (u + 1) * self._base + v + 1

    def decode(self, name: int) -> tuple[int, int] | None:
        """Inverse of :meth:`encode`, or None if ``name`` is not a name.

        Returns the pair as (min, max). The zero word, out-of-range
        components, and ordered-pair violations (a >= b) all come back
        as None: XORs of several names routinely produce such words and
        they are not errors.
        """
        a, b = divmod(name, self._base)
        if not 1 <= a < b <= self.n:
            return None
        return a - 1, b - 1
