"""Counter-based uniform clocks keyed on (seed, canonical edge id).

Every clock value is a pure function of the 64-bit seed and the edge's
canonical key, so lazy evaluation, parallel sampling and replay all see
bit-identical values regardless of evaluation order.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & MASK64
    x ^= x >> 31
    return x


def mix_words(seed: int, words) -> int:
    """Fold a sequence of ints (negatives allowed) into one 64-bit hash."""
    h = splitmix64(seed & MASK64)
    for w in words:
        h = splitmix64(h ^ (w & MASK64))
    return h


def derive_seed(seed: int, index: int) -> int:
    """Child seed for sample `index`; stable under any work partitioning."""
    return mix_words(seed, (0x5EED, index))


class ClockField:
    """Lazy i.i.d. uniform clocks on the edges of a (possibly infinite) lattice.

    An edge id is `(base_vertex, direction_index)` with integer coordinates.
    Values are uniform on [0, 1) with 53-bit resolution and are cached, since
    exploration algorithms revisit edges.
    """

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._cache: dict = {}

    def value(self, edge) -> float:
        u = self._cache.get(edge)
        if u is None:
            base, direction = edge
            h = mix_words(self.seed, (*base, direction, len(base)))
            u = (h >> 11) * (1.0 / (1 << 53))
            self._cache[edge] = u
        return u

    def clear_cache(self) -> None:
        self._cache.clear()
