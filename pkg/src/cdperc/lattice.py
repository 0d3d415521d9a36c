"""Lattice geometry: finite windows of the hypercubic lattice and of the
square lattice with diagonals, canonical edge ids, and the dimension-reducing
group projections used by the general exploration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

HYPERCUBIC = "hypercubic"
MATCHING_SQUARE = "matching-square"

FREE_BOX = "free-box"
TORUS = "torus"

# Positive half of the direction set; every undirected edge is (base, dir_index)
# with the second endpoint base + direction.
_MS_DIRECTIONS = ((1, 0), (0, 1), (1, 1), (1, -1))


def unit(d: int, j: int, sign: int = 1):
    v = [0] * d
    v[j] = sign
    return tuple(v)


@dataclass(frozen=True)
class LatticeSpec:
    """A finite window: the L-infinity ball of radius L (free box) or the torus
    of side 2L+1."""

    kind: str = HYPERCUBIC
    d: int = 2
    boundary: str = FREE_BOX
    radius: int = 1

    def __post_init__(self):
        if self.kind not in (HYPERCUBIC, MATCHING_SQUARE):
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        if self.kind == MATCHING_SQUARE and self.d != 2:
            raise ValueError("matching-square lattice is two-dimensional")
        if self.d < 1 or self.radius < 1:
            raise ValueError("dimension and radius must be positive")
        if self.boundary not in (FREE_BOX, TORUS):
            raise ValueError(f"unknown boundary mode {self.boundary!r}")

    @property
    def degree(self) -> int:
        return 8 if self.kind == MATCHING_SQUARE else 2 * self.d

    @property
    def side(self) -> int:
        return 2 * self.radius + 1

    def directions(self):
        if self.kind == MATCHING_SQUARE:
            return _MS_DIRECTIONS
        return tuple(unit(self.d, j) for j in range(self.d))

    def contains(self, v) -> bool:
        return all(abs(c) <= self.radius for c in v)

    def wrap(self, v):
        L = self.radius
        return tuple((c + L) % self.side - L for c in v)

    def vertices(self):
        rng = range(-self.radius, self.radius + 1)
        return itertools.product(rng, repeat=self.d)

    def endpoints(self, edge):
        base, k = edge
        other = tuple(a + b for a, b in zip(base, self.directions()[k]))
        if self.boundary == TORUS:
            other = self.wrap(other)
        return base, other

    def edges(self):
        """All undirected edges of the window, each exactly once.

        On the torus every (vertex, direction) pair is a distinct edge since
        the side is at least 3; on the free box only edges with both endpoints
        inside exist.
        """
        dirs = self.directions()
        for v in self.vertices():
            for k, dvec in enumerate(dirs):
                w = tuple(a + b for a, b in zip(v, dvec))
                if self.boundary == TORUS or self.contains(w):
                    yield (v, k)

    def incident_edges(self, v):
        """Edges at v as (edge_id, other_endpoint) pairs."""
        if not self.contains(v):
            raise ValueError(f"vertex {v} outside window")
        out = []
        for k, dvec in enumerate(self.directions()):
            for sign in (1, -1):
                w = tuple(a + sign * b for a, b in zip(v, dvec))
                if self.boundary == TORUS:
                    w = self.wrap(w)
                    base = v if sign == 1 else w
                    out.append(((base, k), w))
                elif self.contains(w):
                    base = v if sign == 1 else w
                    out.append(((base, k), w))
        return out


def neighbors(spec: LatticeSpec, v):
    """Neighbours of v in the window with the connecting canonical edge ids."""
    return [(w, e) for e, w in spec.incident_edges(v)]


# --- infinite-lattice helpers (used by the exploration algorithms) ----------


def infinite_incident_edges(kind: str, d: int, v):
    """Edges at v in the infinite lattice, as (edge_id, other_endpoint)."""
    dirs = _MS_DIRECTIONS if kind == MATCHING_SQUARE else tuple(
        unit(d, j) for j in range(d))
    out = []
    for k, dvec in enumerate(dirs):
        plus = tuple(a + b for a, b in zip(v, dvec))
        minus = tuple(a - b for a, b in zip(v, dvec))
        out.append(((v, k), plus))
        out.append(((minus, k), minus))
    return out


def hyper_edge(v, j: int, sign: int):
    """Canonical id of the hypercubic edge from v along +/- e_j."""
    if sign > 0:
        return (v, j)
    base = tuple(c - (1 if i == j else 0) for i, c in enumerate(v))
    return (base, j)


# --- dimension-reduction maps ------------------------------------------------


@dataclass(frozen=True)
class ProjectionMap:
    """Assignment of source coordinate directions to target-lattice directions.

    Group i collects the coordinates summed into target coordinate i. Groups
    are disjoint with exactly floor(d/dp) members each; leftover coordinates
    (when dp does not divide d) belong to no group and are never scanned.
    """

    d: int
    dp: int
    groups: tuple

    @classmethod
    def default(cls, d: int, dp: int = 2) -> "ProjectionMap":
        """Consecutive blocks, except the last group takes the trailing block
        (for dp=2: first half east/west, last half north/south)."""
        if dp < 2 or d < dp:
            raise ValueError("need 2 <= dp <= d")
        m = d // dp
        groups = [tuple(range(i * m, (i + 1) * m)) for i in range(dp - 1)]
        groups.append(tuple(range(d - m, d)))
        return cls(d=d, dp=dp, groups=tuple(groups))

    def __post_init__(self):
        m = self.d // self.dp
        seen = set()
        for g in self.groups:
            if len(g) != m:
                raise ValueError("each group must have floor(d/dp) coordinates")
            seen.update(g)
        if len(seen) != m * self.dp or not all(0 <= j < self.d for j in seen):
            raise ValueError("groups must be disjoint coordinate indices")

    def project(self, v):
        return tuple(sum(v[j] for j in g) for g in self.groups)

    def fiber_edges(self, o, vp):
        """The floor(d/dp) candidate edges from o whose other endpoint projects
        to the target neighbour vp, in ascending coordinate order."""
        po = self.project(o)
        diff = tuple(b - a for a, b in zip(po, vp))
        nz = [(i, c) for i, c in enumerate(diff) if c != 0]
        if len(nz) != 1 or abs(nz[0][1]) != 1:
            raise ValueError(f"{vp} is not a target neighbour of {po}")
        i, sign = nz[0]
        return [hyper_edge(o, j, sign) for j in self.groups[i]]
