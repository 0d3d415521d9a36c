"""Constrained-degree bond dynamics driven by uniform clocks.

Each edge tries to open at its clock time and succeeds iff both endpoints
still have open-degree strictly below the constraint. Includes a replayable
`evolve` on finite windows, an exact enumeration oracle for small graphs, a
vectorised sampler for the same small graphs, an exact infinite-volume
single-edge resolver, and Monte Carlo crossing-probability estimation.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .clocks import ClockField, derive_seed
from .lattice import FREE_BOX, TORUS, LatticeSpec


@dataclass(frozen=True)
class Configuration:
    """Open/closed state per edge at query time t, plus open-degree counts."""

    t: float
    open_edges: frozenset
    degrees: dict

    def is_open(self, edge) -> bool:
        return edge in self.open_edges


def evolve(spec: LatticeSpec, kappa: int, clocks: ClockField, t: float) -> Configuration:
    """Replay the dynamics on a window up to time t.

    Edges with clock <= t are processed in increasing (clock, edge id) order;
    one opens iff both endpoint open-degrees are < kappa at its turn. With
    kappa >= degree this is Bernoulli(t) bond percolation.
    """
    if kappa < 1:
        raise ValueError("kappa must be positive")
    feasible = []
    for e in spec.edges():
        u = clocks.value(e)
        if u <= t:
            feasible.append((u, e))
    feasible.sort()
    degrees: dict = {}
    open_edges = set()
    for _, e in feasible:
        a, b = spec.endpoints(e)
        if degrees.get(a, 0) < kappa and degrees.get(b, 0) < kappa:
            open_edges.add(e)
            degrees[a] = degrees.get(a, 0) + 1
            degrees[b] = degrees.get(b, 0) + 1
    return Configuration(t=t, open_edges=frozenset(open_edges), degrees=degrees)


def replay_order(edge_clocks, kappa: int, t) -> frozenset:
    """Replay the constraint rule for an explicit (clock, edge, a, b) list."""
    feasible = sorted((u, e, a, b) for u, e, a, b in edge_clocks if u <= t)
    deg: dict = {}
    out = set()
    for _, e, a, b in feasible:
        if deg.get(a, 0) < kappa and deg.get(b, 0) < kappa:
            out.add(e)
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
    return frozenset(out)


# --- explicit small graphs and the exact oracle ------------------------------


@dataclass(frozen=True)
class SmallGraph:
    """Explicit graph for the enumeration oracle; edges indexed 0..m-1."""

    name: str
    edges: tuple  # tuple of (a, b) vertex pairs

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self):
        vs = []
        for a, b in self.edges:
            for v in (a, b):
                if v not in vs:
                    vs.append(v)
        return vs

    @property
    def max_degree(self) -> int:
        deg: dict = {}
        for a, b in self.edges:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        return max(deg.values())


def grid_graph(rows: int, cols: int) -> SmallGraph:
    edges = []
    for i in range(rows):
        for j in range(cols):
            if j + 1 < cols:
                edges.append(((i, j), (i, j + 1)))
            if i + 1 < rows:
                edges.append(((i, j), (i + 1, j)))
    return SmallGraph(f"grid{rows}x{cols}", tuple(edges))


SMALL_GRAPHS = {
    "path2": SmallGraph("path2", ((0, 1), (1, 2))),
    "path3": SmallGraph("path3", ((0, 1), (1, 2), (2, 3))),
    "star3": SmallGraph("star3", ((0, 1), (0, 2), (0, 3))),
    "cycle4": SmallGraph("cycle4", ((0, 1), (1, 2), (2, 3), (3, 0))),
    "grid2x3": grid_graph(2, 3),
}


def edge_open_event(index: int):
    return lambda open_edges: index in open_edges


def all_open_event(indices):
    idx = frozenset(indices)
    return lambda open_edges: idx <= open_edges


def exact_event_probability(graph: SmallGraph, kappa: int, t, event) -> Fraction:
    """Exact P(event at t) by enumerating feasible subsets and clock orderings.

    Sums t^|S| (1-t)^(m-|S|) over feasible-edge subsets S, averaging the event
    over all |S|! replay orders. `event` receives the final set of open edge
    indices. t is treated as an exact rational.
    """
    m = graph.m
    if m > 10:
        raise ValueError("graph too large for exact enumeration")
    t = Fraction(t)
    prob = Fraction(0)
    for k in range(m + 1):
        w = t ** k * (1 - t) ** (m - k)
        if w == 0:
            continue
        for subset in itertools.combinations(range(m), k):
            hits = 0
            nperm = 0
            for order in itertools.permutations(subset):
                deg: dict = {}
                open_edges = set()
                for e in order:
                    a, b = graph.edges[e]
                    if deg.get(a, 0) < kappa and deg.get(b, 0) < kappa:
                        open_edges.add(e)
                        deg[a] = deg.get(a, 0) + 1
                        deg[b] = deg.get(b, 0) + 1
                if event(open_edges):
                    hits += 1
                nperm += 1
            if hits:
                prob += w * Fraction(hits, nperm)
    return prob


def simulate_small_graph(graph: SmallGraph, kappa: int, t: float, samples: int,
                         seed: int, clocks: np.ndarray | None = None) -> np.ndarray:
    """Vectorised replay on an explicit small graph.

    Returns a (samples, m) boolean array of open states. Semantically identical
    to per-sample `replay_order`; clock matrix may be supplied for coupling.
    """
    m = graph.m
    verts = graph.vertices
    vidx = {v: i for i, v in enumerate(verts)}
    ea = np.array([vidx[a] for a, _ in graph.edges])
    eb = np.array([vidx[b] for _, b in graph.edges])
    if clocks is None:
        rng = np.random.Generator(np.random.PCG64(seed))
        clocks = rng.random((samples, m))
    order = np.argsort(clocks, axis=1, kind="stable")
    deg = np.zeros((samples, len(verts)), dtype=np.int16)
    open_ = np.zeros((samples, m), dtype=bool)
    rows = np.arange(samples)
    for j in range(m):
        e = order[:, j]
        feas = clocks[rows, e] <= t
        a = ea[e]
        b = eb[e]
        ok = feas & (deg[rows, a] < kappa) & (deg[rows, b] < kappa)
        r = rows[ok]
        open_[r, e[ok]] = True
        deg[r, a[ok]] += 1
        deg[r, b[ok]] += 1
    return open_


# --- exact infinite-volume single-edge state ---------------------------------


def edge_state_infinite(clocks: ClockField, incident_edges, kappa: int, t: float,
                        edge, memo: dict | None = None,
                        max_nodes: int = 2_000_000) -> bool:
    """Exact state of one edge at time t on an infinite lattice.

    An edge's fate depends only on incident edges with strictly earlier
    (clock, id) and clock <= t; that dependency cluster is a.s. finite, so it
    can be resolved exactly without a window. `incident_edges(v)` must yield
    (edge_id, other_endpoint) pairs.
    """
    if memo is None:
        memo = {}
    visited = 0

    def deps_of(f):
        uf = clocks.value(f)
        if uf > t:
            return None  # not feasible: closed, no deps needed
        base, _ = f
        a, b = _infinite_endpoints(f, incident_edges, base)
        out = []
        for v in (a, b):
            for g, _w in incident_edges(v):
                if g == f:
                    continue
                ug = clocks.value(g)
                if ug <= t and (ug, g) < (uf, f):
                    out.append((v, g))
        return out

    stack = [edge]
    dep_cache: dict = {}
    while stack:
        f = stack[-1]
        if f in memo:
            stack.pop()
            continue
        deps = dep_cache.get(f)
        if deps is None:
            deps = deps_of(f)
            dep_cache[f] = deps
            visited += 1
            if visited > max_nodes:
                raise RuntimeError("dependency cluster exceeded max_nodes")
        if deps is None:
            memo[f] = False
            stack.pop()
            continue
        unresolved = [g for _, g in deps if g not in memo]
        if unresolved:
            stack.extend(unresolved)
            continue
        base, _ = f
        a, b = _infinite_endpoints(f, incident_edges, base)
        deg_a = sum(1 for v, g in deps if v == a and memo[g])
        deg_b = sum(1 for v, g in deps if v == b and memo[g])
        memo[f] = deg_a < kappa and deg_b < kappa
        stack.pop()
    return memo[edge]


def _infinite_endpoints(edge, incident_edges, base):
    for g, w in incident_edges(base):
        if g == edge:
            return base, w
    raise ValueError(f"edge {edge} not incident to its base vertex")


# --- Monte Carlo estimation of crossing probabilities ------------------------


@dataclass(frozen=True)
class ThetaEstimate:
    spec: LatticeSpec
    kappa: int
    t: float
    n: int
    samples: int
    successes: int
    seed: int

    @property
    def estimate(self) -> float:
        return self.successes / self.samples

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.samples)


def _origin_connects(spec: LatticeSpec, config: Configuration) -> bool:
    """Free box: origin reaches the window boundary. Torus: the origin's
    cluster wraps around (revisits a vertex at a different unwrapped offset)."""
    d = spec.d
    origin = (0,) * d
    adj: dict = {}
    for e in config.open_edges:
        a, b = spec.endpoints(e)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if origin not in adj:
        return False
    L = spec.radius
    if spec.boundary == FREE_BOX:
        seen = {origin}
        queue = deque([origin])
        while queue:
            v = queue.popleft()
            if max(abs(c) for c in v) == L:
                return True
            for w in adj.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return False
    # torus: BFS in unwrapped coordinates
    lift = {origin: origin}
    queue = deque([origin])
    side = spec.side
    while queue:
        v = queue.popleft()
        uv = lift[v]
        for w in adj.get(v, ()):
            # unwrapped displacement: minimal representative of w - v
            dw = tuple(((wc - vc + L) % side) - L for vc, wc in zip(v, w))
            uw = tuple(a + b for a, b in zip(uv, dw))
            if w not in lift:
                lift[w] = uw
                queue.append(w)
            elif lift[w] != uw:
                return True
    return False


def estimate_theta(spec: LatticeSpec, kappa: int, t: float, n: int,
                   samples: int, seed: int, threads: int = 1) -> ThetaEstimate:
    """Monte Carlo crossing-probability proxy for the percolation function.

    Free-box windows measure origin-to-boundary connection; torus windows
    measure wrap-around. Per-sample seeds are derived from (seed, index), so
    the result is independent of the number of workers.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    window = replace(spec, radius=n)

    def count(chunk) -> int:
        c = 0
        for i in chunk:
            clocks = ClockField(derive_seed(seed, i))
            if t > 0:
                config = evolve(window, kappa, clocks, t)
                if _origin_connects(window, config):
                    c += 1
        return c

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        chunks = [range(j, samples, threads) for j in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            successes = sum(pool.map(count, chunks))
    else:
        successes = count(range(samples))
    return ThetaEstimate(spec=window, kappa=kappa, t=t, n=n,
                         samples=samples, successes=successes, seed=seed)


def theta_curve(spec: LatticeSpec, kappa: int, t_grid, n: int, samples: int,
                seed: int, common_clocks: bool = True, threads: int = 1):
    """One estimate per grid point. With common clocks the open set is monotone
    in t for fixed clocks, so estimates are non-decreasing sample by sample.
    Counts are accumulated per sample index, so threads never change values."""
    t_grid = list(t_grid)
    if t_grid != sorted(t_grid):
        raise ValueError("t grid must be sorted")
    if not common_clocks:
        return [estimate_theta(spec, kappa, t, n, samples, seed, threads=threads)
                for t in t_grid]
    window = replace(spec, radius=n)

    def count(chunk):
        succ = [0] * len(t_grid)
        for i in chunk:
            clocks = ClockField(derive_seed(seed, i))
            for j, t in enumerate(t_grid):
                if t <= 0:
                    continue
                config = evolve(window, kappa, clocks, t)
                if _origin_connects(window, config):
                    succ[j] += 1
        return succ

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        chunks = [range(j, samples, threads) for j in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(count, chunks))
        successes = [sum(p[j] for p in parts) for j in range(len(t_grid))]
    else:
        successes = count(range(samples))
    return [ThetaEstimate(spec=window, kappa=kappa, t=t, n=n, samples=samples,
                          successes=successes[j], seed=seed)
            for j, t in enumerate(t_grid)]
