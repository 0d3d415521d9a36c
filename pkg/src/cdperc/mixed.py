"""Mixed site-bond percolation on the square lattice: the critical-curve
upper bound, its defining ODE, region classification, and Monte Carlo
crossing/pivotality estimation used to sanity-check the derivative comparison.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

# External inputs, not derived here.
WIERMAN_SITE_UPPER = 0.6795      # rigorous upper bound on the site threshold
ZIFF_SITE_ESTIMATE = 0.5927      # nonrigorous numerical site threshold
BOND_THRESHOLD_2D = 0.5          # exact 2d bond threshold
# Nonrigorous numerical bond thresholds for d' >= 3 (reference only; no
# correctness claim is attached to these values).
BOND_THRESHOLD_REFERENCE = {3: 0.2488126, 4: 0.1601314, 5: 0.1181718}


@dataclass(frozen=True)
class MixedParams:
    s: float
    b: float

    def __post_init__(self):
        if not (0 <= self.s <= 1 and 0 <= self.b <= 1):
            raise ValueError("s and b must lie in [0, 1]")


@dataclass(frozen=True)
class CurvePoint:
    b: float
    sc_upper: float
    region: str


def sc_upper(b: float) -> float:
    """Closed-form upper bound on the critical site curve for b in [1/2, 1]:
    exp(-(2/3)(b - 1/2 + (1/3) log((8-6b)/5)))."""
    if not 0.5 <= b <= 1:
        raise ValueError("b must lie in [0.5, 1]")
    return math.exp(-(2.0 / 3.0) * (b - 0.5 + math.log((8 - 6 * b) / 5) / 3.0))


def _curve_rhs(b: float, s: float) -> float:
    return -2 * s * (1 - b) / (4 - 3 * b)


def ode_integrate(b_end: float = 1.0, step: float = 1e-4):
    """Fixed-step RK4 integration of ds/db = -2s(1-b)/(4-3b) from s(1/2)=1.

    Returns the list of (b, s) samples including both endpoints; the closed
    form is the exact solution, so agreement is a convergence check.
    """
    if not 0.5 <= b_end <= 1:
        raise ValueError("b_end must lie in [0.5, 1]")
    if step <= 0:
        raise ValueError("step must be positive")
    b, s = 0.5, 1.0
    out = [(b, s)]
    while b < b_end - 1e-15:
        h = min(step, b_end - b)
        k1 = _curve_rhs(b, s)
        k2 = _curve_rhs(b + h / 2, s + h * k1 / 2)
        k3 = _curve_rhs(b + h / 2, s + h * k2 / 2)
        k4 = _curve_rhs(b + h, s + h * k3)
        s += h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
        b += h
        out.append((b, s))
    return out


REGION_COROLLARY = "corollary-supercritical"
REGION_HAMMERSLEY = "hammersley-supercritical"
REGION_BOTH = "both"
REGION_UNKNOWN = "unknown"


def classify_region(params: MixedParams,
                    site_upper: float = WIERMAN_SITE_UPPER) -> str:
    """Supercriticality by the curve bound, the product bound, both, or
    neither ("unknown" means not provably supercritical by these criteria)."""
    by_curve = params.b >= 0.5 and params.s > sc_upper(params.b)
    by_product = params.s * params.b >= site_upper
    if params.s * params.b < 0.25:
        # sanity guard: no bound this strong exists
        by_curve = by_product = False
    if by_curve and by_product:
        return REGION_BOTH
    if by_curve:
        return REGION_COROLLARY
    if by_product:
        return REGION_HAMMERSLEY
    return REGION_UNKNOWN


def curve_points(b_grid, site_upper: float = WIERMAN_SITE_UPPER):
    """(b, sc_upper(b), site_upper/b, region-at-the-bound) rows for emission."""
    rows = []
    for b in b_grid:
        sc = sc_upper(b)
        rows.append((b, sc, site_upper / b, classify_region(MixedParams(min(1.0, sc), b))))
    return rows


def crossover_solve(site_upper: float = WIERMAN_SITE_UPPER,
                    tol: float = 1e-6) -> float:
    """Bisection root of sc_upper(b) = site_upper / b on (1/2, 1)."""
    f = lambda b: sc_upper(b) - site_upper / b
    lo, hi = 0.5 + 1e-9, 1.0
    if f(lo) >= 0 or f(hi) <= 0:
        raise ValueError("no sign change: crossover outside (1/2, 1)")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# --- Monte Carlo on the L1 ball ----------------------------------------------


def _ball(n: int, dp: int):
    """Vertices with L1 norm <= n, as an index map plus bond list."""
    verts = []
    index = {}

    def add(v):
        if v not in index:
            index[v] = len(verts)
            verts.append(v)

    frontier = deque([(0,) * dp])
    add((0,) * dp)
    while frontier:
        v = frontier.popleft()
        if sum(abs(c) for c in v) == n:
            continue
        for j in range(dp):
            for sg in (1, -1):
                w = tuple(c + (sg if i == j else 0) for i, c in enumerate(v))
                if w not in index:
                    add(w)
                    frontier.append(w)
    bonds = []
    for v, i in index.items():
        for j in range(dp):
            w = tuple(c + (1 if k == j else 0) for k, c in enumerate(v))
            if w in index:
                bonds.append((i, index[w]))
    return verts, index, bonds


class MixedBallSampler:
    """Shared geometry + per-sample uniforms for theta_n(s, b) estimation.

    Uniforms depend only on (seed, sample, element), so runs at different
    (s, b) with the same seed are coupled (common random numbers).
    """

    def __init__(self, n: int, dp: int = 2):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.dp = dp
        self.verts, self.index, self.bonds = _ball(n + 1, dp)
        self.norm = [sum(abs(c) for c in v) for v in self.verts]
        self.is_target = [g == n + 1 for g in self.norm]
        self.adj = [[] for _ in self.verts]
        for bi, (i, j) in enumerate(self.bonds):
            self.adj[i].append((j, bi))
            self.adj[j].append((i, bi))
        self.origin = self.index[(0,) * dp]

    def uniforms(self, seed: int, sample: int):
        rng = np.random.Generator(np.random.PCG64((seed, sample)))
        return rng.random(len(self.verts)), rng.random(len(self.bonds))

    def passable(self, site_u, s: float):
        ok = site_u < s
        ok[self.origin] = True
        for i, tgt in enumerate(self.is_target):
            if tgt:
                ok[i] = True
        return ok

    def connects(self, passable, bond_open) -> bool:
        """Origin to the L1 sphere of radius n+1 through open interior sites
        and open bonds (origin and target exempt from the site requirement)."""
        seen = bytearray(len(self.verts))
        seen[self.origin] = 1
        queue = deque([self.origin])
        while queue:
            v = queue.popleft()
            if self.is_target[v]:
                return True
            for w, bi in self.adj[v]:
                if bond_open[bi] and passable[w] and not seen[w]:
                    seen[w] = 1
                    queue.append(w)
        return False


def theta_n_mixed(params: MixedParams, n: int, samples: int, seed: int,
                  dp: int = 2, sampler: MixedBallSampler | None = None):
    """Monte Carlo estimate of the origin-to-sphere connection probability."""
    if sampler is None:
        sampler = MixedBallSampler(n, dp)
    hits = 0
    for i in range(samples):
        su, bu = sampler.uniforms(seed, i)
        if sampler.connects(sampler.passable(su, params.s), bu < params.b):
            hits += 1
    est = hits / samples
    return est, math.sqrt(est * (1 - est) / samples)


# --- pivotality ---------------------------------------------------------------


def _articulations_and_bridges(adj_open, start_vertices):
    """Iterative DFS computing articulation vertices and bridge edges of the
    graph restricted to vertices reachable from start_vertices.

    adj_open: list of (neighbor, edge_index) adjacency among usable vertices.
    Returns (articulation set, bridge edge-index set).
    """
    n = len(adj_open)
    disc = [-1] * n
    low = [0] * n
    arts: set = set()
    bridges: set = set()
    timer = 0
    for root in start_vertices:
        if disc[root] != -1:
            continue
        root_children = 0
        stack = [(root, -1, iter(adj_open[root]))]
        disc[root] = low[root] = timer
        timer += 1
        while stack:
            v, parent_edge, it = stack[-1]
            advanced = False
            for w, ei in it:
                if ei == parent_edge:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    stack.append((w, ei, iter(adj_open[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    u, _, _ = stack[-1]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        bridges.add(parent_edge)
                    if u != root and low[v] >= disc[u]:
                        arts.add(u)
        if root_children > 1:
            arts.add(root)
    return arts, bridges


def pivotality_estimate(params: MixedParams, n: int, samples: int, seed: int,
                        dp: int = 2):
    """Monte Carlo estimates of the pivotal-site and pivotal-bond sums
    (the two partial derivatives of theta_n, by Russo's formula).

    Per sample we count pivotal elements exactly: when the connection event
    fails, closed elements bridging the origin side and the boundary side;
    when it holds, cut vertices / bridge bonds separating origin from the
    sphere (candidates from one DFS, each confirmed by an exclusion search).
    Returns (site_sum, site_se, bond_sum, bond_se).
    """
    if n > 8:
        raise ValueError("pivotality estimation is quadratic; use n <= 8")
    sampler = MixedBallSampler(n, dp)
    nb = len(sampler.bonds)
    site_counts = np.zeros(samples)
    bond_counts = np.zeros(samples)
    exempt = [i for i, v in enumerate(sampler.verts)
              if sampler.norm[i] > n or i == sampler.origin]
    exempt = set(exempt)
    for it in range(samples):
        su, bu = sampler.uniforms(seed, it)
        passable = sampler.passable(su, params.s)
        bopen = bu < params.b
        sc, bc = _pivotal_counts(sampler, passable, bopen, exempt)
        site_counts[it] = sc
        bond_counts[it] = bc
    return (site_counts.mean(), site_counts.std(ddof=1) / math.sqrt(samples),
            bond_counts.mean(), bond_counts.std(ddof=1) / math.sqrt(samples))


def _reach_from(sampler, passable, bopen, sources, skip_vertex=None,
                skip_bond=None):
    seen = bytearray(len(sampler.verts))
    queue = deque()
    for v in sources:
        if passable[v] and v != skip_vertex:
            seen[v] = 1
            queue.append(v)
    while queue:
        v = queue.popleft()
        for w, bi in sampler.adj[v]:
            if bi == skip_bond or w == skip_vertex:
                continue
            if bopen[bi] and passable[w] and not seen[w]:
                seen[w] = 1
                queue.append(w)
    return seen


def _pivotal_counts(sampler, passable, bopen, exempt):
    targets = [i for i, tgt in enumerate(sampler.is_target) if tgt]
    r0 = _reach_from(sampler, passable, bopen, [sampler.origin])
    occurred = any(r0[tv] for tv in targets)
    if not occurred:
        rt = _reach_from(sampler, passable, bopen, targets)
        bonds = 0
        for bi, (i, j) in enumerate(sampler.bonds):
            if not bopen[bi] and ((r0[i] and rt[j]) or (r0[j] and rt[i])):
                bonds += 1
        sites = 0
        for x in range(len(sampler.verts)):
            if passable[x] or x in exempt:
                continue
            touch0 = touchT = False
            for w, bi in sampler.adj[x]:
                if bopen[bi]:
                    touch0 = touch0 or bool(r0[w])
                    touchT = touchT or bool(rt[w])
            if touch0 and touchT:
                sites += 1
        return sites, bonds
    # event occurs: candidates are articulation points / bridges of the open
    # passable graph; confirm each separates origin from every target.
    adj_open = [[(w, bi) for w, bi in sampler.adj[v] if bopen[bi] and passable[w]]
                if passable[v] else [] for v in range(len(sampler.verts))]
    # virtual terminal tying all targets together
    vstar = len(adj_open)
    adj_open.append([])
    for k, tv in enumerate(targets):
        ei = len(sampler.bonds) + k
        adj_open[vstar].append((tv, ei))
        adj_open[tv].append((vstar, ei))
    arts, bridges = _articulations_and_bridges(adj_open, [sampler.origin])

    def separated(skip_vertex=None, skip_bond=None):
        seen = _reach_from(sampler, passable, bopen, [sampler.origin],
                           skip_vertex=skip_vertex, skip_bond=skip_bond)
        return not any(seen[tv] for tv in targets)

    sites = sum(1 for x in arts
                if x < len(sampler.verts) and x not in exempt and separated(skip_vertex=x))
    bonds = sum(1 for bi in bridges
                if bi < len(sampler.bonds) and separated(skip_bond=bi))
    return sites, bonds


def theta_fd(params: MixedParams, n: int, samples: int, seed: int,
             eps: float = 0.01, wrt: str = "s", dp: int = 2):
    """Central finite difference of theta_n with common random numbers.

    Returns (estimate, stderr) of (theta(x+eps) - theta(x-eps)) / (2 eps).
    """
    sampler = MixedBallSampler(n, dp)
    vals = np.zeros(samples)
    for i in range(samples):
        su, bu = sampler.uniforms(seed, i)
        if wrt == "s":
            hi = sampler.connects(sampler.passable(su, params.s + eps), bu < params.b)
            lo = sampler.connects(sampler.passable(su, params.s - eps), bu < params.b)
        elif wrt == "b":
            p = sampler.passable(su, params.s)
            hi = sampler.connects(p, bu < params.b + eps)
            lo = sampler.connects(p, bu < params.b - eps)
        else:
            raise ValueError("wrt must be 's' or 'b'")
        vals[i] = (int(hi) - int(lo)) / (2 * eps)
    return vals.mean(), vals.std(ddof=1) / math.sqrt(samples)
