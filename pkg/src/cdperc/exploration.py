"""Cluster-exploration algorithms used for the critical-time comparisons.

Two explorations of the cluster of the origin:

* the general one on the d-dimensional lattice, viewed through a group
  projection onto a low-dimensional lattice, which never revisits a projected
  site and tallies open/activation frequencies against the mixed site-bond
  comparison parameters;
* the planar one (cubic lattice or square-with-diagonals), which rescues
  saturated vertices using out-of-plane clocks and tracks boundary/spoilt
  edge bookkeeping so the revealed-information invariant can be audited.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from scipy.stats import beta, binom

from .clocks import ClockField
from .lattice import (HYPERCUBIC, MATCHING_SQUARE, LatticeSpec, ProjectionMap,
                      hyper_edge, infinite_incident_edges)

SURVIVED = "survived"
DIED = "died"


@dataclass
class DominanceTally:
    """Pure counts backing the stochastic-domination checks; merge is
    associative and commutative."""

    open_trials: int = 0
    open_successes: int = 0
    activation_trials: int = 0
    activation_successes: int = 0
    # |X| -> histogram over N (number of neighbours activated)
    planar: dict = field(default_factory=dict)
    rescue_trials: dict = field(default_factory=dict)
    rescue_successes: dict = field(default_factory=dict)

    def record_planar(self, x_count: int, activated: int) -> None:
        hist = self.planar.setdefault(x_count, {})
        hist[activated] = hist.get(activated, 0) + 1

    def record_rescue(self, x_count: int, success: bool) -> None:
        self.rescue_trials[x_count] = self.rescue_trials.get(x_count, 0) + 1
        if success:
            self.rescue_successes[x_count] = self.rescue_successes.get(x_count, 0) + 1

    def merge(self, other: "DominanceTally") -> "DominanceTally":
        out = DominanceTally(
            self.open_trials + other.open_trials,
            self.open_successes + other.open_successes,
            self.activation_trials + other.activation_trials,
            self.activation_successes + other.activation_successes,
        )
        for src in (self.planar, other.planar):
            for m, hist in src.items():
                dst = out.planar.setdefault(m, {})
                for k, v in hist.items():
                    dst[k] = dst.get(k, 0) + v
        for attr in ("rescue_trials", "rescue_successes"):
            for src in (getattr(self, attr), getattr(other, attr)):
                dst = getattr(out, attr)
                for k, v in src.items():
                    dst[k] = dst.get(k, 0) + v
        return out

    def planar_trials(self, m: int) -> int:
        return sum(self.planar.get(m, {}).values())

    def planar_tail(self, m: int, j: int) -> int:
        return sum(v for k, v in self.planar.get(m, {}).items() if k >= j)


# --- general exploration ------------------------------------------------------


@dataclass
class GeneralExplorationState:
    active: set
    open: set
    closed: set
    useless: set
    projected: set
    activating_edge: dict
    pmap: ProjectionMap
    outcome: str = DIED


def _target_neighbors(vp):
    out = []
    for i in range(len(vp)):
        for sg in (1, -1):
            out.append(tuple(c + (sg if k == i else 0) for k, c in enumerate(vp)))
    return out


def explore_general(d: int, kappa: int, t: float, clocks: ClockField,
                    pmap: ProjectionMap | None = None,
                    stop_open: int = 10_000, stop_radius: int = 200,
                    tally: DominanceTally | None = None):
    """Explore the origin's cluster, viewed through the projection map.

    Each untreated active vertex is declared useless (no projected neighbour
    left to reach), opened (at most kappa feasible edges) or closed; an opened
    vertex then scans, per free projected direction, its group of candidate
    edges until a feasible one activates a fresh preimage. FIFO treatment
    order. Returns (state, tally, outcome).
    """
    if not 1 <= kappa <= 2 * d:
        raise ValueError("need 1 <= kappa <= 2d")
    if pmap is None:
        pmap = ProjectionMap.default(d, 2)
    if tally is None:
        tally = DominanceTally()
    origin = (0,) * d
    state = GeneralExplorationState(
        active={origin}, open=set(), closed=set(), useless=set(),
        projected={pmap.project(origin)}, activating_edge={}, pmap=pmap)
    queue = deque([origin])
    stopped = False
    while queue and not stopped:
        a = queue.popleft()
        ap = pmap.project(a)
        targets = [vp for vp in _target_neighbors(ap) if vp not in state.projected]
        if not targets:
            state.useless.add(a)
            continue
        n_feasible = sum(1 for j in range(d) for sg in (1, -1)
                         if clocks.value(hyper_edge(a, j, sg)) <= t)
        tally.open_trials += 1
        if n_feasible > kappa:
            state.closed.add(a)
            continue
        state.open.add(a)
        tally.open_successes += 1
        if (len(state.open) >= stop_open
                or max(abs(c) for c in ap) >= stop_radius):
            stopped = True
            break
        for vp in targets:
            tally.activation_trials += 1
            for e in pmap.fiber_edges(a, vp):
                if clocks.value(e) <= t:
                    base, j = e
                    v = base if base != a else tuple(
                        c + (1 if k == j else 0) for k, c in enumerate(a))
                    assert pmap.project(v) == vp and v not in state.active
                    state.active.add(v)
                    state.projected.add(vp)
                    state.activating_edge[v] = e
                    queue.append(v)
                    tally.activation_successes += 1
                    break
    state.outcome = SURVIVED if stopped else DIED
    return state, tally, state.outcome


# --- planar exploration ---------------------------------------------------


REVEAL_BIT = "bit"          # feasibility only
REVEAL_VALUE = "value"      # exact clock value (spoilt edge)
REVEAL_UPPER = "upper-bound"  # boundary edge: clock uniform on [0, p(e)]


@dataclass(frozen=True)
class Reveal:
    edge: tuple
    kind: str
    value: float


@dataclass
class PlanarStep:
    index: int
    vertex: tuple
    decision: str  # close-no-targets | open | open-rescue | close-rescue
    reveals: tuple
    boundary_removed: tuple | None
    boundary_added: tuple  # ((edge, bound), ...)
    activated: tuple


@dataclass
class PlanarExplorationState:
    variant: str
    active: set
    open: set
    closed: set
    boundary: dict       # edge -> (center vertex, upper bound p(e))
    spoilt: dict         # edge -> revealed clock value
    b_of: dict           # vertex -> the edge that activated it
    outcome: str = DIED


class PlanarGeometry:
    """Edge bookkeeping for the two planar variants.

    cubic: the plane z=0 in the 3d lattice, out-of-plane edges are the two
    vertical ones. matching-square: the square sublattice of the lattice with
    diagonals; a vertex's out-of-plane analogues are its two "own" diagonals
    (x, x+(1,1)) and (x, x+(1,-1)); the other two diagonals at x belong to
    their other endpoint but still count toward saturation.
    """

    def __init__(self, variant: str):
        if variant not in ("cubic", MATCHING_SQUARE):
            raise ValueError(f"unknown planar variant {variant!r}")
        self.variant = variant
        self.degree = 6 if variant == "cubic" else 8

    def _v3(self, a):
        return (a[0], a[1], 0)

    def plane_neighbors(self, a):
        """In-plane (axis) neighbours with connecting edge ids."""
        out = []
        for j, sg in ((0, 1), (0, -1), (1, 1), (1, -1)):
            w = (a[0] + (sg if j == 0 else 0), a[1] + (sg if j == 1 else 0))
            out.append((w, self.edge_between(a, w)))
        return out

    def edge_between(self, a, w):
        if self.variant == "cubic":
            diff = (w[0] - a[0], w[1] - a[1])
            j = 0 if diff[0] else 1
            sg = diff[j]
            return hyper_edge(self._v3(a), j, sg)
        diff = (w[0] - a[0], w[1] - a[1])
        j = 0 if diff[1] == 0 else 1
        return ((a, j) if diff[j] > 0 else (w, j))

    def own_out_edges(self, a):
        if self.variant == "cubic":
            v = self._v3(a)
            return [hyper_edge(v, 2, 1), hyper_edge(v, 2, -1)]
        return [(a, 2), (a, 3)]

    def all_edges(self, a):
        if self.variant == "cubic":
            v = self._v3(a)
            return [e for e, _ in infinite_incident_edges(HYPERCUBIC, 3, v)]
        return [e for e, _ in infinite_incident_edges(MATCHING_SQUARE, 2, a)]


def explore_planar(variant: str, kappa: int, t: float, clocks: ClockField,
                   stop_open: int = 10_000, stop_radius: int = 200,
                   tally: DominanceTally | None = None,
                   record_trace: bool = False):
    """Explore the origin's in-plane cluster with saturation rescues.

    A treated vertex with no inactive in-plane neighbour is closed outright.
    Otherwise feasibility of its unspoilt edges is revealed; if at most kappa
    incident edges are feasible the vertex opens and activates its feasible
    inactive neighbours. A saturated vertex (all incident edges feasible) is
    rescued iff the largest clock among the fresh boundary candidates, its own
    boundary edge and its out-of-plane analogues sits out of the plane.
    Returns (state, tally, outcome, trace).
    """
    geo = PlanarGeometry(variant)
    if tally is None:
        tally = DominanceTally()
    origin = (0, 0)
    state = PlanarExplorationState(
        variant=variant, active={origin}, open=set(), closed=set(),
        boundary={}, spoilt={}, b_of={})
    queue = deque([origin])
    trace: list = []
    stopped = False
    step = 0
    while queue and not stopped:
        a = queue.popleft()
        b_a = state.b_of.get(a)
        reveals: list = []
        e_all = geo.all_edges(a)
        inactive = [(v, e) for v, e in geo.plane_neighbors(a)
                    if v not in state.active]
        x_count = len(inactive) if a != origin else None

        def spoil_all():
            for e in e_all:
                if e not in state.spoilt:
                    state.spoilt[e] = clocks.value(e)
                    reveals.append(Reveal(e, REVEAL_VALUE, clocks.value(e)))

        if not inactive:
            state.closed.add(a)
            if b_a is not None:
                del state.boundary[b_a]
            spoil_all()
            trace.append(PlanarStep(step, a, "close-no-targets", tuple(reveals),
                                    b_a, (), ()))
            step += 1
            continue

        # reveal feasibility of every unspoilt edge at a
        for e in e_all:
            if e not in state.spoilt and e != b_a:
                reveals.append(Reveal(e, REVEAL_BIT, clocks.value(e) <= t))
        n_feasible = sum(1 for e in e_all if clocks.value(e) <= t)
        gamma = [(v, e) for v, e in inactive if clocks.value(e) <= t]
        e_out = [e for _, e in gamma]

        if n_feasible <= kappa:
            opened = True
            decision = "open"
            bounds = {e: t for e in e_out}
        else:
            candidates = list(e_out)
            if b_a is not None:
                candidates.append(b_a)
            out_edges = geo.own_out_edges(a)
            candidates.extend(out_edges)
            top = max(candidates, key=lambda e: (clocks.value(e), e))
            opened = top in out_edges
            if x_count is not None:
                tally.record_rescue(x_count, opened)
            decision = "open-rescue" if opened else "close-rescue"
            p_bound = max(clocks.value(e) for e in out_edges)
            bounds = {e: p_bound for e in e_out}

        if x_count is not None and 1 <= x_count <= 3:
            tally.record_planar(x_count, len(gamma) if opened else 0)

        if not opened:
            state.closed.add(a)
            if b_a is not None:
                del state.boundary[b_a]
            spoil_all()
            trace.append(PlanarStep(step, a, decision, tuple(reveals),
                                    b_a, (), ()))
            step += 1
            continue

        state.open.add(a)
        if b_a is not None:
            del state.boundary[b_a]
        activated = []
        added = []
        for v, e in gamma:
            state.active.add(v)
            state.b_of[v] = e
            state.boundary[e] = (a, bounds[e])
            reveals.append(Reveal(e, REVEAL_UPPER, bounds[e]))
            added.append((e, bounds[e]))
            activated.append(v)
            queue.append(v)
        for e in e_all:
            if e not in state.spoilt and e not in bounds:
                state.spoilt[e] = clocks.value(e)
                reveals.append(Reveal(e, REVEAL_VALUE, clocks.value(e)))
        trace.append(PlanarStep(step, a, decision, tuple(reveals),
                                b_a, tuple(added), tuple(activated)))
        step += 1
        if (len(state.open) >= stop_open
                or any(max(abs(v[0]), abs(v[1])) >= stop_radius for v in activated)):
            stopped = True
    state.outcome = SURVIVED if stopped else DIED
    return state, tally, state.outcome, (trace if record_trace else None)


# --- trace audit -------------------------------------------------------------


def check_decoupling(trace, t: float):
    """Structural audit of a planar exploration trace.

    Verifies, step by step, that boundary components are stars centred at
    open vertices, that the only retained knowledge about a boundary edge is
    an upper bound p(e) <= t, and that spoilt edges carry fully revealed
    clocks. Returns (ok, violations); each violation is (step index, message).
    """
    violations = []
    boundary: dict = {}   # edge -> (center, bound)
    b_of: dict = {}       # active vertex -> boundary edge
    spoilt: set = set()
    opened: set = set()
    origin = trace[0].vertex if trace else (0, 0)
    for st in trace:
        a = st.vertex
        if a != origin and b_of.get(a) != st.boundary_removed:
            violations.append((st.index, f"vertex {a} treated without its boundary edge"))
        if st.boundary_removed is not None:
            boundary.pop(st.boundary_removed, None)
            b_of.pop(a, None)
        for r in st.reveals:
            if r.kind == REVEAL_VALUE:
                if r.edge in boundary:
                    violations.append((st.index, f"boundary edge {r.edge} value-revealed"))
                spoilt.add(r.edge)
            elif r.kind == REVEAL_UPPER:
                if r.value > t + 1e-12:
                    violations.append((st.index, f"boundary bound {r.value} exceeds t"))
                if r.edge in spoilt:
                    violations.append((st.index, f"spoilt edge {r.edge} marked boundary"))
            elif r.kind == REVEAL_BIT:
                if r.edge in spoilt or r.edge in boundary:
                    violations.append((st.index, f"explored edge {r.edge} re-revealed as bit"))
            else:
                violations.append((st.index, f"illegal reveal kind {r.kind!r} on {r.edge}"))
        if st.decision in ("open", "open-rescue"):
            opened.add(a)
            for e, bound in st.boundary_added:
                boundary[e] = (a, bound)
            for v in st.activated:
                match = [e for e, _ in st.boundary_added
                         if v in _edge_vertices(e)]
                if len(match) != 1:
                    violations.append((st.index, f"activated vertex {v} without a unique boundary edge"))
                else:
                    if v in b_of:
                        violations.append((st.index, f"vertex {v} activated twice"))
                    b_of[v] = match[0]
        # star invariant: every boundary edge joins its open center to an
        # active untreated vertex holding it as its unique boundary edge
        for e, (center, _) in boundary.items():
            if center not in opened:
                violations.append((st.index, f"boundary edge {e} centred at non-open {center}"))
                break
    return (not violations), violations


def _edge_vertices(edge):
    base, j = edge
    if len(base) == 3:  # cubic edge: report plane projections of endpoints
        other = tuple(c + (1 if k == j else 0) for k, c in enumerate(base))
        return {base[:2], other[:2]}
    from .lattice import _MS_DIRECTIONS
    other = tuple(c + dc for c, dc in zip(base, _MS_DIRECTIONS[j]))
    return {base, other}


# --- domination report --------------------------------------------------------


def clopper_pearson_lower(successes: int, trials: int, confidence: float = 0.99) -> float:
    """One-sided lower confidence bound for a binomial proportion."""
    if trials <= 0:
        raise ValueError("empty tally")
    if successes <= 0:
        return 0.0
    return float(beta.ppf(1 - confidence, successes, trials - successes + 1))


PASS = "PASS"
INCONCLUSIVE = "INCONCLUSIVE"


def dominance_report(tally: DominanceTally, s_threshold: float | None = None,
                     b_threshold: float | None = None, p: float = 0.5,
                     confidence: float = 0.99):
    """Per-context verdicts: PASS iff the empirical lower confidence bound
    exceeds the target; finite data never claims failure of a bound, so the
    alternative verdict is INCONCLUSIVE (with the raw frequency reported)."""
    rows = []
    if s_threshold is not None:
        if tally.open_trials == 0:
            raise ValueError("empty tally")
        lcb = clopper_pearson_lower(tally.open_successes, tally.open_trials, confidence)
        rows.append({"context": "general-open", "trials": tally.open_trials,
                     "frequency": tally.open_successes / tally.open_trials,
                     "lcb": lcb, "threshold": s_threshold,
                     "verdict": PASS if lcb > s_threshold else INCONCLUSIVE})
    if b_threshold is not None:
        if tally.activation_trials == 0:
            raise ValueError("empty tally")
        lcb = clopper_pearson_lower(tally.activation_successes,
                                    tally.activation_trials, confidence)
        rows.append({"context": "general-activate", "trials": tally.activation_trials,
                     "frequency": tally.activation_successes / tally.activation_trials,
                     "lcb": lcb, "threshold": b_threshold,
                     "verdict": PASS if lcb > b_threshold else INCONCLUSIVE})
    for m in sorted(tally.planar):
        trials = tally.planar_trials(m)
        for j in range(1, m + 1):
            target = float(binom.sf(j - 1, m, p))
            hits = tally.planar_tail(m, j)
            lcb = clopper_pearson_lower(hits, trials, confidence)
            rows.append({"context": f"planar |X|={m} N>={j}", "trials": trials,
                         "frequency": hits / trials, "lcb": lcb,
                         "threshold": target,
                         "verdict": PASS if lcb > target else INCONCLUSIVE})
    return rows


# --- soundness replays ---------------------------------------------------------


def replay_general_soundness(state: GeneralExplorationState, d: int, kappa: int,
                             t: float, clocks: ClockField, memo: dict | None = None):
    """Check every opened vertex hangs off the origin through edges that are
    open in the exact infinite-volume dynamics. Returns list of violations."""
    from .dynamics import edge_state_infinite
    if memo is None:
        memo = {}
    incident = lambda v: infinite_incident_edges(HYPERCUBIC, d, v)
    bad = []
    for v in state.open:
        e = state.activating_edge.get(v)
        if e is None:
            continue  # the origin
        if not edge_state_infinite(clocks, incident, kappa, t, e, memo):
            bad.append((v, e))
    return bad


def replay_planar_soundness(state: PlanarExplorationState, kappa: int, t: float,
                            clocks: ClockField, window_radius: int):
    """Replay the cubic dynamics on a window and check every opened vertex's
    activating edge is open and the opened set sits inside the origin's true
    cluster. Returns list of violations."""
    from .dynamics import evolve
    spec = LatticeSpec(kind=HYPERCUBIC, d=3, boundary="free-box",
                       radius=window_radius)
    config = evolve(spec, kappa, clocks, t)
    bad = []
    adj: dict = {}
    for e in config.open_edges:
        x, y = spec.endpoints(e)
        adj.setdefault(x, []).append(y)
        adj.setdefault(y, []).append(x)
    cluster = {(0, 0, 0)}
    queue = deque([(0, 0, 0)])
    while queue:
        v = queue.popleft()
        for w in adj.get(v, ()):
            if w not in cluster:
                cluster.add(w)
                queue.append(w)
    for v in state.open:
        if v != (0, 0):
            e = state.b_of[v]
            if e not in config.open_edges:
                bad.append((v, e, "activating edge closed in replay"))
        if (v[0], v[1], 0) not in cluster:
            bad.append((v, None, "open vertex outside the true cluster"))
    return bad
