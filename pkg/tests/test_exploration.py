import dataclasses
import math

import pytest
from hypothesis import given, settings, strategies as st

from cdperc.clocks import ClockField, derive_seed
from cdperc.exploration import (DIED, SURVIVED, DominanceTally, PlanarStep,
                                Reveal, check_decoupling,
                                clopper_pearson_lower, dominance_report,
                                explore_general, explore_planar,
                                replay_general_soundness,
                                replay_planar_soundness)


# --- general exploration ---------------------------------------------------------


def test_general_t0_dies_with_origin_open():
    state, tally, outcome = explore_general(4, 4, 0.0, ClockField(1))
    assert outcome == DIED
    assert state.open == {(0, 0, 0, 0)}
    assert not state.closed and not state.useless
    assert tally.activation_successes == 0


def test_general_t1_unconstrained_survives():
    state, _, outcome = explore_general(4, 8, 1.0, ClockField(1),
                                        stop_open=50, stop_radius=4)
    assert outcome == SURVIVED
    assert not state.closed


def test_general_termination_duality():
    for seed in range(8):
        state, _, outcome = explore_general(6, 7, 0.25, ClockField(seed),
                                            stop_open=30, stop_radius=15)
        if outcome == SURVIVED:
            assert len(state.open) >= 30 or any(
                max(abs(c) for c in state.pmap.project(v)) >= 15
                for v in state.open)
        else:
            assert len(state.open) < 30


def test_general_sets_disjoint_and_projection_injective():
    state, _, _ = explore_general(5, 6, 0.3, ClockField(3), stop_open=100)
    treated = [state.open, state.closed, state.useless]
    for i in range(3):
        for j in range(i + 1, 3):
            assert not (treated[i] & treated[j])
    assert state.open | state.closed | state.useless <= state.active
    images = [state.pmap.project(v) for v in state.active]
    assert len(set(images)) == len(images)


def test_general_deterministic():
    a = explore_general(6, 8, 0.2, ClockField(12), stop_open=60)
    b = explore_general(6, 8, 0.2, ClockField(12), stop_open=60)
    assert a[0].open == b[0].open and a[2] == b[2]


def test_general_rejects_bad_kappa():
    with pytest.raises(ValueError):
        explore_general(4, 9, 0.5, ClockField(0))


def test_general_soundness_small_batch():
    for seed in range(10):
        clocks = ClockField(derive_seed(100, seed))
        state, _, _ = explore_general(10, 10, 0.17, clocks,
                                      stop_open=30, stop_radius=30)
        assert replay_general_soundness(state, 10, 10, 0.17, clocks) == []


# --- planar exploration ------------------------------------------------------------


def test_planar_t0_dies_immediately():
    state, tally, outcome, _ = explore_planar("cubic", 5, 0.0, ClockField(2))
    assert outcome == DIED
    assert state.open == {(0, 0)}
    assert state.b_of == {}
    assert tally.planar == {}


def test_planar_t1_all_saturated_rescues():
    state, tally, outcome, trace = explore_planar(
        "cubic", 5, 1.0, ClockField(4), stop_open=200, stop_radius=50,
        record_trace=True)
    # with every clock <= 1 each treated vertex with targets goes to rescue
    for step in trace:
        assert step.decision in ("open-rescue", "close-rescue",
                                 "close-no-targets")
    ok, violations = check_decoupling(trace, 1.0)
    assert ok, violations


def test_planar_t1_rescue_frequency_dominates():
    # rescue success probability is at least 2 / (|X| + 3) per treated vertex
    tally = DominanceTally()
    for i in range(40):
        _, tally, _, _ = explore_planar("cubic", 5, 1.0,
                                        ClockField(derive_seed(5, i)),
                                        stop_open=500, stop_radius=100,
                                        tally=tally)
    for m, trials in tally.rescue_trials.items():
        freq = tally.rescue_successes.get(m, 0) / trials
        target = 2 / (m + 3)
        sigma = math.sqrt(target * (1 - target) / trials)
        assert freq >= target - 3 * sigma, (m, freq, target, trials)


def test_planar_matching_square_runs_and_audits():
    state, tally, outcome, trace = explore_planar(
        "matching-square", 7, 0.62, ClockField(6), stop_open=300,
        stop_radius=60, record_trace=True)
    ok, violations = check_decoupling(trace, 0.62)
    assert ok, violations
    assert outcome in (SURVIVED, DIED)


def test_planar_termination_duality():
    for seed in range(8):
        state, _, outcome, _ = explore_planar("cubic", 5, 0.62,
                                              ClockField(seed),
                                              stop_open=40, stop_radius=100)
        if outcome == SURVIVED:
            assert len(state.open) >= 40
        else:
            assert len(state.open) < 40


def test_planar_boundary_bounds_capped_by_t():
    t = 0.62
    state, _, _, trace = explore_planar("cubic", 5, t, ClockField(9),
                                        stop_open=200, record_trace=True)
    for step in trace:
        for _, bound in step.boundary_added:
            assert bound <= t + 1e-12


def test_planar_soundness_small_batch():
    for seed in range(10):
        clocks = ClockField(derive_seed(200, seed))
        state, _, _, _ = explore_planar("cubic", 5, 0.62, clocks,
                                        stop_open=10_000, stop_radius=8)
        assert replay_planar_soundness(state, 5, 0.62, clocks, 11) == []


def test_planar_rejects_unknown_variant():
    with pytest.raises(ValueError):
        explore_planar("triangular", 5, 0.5, ClockField(0))


# --- decoupling audit ---------------------------------------------------------------


def _recorded_run(seed=13, t=0.62):
    _, _, _, trace = explore_planar("cubic", 5, t, ClockField(seed),
                                    stop_open=150, stop_radius=40,
                                    record_trace=True)
    return trace


def test_decoupling_accepts_honest_trace():
    trace = _recorded_run()
    ok, violations = check_decoupling(trace, 0.62)
    assert ok and violations == []


def _corrupt_reveal(step, predicate, rebuild):
    new_reveals = []
    hit = False
    for r in step.reveals:
        if not hit and predicate(r):
            new_reveals.append(rebuild(r))
            hit = True
        else:
            new_reveals.append(r)
    return dataclasses.replace(step, reveals=tuple(new_reveals)), hit


def test_decoupling_rejects_lower_bound_marking():
    trace = _recorded_run()
    corrupted = []
    hit_at = None
    for step in trace:
        if hit_at is None:
            step2, hit = _corrupt_reveal(
                step, lambda r: r.kind == "upper-bound",
                lambda r: Reveal(r.edge, "lower-bound", r.value))
            corrupted.append(step2)
            if hit:
                hit_at = step.index
        else:
            corrupted.append(step)
    assert hit_at is not None
    ok, violations = check_decoupling(corrupted, 0.62)
    assert not ok
    assert violations[0][0] == hit_at


def test_decoupling_rejects_bound_above_t():
    trace = _recorded_run()
    corrupted = []
    done = False
    for step in trace:
        if not done and step.boundary_added:
            e, _ = step.boundary_added[0]
            step = dataclasses.replace(
                step, boundary_added=((e, 0.99),) + step.boundary_added[1:],
                reveals=tuple(Reveal(r.edge, r.kind, 0.99)
                              if r.kind == "upper-bound" and r.edge == e else r
                              for r in step.reveals))
            done = True
        corrupted.append(step)
    assert done
    ok, violations = check_decoupling(corrupted, 0.62)
    assert not ok


def test_decoupling_rejects_value_reveal_of_boundary_edge():
    trace = _recorded_run()
    # find a boundary edge added at some step, then forge a later full reveal
    target = None
    for step in trace:
        if step.boundary_added:
            target = step.boundary_added[0][0]
            after = step.index
            break
    assert target is not None
    forged = PlanarStep(index=after + 1000, vertex=(99, 99),
                        decision="close-no-targets",
                        reveals=(Reveal(target, "value", 0.1),),
                        boundary_removed=None, boundary_added=(),
                        activated=())
    # keep only the prefix where the edge is still on the boundary
    prefix = [s for s in trace if s.index <= after]
    ok, violations = check_decoupling(prefix + [forged], 0.62)
    assert not ok


# --- tallies and reports --------------------------------------------------------------


def test_tally_merge_is_commutative_and_additive():
    a = DominanceTally(open_trials=10, open_successes=9,
                       activation_trials=20, activation_successes=12)
    a.record_planar(2, 1)
    a.record_rescue(2, True)
    b = DominanceTally(open_trials=5, open_successes=5)
    b.record_planar(2, 1)
    b.record_planar(3, 0)
    ab, ba = a.merge(b), b.merge(a)
    assert ab == ba
    assert ab.open_trials == 15 and ab.open_successes == 14
    assert ab.planar == {2: {1: 2}, 3: {0: 1}}
    assert ab.rescue_trials == {2: 1}


def test_clopper_pearson_bounds():
    assert clopper_pearson_lower(0, 100) == 0.0
    lcb = clopper_pearson_lower(99, 100)
    assert 0.9 < lcb < 0.99
    with pytest.raises(ValueError):
        clopper_pearson_lower(1, 0)


def test_dominance_report_pass_and_inconclusive():
    strong = DominanceTally(open_trials=100_000, open_successes=99_900,
                            activation_trials=100_000,
                            activation_successes=65_000)
    rows = dominance_report(strong, s_threshold=0.9765, b_threshold=0.5622)
    assert all(r["verdict"] == "PASS" for r in rows)
    weak = DominanceTally(open_trials=50, open_successes=49,
                          activation_trials=50, activation_successes=30)
    rows = dominance_report(weak, s_threshold=0.9765, b_threshold=0.5622)
    assert any(r["verdict"] == "INCONCLUSIVE" for r in rows)
    # small data must never claim the bound fails
    assert all(r["verdict"] in ("PASS", "INCONCLUSIVE") for r in rows)


def test_dominance_report_planar_tails():
    tally = DominanceTally()
    for _ in range(3000):
        tally.record_planar(2, 2)
    rows = dominance_report(tally, p=0.5)
    assert {r["context"] for r in rows} == {"planar |X|=2 N>=1",
                                            "planar |X|=2 N>=2"}
    assert all(r["verdict"] == "PASS" for r in rows)


def test_dominance_report_empty_tally_rejected():
    with pytest.raises(ValueError):
        dominance_report(DominanceTally(), s_threshold=0.9)
