import math
from fractions import Fraction

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from cdperc.bounds import (BoundParams, LOW_DIM_CASES, binom_cdf,
                           branching_lower_bound, chen_lower_bounds,
                           in_theorem1_range, poisson_cdf, s_b_of,
                           verify_theorem1, verify_theorem3_inequalities)


def test_binom_symmetry():
    assert binom_cdf(5, Fraction(1, 2), 2) == mpq(1, 2)


def test_binom_full_support_is_one():
    assert binom_cdf(7, 0.3, 7) == 1
    assert binom_cdf(7, 0.3, 12) == 1


def test_binom_rejects_bad_args():
    with pytest.raises(ValueError):
        binom_cdf(-1, 0.5, 0)
    with pytest.raises(ValueError):
        binom_cdf(5, Fraction(3, 2), 2)


@given(st.integers(0, 30), st.fractions(0, 1), st.integers(0, 30))
@settings(max_examples=120)
def test_binom_matches_direct_sum(m, p, k):
    direct = sum(Fraction(math.comb(m, i)) * p**i * (1 - p)**(m - i)
                 for i in range(min(k, m) + 1))
    assert binom_cdf(m, p, k) == mpq(direct)


@given(st.integers(1, 40), st.fractions(0, 1))
@settings(max_examples=60)
def test_binom_monotone_in_k(m, p):
    vals = [binom_cdf(m, p, k) for k in range(m + 1)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] == 1


def test_binom_non_increasing_in_p():
    for m, k in [(10, 3), (25, 12), (40, 5)]:
        vals = [binom_cdf(m, Fraction(i, 20), k) for i in range(21)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_binom_float_path_consistent_with_exact():
    # straddle the exact-arithmetic limit with the same distribution shape
    exact = float(binom_cdf(10_000, Fraction(17, 100000), 7))
    floaty = binom_cdf(10_001, 17 / 100000, 7)
    assert abs(exact - floaty) < 1e-4


def test_b_17_017_7_value_and_monte_carlo():
    val = float(binom_cdf(17, Fraction(17, 100), 7))
    assert 0.97 < val < 1
    rng = np.random.Generator(np.random.PCG64(1))
    draws = rng.binomial(17, 0.17, size=10_000_000)
    freq = (draws <= 7).mean()
    se = math.sqrt(val * (1 - val) / draws.size)
    assert abs(freq - val) < 4 * se


def test_poisson_values():
    assert poisson_cdf(0.0, 0) == 1.0
    assert abs(poisson_cdf(3.4, 7) - 0.9770) < 1e-4
    assert poisson_cdf(2.0, 500) == 1.0
    with pytest.raises(ValueError):
        poisson_cdf(1.0, -1)


@given(st.floats(0.01, 20), st.integers(0, 30))
@settings(max_examples=80)
def test_poisson_monotone_in_k(lam, k):
    assert poisson_cdf(lam, k) <= poisson_cdf(lam, k + 1) + 1e-15


def test_chen_poisson_approximation_bound():
    # |B_{2d, c/d}(k) - P_{2c}(k)| <= c(1 - e^{-2c}) / (2d)
    c = 1.7
    cap = lambda d: c * (1 - math.exp(-2 * c)) / (2 * d)
    for d in (10, 25, 50, 200):
        for k in range(21):
            diff = abs(float(binom_cdf(2 * d, Fraction(17, 10 * d), k))
                       - poisson_cdf(2 * c, k))
            assert diff <= cap(d) + 1e-12


# --- (s, b) parameters ----------------------------------------------------------


def test_s_b_at_t0():
    s, b = s_b_of(BoundParams(d=6, kappa=10, t=Fraction(0)))
    assert s == 1 and b == 0


def test_s_b_d10_formula():
    s, b = s_b_of(BoundParams(d=10, kappa=10, c=Fraction(17, 10)))
    assert s == binom_cdf(17, Fraction(17, 100), 7)
    assert b == 1 - mpq(83, 100) ** 5 / s
    assert float(s) >= 0.9765 and float(b) >= 0.5622


def test_s_b_monotone_in_kappa():
    prev_s = prev_b = None
    for kappa in range(3, 14):
        s, b = s_b_of(BoundParams(d=8, kappa=kappa, c=Fraction(17, 10)))
        if prev_s is not None:
            assert s >= prev_s and b >= prev_b
        prev_s, prev_b = s, b


def test_s_b_poisson_limit():
    s, b = s_b_of(BoundParams(d=100_000, kappa=10, c=Fraction(17, 10)))
    assert abs(float(s) - 0.9770) < 2e-4
    assert abs(float(b) - 0.5625) < 2e-4


def test_bound_params_validation():
    with pytest.raises(ValueError):
        BoundParams(d=6, kappa=10)  # neither c nor t
    with pytest.raises(ValueError):
        BoundParams(d=6, kappa=10, c=Fraction(1), t=Fraction(1, 2))
    with pytest.raises(ValueError):
        BoundParams(d=6, kappa=2, c=Fraction(1))  # kappa < 2 dp - 1
    with pytest.raises(ValueError):
        BoundParams(d=6, kappa=10, t=Fraction(3, 2))


def test_theorem1_range_predicate():
    assert not in_theorem1_range(5, 10)
    assert in_theorem1_range(6, 10)


def test_chen_lower_bounds_values():
    s_lo, b_lo = chen_lower_bounds()
    assert s_lo > 0.9765 + 1e-12
    assert b_lo > 0.5622 + 1e-12
    assert abs(s_lo - (poisson_cdf(3.4, 7) - 1.7 * (1 - math.exp(-3.4)) / 4000)) < 1e-15


def test_chen_monotone_in_floor():
    s_a, _ = chen_lower_bounds(floor=4000)
    s_b, _ = chen_lower_bounds(floor=8000)
    assert s_b > s_a


def test_verify_theorem1_short_sweep():
    rep = verify_theorem1(d_max=60, check_low_dim=True)
    assert rep.all_pass
    assert rep.sweep_count == 55  # d from 6 to 60
    assert rep.chen["pass"]
    assert {(r["d"], r["kappa"]) for r in rep.low_dim} == set(LOW_DIM_CASES)


# --- theorem-3 inequalities ------------------------------------------------------


def test_theorem3_all_hold_at_reference_point():
    checks = verify_theorem3_inequalities(Fraction(62, 100), Fraction(1, 2))
    assert len(checks) == 6
    assert all(ch["holds"] for ch in checks)
    binding = min(checks, key=lambda ch: ch["margin"])
    assert binding["name"] == "|X|=1, N>=1"
    assert abs(binding["margin"] - 8.36e-4) < 1e-6


def test_theorem3_x1_fails_at_p053():
    checks = verify_theorem3_inequalities(Fraction(62, 100), Fraction(53, 100))
    by_name = {ch["name"]: ch for ch in checks}
    assert not by_name["|X|=1, N>=1"]["holds"]


def test_theorem3_literal_at_t1():
    checks = verify_theorem3_inequalities(Fraction(999, 1000), Fraction(1, 2))
    assert all("margin" in ch for ch in checks)
    with pytest.raises(ValueError):
        verify_theorem3_inequalities(1, Fraction(1, 2))


# --- branching bound -------------------------------------------------------------


def test_branching_values():
    assert branching_lower_bound(2) == Fraction(1, 3)
    assert branching_lower_bound(3) == Fraction(1, 5)
    with pytest.raises(ValueError):
        branching_lower_bound(0)


def test_branching_consistent_with_case_table():
    for d, _ in LOW_DIM_CASES:
        assert Fraction(17, 10) / d > branching_lower_bound(d)
