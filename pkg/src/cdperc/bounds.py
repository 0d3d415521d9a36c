"""Closed-form numeric verification of the critical-time bounds.

Binomial and Poisson tail CDFs, the (s, b) comparison parameters of the
general exploration, the exhaustive d <= 4000 sweep with the Chen-inequality
extension beyond, and the six planar-comparison inequalities. All sweep
comparisons run in exact rational arithmetic: the claims are strict
inequalities and must not pass on rounding error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import bincoef, mpq

# Exact-rational path is used up to this many trials; beyond it we fall back
# to compensated floating summation guarded by FLOAT_GUARD.
EXACT_TRIALS_LIMIT = 10_000
FLOAT_GUARD = 1e-12


def _as_mpq(p):
    if isinstance(p, float):
        return mpq(Fraction(p))
    return mpq(p)


def binom_cdf(m: int, p, k: int):
    """B_{m,p}(k), exact rational for m <= 10^4, compensated floats beyond."""
    if m < 0 or k < 0:
        raise ValueError("need m >= 0 and k >= 0")
    if k >= m:
        return mpq(1)
    if m <= EXACT_TRIALS_LIMIT:
        p = _as_mpq(p)
        if not 0 <= p <= 1:
            raise ValueError("p must be in [0, 1]")
        q = 1 - p
        # sum downward so the running power of q only ever multiplies
        total = mpq(0)
        qpow = q ** (m - k)
        for i in range(k, -1, -1):
            total += bincoef(m, i) * p ** i * qpow
            qpow *= q
        return total
    pf = float(p)
    terms = [math.exp(math.lgamma(m + 1) - math.lgamma(i + 1) - math.lgamma(m - i + 1)
                      + i * math.log(pf) + (m - i) * math.log1p(-pf))
             for i in range(k + 1)]
    return min(1.0, math.fsum(terms))


def poisson_cdf(lam: float, k: int) -> float:
    """P_lam(k) = e^-lam * sum_{i<=k} lam^i / i!."""
    if lam < 0 or k < 0:
        raise ValueError("need lam >= 0 and k >= 0")
    if lam == 0:
        return 1.0
    terms = [math.exp(-lam + i * math.log(lam) - math.lgamma(i + 1))
             for i in range(k + 1)]
    return min(1.0, math.fsum(terms))


@dataclass(frozen=True)
class BoundParams:
    """Parameters of one (s, b) comparison: dimension, constraint, rate or
    explicit time, and the target dimension of the group map (2 by default)."""

    d: int
    kappa: int
    c: Fraction | None = None
    t: Fraction | None = None
    dp: int = 2

    def __post_init__(self):
        if self.kappa < 1 or self.d < 2 or self.dp < 2:
            raise ValueError("invalid parameters")
        if (self.c is None) == (self.t is None):
            raise ValueError("give exactly one of c (rate) or t (time)")
        if self.kappa < 2 * self.dp - 1:
            raise ValueError("need kappa >= 2*dp - 1 for the comparison")
        t = self.time
        if not 0 <= t <= 1:
            raise ValueError("t must be in [0, 1]")

    @property
    def time(self):
        if self.t is not None:
            return _as_mpq(self.t)
        return _as_mpq(self.c) / self.d


def s_b_of(params: BoundParams):
    """The site and bond comparison parameters:
    s = B_{2d-(2dp-1), t}(kappa-(2dp-1)), b = 1 - (1-t)^floor(d/dp) / s."""
    t = params.time
    r = 2 * params.dp - 1
    s = binom_cdf(2 * params.d - r, t, params.kappa - r)
    if s == 0:
        raise ValueError("degenerate parameters: s = 0")
    b = 1 - (1 - t) ** (params.d // params.dp) / s
    return s, b


def chen_lower_bounds(c: float = 1.7, kappa: int = 10, floor: int = 4000):
    """Poisson-limit lower bounds on (s, b) valid for all d > floor:
    s >= P_{2c}(kappa-3) - c(1-e^{-2c})/floor, with the matching b bound."""
    if floor <= 0 or kappa < 3:
        raise ValueError("need floor > 0 and kappa >= 3")
    s_lower = poisson_cdf(2 * c, kappa - 3) - c * (1 - math.exp(-2 * c)) / floor
    b_lower = 1 - math.exp(-(c / 2) * (1 - 1 / floor)) / s_lower
    return s_lower, b_lower


def in_theorem1_range(d: int, kappa: int) -> bool:
    """The main sweep covers d > kappa/2 only."""
    return 2 * d > kappa


# (d, kappa) cases with t = c/d that must meet one of the two threshold pairs.
LOW_DIM_CASES = ((4, 7), (5, 8), (6, 8), (7, 9), (8, 9), (9, 9), (10, 9),
                 (11, 9), (12, 9), (14, 9), (16, 9))

S_MAIN, B_MAIN = mpq(9765, 10**4), mpq(5622, 10**4)
PAIR_A = (mpq(9809, 10**4), mpq(5596, 10**4))
PAIR_B = (mpq(9708, 10**4), mpq(5806, 10**4))


@dataclass
class BoundReport:
    c: float
    kappa: int
    d_max: int
    floor: int
    all_pass: bool = True
    failures: list = field(default_factory=list)
    sweep_count: int = 0
    low_dim: list = field(default_factory=list)
    chen: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "c": self.c, "kappa": self.kappa, "d_max": self.d_max,
            "floor": self.floor, "all_pass": self.all_pass,
            "sweep_count": self.sweep_count,
            "failures": self.failures, "low_dim": self.low_dim,
            "chen": self.chen,
        }


def verify_theorem1(kappa: int = 10, d_max: int = 4000, c=Fraction(17, 10),
                    floor: int = 4000, check_low_dim: bool = True) -> BoundReport:
    """Sweep: exact-rational (s, b) thresholds for kappa and d up to d_max,
    the low-dimensional case table, and the Chen extension for d > floor."""
    c = Fraction(c)
    if kappa < 10 and not check_low_dim:
        raise ValueError("main sweep requires kappa >= 10")
    report = BoundReport(c=float(c), kappa=kappa, d_max=d_max, floor=floor)
    if kappa >= 10:
        d_min = kappa // 2 + 1
        for d in range(d_min, d_max + 1):
            s, b = s_b_of(BoundParams(d=d, kappa=kappa, c=c))
            report.sweep_count += 1
            if not (s >= S_MAIN and b >= B_MAIN):
                report.all_pass = False
                report.failures.append(
                    {"d": d, "kappa": kappa, "s": float(s), "b": float(b),
                     "method": "direct"})
        s_lo, b_lo = chen_lower_bounds(float(c), kappa, floor)
        chen_ok = (s_lo > float(S_MAIN) + FLOAT_GUARD
                   and b_lo > float(B_MAIN) + FLOAT_GUARD)
        report.chen = {"s_lower": s_lo, "b_lower": b_lo, "pass": chen_ok,
                       "method": "chen"}
        if not chen_ok:
            report.all_pass = False
    if check_low_dim:
        for d, kap in LOW_DIM_CASES:
            s, b = s_b_of(BoundParams(d=d, kappa=kap, c=c))
            ok = ((s >= PAIR_A[0] and b >= PAIR_A[1])
                  or (s >= PAIR_B[0] and b >= PAIR_B[1]))
            report.low_dim.append({"d": d, "kappa": kap, "s": float(s),
                                   "b": float(b), "pass": ok})
            if not ok:
                report.all_pass = False
                report.failures.append({"d": d, "kappa": kap, "s": float(s),
                                        "b": float(b), "method": "direct"})
    return report


def verify_theorem3_inequalities(t, p):
    """Margins of the six strict inequalities behind the planar comparison
    (three for |X|=3, two for |X|=2, one for |X|=1), evaluated exactly."""
    t = _as_mpq(t)
    p = _as_mpq(p)
    if not (0 < t < 1 and 0 < p < 1):
        raise ValueError("t and p must lie in (0, 1)")
    g3 = t**3 - t**5 + mpq(2, 6) * t**5
    g2 = t**2 - t**4 + mpq(2, 5) * t**4
    g1 = t - t**3 + mpq(2, 4) * t**3
    checks = [
        ("|X|=3, N>=1", 3*t*(1-t)**2 + 3*t**2*(1-t) + g3, 1 - (1-p)**3),
        ("|X|=3, N>=2", 3*t**2*(1-t) + g3, p**2 * (p + 3*(1-p))),
        ("|X|=3, N>=3", g3, p**3),
        ("|X|=2, N>=1", 2*t*(1-t) + g2, p**2 + 2*p*(1-p)),
        ("|X|=2, N>=2", g2, p**2),
        ("|X|=1, N>=1", g1, p),
    ]
    return [{"name": name, "lhs": float(lhs), "rhs": float(rhs),
             "margin": float(lhs - rhs), "holds": lhs > rhs}
            for name, lhs, rhs in checks]


def branching_lower_bound(d: int) -> Fraction:
    """Universal lower bound 1/(2d-1) on the critical time."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return Fraction(1, 2 * d - 1)
