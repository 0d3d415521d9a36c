"""Constrained-degree bond percolation: replayable clock dynamics, exact
small-graph oracles, cluster-exploration couplings, analytic critical-time
bounds, and the mixed site-bond comparison toolkit."""

from .bounds import (BoundParams, chen_lower_bounds, s_b_of, verify_theorem1,
                     verify_theorem3_inequalities)
from .clocks import ClockField, derive_seed
from .dynamics import (Configuration, SmallGraph, SMALL_GRAPHS,
                       exact_event_probability, estimate_theta, evolve,
                       simulate_small_graph, theta_curve)
from .exploration import (DominanceTally, check_decoupling, dominance_report,
                          explore_general, explore_planar)
from .lattice import LatticeSpec, ProjectionMap
from .mixed import (MixedParams, classify_region, crossover_solve,
                    curve_points, ode_integrate, sc_upper)

__version__ = "0.1.0"
