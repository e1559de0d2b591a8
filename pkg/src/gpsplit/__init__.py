"""Time-splitting solver for the Gross-Pitaevskii equation with non-zero
boundary conditions at infinity and a time-dependent stirring potential."""

__version__ = "0.1.0"

from .backgrounds import Background, PhysParams, eval_background, soliton_solution
from .diagnostics import energy_GL, error_norm, fit_order, mass_generalized, vortex_windings
from .flows import FlowState, LinearPropagator, flow_A, flow_B, uv_equivalence_check
from .grid import Field, Grid, NormKind, derivative, make_grid, norm
from .integrators import SchemeConfig, evolve, lie_step, strang_step
from .potentials import Potential, eval_potential, potential_time_integral

__all__ = [
    "Background", "PhysParams", "eval_background", "soliton_solution",
    "energy_GL", "error_norm", "fit_order", "mass_generalized", "vortex_windings",
    "FlowState", "LinearPropagator", "flow_A", "flow_B", "uv_equivalence_check",
    "Field", "Grid", "NormKind", "derivative", "make_grid", "norm",
    "SchemeConfig", "evolve", "lie_step", "strang_step",
    "Potential", "eval_potential", "potential_time_integral",
]
