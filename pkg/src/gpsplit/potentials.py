"""Time-dependent obstacle potentials and their time integrals.

Four kinds are supported:

* zero
* static_gaussian:   V0 * exp(-gamma^2/2 * |x - center|^2)
* moving_gaussian:   V0 * exp(-gamma^2/2 * ((x1 - a t)^2 + x2^2))
* rotating_gaussian: V0 * exp(-gamma^2/2 * ((x1 - r0 cos(at))^2 + (x2 - r0 sin(at))^2))

The rotating kind is 2D only. ``potential_time_integral`` provides the
quadrature of int_{t0}^{t0+tau} V(s, .) ds needed by the nonlinear sub-flow;
the rule should match the splitting order (left endpoint for Lie, midpoint
for Strang; two-point Gauss as a reference).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, Grid

QUAD_RULES = ("exact", "left", "midpoint", "gauss2")


@dataclass(frozen=True)
class Potential:
    kind: str = "zero"
    v0: float = 0.0
    gamma: float = 1.0
    center: tuple[float, ...] = (0.0, 0.0)
    speed: float = 0.0  # a
    r0: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("zero", "static_gaussian", "moving_gaussian", "rotating_gaussian"):
            raise ValueError(f"unknown potential kind {self.kind!r}")

    @property
    def time_dependent(self) -> bool:
        return self.kind in ("moving_gaussian", "rotating_gaussian")

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero" or self.v0 == 0.0


def eval_potential_values(pot: Potential, t: float, grid: Grid) -> np.ndarray:
    """Real-valued samples of V(t, .) on the grid nodes."""
    if pot.is_zero:
        return np.zeros(grid.shape)
    g2 = pot.gamma**2 / 2.0
    if pot.kind == "static_gaussian":
        if grid.dim == 1:
            r2 = (grid.axis - pot.center[0]) ** 2
        else:
            x1, x2 = grid.coords()
            r2 = (x1 - pot.center[0]) ** 2 + (x2 - pot.center[1]) ** 2
    elif pot.kind == "moving_gaussian":
        if grid.dim == 1:
            r2 = (grid.axis - pot.speed * t) ** 2
        else:
            x1, x2 = grid.coords()
            r2 = (x1 - pot.speed * t) ** 2 + x2**2
    else:  # rotating_gaussian
        if grid.dim != 2:
            raise ValueError("rotating potential is 2D only")
        x1, x2 = grid.coords()
        c1 = pot.r0 * np.cos(pot.speed * t)
        c2 = pot.r0 * np.sin(pot.speed * t)
        r2 = (x1 - c1) ** 2 + (x2 - c2) ** 2
    return pot.v0 * np.exp(-g2 * r2)


def eval_potential(pot: Potential, t: float, grid: Grid) -> Field:
    return Field(grid, eval_potential_values(pot, t, grid).astype(np.complex128))


_GAUSS2_NODES = (0.5 - 0.5 / np.sqrt(3.0), 0.5 + 0.5 / np.sqrt(3.0))


def potential_time_integral(
    pot: Potential, t0: float, tau: float, rule: str, grid: Grid
) -> np.ndarray:
    """Quadrature of int_{t0}^{t0+tau} V(s, .) ds as a real array."""
    if rule not in QUAD_RULES:
        raise ValueError(f"unknown quadrature rule {rule!r}")
    if rule == "exact":
        if pot.time_dependent:
            raise ValueError("exact time integral only for zero/static potentials")
        return tau * eval_potential_values(pot, t0, grid)
    if not pot.time_dependent:
        # constant in time: every rule is exact
        return tau * eval_potential_values(pot, t0, grid)
    if rule == "left":
        return tau * eval_potential_values(pot, t0, grid)
    if rule == "midpoint":
        return tau * eval_potential_values(pot, t0 + 0.5 * tau, grid)
    s1, s2 = _GAUSS2_NODES
    return 0.5 * tau * (
        eval_potential_values(pot, t0 + s1 * tau, grid)
        + eval_potential_values(pot, t0 + s2 * tau, grid)
    )
