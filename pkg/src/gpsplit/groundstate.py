"""Energy minimization for the 2D initial state.

The starting field of the vortex scenarios is the global minimizer of the
Ginzburg-Landau energy with the potential frozen at t=0, computed by
limited-memory BFGS over the 2*N^dim real unknowns (real and imaginary
parts) with the analytic gradient

    G = 2 * ( -(1/(2m)) Lap u - (1/eps^2)(1-|u|^2) u - V u ),

the first variation of the energy with respect to the conjugate field.
h^dim * G is then the exact gradient of the discrete energy, since the
spectral Laplacian is self-adjoint for the lattice inner product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .backgrounds import PhysParams
from .diagnostics import energy_GL
from .grid import Field, Grid, NormKind, fft_workers, norm
from .potentials import Potential, eval_potential_values


@dataclass
class MinimizeConfig:
    grad_tol: float = 1e-8  # relative to max(1, initial gradient norm)
    max_iters: int = 5000
    lbfgs_memory: int = 10
    armijo_factor: float = 0.5
    armijo_c1: float = 1e-4

    def __post_init__(self) -> None:
        if self.grad_tol <= 0 or self.max_iters < 1 or self.lbfgs_memory < 1:
            raise ValueError("invalid minimizer configuration")


@dataclass
class MinimizeResult:
    field: Field
    energy: float
    grad_norm: float
    iterations: int
    converged: bool

    def report(self) -> dict:
        return {
            "energy": self.energy,
            "grad_norm": self.grad_norm,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _laplacian(values: np.ndarray, grid: Grid) -> np.ndarray:
    fhat = sfft.fftn(values, workers=fft_workers())
    return sfft.ifftn(-grid.mode_squares() * fhat, workers=fft_workers())


def energy_and_gradient(
    u: Field, pot: Potential, params: PhysParams, pot_values: np.ndarray | None = None
) -> tuple[float, Field]:
    """Energy with V frozen at t=0 and its first-variation field G."""
    g = u.grid
    if g.bc != "periodic":
        raise ValueError("ground states are computed on periodic grids")
    if pot_values is None:
        pot_values = eval_potential_values(pot, 0.0, g)
    e = energy_GL(u, pot, 0.0, params)
    v = u.values
    grad = 2.0 * (
        -_laplacian(v, g) / (2.0 * params.mass)
        - (1.0 - np.abs(v) ** 2) * v / params.eps**2
        - pot_values * v
    )
    return e, Field(g, grad)


def _normalize_phase(values: np.ndarray) -> np.ndarray:
    mean = values.mean()
    if mean == 0:
        return values
    return values * (np.conj(mean) / abs(mean))


def minimize(
    pot: Potential,
    params: PhysParams,
    grid: Grid,
    cfg: MinimizeConfig | None = None,
    initial_guess: Field | None = None,
) -> MinimizeResult:
    """L-BFGS with Armijo backtracking from u = 1 (fluid at rest).

    Stops when the L2 norm of the gradient field drops below
    grad_tol * max(1, initial gradient norm). The returned field has its
    global phase fixed so the spatial mean is real and positive."""
    cfg = cfg or MinimizeConfig()
    v0 = eval_potential_values(pot, 0.0, grid)
    if initial_guess is None:
        u = np.ones(grid.shape, dtype=np.complex128)
    else:
        u = initial_guess.values.copy()
    w = grid.cell_volume

    def pack(arr: np.ndarray) -> np.ndarray:
        return np.concatenate([arr.real.ravel(), arr.imag.ravel()])

    def unpack(z: np.ndarray) -> np.ndarray:
        n = z.size // 2
        return (z[:n] + 1j * z[n:]).reshape(grid.shape)

    def eval_fg(z: np.ndarray) -> tuple[float, np.ndarray, float]:
        e, gfield = energy_and_gradient(Field(grid, unpack(z)), pot, params, v0)
        # flat gradient of the discrete energy; also return the field norm
        gnorm = norm(gfield, NormKind.L2)
        return e, w * pack(gfield.values), gnorm

    z = pack(u)
    f, g, gnorm = eval_fg(z)
    tol = cfg.grad_tol * max(1.0, gnorm)

    s_hist: list[np.ndarray] = []
    y_hist: list[np.ndarray] = []
    rho_hist: list[float] = []
    iters = 0
    converged = gnorm <= tol

    while not converged and iters < cfg.max_iters:
        # two-loop recursion
        q = g.copy()
        alphas = []
        for s, y, rho in zip(reversed(s_hist), reversed(y_hist), reversed(rho_hist)):
            a = rho * s.dot(q)
            alphas.append(a)
            q -= a * y
        if y_hist:
            y = y_hist[-1]
            q *= s_hist[-1].dot(y) / y.dot(y)
        for (s, y, rho), a in zip(zip(s_hist, y_hist, rho_hist), reversed(alphas)):
            q += (a - rho * y.dot(q)) * s
        p = -q
        slope = g.dot(p)
        if slope >= 0:  # not a descent direction; restart from steepest descent
            p = -g
            slope = -g.dot(g)
            s_hist.clear(), y_hist.clear(), rho_hist.clear()

        step = 1.0
        while True:
            z_new = z + step * p
            f_new, g_new, gnorm_new = eval_fg(z_new)
            if f_new <= f + cfg.armijo_c1 * step * slope:
                break
            step *= cfg.armijo_factor
            if step < 1e-20:
                # line search failed; treat current iterate as final
                z_new, f_new, g_new, gnorm_new = z, f, g, gnorm
                break
        if z_new is z:
            break

        s = z_new - z
        y = g_new - g
        sy = s.dot(y)
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            s_hist.append(s), y_hist.append(y), rho_hist.append(1.0 / sy)
            if len(s_hist) > cfg.lbfgs_memory:
                s_hist.pop(0), y_hist.pop(0), rho_hist.pop(0)

        z, f, g, gnorm = z_new, f_new, g_new, gnorm_new
        iters += 1
        converged = gnorm <= tol

    out = Field(grid, _normalize_phase(unpack(z)))
    return MinimizeResult(field=out, energy=f, grad_norm=gnorm, iterations=iters, converged=converged)
