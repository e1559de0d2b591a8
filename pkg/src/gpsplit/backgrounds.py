"""Background profiles at infinity and physical parameters.

The dark soliton is the exact 1D traveling wave

    phi_c(x) = sqrt((2-c^2)/2) * tanh(sqrt(2-c^2)/2 * x) + i*c/sqrt(2),

which exists for |c| < sqrt(2) and satisfies |phi_c| -> 1 at +-infinity.
u(t, x) = phi_c(x + c*t) solves the equation with eps=1, m=1/2, V=0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, Grid

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class PhysParams:
    """eps scales the nonlinearity as 1/eps^2; mass scales the Laplacian as
    1/(2m). The defaults eps=1, m=1/2 give the unscaled equation."""

    eps: float = 1.0
    mass: float = 0.5

    def __post_init__(self) -> None:
        if self.eps <= 0 or self.mass <= 0:
            raise ValueError("eps and mass must be strictly positive")


@dataclass(frozen=True)
class Background:
    kind: str  # "constant" | "dark_soliton"
    c0: complex = 1.0 + 0.0j  # constant backgrounds, must have |c0| = 1
    speed: float = 0.0  # dark soliton speed c, |c| < sqrt(2)

    def __post_init__(self) -> None:
        if self.kind == "constant":
            if abs(abs(self.c0) - 1.0) > 1e-12:
                raise ValueError("constant background must have unit modulus")
        elif self.kind == "dark_soliton":
            if abs(self.speed) >= SQRT2:
                raise ValueError("dark soliton requires |c| < sqrt(2)")
        else:
            raise ValueError(f"unknown background kind {self.kind!r}")


def soliton_profile(c: float, x: np.ndarray) -> np.ndarray:
    a = np.sqrt(2.0 - c**2) / 2.0
    return np.sqrt((2.0 - c**2) / 2.0) * np.tanh(a * x) + 1j * c / SQRT2


def soliton_limits(c: float) -> tuple[complex, complex]:
    """phi_c(-inf), phi_c(+inf); both have unit modulus."""
    re = np.sqrt((2.0 - c**2) / 2.0)
    im = 1j * c / SQRT2
    return (-re + im, re + im)


def eval_background(bg: Background, grid: Grid) -> Field:
    if bg.kind == "constant":
        return Field(grid, np.full(grid.shape, bg.c0, dtype=np.complex128))
    if grid.dim != 1:
        raise ValueError("dark soliton backgrounds are 1D only")
    return Field(grid, soliton_profile(bg.speed, grid.axis))


def background_boundary(bg: Background) -> tuple[complex, complex]:
    """Boundary constants (value at -L, value at +L) for Dirichlet runs."""
    if bg.kind == "constant":
        return (bg.c0, bg.c0)
    return soliton_limits(bg.speed)


def soliton_solution(c: float, t: float, grid: Grid) -> Field:
    """Exact traveling-wave sample u(t, x) = phi_c(x + c t); valid as a
    reference in the eps=1, m=1/2, V=0 regime."""
    if grid.dim != 1:
        raise ValueError("soliton solution is 1D only")
    return Field(grid, soliton_profile(c, grid.axis + c * t))
