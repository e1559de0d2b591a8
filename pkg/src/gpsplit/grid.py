"""Uniform grids, complex fields, discrete derivatives and norms.

Two spatial backends are supported:

* periodic grids on [-L, L)^dim with FFT-based spectral differentiation,
* 1D Dirichlet grids storing the N interior nodes of (-L, L), with
  second-order centered finite differences fed by caller-supplied
  boundary values.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.fft as sfft

PERIODIC = "periodic"
DIRICHLET = "dirichlet"


def fft_workers() -> int:
    """Worker cap for scipy.fft transforms, settable via GPSPLIT_THREADS."""
    try:
        return max(1, int(os.environ.get("GPSPLIT_THREADS", "1")))
    except ValueError:
        return 1


class NormKind(str, Enum):
    L2 = "L2"
    Linf = "Linf"
    H1 = "H1"
    H2 = "H2"
    X2 = "X2"


@dataclass(frozen=True)
class Grid:
    """Uniform tensor grid with per-axis wavenumber (or sine-mode) tables.

    Periodic grids store N points per axis covering [-L, L); Dirichlet
    grids (1D only) store the N interior nodes of (-L, L) with spacing
    h = 2L/(N+1).
    """

    dim: int
    half_width: float
    npts: int
    bc: str = PERIODIC

    def __post_init__(self) -> None:
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.npts < 8:
            raise ValueError("need at least 8 points per axis")
        if self.bc not in (PERIODIC, DIRICHLET):
            raise ValueError(f"unknown boundary conditions {self.bc!r}")
        if self.bc == DIRICHLET and self.dim != 1:
            raise ValueError("Dirichlet grids are only supported in 1D")

        L, N = self.half_width, self.npts
        if self.bc == PERIODIC:
            h = 2.0 * L / N
            axis = -L + h * np.arange(N)
            # 2*pi*fftfreq(N, d=h) == (pi/L) * [0, 1, ..., -1]
            modes = 2.0 * np.pi * sfft.fftfreq(N, d=h)
        else:
            h = 2.0 * L / (N + 1)
            axis = -L + h * np.arange(1, N + 1)
            modes = np.arange(1, N + 1) * np.pi / (2.0 * L)
        object.__setattr__(self, "spacing", h)
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "modes", modes)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.npts,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    def coords(self) -> tuple[np.ndarray, ...]:
        """Node coordinates, one array per axis (meshgrid 'ij' in 2D)."""
        if self.dim == 1:
            return (self.axis,)
        x1, x2 = np.meshgrid(self.axis, self.axis, indexing="ij")
        return x1, x2

    def mode_squares(self) -> np.ndarray:
        """|k|^2 on the full grid shape (periodic grids)."""
        if self.dim == 1:
            return self.modes**2
        k1, k2 = np.meshgrid(self.modes, self.modes, indexing="ij")
        return k1**2 + k2**2


def make_grid(dim: int, L: float, N: int, bc: str = PERIODIC) -> Grid:
    return Grid(dim=dim, half_width=float(L), npts=int(N), bc=bc)


@dataclass
class Field:
    """Complex samples on a Grid, row-major over axes."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} != grid shape {self.grid.shape}")
        self.values = v

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())

    def __add__(self, other: "Field") -> "Field":
        self._check(other)
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        self._check(other)
        return Field(self.grid, self.values - other.values)

    def __mul__(self, scalar: complex) -> "Field":
        return Field(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def _check(self, other: "Field") -> None:
        if other.grid is not self.grid and other.grid != self.grid:
            raise ValueError("fields live on different grids")


def constant_field(grid: Grid, value: complex) -> Field:
    return Field(grid, np.full(grid.shape, value, dtype=np.complex128))


def _normalize_alpha(grid: Grid, alpha) -> tuple[int, ...]:
    if isinstance(alpha, int):
        alpha = (alpha,)
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != grid.dim:
        raise ValueError(f"multi-index {alpha} does not match dim {grid.dim}")
    order = sum(alpha)
    if any(a < 0 for a in alpha) or order < 1 or order > 2:
        raise ValueError(f"|alpha| must be 1 or 2, got {alpha}")
    return alpha


def derivative(f: Field, alpha, boundary_values: tuple[complex, complex] | None = None) -> Field:
    """Discrete partial derivative d^alpha f.

    Periodic grids: spectral (multiply Fourier coefficients by (ik)^alpha).
    Dirichlet grids: second-order centered finite differences, using the
    boundary pair (u(-L), u(+L)) supplied by the caller (defaults to zeros,
    which is the right choice for difference fields).
    """
    g = f.grid
    alpha = _normalize_alpha(g, alpha)
    if g.bc == PERIODIC:
        fhat = sfft.fftn(f.values, workers=fft_workers())
        for ax, a in enumerate(alpha):
            if a == 0:
                continue
            k = g.modes
            shape = [1] * g.dim
            shape[ax] = g.npts
            fhat = fhat * (1j * k.reshape(shape)) ** a
        return Field(g, sfft.ifftn(fhat, workers=fft_workers()))

    # Dirichlet, 1D
    if boundary_values is None:
        boundary_values = (0.0 + 0.0j, 0.0 + 0.0j)
    lo, hi = boundary_values
    h = g.spacing
    padded = np.empty(g.npts + 2, dtype=np.complex128)
    padded[0] = lo
    padded[-1] = hi
    padded[1:-1] = f.values
    (order,) = alpha
    if order == 1:
        out = (padded[2:] - padded[:-2]) / (2.0 * h)
    else:
        out = (padded[2:] - 2.0 * padded[1:-1] + padded[:-2]) / h**2
    return Field(g, out)


def _derivative_multi_indices(dim: int) -> list[tuple[int, ...]]:
    if dim == 1:
        return [(1,), (2,)]
    return [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def norm(f: Field, kind: NormKind | str, boundary_values: tuple[complex, complex] | None = None) -> float:
    """Discrete norm with quadrature weight h^dim on L2-type sums.

    X2 is the Zhidkov norm: sup norm plus the sum of the L2 norms of all
    partial derivatives of order 1 and 2 (mixed (1,1) included in 2D).
    """
    kind = NormKind(kind)
    g = f.grid
    w = g.cell_volume

    def l2(vals: np.ndarray) -> float:
        return float(np.sqrt(w * np.sum(np.abs(vals) ** 2)))

    if kind == NormKind.L2:
        return l2(f.values)
    if kind == NormKind.Linf:
        return float(np.max(np.abs(f.values)))

    indices = _derivative_multi_indices(g.dim)
    if kind == NormKind.H1:
        indices = [a for a in indices if sum(a) == 1]
        terms = [l2(derivative(f, a, boundary_values).values) ** 2 for a in indices]
        return float(np.sqrt(l2(f.values) ** 2 + sum(terms)))
    if kind == NormKind.H2:
        terms = [l2(derivative(f, a, boundary_values).values) ** 2 for a in indices]
        return float(np.sqrt(l2(f.values) ** 2 + sum(terms)))
    # X2
    total = float(np.max(np.abs(f.values)))
    for a in indices:
        total += l2(derivative(f, a, boundary_values).values)
    return total
